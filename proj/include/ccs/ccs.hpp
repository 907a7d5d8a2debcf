#pragma once

// Umbrella header: circulant-correlation Gaussian models, their Fisher
// geometry, shrinkage priors and predictive risk tools.

#include "ccs/circulant.hpp"
#include "ccs/csv.hpp"
#include "ccs/dft.hpp"
#include "ccs/experiment.hpp"
#include "ccs/fisher.hpp"
#include "ccs/laplacian.hpp"
#include "ccs/mcmc.hpp"
#include "ccs/model.hpp"
#include "ccs/prior.hpp"
#include "ccs/risk.hpp"
#include "ccs/rng.hpp"
#include "ccs/sampling.hpp"
#include "ccs/spectrum.hpp"
#include "ccs/types.hpp"
#include "ccs/version.hpp"
