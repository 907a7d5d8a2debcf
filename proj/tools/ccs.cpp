// ccs: command line front end for the circulant-correlation model library.
//
// Subcommands
//   fisher              closed-form Fisher blocks at a point
//   verify-fisher       closed forms against the finite-difference oracle
//   check-superharmonic f^{-1} Laplacian f of a prior ratio over a grid
//   risk-curve          closed-form asymptotic risk-difference curves
//   simulate            Monte-Carlo KL risk comparison of priors
//   sample              draw a dataset from a model point
//   identify            split a covariance CSV into scales and spectrum
//
// All outputs are CSV on stdout or --out, with the invocation echoed in
// '#' comment lines. Exit codes: 0 success, 2 invalid usage or input,
// 3 numerical check failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccs/ccs.hpp"

namespace {

using ccs::Matrix;
using ccs::Vector;

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : ccs::split(text, ','))
    out.push_back(ccs::parse_double(ccs::trim(tok)));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw std::invalid_argument("expected integer list, got '" + text + "'");
    out.push_back(i);
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

// "lo:hi:count" inclusive grid.
std::vector<double> parse_grid(const std::string& text) {
  const auto parts = ccs::split(text, ':');
  if (parts.size() != 3)
    throw std::invalid_argument("grid must be lo:hi:count, got '" + text + "'");
  const double lo = ccs::parse_double(ccs::trim(parts[0]));
  const double hi = ccs::parse_double(ccs::trim(parts[1]));
  const int count = static_cast<int>(ccs::parse_double(ccs::trim(parts[2])));
  if (count < 1) throw std::invalid_argument("grid count must be positive");
  if (count == 1) {
    if (lo != hi) throw std::invalid_argument("grid with one point needs lo == hi");
    return {lo};
  }
  std::vector<double> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  return out;
}

// Output sink: stdout for "-", else a file.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string describe_prior(const ccs::PriorSpec& prior) {
  std::ostringstream os;
  os << prior.label() << " (c=" << ccs::format_double(prior.c())
     << ", t=" << ccs::format_double(prior.t())
     << ", gamma=" << ccs::format_double(prior.gamma()) << ")";
  return os.str();
}

// One prior from the mutually exclusive --c / --t / --gamma trio.
struct PriorFlags {
  double c = 0.0, t = 0.0, gamma = 0.0;
  CLI::Option* c_opt = nullptr;
  CLI::Option* t_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;

  void attach(CLI::App* cmd, const std::string& what) {
    c_opt = cmd->add_option("--c", c, "Exponent c of " + what + " = jeffreys^c");
    t_opt = cmd->add_option("--t", t, "Exponent t, c = 2t + 1");
    gamma_opt = cmd->add_option("--gamma", gamma, "Exponent gamma, c = 4 gamma + 1");
    c_opt->excludes(t_opt)->excludes(gamma_opt);
    t_opt->excludes(gamma_opt);
  }

  [[nodiscard]] ccs::PriorSpec resolve(const ccs::PriorSpec& fallback) const {
    if (c_opt->count()) return ccs::PriorSpec::power(c);
    if (t_opt->count()) return ccs::PriorSpec::from_t(t);
    if (gamma_opt->count()) return ccs::PriorSpec::from_gamma(gamma);
    return fallback;
  }
};

ccs::PriorSpec parse_prior_token(const std::string& token) {
  const std::string t = ccs::trim(token);
  if (t == "jeffreys") return ccs::PriorSpec::jeffreys();
  if (t == "uniform") return ccs::PriorSpec::uniform();
  const auto eq = t.find('=');
  if (eq != std::string::npos) {
    const std::string key = ccs::trim(t.substr(0, eq));
    const double v = ccs::parse_double(ccs::trim(t.substr(eq + 1)));
    if (key == "c") return ccs::PriorSpec::power(v);
    if (key == "t") return ccs::PriorSpec::from_t(v);
    if (key == "gamma") return ccs::PriorSpec::from_gamma(v);
  }
  throw std::invalid_argument("unknown prior '" + t +
                              "' (use jeffreys, uniform, c=X, t=X or gamma=X)");
}

std::vector<std::string> base_comments(const std::string& invocation) {
  return {"ccs " + std::string(ccs::kVersionString), "invocation: " + invocation};
}

// ---------------------------------------------------------------- fisher --

struct FisherArgs {
  std::string model = "full";
  int p = 0;
  std::string theta;
  std::string out = "-";
};

void run_fisher(const FisherArgs& a, const std::string& invocation) {
  const ccs::ModelFamily fam = ccs::ModelFamily::from_name(a.model, a.p);
  Vector theta = Vector::Zero(fam.dim());
  if (!a.theta.empty()) theta = to_vector(parse_double_list(a.theta));

  const Matrix g_theta = ccs::fisher_theta(fam);
  const ccs::Spectrum spec = fam.spectrum(theta);
  const Matrix g_beta = ccs::fisher_beta(spec);
  const double log_det = ccs::log_det_fisher_beta(spec);

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.comments.push_back("model: " + std::string(fam.name()) + ", p=" + std::to_string(a.p));
  table.header = {"block", "row", "col", "value"};
  for (int i = 0; i < fam.dim(); ++i)
    for (int j = 0; j < fam.dim(); ++j)
      table.rows.push_back({"g_theta", std::to_string(i + 1), std::to_string(j + 1),
                            ccs::format_double(g_theta(i, j))});
  for (int i = 0; i < a.p; ++i)
    for (int j = 0; j < a.p; ++j)
      table.rows.push_back({"g_beta", std::to_string(i + 1), std::to_string(j + 1),
                            ccs::format_double(g_beta(i, j))});
  table.rows.push_back({"log_det_g_beta", "1", "1", ccs::format_double(log_det)});

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
}

// --------------------------------------------------------- verify-fisher --

struct VerifyFisherArgs {
  std::string model = "full";
  int p = 0;
  std::string theta;
  std::string beta;
  double step = 1e-5;
  std::string out = "-";
};

void run_verify_fisher(const VerifyFisherArgs& a, const std::string& invocation) {
  const ccs::ModelFamily fam = ccs::ModelFamily::from_name(a.model, a.p);
  const int d = fam.dim();
  Vector theta = Vector::Zero(d);
  Vector beta = Vector::Zero(a.p);
  if (!a.theta.empty()) theta = to_vector(parse_double_list(a.theta));
  if (!a.beta.empty()) beta = to_vector(parse_double_list(a.beta));

  const Matrix g = ccs::fisher_numeric(fam, theta, beta, a.step);
  const Matrix g_theta = ccs::fisher_theta(fam);
  const Matrix g_beta = ccs::fisher_beta(fam.spectrum(theta));

  double theta_dev = 0.0, beta_dev = 0.0, cross_dev = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      theta_dev = std::max(theta_dev, std::abs(g(i, j) - g_theta(i, j)) /
                                          (1.0 + std::abs(g_theta(i, j))));
  for (int i = 0; i < a.p; ++i)
    for (int j = 0; j < a.p; ++j)
      beta_dev = std::max(beta_dev, std::abs(g(d + i, d + j) - g_beta(i, j)) /
                                        (1.0 + std::abs(g_beta(i, j))));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < a.p; ++j) cross_dev = std::max(cross_dev, std::abs(g(i, d + j)));

  const double block_tol = 1e-5;
  const double cross_tol = 1e-6;
  const bool ok = theta_dev < block_tol && beta_dev < block_tol && cross_dev < cross_tol;

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.comments.push_back("deviations are relative to 1 + |closed-form entry|");
  table.header = {"block", "max_deviation", "threshold", "pass"};
  const auto row = [&](const char* name, double dev, double tol) {
    table.rows.push_back({name, ccs::format_double(dev), ccs::format_double(tol),
                          dev < tol ? "1" : "0"});
  };
  row("g_theta", theta_dev, block_tol);
  row("g_beta", beta_dev, block_tol);
  row("cross", cross_dev, cross_tol);

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
  if (!ok)
    throw std::runtime_error("verify-fisher: oracle deviation exceeds threshold");
}

// --------------------------------------------------- check-superharmonic --

struct CheckArgs {
  std::string model = "exchangeable";
  int p = 0;
  PriorFlags prior;
  double ref_c = 1.0;
  std::string grid = "-3:3:61";
  std::string ray;
  std::string convention = "sqrt";
  bool require_negative = false;
  std::string out = "-";
};

void run_check(const CheckArgs& a, const std::string& invocation) {
  const ccs::ModelFamily fam = ccs::ModelFamily::from_name(a.model, a.p);
  const int d = fam.dim();
  const ccs::PriorSpec prior = a.prior.resolve(ccs::PriorSpec::uniform());
  const ccs::PriorSpec reference = ccs::PriorSpec::power(a.ref_c);
  const auto convention = [&] {
    if (a.convention == "sqrt") return ccs::RatioConvention::kSqrtRatio;
    if (a.convention == "ratio") return ccs::RatioConvention::kRatio;
    throw std::invalid_argument("--convention must be sqrt or ratio");
  }();

  Vector ray = Vector::Ones(d);
  if (!a.ray.empty()) ray = to_vector(parse_double_list(a.ray));
  if (static_cast<int>(ray.size()) != d)
    throw std::invalid_argument("--ray must have the family dimension " + std::to_string(d));

  const std::vector<double> ss = parse_grid(a.grid);
  std::vector<Vector> grid;
  grid.reserve(ss.size());
  for (double s : ss) grid.push_back(s * ray);

  const ccs::SuperharmonicReport report =
      ccs::check_superharmonic(fam, prior, reference, grid, convention);

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.comments.push_back("prior: " + describe_prior(prior));
  table.comments.push_back("reference: " + describe_prior(reference));
  table.comments.push_back("convention: " + std::string(ccs::to_string(convention)) +
                           ", f = det(g_beta)^" + ccs::format_double(report.exponent));
  table.comments.push_back("max value: " + ccs::format_double(report.max_value) +
                           ", positive points: " + std::to_string(report.positive_count));
  table.header = {"s"};
  for (int i = 0; i < d; ++i) table.header.push_back("theta_" + std::to_string(i + 1));
  table.header.push_back("f_inv_laplacian_f");
  for (size_t k = 0; k < grid.size(); ++k) {
    std::vector<std::string> row{ccs::format_double(ss[k])};
    for (int i = 0; i < d; ++i) row.push_back(ccs::format_double(grid[k][i]));
    row.push_back(ccs::format_double(report.points[k].value));
    table.rows.push_back(std::move(row));
  }

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
  if (a.require_negative && !report.superharmonic())
    throw std::runtime_error("check-superharmonic: ratio is not superharmonic on the grid");
}

// ------------------------------------------------------------ risk-curve --

struct RiskCurveArgs {
  std::string model = "exchangeable";
  std::string ps = "2,3,10";
  PriorFlags prior;  // reused for comma lists via strings below
  std::string gammas;
  std::string cs;
  std::string ts;
  int n = 100;
  std::string grid = "-6:6:241";
  std::string out = "-";
};

void run_risk_curve(const RiskCurveArgs& a, const std::string& invocation) {
  if (a.model != "exchangeable")
    throw std::invalid_argument(
        "risk-curve: closed-form curves exist for the exchangeable family only");
  int exclusive = 0;
  for (const auto* s : {&a.gammas, &a.cs, &a.ts})
    if (!s->empty()) ++exclusive;
  if (exclusive > 1)
    throw std::invalid_argument("risk-curve: give only one of --gamma, --c, --t");

  std::vector<double> gammas;
  if (!a.cs.empty()) {
    for (double c : parse_double_list(a.cs)) gammas.push_back(0.25 * (c - 1.0));
  } else if (!a.ts.empty()) {
    for (double t : parse_double_list(a.ts)) gammas.push_back(0.5 * t);
  } else if (!a.gammas.empty()) {
    gammas = parse_double_list(a.gammas);
  } else {
    gammas = {-0.5, -0.25, -0.01};
  }

  const std::vector<int> ps = parse_int_list(a.ps);
  const std::vector<double> thetas = parse_grid(a.grid);
  const auto table_points = ccs::risk_curve_table(ps, gammas, thetas, a.n);

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.comments.push_back(
      "risk_diff: asymptotic KL risk of jeffreys minus prior with the given gamma");
  table.header = {"model", "p", "n", "gamma", "theta", "risk_diff"};
  for (const auto& pt : table_points)
    table.rows.push_back({"exchangeable", std::to_string(pt.p), std::to_string(pt.n),
                          ccs::format_double(pt.gamma), ccs::format_double(pt.theta),
                          ccs::format_double(pt.risk_diff)});

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
}

// -------------------------------------------------------------- simulate --

struct SimulateArgs {
  std::string config;
  std::string model;
  int p = 0;
  std::string theta0;
  std::string beta0;
  int n = 0;
  int reps = 0;
  std::string priors;
  int chain_length = 0;
  int burn_in = -1;
  int thinning = 0;
  double step_theta = 0.0;
  double step_beta = 0.0;
  int kl_draws = 0;
  double rhat = 0.0;
  std::int64_t seed = -1;
  std::string out = "-";
};

void run_simulate(const SimulateArgs& a, const std::string& invocation) {
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) kv = ccs::read_key_value_file(a.config);

  const auto text = [&](const char* key, const std::string& cli_value,
                        const std::string& fallback) {
    if (!cli_value.empty()) return cli_value;
    const auto it = kv.find(key);
    return it != kv.end() ? it->second : fallback;
  };
  const auto integer = [&](const char* key, int cli_value, int fallback,
                           bool cli_set) {
    if (cli_set) return cli_value;
    const auto it = kv.find(key);
    return it != kv.end() ? static_cast<int>(ccs::parse_double(it->second)) : fallback;
  };
  const auto real = [&](const char* key, double cli_value, double fallback, bool cli_set) {
    if (cli_set) return cli_value;
    const auto it = kv.find(key);
    return it != kv.end() ? ccs::parse_double(it->second) : fallback;
  };

  const std::string model = text("model", a.model, "exchangeable");
  const int p = integer("p", a.p, 2, a.p > 0);
  const ccs::ModelFamily fam = ccs::ModelFamily::from_name(model, p);

  const double theta0 = ccs::parse_double(text("theta0", a.theta0, "0"));
  const std::string beta0_text = text("beta0", a.beta0, "0");
  Vector beta0;
  {
    const auto vals = parse_double_list(beta0_text);
    if (vals.size() == 1) {
      beta0 = Vector::Constant(p, vals[0]);
    } else {
      beta0 = to_vector(vals);
    }
  }

  ccs::ExperimentConfig cfg{fam, Vector::Constant(fam.dim(), theta0), beta0};
  cfg.n = integer("n", a.n, 100, a.n > 0);
  cfg.reps = integer("reps", a.reps, 2000, a.reps > 0);
  cfg.kl_eval_draws = integer("kl_draws", a.kl_draws, 2000, a.kl_draws > 0);
  cfg.rhat_threshold = real("rhat_threshold", a.rhat, 1.1, a.rhat > 0.0);
  cfg.mcmc.chain_length = integer("chain_length", a.chain_length, 6000, a.chain_length > 0);
  cfg.mcmc.burn_in = integer("burn_in", a.burn_in, 1000, a.burn_in >= 0);
  cfg.mcmc.thinning = integer("thinning", a.thinning, 5, a.thinning > 0);
  cfg.mcmc.step_theta = real("step_theta", a.step_theta, 0.25, a.step_theta > 0.0);
  cfg.mcmc.step_beta = real("step_beta", a.step_beta, 0.25, a.step_beta > 0.0);
  if (a.seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(a.seed);
  } else if (const auto it = kv.find("seed"); it != kv.end()) {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(it->second));
  } else {
    cfg.seed = 1;
  }

  std::vector<ccs::PriorSpec> priors;
  for (const auto& tok : ccs::split(text("priors", a.priors, "jeffreys,uniform"), ','))
    priors.push_back(parse_prior_token(tok));

  const ccs::PairedRiskEstimates result = ccs::estimate_kl_risk_paired(cfg, priors);

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.comments.push_back("family: " + std::string(fam.name()) +
                           ", seed=" + std::to_string(cfg.seed) +
                           ", kl_draws=" + std::to_string(cfg.kl_eval_draws));
  table.comments.push_back(
      "mcmc: chain_length=" + std::to_string(cfg.mcmc.chain_length) +
      ", burn_in=" + std::to_string(cfg.mcmc.burn_in) +
      ", thinning=" + std::to_string(cfg.mcmc.thinning));
  table.header = {"prior", "c",  "p",       "n",  "theta0",
                  "reps",  "mean_kl", "se", "accept_rate", "excluded"};
  for (const auto& e : result.estimates)
    table.rows.push_back({e.prior.label(), ccs::format_double(e.prior.c()),
                          std::to_string(p), std::to_string(cfg.n),
                          ccs::format_double(theta0), std::to_string(e.reps_used),
                          ccs::format_double(e.mean_kl), ccs::format_double(e.std_error),
                          ccs::format_double(e.mean_acceptance),
                          std::to_string(e.excluded)});

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
}

// ---------------------------------------------------------------- sample --

struct SampleArgs {
  std::string model = "exchangeable";
  int p = 0;
  std::string theta;
  std::string beta;
  int n = 0;
  std::uint64_t seed = 1;
  std::string out = "-";
};

void run_sample(const SampleArgs& a, const std::string& invocation) {
  const ccs::ModelFamily fam = ccs::ModelFamily::from_name(a.model, a.p);
  Vector theta = Vector::Zero(fam.dim());
  Vector beta = Vector::Zero(a.p);
  if (!a.theta.empty()) theta = to_vector(parse_double_list(a.theta));
  if (!a.beta.empty()) beta = to_vector(parse_double_list(a.beta));
  const ccs::CovarianceFactorization truth(ccs::ScaleVector::from_log(beta),
                                           fam.spectrum(theta));
  ccs::RngStream rng(a.seed, 0, 0);
  const Matrix x = ccs::sample_dataset(truth, a.n, rng);

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.header.reserve(a.p);
  for (int j = 0; j < a.p; ++j) table.header.push_back("x" + std::to_string(j + 1));
  for (int i = 0; i < a.n; ++i) {
    std::vector<std::string> row;
    row.reserve(a.p);
    for (int j = 0; j < a.p; ++j) row.push_back(ccs::format_double(x(i, j)));
    table.rows.push_back(std::move(row));
  }

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
}

// -------------------------------------------------------------- identify --

struct IdentifyArgs {
  std::string in;
  std::string model = "full";
  std::string out = "-";
};

void run_identify(const IdentifyArgs& a, const std::string& invocation) {
  const Matrix sigma = ccs::read_numeric_matrix_file(a.in);
  const ccs::CovarianceFactorization f = ccs::identify(sigma);
  const int p = f.dim();
  const ccs::ModelFamily fam = ccs::ModelFamily::from_name(a.model, p);
  const Vector theta = fam.theta_from(f.spectrum);

  ccs::CsvTable table;
  table.comments = base_comments(invocation);
  table.comments.push_back("family for theta recovery: " + std::string(fam.name()));
  table.header = {"quantity", "index", "value"};
  const Vector alpha = f.scale.values();
  for (int i = 0; i < p; ++i)
    table.rows.push_back({"alpha", std::to_string(i + 1), ccs::format_double(alpha[i])});
  for (int k = 0; k < p; ++k)
    table.rows.push_back(
        {"lambda", std::to_string(k + 1), ccs::format_double(f.spectrum.values()[k])});
  for (int i = 0; i < fam.dim(); ++i)
    table.rows.push_back({"theta", std::to_string(i + 1), ccs::format_double(theta[i])});

  Output out(a.out);
  ccs::write_csv(out.stream(), table);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string invocation = join_args(argc, argv);
  CLI::App app{"circulant correlation structure models"};
  app.require_subcommand(1);

  FisherArgs fisher;
  auto* fisher_cmd = app.add_subcommand("fisher", "Closed-form Fisher blocks at a point");
  fisher_cmd->add_option("--model", fisher.model, "Family: full or exchangeable");
  fisher_cmd->add_option("--p", fisher.p, "Dimension")->required();
  fisher_cmd->add_option("--theta", fisher.theta, "Comma list, default zeros");
  fisher_cmd->add_option("--out", fisher.out, "Output CSV path, - for stdout");

  VerifyFisherArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify-fisher", "Check closed forms against the finite-difference trace oracle");
  verify_cmd->add_option("--model", verify.model, "Family: full or exchangeable");
  verify_cmd->add_option("--p", verify.p, "Dimension")->required();
  verify_cmd->add_option("--theta", verify.theta, "Comma list, default zeros");
  verify_cmd->add_option("--beta", verify.beta, "Comma list, default zeros");
  verify_cmd->add_option("--step", verify.step, "Relative finite-difference step");
  verify_cmd->add_option("--out", verify.out, "Output CSV path, - for stdout");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check-superharmonic",
                                       "Laplacian sign of a prior ratio over a theta grid");
  check_cmd->add_option("--model", check.model, "Family: full or exchangeable");
  check_cmd->add_option("--p", check.p, "Dimension")->required();
  check.prior.attach(check_cmd, "the prior");
  check_cmd->add_option("--ref-c", check.ref_c, "Reference prior exponent c, default 1");
  check_cmd->add_option("--grid", check.grid, "lo:hi:count scale grid, default -3:3:61");
  check_cmd->add_option("--ray", check.ray, "Direction in theta space, default all ones");
  check_cmd->add_option("--convention", check.convention,
                        "Ratio power: sqrt (risk expansion form) or ratio (plain ratio)");
  check_cmd->add_flag("--require-negative", check.require_negative,
                      "Exit 3 when any grid point is positive");
  check_cmd->add_option("--out", check.out, "Output CSV path, - for stdout");

  RiskCurveArgs curve;
  auto* curve_cmd =
      app.add_subcommand("risk-curve", "Closed-form asymptotic risk-difference curves");
  curve_cmd->add_option("--model", curve.model, "Family, exchangeable only");
  curve_cmd->add_option("--p", curve.ps, "Comma list of dimensions, default 2,3,10");
  auto* g_opt = curve_cmd->add_option("--gamma", curve.gammas,
                                      "Comma list of gamma exponents, default -0.5,-0.25,-0.01");
  auto* c_opt = curve_cmd->add_option("--c", curve.cs, "Comma list of c exponents");
  auto* t_opt = curve_cmd->add_option("--t", curve.ts, "Comma list of t exponents");
  g_opt->excludes(c_opt)->excludes(t_opt);
  c_opt->excludes(t_opt);
  curve_cmd->add_option("--n", curve.n, "Sample size in the risk scale, default 100");
  curve_cmd->add_option("--grid", curve.grid, "lo:hi:count theta grid, default -6:6:241");
  curve_cmd->add_option("--out", curve.out, "Output CSV path, - for stdout");

  SimulateArgs sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Monte-Carlo KL risk comparison of priors");
  sim_cmd->add_option("--config", sim.config, "key=value file; flags override");
  sim_cmd->add_option("--model", sim.model, "Family: full or exchangeable");
  sim_cmd->add_option("--p", sim.p, "Dimension");
  sim_cmd->add_option("--theta0", sim.theta0, "True theta, one value for all coordinates");
  sim_cmd->add_option("--beta0", sim.beta0, "True beta, scalar broadcast or comma list");
  sim_cmd->add_option("--n", sim.n, "Observations per dataset");
  sim_cmd->add_option("--reps", sim.reps, "Replications");
  sim_cmd->add_option("--priors", sim.priors,
                      "Comma list: jeffreys, uniform, c=X, t=X, gamma=X");
  sim_cmd->add_option("--chain-length", sim.chain_length, "MCMC iterations incl. burn-in");
  sim_cmd->add_option("--burn-in", sim.burn_in, "Burn-in iterations");
  sim_cmd->add_option("--thinning", sim.thinning, "Retain every k-th draw");
  sim_cmd->add_option("--step-theta", sim.step_theta, "Initial proposal scale for theta");
  sim_cmd->add_option("--step-beta", sim.step_beta, "Initial proposal scale for beta");
  sim_cmd->add_option("--kl-draws", sim.kl_draws, "Fresh draws per KL estimate");
  sim_cmd->add_option("--rhat-threshold", sim.rhat, "Exclude reps above this split R-hat");
  sim_cmd->add_option("--seed", sim.seed, "Experiment seed");
  sim_cmd->add_option("--out", sim.out, "Output CSV path, - for stdout");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a dataset from a model point");
  sample_cmd->add_option("--model", sample.model, "Family: full or exchangeable");
  sample_cmd->add_option("--p", sample.p, "Dimension")->required();
  sample_cmd->add_option("--theta", sample.theta, "Comma list, default zeros");
  sample_cmd->add_option("--beta", sample.beta, "Comma list, default zeros");
  sample_cmd->add_option("--n", sample.n, "Rows to draw")->required();
  sample_cmd->add_option("--seed", sample.seed, "Stream seed, default 1");
  sample_cmd->add_option("--out", sample.out, "Output CSV path, - for stdout");

  IdentifyArgs identify;
  auto* identify_cmd = app.add_subcommand(
      "identify", "Split a covariance CSV into scales, spectrum and theta");
  identify_cmd->add_option("--in", identify.in, "Covariance matrix CSV")->required();
  identify_cmd->add_option("--model", identify.model,
                           "Family for theta recovery, default full");
  identify_cmd->add_option("--out", identify.out, "Output CSV path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (fisher_cmd->parsed()) run_fisher(fisher, invocation);
    if (verify_cmd->parsed()) run_verify_fisher(verify, invocation);
    if (check_cmd->parsed()) run_check(check, invocation);
    if (curve_cmd->parsed()) run_risk_curve(curve, invocation);
    if (sim_cmd->parsed()) run_simulate(sim, invocation);
    if (sample_cmd->parsed()) run_sample(sample, invocation);
    if (identify_cmd->parsed()) run_identify(identify, invocation);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
