#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ccs/circulant.hpp"
#include "ccs/csv.hpp"
#include "ccs/model.hpp"

using namespace ccs;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

const std::filesystem::path& scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::current_path() / "cli_scratch";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  const auto out_path = scratch_dir() / "stdout.txt";
  const auto err_path = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(CCS_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

CsvTable parse_csv(const std::string& text) {
  std::istringstream is(text);
  return read_csv(is);
}

}  // namespace

TEST_CASE("cli help and usage errors", "[cli]") {
  REQUIRE(run_cli("--help").exit_code == 0);
  REQUIRE(run_cli("").exit_code == 2);                 // subcommand required
  REQUIRE(run_cli("no-such-command").exit_code == 2);
  REQUIRE(run_cli("fisher").exit_code == 2);           // --p required
  REQUIRE(run_cli("fisher --model toeplitz --p 4").exit_code == 2);
  REQUIRE(run_cli("risk-curve --gamma -0.25 --c 0").exit_code == 2);  // exclusive
  REQUIRE(run_cli("simulate --config missing_file.cfg").exit_code == 2);
  REQUIRE(run_cli("identify --in missing.csv").exit_code == 2);
}

TEST_CASE("cli fisher", "[cli]") {
  const CliResult r = run_cli("fisher --model full --p 4 --theta 0.3,-0.2");
  REQUIRE(r.exit_code == 0);
  const CsvTable t = parse_csv(r.out);
  REQUIRE(t.header == std::vector<std::string>{"block", "row", "col", "value"});

  // g_theta of the full p = 4 family is [[3,1],[1,1]], independent of theta.
  REQUIRE(t.cell(0, "block") == "g_theta");
  REQUIRE(t.number(0, "value") == 3.0);
  REQUIRE(t.number(1, "value") == 1.0);
  REQUIRE(t.number(3, "value") == 1.0);

  // 4 + 16 block entries and a trailing log-det row.
  REQUIRE(t.rows.size() == 4 + 16 + 1);
  REQUIRE(t.cell(t.rows.size() - 1, "block") == "log_det_g_beta");
  REQUIRE(std::isfinite(t.number(t.rows.size() - 1, "value")));
}

TEST_CASE("cli verify-fisher", "[cli]") {
  const CliResult r =
      run_cli("verify-fisher --model exchangeable --p 5 --theta 0.4 --beta 0.1,0,-0.2,0.3,0");
  REQUIRE(r.exit_code == 0);
  const CsvTable t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    REQUIRE(t.cell(i, "pass") == "1");
    REQUIRE(t.number(i, "max_deviation") < t.number(i, "threshold"));
  }
}

TEST_CASE("cli check-superharmonic", "[cli]") {
  SECTION("uniform prior ratio is superharmonic inside the window") {
    const CliResult r =
        run_cli("check-superharmonic --model exchangeable --p 5 --gamma -0.25 "
                "--grid -2:2:21 --require-negative");
    REQUIRE(r.exit_code == 0);
    const CsvTable t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 21);
    for (size_t i = 0; i < t.rows.size(); ++i)
      REQUIRE(t.number(i, "f_inv_laplacian_f") < 0.0);
  }

  SECTION("positive exponent fails the requirement with exit 3") {
    const CliResult r =
        run_cli("check-superharmonic --model exchangeable --p 5 --gamma 0.25 "
                "--grid -2:2:21 --require-negative");
    REQUIRE(r.exit_code == 3);
  }

  SECTION("without the flag the report still succeeds") {
    const CliResult r = run_cli(
        "check-superharmonic --model exchangeable --p 5 --gamma 0.25 --grid -2:2:21");
    REQUIRE(r.exit_code == 0);
  }
}

TEST_CASE("cli risk-curve", "[cli]") {
  const CliResult r = run_cli("risk-curve --p 2 --gamma -0.25 --n 100 --grid -1:1:21");
  REQUIRE(r.exit_code == 0);
  const CsvTable t = parse_csv(r.out);
  REQUIRE(t.header ==
          std::vector<std::string>{"model", "p", "n", "gamma", "theta", "risk_diff"});
  REQUIRE(t.rows.size() == 21);
  REQUIRE(t.cell(0, "model") == "exchangeable");

  // Row 10 is theta = 0 where the curve equals -4 gamma / n^2 = 1e-4.
  REQUIRE(t.number(10, "theta") == 0.0);
  REQUIRE(t.number(10, "risk_diff") == Catch::Approx(1e-4).epsilon(1e-12));

  // Even in theta.
  for (int k = 0; k < 10; ++k)
    REQUIRE(t.number(k, "risk_diff") ==
            Catch::Approx(t.number(20 - k, "risk_diff")).epsilon(1e-12));

  SECTION("full family is rejected") {
    REQUIRE(run_cli("risk-curve --model full --p 4").exit_code == 2);
  }
}

TEST_CASE("cli sample is deterministic per seed", "[cli]") {
  const std::string args = "sample --model exchangeable --p 3 --theta 0.4 "
                           "--beta 0.1,-0.1,0.2 --n 5 --seed 7";
  const CliResult r1 = run_cli(args);
  const CliResult r2 = run_cli(args);
  REQUIRE(r1.exit_code == 0);
  const CsvTable t1 = parse_csv(r1.out);
  const CsvTable t2 = parse_csv(r2.out);
  REQUIRE(t1.header == std::vector<std::string>{"x1", "x2", "x3"});
  REQUIRE(t1.rows.size() == 5);
  REQUIRE(t1.rows == t2.rows);

  const CliResult other = run_cli(args + "1");  // seed 71
  REQUIRE(parse_csv(other.out).rows != t1.rows);
}

TEST_CASE("cli identify recovers a synthetic covariance", "[cli]") {
  const ModelFamily fam = ModelFamily::exchangeable(3);
  Vector theta(1), beta(3);
  theta << 0.4;
  beta << 0.1, -0.1, 0.2;
  const CovarianceFactorization f(ScaleVector::from_log(beta), fam.spectrum(theta));
  const Matrix sigma = f.covariance();

  const auto sigma_path = scratch_dir() / "sigma.csv";
  {
    std::ofstream os(sigma_path);
    os << "# synthetic covariance\n";
    for (int i = 0; i < 3; ++i)
      os << format_double(sigma(i, 0)) << "," << format_double(sigma(i, 1)) << ","
         << format_double(sigma(i, 2)) << "\n";
  }

  const CliResult r = run_cli("identify --in " + sigma_path.string());
  REQUIRE(r.exit_code == 0);
  const CsvTable t = parse_csv(r.out);

  double theta_value = 0.0;
  int alpha_rows = 0, lambda_rows = 0;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& q = t.cell(i, "quantity");
    if (q == "alpha") {
      const int idx = static_cast<int>(t.number(i, "index"));
      REQUIRE(t.number(i, "value") ==
              Catch::Approx(std::exp(beta[idx - 1])).epsilon(1e-9));
      ++alpha_rows;
    } else if (q == "lambda") {
      ++lambda_rows;
    } else if (q == "theta") {
      theta_value = t.number(i, "value");
    }
  }
  REQUIRE(alpha_rows == 3);
  REQUIRE(lambda_rows == 3);
  REQUIRE(theta_value == Catch::Approx(0.4).epsilon(1e-9));

  SECTION("non-circulant input is rejected with exit 2") {
    const auto bad_path = scratch_dir() / "bad.csv";
    {
      std::ofstream os(bad_path);
      os << "2.0,0.3,0.1\n0.3,1.0,0.3\n0.1,0.3,1.5\n";
    }
    REQUIRE(run_cli("identify --in " + bad_path.string()).exit_code == 2);
  }
}

TEST_CASE("cli simulate with a config file and overrides", "[cli]") {
  const auto cfg_path = scratch_dir() / "sim.cfg";
  {
    std::ofstream os(cfg_path);
    os << "# tiny smoke budget\n"
       << "model = exchangeable\n"
       << "p = 2\n"
       << "theta0 = 0.5\n"
       << "beta0 = 0\n"
       << "n = 30\n"
       << "reps = 3\n"
       << "kl_draws = 40\n"
       << "chain_length = 900\n"
       << "burn_in = 200\n"
       << "thinning = 5\n"
       << "priors = jeffreys,uniform\n"
       << "seed = 11\n";
  }

  const CliResult r = run_cli("simulate --config " + cfg_path.string());
  REQUIRE(r.exit_code == 0);
  const CsvTable t = parse_csv(r.out);
  REQUIRE(t.header ==
          std::vector<std::string>{"prior", "c", "p", "n", "theta0", "reps", "mean_kl",
                                   "se", "accept_rate", "excluded"});
  REQUIRE(t.rows.size() == 2);
  REQUIRE(t.cell(0, "prior") == "jeffreys");
  REQUIRE(t.number(0, "c") == 1.0);
  REQUIRE(t.cell(1, "prior") == "uniform");
  REQUIRE(t.number(1, "c") == 0.0);
  for (size_t i = 0; i < 2; ++i) {
    REQUIRE(t.number(i, "p") == 2.0);
    REQUIRE(t.number(i, "n") == 30.0);
    REQUIRE(t.number(i, "theta0") == 0.5);
    REQUIRE(std::isfinite(t.number(i, "mean_kl")));
    REQUIRE(t.number(i, "se") > 0.0);
    REQUIRE(t.number(i, "accept_rate") > 0.0);
    REQUIRE(t.number(i, "accept_rate") < 1.0);
  }

  SECTION("command line overrides the file") {
    const CliResult o = run_cli("simulate --config " + cfg_path.string() + " --reps 2");
    REQUIRE(o.exit_code == 0);
    const CsvTable t2 = parse_csv(o.out);
    // reps column reports used reps; with none excluded it echoes the override.
    REQUIRE(t2.number(0, "reps") + t2.number(0, "excluded") == 2.0);
  }

  SECTION("bad prior token is rejected") {
    REQUIRE(run_cli("simulate --config " + cfg_path.string() + " --priors colonel").exit_code ==
            2);
  }
}
