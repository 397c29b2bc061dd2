// Command-line driver: PGM construction, inequality sweeps, self test.
//
// Exit codes: 0 success, 1 internal error, 2 input error, 3 inequality violation.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gpgm/errors.hpp"
#include "gpgm/io.hpp"
#include "gpgm/selftest.hpp"
#include "gpgm/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitViolation = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gpgm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("GPGM_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
  }
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Options {
  std::string ensemble_file;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> jobs;
  double tol = 1e-9;
};

int cmd_pgm(const Options& opt) {
  const auto ensemble = gpgm::io::ensemble_from_json(gpgm::io::read_json_file(opt.ensemble_file));
  spdlog::debug("loaded {} (d = {}, r = {})", ensemble.label(), ensemble.dim(), ensemble.size());
  const auto povm = gpgm::build_gpgm(ensemble, gpgm::singleton_partition(ensemble.size()));
  const auto report = gpgm::validate_povm(povm, opt.tol);
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) throw gpgm::ParseError("cannot write " + opt.out);
    f << gpgm::io::povm_to_json(povm).dump(1) << "\n";
    spdlog::info("wrote POVM with {} elements to {}", povm.size(), opt.out);
  } else {
    std::cout << gpgm::io::povm_to_json(povm).dump() << "\n";
  }
  std::cout << gpgm::io::validation_to_json(report).dump() << "\n";
  if (!report.pass()) {
    spdlog::error("constructed POVM failed validation (residual {})", report.completeness_residual);
    return kExitInternal;
  }
  return kExitOk;
}

gpgm::SweepConfig load_config(const Options& opt) {
  const std::filesystem::path path = opt.config;
  auto cfg = gpgm::sweep_config_from_json(gpgm::io::read_json_file(path), path.parent_path());
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.jobs) cfg.jobs = *opt.jobs;
  if (!opt.out.empty()) cfg.output = opt.out;
  gpgm::validate_sweep_config(cfg);
  return cfg;
}

int cmd_sweep(const Options& opt, bool mse) {
  const auto cfg = load_config(opt);
  std::ofstream file;
  if (cfg.output) {
    file.open(*cfg.output);
    if (!file) throw gpgm::ParseError("cannot write " + cfg.output->string());
  }
  std::ostream& out = cfg.output ? static_cast<std::ostream&>(file) : std::cout;
  const auto t0 = std::chrono::steady_clock::now();
  const auto summary = mse ? gpgm::run_mse_sweep(cfg, out, utc_timestamp()) : gpgm::run_bk_sweep(cfg, out, utc_timestamp());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream line;
  line << "summary: instances=" << summary.instances << " rows=" << summary.rows << " checks=" << summary.checks
       << " violations=" << summary.violations << " min_slack=" << std::setprecision(6) << summary.min_slack;
  if (mse) line << " max_ratio=" << summary.max_ratio << " max_limit_gap=" << summary.max_limit_gap;
  line << " seconds=" << std::setprecision(3) << secs;
  std::cerr << line.str() << "\n";
  if (summary.violations > 0) {
    spdlog::error("{} inequality violation(s)", summary.violations);
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_selftest() {
  bool ok = true;
  for (const auto& s : gpgm::run_selftest()) {
    std::cout << (s.pass ? "PASS " : "FAIL ") << s.name << " (" << s.detail << ", " << std::fixed << std::setprecision(2)
              << s.seconds << " s)\n";
    ok = ok && s.pass;
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Generalized pretty good measurement toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto* pgm = app.add_subcommand("pgm", "Build and validate the PGM of an ensemble file");
  pgm->add_option("ensemble_file", opt.ensemble_file, "Ensemble JSON (explicit or generator stanza)")->required();
  pgm->add_option("--out", opt.out, "Write the POVM JSON here instead of standard output");
  pgm->add_option("--tol", opt.tol, "Validation tolerance");

  auto* bk = app.add_subcommand("bk-sweep", "Check G(candidate) <= sqrt(G_pgm) over a sweep");
  auto* ms = app.add_subcommand("mse-sweep", "Check MSE(pgm) <= 2 MSE(candidate) and MSE(pgm) <= 4 E2 over a sweep");
  for (auto* sub : {bk, ms}) {
    sub->add_option("--config", opt.config, "Sweep configuration (JSON)")->required();
    sub->add_option("--seed", opt.seed, "Override the configuration seed");
    sub->add_option("--out", opt.out, "CSV output path (default: standard output)");
    sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  }
  auto* self = app.add_subcommand("selftest", "Run the built-in invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (pgm->parsed()) return cmd_pgm(opt);
    if (bk->parsed()) return cmd_sweep(opt, false);
    if (ms->parsed()) return cmd_sweep(opt, true);
    if (self->parsed()) return cmd_selftest();
  } catch (const gpgm::ParseError& err) {
    spdlog::error("input error: {}", err.what());
    return kExitInput;
  } catch (const gpgm::ValidationError& err) {
    spdlog::error("invalid input: {}", err.what());
    return kExitInput;
  } catch (const gpgm::PreconditionError& err) {
    spdlog::error("invalid input: {}", err.what());
    return kExitInput;
  } catch (const gpgm::TruncationError& err) {
    spdlog::error("invalid input: {}", err.what());
    return kExitInput;
  } catch (const gpgm::ScoreValidityError& err) {
    spdlog::error("invalid input: {}", err.what());
    return kExitInput;
  } catch (const gpgm::SizeError& err) {
    spdlog::error("invalid input: {}", err.what());
    return kExitInput;
  } catch (const std::exception& err) {
    spdlog::error("internal error: {}", err.what());
    return kExitInternal;
  }
  return kExitInternal;
}
