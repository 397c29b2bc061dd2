#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gpgm/io.hpp"
#include "gpgm/optimal.hpp"

namespace gpgm {

/// Settings for bk-sweep and mse-sweep.
///
/// `instances` is an ensemble stanza (explicit or generator). Any number in
/// it may be replaced by {"range": [lo, hi]}; integer bounds draw integers.
/// Each instance resolves the ranges and, for the random generator, its seed
/// from (seed, instance index) alone.
struct SweepConfig {
  io::Json instances;
  std::vector<std::filesystem::path> ensemble_files;
  std::size_t num_instances = 1;
  std::vector<io::Json> scores = {io::Json{{"kind", "delta"}}};
  SolverOptions solver;
  std::size_t random_candidates = 5;
  /// Isotropic Gaussian score used by mse-sweep's solver candidate.
  double mse_solver_t = 0.1;
  std::vector<double> t_sequence = default_t_sequence();
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> output;
};

/// Throws ParseError for shape problems and ValidationError for invariant
/// violations (sizes >= 1, t sequence strictly positive and descending).
SweepConfig sweep_config_from_json(const io::Json& j, const std::filesystem::path& base_dir = {});
void validate_sweep_config(const SweepConfig& c);

/// Replaces every {"range": [lo, hi]} in a stanza by a draw from rng.
io::Json resolve_ranges(const io::Json& stanza, Rng& rng);

/// Ensembles in sweep order: files first, then generated instances.
std::vector<Ensemble> sweep_instances(const SweepConfig& c);

struct SweepSummary {
  std::size_t instances = 0;
  std::size_t rows = 0;
  std::size_t checks = 0;  // (ensemble, score, candidate) triples or candidate MSE comparisons
  std::size_t violations = 0;
  double min_slack = 0.0;
  /// mse-sweep only: worst |curve(t_min) - mse| / (1 + mse) over instances.
  double max_limit_gap = 0.0;
  double max_ratio = 0.0;  // mse-sweep only: worst mse_pgm / mse_candidate
};

/// Writes the CSV (with # metadata header) to out. Slack violations below
/// -1e-8 are counted, not thrown.
SweepSummary run_bk_sweep(const SweepConfig& c, std::ostream& out, const std::string& timestamp = {});
SweepSummary run_mse_sweep(const SweepConfig& c, std::ostream& out, const std::string& timestamp = {});

}  // namespace gpgm
