#include "gpgm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "gpgm/errors.hpp"

namespace gpgm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::size_t instance_count(const SweepConfig& c) {
  return c.ensemble_files.size() + (c.instances.is_null() ? 0 : c.num_instances);
}

Ensemble make_instance(const SweepConfig& c, std::size_t n) {
  if (n < c.ensemble_files.size()) return io::ensemble_from_json(io::read_json_file(c.ensemble_files[n]));
  const std::size_t g = n - c.ensemble_files.size();
  Rng rng(derive_seed(c.seed, {g, 0}));
  io::Json stanza = resolve_ranges(c.instances, rng);
  if (stanza.value("generator", std::string()) == "random") stanza["seed"] = derive_seed(c.seed, {g, 1});
  return io::ensemble_from_json(stanza);
}

struct InstanceOutput {
  std::vector<std::string> rows;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double limit_gap = 0.0;
  double max_ratio = 0.0;
};

/// Runs work(i) for every instance on `jobs` threads; outputs stay in index order.
std::vector<InstanceOutput> run_parallel(std::size_t count, std::size_t jobs,
                                         const std::function<InstanceOutput(std::size_t)>& work) {
  std::vector<InstanceOutput> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, count));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void write_header(std::ostream& out, const SweepConfig& c, const std::string& command, const std::string& timestamp,
                  const std::string& columns) {
  out << "# generated=" << timestamp << "\n";
  out << "# command=" << command << "\n";
  out << "# seed=" << c.seed << "\n";
  out << "# instances=" << instance_count(c) << "\n";
  out << "# random_candidates=" << c.random_candidates << "\n";
  out << "# solver_tol=" << fmt(c.solver.tol) << " solver_max_iters=" << c.solver.max_iters << "\n";
  out << "# displacement_convention=alpha=(x1+i*x2)/sqrt(2)\n";
  out << columns << "\n";
}

SweepSummary summarize(const std::vector<InstanceOutput>& outputs, std::ostream& out) {
  SweepSummary s;
  s.instances = outputs.size();
  s.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& o : outputs) {
    for (const auto& row : o.rows) out << row << "\n";
    s.rows += o.rows.size();
    s.checks += o.checks;
    s.violations += o.violations;
    s.min_slack = std::min(s.min_slack, o.min_slack);
    s.max_limit_gap = std::max(s.max_limit_gap, o.limit_gap);
    s.max_ratio = std::max(s.max_ratio, o.max_ratio);
  }
  return s;
}

}  // namespace

io::Json resolve_ranges(const io::Json& stanza, Rng& rng) {
  if (stanza.is_object()) {
    if (stanza.size() == 1 && stanza.contains("range")) {
      const auto& r = stanza.at("range");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw ParseError("field 'range': expected [lo, hi]");
      if (r[0].is_number_integer() && r[1].is_number_integer()) {
        auto lo = r[0].get<long long>(), hi = r[1].get<long long>();
        if (hi < lo) throw ParseError("field 'range': hi < lo");
        return std::uniform_int_distribution<long long>(lo, hi)(rng);
      }
      double lo = r[0].get<double>(), hi = r[1].get<double>();
      if (hi < lo) throw ParseError("field 'range': hi < lo");
      return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    io::Json out = io::Json::object();
    for (auto it = stanza.begin(); it != stanza.end(); ++it) out[it.key()] = resolve_ranges(it.value(), rng);
    return out;
  }
  if (stanza.is_array()) {
    io::Json out = io::Json::array();
    for (const auto& v : stanza) out.push_back(resolve_ranges(v, rng));
    return out;
  }
  return stanza;
}

SweepConfig sweep_config_from_json(const io::Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  SweepConfig c;
  try {
    if (j.contains("instances")) c.instances = j.at("instances");
    if (j.contains("ensemble_files"))
      for (const auto& f : j.at("ensemble_files")) {
        std::filesystem::path p = f.get<std::string>();
        c.ensemble_files.push_back(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
      }
    c.num_instances = j.value("num_instances", c.num_instances);
    if (j.contains("score")) c.scores = {j.at("score")};
    if (j.contains("scores")) c.scores = j.at("scores").get<std::vector<io::Json>>();
    if (j.contains("solver")) {
      c.solver.tol = j.at("solver").value("tol", c.solver.tol);
      c.solver.max_iters = j.at("solver").value("max_iters", c.solver.max_iters);
    }
    c.random_candidates = j.value("random_candidates", c.random_candidates);
    c.mse_solver_t = j.value("mse_solver_t", c.mse_solver_t);
    if (j.contains("t_sequence")) c.t_sequence = j.at("t_sequence").get<std::vector<double>>();
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const io::Json::exception& err) {
    throw ParseError(std::string("config: ") + err.what());
  }
  validate_sweep_config(c);
  return c;
}

void validate_sweep_config(const SweepConfig& c) {
  if (instance_count(c) < 1) throw ValidationError("config: at least one instance is required");
  if (!c.instances.is_null() && c.num_instances < 1) throw ValidationError("config: num_instances must be >= 1");
  if (c.scores.empty()) throw ValidationError("config: at least one score is required");
  if (c.solver.max_iters < 1 || !(c.solver.tol > 0.0)) throw ValidationError("config: solver needs max_iters >= 1, tol > 0");
  if (c.jobs < 1) throw ValidationError("config: jobs must be >= 1");
  if (c.t_sequence.empty()) throw ValidationError("config: t_sequence must not be empty");
  for (std::size_t k = 0; k < c.t_sequence.size(); ++k) {
    if (!(c.t_sequence[k] > 0.0)) throw ValidationError("config: t_sequence must be strictly positive");
    if (k > 0 && !(c.t_sequence[k] < c.t_sequence[k - 1]))
      throw ValidationError("config: t_sequence must be strictly descending");
  }
  if (!(c.mse_solver_t > 0.0)) throw ValidationError("config: mse_solver_t must be > 0");
}

std::vector<Ensemble> sweep_instances(const SweepConfig& c) {
  std::vector<Ensemble> out;
  for (std::size_t n = 0; n < instance_count(c); ++n) out.push_back(make_instance(c, n));
  return out;
}

SweepSummary run_bk_sweep(const SweepConfig& c, std::ostream& out, const std::string& timestamp) {
  validate_sweep_config(c);
  write_header(out, c, "bk-sweep", timestamp,
               "instance_id,d,r,N,score_kind,povm_kind,candidates,G_pgm,sqrt_G_pgm,G_best_candidate,slack");
  auto work = [&c](std::size_t n) {
    InstanceOutput o;
    const Ensemble e = make_instance(c, n);
    const Povm pgm = build_gpgm(e, singleton_partition(e.size()));
    for (std::size_t si = 0; si < c.scores.size(); ++si) {
      const ScoreMatrix s = io::score_matrix_from_json(c.scores[si], e);
      std::vector<Candidate> candidates{{"pgm", pgm}};
      if (e.size() == 2)
        candidates.push_back({"helstrom", helstrom_two_state(e.weight(0), e.state(0), e.weight(1), e.state(1)).povm});
      candidates.push_back({"fixed-point", maximize_success(e, s, c.solver).povm});
      for (std::size_t k = 0; k < c.random_candidates; ++k)
        candidates.push_back({"random", random_povm(e.dim(), e.size(), derive_seed(c.seed, {n, si, k, 2}))});
      const BkCertificate cert = bk_certificate(e, s, expected_gain(e, s, pgm), candidates);
      o.checks += candidates.size();
      for (const auto& cs : cert.candidates)
        if (cs.slack < -kBkSlackTol) ++o.violations;
      if (cert.pgm_slack < -kBkSlackTol) ++o.violations;
      o.min_slack = std::min(o.min_slack, cert.min_slack);
      std::ostringstream row;
      row << n << "," << e.dim() << "," << e.size() << "," << e.param_dim() << "," << s.kind() << "," << cert.best_kind
          << "," << candidates.size() << "," << fmt(cert.g_pgm) << "," << fmt(cert.sqrt_g_pgm) << ","
          << fmt(cert.best_gain) << "," << fmt(cert.min_slack);
      o.rows.push_back(row.str());
    }
    return o;
  };
  return summarize(run_parallel(instance_count(c), c.jobs, work), out);
}

SweepSummary run_mse_sweep(const SweepConfig& c, std::ostream& out, const std::string& timestamp) {
  validate_sweep_config(c);
  write_header(out, c, "mse-sweep", timestamp,
               "instance_id,d,r,N,povm_kind,mse_pgm,mse_candidate,ratio,bound_4E,limit_curve,slack");
  auto work = [&c](std::size_t n) {
    InstanceOutput o;
    const Ensemble e = make_instance(c, n);
    if (e.param_dim() == 0) throw ValidationError("mse-sweep: instance " + std::to_string(n) + " has param_dim 0");
    const Povm pgm = build_gpgm(e, singleton_partition(e.size()));
    const auto bound = second_moment_bound_check(e, pgm);
    const double mse_pgm = bound.mse_value;
    const auto curve = mse_via_gain_limit(e, pgm, c.t_sequence);

    std::ostringstream curve_text;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      if (k) curve_text << ";";
      curve_text << fmt(curve[k].second);
      if (curve[k].second > mse_pgm + 1e-9) ++o.violations;
    }
    o.limit_gap = std::abs(curve.back().second - mse_pgm) / (1.0 + mse_pgm);
    if (!(mse_pgm <= bound.bound + 1e-8)) ++o.violations;

    std::vector<Candidate> candidates{{"pgm", pgm}};
    const ScoreMatrix near_mse = score_matrix(precision_gaussian_score(c.mse_solver_t, e.param_dim()), e);
    candidates.push_back({"fixed-point", maximize_success(e, near_mse, c.solver).povm});
    for (std::size_t k = 0; k < c.random_candidates; ++k)
      candidates.push_back({"random", random_povm(e.dim(), e.size(), derive_seed(c.seed, {n, k, 3}))});

    for (const auto& cand : candidates) {
      const double m = mse(e, cand.povm);
      const double slack = 2.0 * m - mse_pgm;
      const double ratio = m > 0.0 ? mse_pgm / m : (mse_pgm > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
      ++o.checks;
      if (slack < -1e-8) ++o.violations;
      o.min_slack = std::min(o.min_slack, slack);
      o.max_ratio = std::max(o.max_ratio, ratio);
      std::ostringstream row;
      row << n << "," << e.dim() << "," << e.size() << "," << e.param_dim() << "," << cand.kind << "," << fmt(mse_pgm)
          << "," << fmt(m) << "," << fmt(ratio) << "," << fmt(bound.bound) << "," << curve_text.str() << ","
          << fmt(slack);
      o.rows.push_back(row.str());
    }
    return o;
  };
  return summarize(run_parallel(instance_count(c), c.jobs, work), out);
}

}  // namespace gpgm
