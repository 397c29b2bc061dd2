#include "gpgm/gain.hpp"

#include <sstream>

#include "gpgm/errors.hpp"

namespace gpgm {

namespace {

void check_compatible(const Ensemble& e, const Povm& p, const char* context) {
  if (p.elements.empty() || p.dim() != e.dim()) {
    std::ostringstream os;
    os << context << ": POVM dimension does not match the ensemble's (" << e.dim() << ")";
    throw PreconditionError(os.str());
  }
  check_partition(p.cells, e.size(), context);
}

void require_singletons(const Ensemble& e, const Povm& p, const char* context) {
  check_compatible(e, p, context);
  if (!is_singleton_partition(p.cells)) {
    throw PreconditionError(std::string(context) + ": needs one outcome per parameter point (singleton cells)");
  }
  if (e.param_dim() == 0) throw PreconditionError(std::string(context) + ": needs param_dim >= 1");
}

}  // namespace

RMatrix outcome_probabilities(const Ensemble& e, const Povm& p) {
  const auto r = static_cast<Eigen::Index>(e.size());
  const auto k = static_cast<Eigen::Index>(p.size());
  RMatrix probs(r, k);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index c = 0; c < k; ++c)
      probs(i, c) = hs_inner(e.state(static_cast<std::size_t>(i)), p.elements[static_cast<std::size_t>(c)]);
  return probs;
}

double cell_score(const Ensemble& e, const ScoreMatrix& s, std::size_t i, const OutcomeCell& cell) {
  if (cell.indices.size() == 1) return s(i, cell.indices.front());
  double num = 0.0, mass = 0.0;
  for (auto j : cell.indices) {
    num += s(i, j) * e.weight(j);
    mass += e.weight(j);
  }
  return num / mass;
}

double gain_at(const Ensemble& e, const ScoreMatrix& s, const Povm& p, std::size_t i) {
  check_compatible(e, p, "gain_at");
  if (s.size() != e.size()) throw PreconditionError("gain_at: score matrix size differs from ensemble size");
  double g = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) g += cell_score(e, s, i, p.cells[c]) * hs_inner(e.state(i), p.elements[c]);
  return g;
}

double gain_at(const Ensemble& e, const ScoreFunction& s, const Povm& p, std::size_t i) {
  return gain_at(e, score_matrix(s, e), p, i);
}

GainMseReport expected_gain(const Ensemble& e, const ScoreMatrix& s, const Povm& p) {
  check_compatible(e, p, "expected_gain");
  if (s.size() != e.size()) throw PreconditionError("expected_gain: score matrix size differs from ensemble size");
  GainMseReport rep;
  rep.ensemble_label = e.label();
  rep.povm_label = p.label;
  rep.score_label = s.kind();
  const RMatrix probs = outcome_probabilities(e, p);
  for (std::size_t i = 0; i < e.size(); ++i) {
    double g = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c)
      g += cell_score(e, s, i, p.cells[c]) * probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    rep.per_x_gain.push_back(g);
    rep.expected_gain += e.weight(i) * g;
  }
  if (e.param_dim() > 0 && is_singleton_partition(p.cells)) rep.mse = mse(e, p);
  return rep;
}

GainMseReport expected_gain(const Ensemble& e, const ScoreFunction& s, const Povm& p) {
  return expected_gain(e, score_matrix(s, e), p);
}

double mse(const Ensemble& e, const Povm& p) {
  require_singletons(e, p, "mse");
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    double inner = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      const auto j = p.cells[c].indices.front();
      inner += (e.point(i) - e.point(j)).squaredNorm() * hs_inner(e.state(i), p.elements[c]);
    }
    total += e.weight(i) * inner;
  }
  return total;
}

std::vector<double> default_t_sequence() {
  return {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
}

std::vector<std::pair<double, double>> mse_via_gain_limit(const Ensemble& e, const Povm& p,
                                                          const std::vector<double>& t_sequence) {
  require_singletons(e, p, "mse_via_gain_limit");
  if (t_sequence.empty()) throw PreconditionError("mse_via_gain_limit: t sequence is empty");
  for (std::size_t k = 0; k < t_sequence.size(); ++k) {
    if (!(t_sequence[k] > 0.0)) throw PreconditionError("mse_via_gain_limit: every t must be > 0");
    if (k > 0 && !(t_sequence[k] < t_sequence[k - 1]))
      throw PreconditionError("mse_via_gain_limit: t sequence must be strictly decreasing");
  }
  const RMatrix probs = outcome_probabilities(e, p);
  std::vector<std::pair<double, double>> curve;
  for (double t : t_sequence) {
    const ScoreMatrix s = score_matrix(precision_gaussian_score(t, e.param_dim()), e);
    double g = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t c = 0; c < p.size(); ++c)
        g += e.weight(i) * s(i, p.cells[c].indices.front()) *
             probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    curve.emplace_back(t, 2.0 / t * (1.0 - g));
  }
  return curve;
}

SecondMomentCheck second_moment_bound_check(const Ensemble& e, const Povm& gpgm) {
  const double m = mse(e, gpgm);
  const double bound = 4.0 * second_moment(e);
  return {m, bound, m <= bound + 1e-9};
}

double estimate_second_moment(const Ensemble& e, const Povm& p) {
  require_singletons(e, p, "estimate_second_moment");
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t c = 0; c < p.size(); ++c)
      total += e.weight(i) * e.point(p.cells[c].indices.front()).squaredNorm() * hs_inner(e.state(i), p.elements[c]);
  return total;
}

}  // namespace gpgm
