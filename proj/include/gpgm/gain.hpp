#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpgm/povm.hpp"
#include "gpgm/score.hpp"

namespace gpgm {

struct GainMseReport {
  std::vector<double> per_x_gain;
  double expected_gain = 0.0;
  std::optional<double> mse;  // set when the POVM has singleton cells and N >= 1
  std::string ensemble_label;
  std::string povm_label;
  std::string score_label;
};

/// Tr[rho_i m(c)] for every point i and outcome cell c (r x k).
RMatrix outcome_probabilities(const Ensemble& e, const Povm& p);

/// Score of point i against cell c: the mu-weighted average of S(x_i, x_j)
/// over j in c (exactly S(x_i, x_j) for singleton cells).
double cell_score(const Ensemble& e, const ScoreMatrix& s, std::size_t i, const OutcomeCell& cell);

/// G(x_i) = sum_c cellscore(i, c) Tr[rho_i m(c)].
double gain_at(const Ensemble& e, const ScoreMatrix& s, const Povm& p, std::size_t i);
double gain_at(const Ensemble& e, const ScoreFunction& s, const Povm& p, std::size_t i);

GainMseReport expected_gain(const Ensemble& e, const ScoreMatrix& s, const Povm& p);
GainMseReport expected_gain(const Ensemble& e, const ScoreFunction& s, const Povm& p);

/// sum_i mu_i sum_j |x_i - x_j|^2 Tr[rho_i m_j]. Requires singleton cells.
double mse(const Ensemble& e, const Povm& p);

/// Default t grid for the small-t limit of 2/t (1 - G_t).
std::vector<double> default_t_sequence();

/// (t, 2/t (1 - G)) for the score exp(-t |x - xhat|^2 / 2), each t in a
/// strictly decreasing positive sequence. Every value is a lower bound on
/// mse(e, p) that tightens as t -> 0.
std::vector<std::pair<double, double>> mse_via_gain_limit(const Ensemble& e, const Povm& p,
                                                          const std::vector<double>& t_sequence = default_t_sequence());

struct SecondMomentCheck {
  double mse_value;
  double bound;  // 4 E_{mu,2}
  bool holds;    // mse_value <= bound + 1e-9
};

SecondMomentCheck second_moment_bound_check(const Ensemble& e, const Povm& gpgm);

/// sum_i mu_i sum_j |x_j|^2 Tr[rho_i m_j]; equals E_{mu,2} for the singleton GPGM.
double estimate_second_moment(const Ensemble& e, const Povm& p);

}  // namespace gpgm
