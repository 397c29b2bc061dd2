#pragma once

#include <vector>

#include "gpgm/povm.hpp"

namespace gpgm {

/// Positive operator-valued measure on a finite partition. Unlike Povm there
/// is no completeness requirement.
struct OperatorValuedMeasure {
  Partition cells;
  std::vector<HermitianOperator> values;

  std::size_t size() const noexcept { return values.size(); }
  Eigen::Index dim() const { return values.front().dim(); }
  /// l(X), the total mass.
  HermitianOperator total() const;
};

/// sum_c f_c l(E_c) for a function constant on each cell.
HermitianOperator integrate_scalar(const std::vector<double>& f_values, const OperatorValuedMeasure& l);

/// sup over |f| <= 1 of ||int f dl||; equals op_norm(l(X)) for positive measures.
double semivariation(const OperatorValuedMeasure& l);

struct IdentityCheck {
  double lhs;
  double rhs;
  bool pass;
};

/// Tr[int f dl] against sum_c f_c Tr[l(E_c)]; tolerance 1e-10 * scale.
IdentityCheck trace_pairing_identity(const std::vector<double>& f_values, const OperatorValuedMeasure& l);

/// Tr[(int f dl)(int g dl)] against sum_{c,c'} f_c g_c' Tr[l(E_c) l(E_c')];
/// tolerance 1e-9 * scale.
IdentityCheck hs_pairing_identity(const std::vector<double>& f_values, const std::vector<double>& g_values,
                                  const OperatorValuedMeasure& l);

/// max(1, ||l(X)||_1) * max(1, ||f||_inf) * max(1, ||g||_inf).
double identity_scale(const OperatorValuedMeasure& l, const std::vector<double>& f_values,
                      const std::vector<double>& g_values = {});

enum class CompressionPower { quarter, half };

/// l(E) = rho^{p} m(E) rho^{p} with p = 1/4 or 1/2.
OperatorValuedMeasure compressed_measure(const Ensemble& e, const Povm& gpgm, CompressionPower power);

}  // namespace gpgm
