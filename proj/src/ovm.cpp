#include "gpgm/ovm.hpp"

#include <algorithm>
#include <cmath>

#include "gpgm/errors.hpp"

namespace gpgm {

namespace {

void check_lengths(const std::vector<double>& f, const OperatorValuedMeasure& l, const char* context) {
  if (l.values.empty()) throw PreconditionError(std::string(context) + ": empty measure");
  if (f.size() != l.size()) throw PreconditionError(std::string(context) + ": one function value per cell required");
}

double sup_norm(const std::vector<double>& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

HermitianOperator OperatorValuedMeasure::total() const {
  HermitianOperator acc = HermitianOperator::zero(dim());
  for (const auto& v : values) acc += v;
  return acc;
}

HermitianOperator integrate_scalar(const std::vector<double>& f_values, const OperatorValuedMeasure& l) {
  check_lengths(f_values, l, "integrate_scalar");
  CMatrix acc = CMatrix::Zero(l.dim(), l.dim());
  for (std::size_t c = 0; c < l.size(); ++c) acc += f_values[c] * l.values[c].matrix();
  return HermitianOperator(acc);
}

double semivariation(const OperatorValuedMeasure& l) {
  return op_norm(l.total());
}

double identity_scale(const OperatorValuedMeasure& l, const std::vector<double>& f_values,
                      const std::vector<double>& g_values) {
  return std::max(1.0, trace_norm(l.total())) * std::max(1.0, sup_norm(f_values)) * std::max(1.0, sup_norm(g_values));
}

IdentityCheck trace_pairing_identity(const std::vector<double>& f_values, const OperatorValuedMeasure& l) {
  check_lengths(f_values, l, "trace_pairing_identity");
  const double lhs = integrate_scalar(f_values, l).trace();
  double rhs = 0.0;
  for (std::size_t c = 0; c < l.size(); ++c) rhs += f_values[c] * l.values[c].trace();
  return {lhs, rhs, std::abs(lhs - rhs) <= 1e-10 * identity_scale(l, f_values)};
}

IdentityCheck hs_pairing_identity(const std::vector<double>& f_values, const std::vector<double>& g_values,
                                  const OperatorValuedMeasure& l) {
  check_lengths(f_values, l, "hs_pairing_identity");
  check_lengths(g_values, l, "hs_pairing_identity");
  const double lhs = hs_inner(integrate_scalar(f_values, l), integrate_scalar(g_values, l));
  double rhs = 0.0;
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = 0; b < l.size(); ++b) rhs += f_values[a] * g_values[b] * hs_inner(l.values[a], l.values[b]);
  return {lhs, rhs, std::abs(lhs - rhs) <= 1e-9 * identity_scale(l, f_values, g_values)};
}

OperatorValuedMeasure compressed_measure(const Ensemble& e, const Povm& gpgm, CompressionPower power) {
  if (gpgm.elements.empty() || gpgm.dim() != e.dim())
    throw PreconditionError("compressed_measure: POVM dimension does not match the ensemble");
  check_partition(gpgm.cells, e.size(), "compressed_measure");
  const HermitianOperator root = psd_power(average_state(e), power == CompressionPower::quarter ? 0.25 : 0.5);
  OperatorValuedMeasure l;
  l.cells = gpgm.cells;
  for (const auto& m : gpgm.elements) l.values.push_back(sandwich(root, m));
  return l;
}

}  // namespace gpgm
