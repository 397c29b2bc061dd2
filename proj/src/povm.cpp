#include "gpgm/povm.hpp"

#include <algorithm>

#include "gpgm/errors.hpp"

namespace gpgm {

Povm build_finite_pgm(const Ensemble& e, double rank_tol) {
  const HermitianOperator rho = average_state(e);
  const HermitianOperator root_pinv = pinv_sqrt(rho, rank_tol);
  const HermitianOperator ker = kernel_projector(rho, rank_tol);
  Povm p;
  p.cells = singleton_partition(e.size());
  p.label = "pgm";
  p.elements.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    p.elements.push_back(sandwich(root_pinv, e.weight(i) * e.state(i)) + e.weight(i) * ker);
  }
  return p;
}

Povm build_gpgm(const Ensemble& e, const Partition& partition, double rank_tol) {
  check_partition(partition, e.size(), "build_gpgm");
  const HermitianOperator rho = average_state(e);
  const HermitianOperator root_pinv = pinv_sqrt(rho, rank_tol);
  const HermitianOperator ker = kernel_projector(rho, rank_tol);
  Povm p;
  p.cells = partition;
  p.label = "gpgm";
  p.elements.reserve(partition.size());
  for (const auto& cell : partition) {
    // Lambda_E^dagger Lambda_E = (sqrt rho)^+ rho_E (sqrt rho)^+, without forming sqrt(rho_E).
    p.elements.push_back(sandwich(root_pinv, partial_state(e, cell)) + cell_mass(e, cell) * ker);
  }
  return p;
}

ValidationReport validate_povm(const Povm& p, double tol) {
  ValidationReport rep;
  rep.tolerance = tol;
  if (p.elements.empty()) return rep;
  const auto d = p.dim();
  CMatrix total = CMatrix::Zero(d, d);
  rep.positive = true;
  for (const auto& m : p.elements) {
    if (m.dim() != d) throw PreconditionError("validate_povm: element dimensions differ");
    double q = min_eigenvalue(m);
    rep.min_eigenvalues.push_back(q);
    if (q < -tol) rep.positive = false;
    total += m.matrix();
  }
  rep.completeness_residual = (total - CMatrix::Identity(d, d)).norm();
  rep.complete = rep.completeness_residual <= tol;
  return rep;
}

Povm coarse_grain(const Povm& p, const Partition& merge) {
  check_partition(merge, p.size(), "coarse_grain");
  Povm out;
  out.label = p.label + "/coarse";
  for (const auto& group : merge) {
    OutcomeCell cell;
    HermitianOperator acc = HermitianOperator::zero(p.dim());
    for (auto c : group.indices) {
      const auto& src = p.cells[c].indices;
      cell.indices.insert(cell.indices.end(), src.begin(), src.end());
      acc += p.elements[c];
    }
    std::sort(cell.indices.begin(), cell.indices.end());
    out.cells.push_back(std::move(cell));
    out.elements.push_back(std::move(acc));
  }
  return out;
}

}  // namespace gpgm
