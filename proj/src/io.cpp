#include "gpgm/io.hpp"

#include <fstream>
#include <sstream>

#include "gpgm/bosonic.hpp"
#include "gpgm/errors.hpp"

namespace gpgm::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) field_error(ctx, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(ctx.empty() ? key : ctx + "." + key, "missing");
  return *it;
}

double as_double(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

std::size_t as_size(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    field_error(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string as_string(const Json& j, const std::string& field) {
  if (!j.is_string()) field_error(field, "expected a string");
  return j.get<std::string>();
}

double get_double(const Json& j, const std::string& key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_double(*it, key);
}

std::size_t get_size(const Json& j, const std::string& key, std::size_t fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_size(*it, key);
}

RVector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = as_double(j[k], field + "[" + std::to_string(k) + "]");
  return v;
}

std::vector<RVector> points_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of points");
  std::vector<RVector> pts;
  for (std::size_t k = 0; k < j.size(); ++k) pts.push_back(vector_from_json(j[k], field + "[" + std::to_string(k) + "]"));
  return pts;
}

std::vector<double> doubles_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_double(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

HermitianOperator base_state_from_json(const Json& j, Eigen::Index cutoff, const std::string& field) {
  if (j.is_null()) return vacuum_state(cutoff);
  const std::string kind = as_string(require(j, "kind", field), field + ".kind");
  if (kind == "vacuum") return vacuum_state(cutoff);
  if (kind == "thermal") return thermal_state(cutoff, as_double(require(j, "mean_photons", field), field + ".mean_photons"));
  field_error(field + ".kind", "unknown base state '" + kind + "' (expected vacuum or thermal)");
}

StateKind state_kind_from_json(const Json& j) {
  auto it = j.find("kind");
  if (it == j.end()) return StateKind::mixed;
  const std::string k = as_string(*it, "kind");
  if (k == "pure") return StateKind::pure;
  if (k == "mixed") return StateKind::mixed;
  field_error("kind", "expected pure or mixed");
}

Ensemble generated_ensemble(const Json& j) {
  const std::string gen = as_string(j.at("generator"), "generator");
  if (gen == "random") {
    return random_ensemble(as_size(require(j, "d", ""), "d"), as_size(require(j, "r", ""), "r"), get_size(j, "N", 1),
                           get_size(j, "seed", 0), state_kind_from_json(j), get_size(j, "support", 0));
  }
  if (gen == "bosonic" || gen == "gaussian_grid") {
    const Json* fam = &j;
    if (gen == "gaussian_grid") {
      fam = &require(j, "family", "");
      const std::string kind = as_string(require(*fam, "kind", "family"), "family.kind");
      if (kind != "displaced") field_error("family.kind", "unknown state family '" + kind + "' (expected displaced)");
    }
    const auto cutoff = static_cast<Eigen::Index>(as_size(require(*fam, "fock_cutoff", ""), "fock_cutoff"));
    if (cutoff < 1) field_error("fock_cutoff", "must be >= 1");
    const auto base = base_state_from_json(fam->value("base", Json()), cutoff, "base");
    const double trunc_tol = get_double(*fam, "trunc_tol", kDefaultTruncTol);
    const Json* grid = gen == "gaussian_grid" ? &j : (j.contains("grid") ? &j.at("grid") : nullptr);
    if (grid) {
      const std::size_t n = gen == "gaussian_grid" ? get_size(j, "N", 2) : 2;
      return discretize_gaussian_prior(n, as_double(require(*grid, "sigma_prior", "grid"), "sigma_prior"),
                                       as_double(require(*grid, "half_width", "grid"), "half_width"),
                                       as_size(require(*grid, "points_per_axis", "grid"), "points_per_axis"),
                                       displaced_family(base, n, trunc_tol), get_size(*grid, "max_points", kDefaultGridCap));
    }
    return bosonic_displaced_ensemble(base, points_from_json(require(j, "points", ""), "points"),
                                      doubles_from_json(require(j, "weights", ""), "weights"), trunc_tol);
  }
  field_error("generator", "unknown generator '" + gen + "' (expected random, bosonic or gaussian_grid)");
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& err) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < err.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": malformed JSON (" << err.what() << ")";
    throw ParseError(os.str());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty square array of [re, im] pairs");
  const auto d = static_cast<Eigen::Index>(j.size());
  CMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) field_error(rf, "expected a row of length " + std::to_string(d));
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto& z = row[static_cast<std::size_t>(k)];
      const std::string zf = rf + "[" + std::to_string(k) + "]";
      if (z.is_number()) {
        m(i, k) = Complex(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2) {
        m(i, k) = Complex(as_double(z[0], zf + "[0]"), as_double(z[1], zf + "[1]"));
      } else {
        field_error(zf, "expected [re, im]");
      }
    }
  }
  return m;
}

Ensemble ensemble_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("ensemble: expected a JSON object");
  if (j.contains("generator")) return generated_ensemble(j);
  const std::size_t n = as_size(require(j, "param_dim", ""), "param_dim");
  const auto& states_json = require(j, "states", "");
  if (!states_json.is_array()) field_error("states", "expected an array of matrices");
  std::vector<HermitianOperator> states;
  for (std::size_t k = 0; k < states_json.size(); ++k) {
    const std::string f = "states[" + std::to_string(k) + "]";
    CMatrix m = matrix_from_json(states_json[k], f);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError(f + " is not Hermitian");
    states.emplace_back(m);
  }
  return Ensemble(j.value("label", std::string("ensemble")), n, points_from_json(require(j, "points", ""), "points"),
                  doubles_from_json(require(j, "weights", ""), "weights"), std::move(states));
}

Json ensemble_to_json(const Ensemble& e) {
  Json points = Json::array(), states = Json::array();
  for (const auto& x : e.points()) points.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  for (const auto& s : e.states()) states.push_back(matrix_to_json(s.matrix()));
  return {{"label", e.label()}, {"param_dim", e.param_dim()}, {"points", points}, {"weights", e.weights()},
          {"states", states}};
}

Json povm_to_json(const Povm& p) {
  Json cells = Json::array(), elements = Json::array();
  for (const auto& c : p.cells) cells.push_back(c.indices);
  for (const auto& m : p.elements) elements.push_back(matrix_to_json(m.matrix()));
  return {{"label", p.label}, {"cells", cells}, {"elements", elements}};
}

Povm povm_from_json(const Json& j) {
  Povm p;
  p.label = j.value("label", std::string("povm"));
  const auto& cells = require(j, "cells", "");
  const auto& elements = require(j, "elements", "");
  if (!cells.is_array() || !elements.is_array() || cells.size() != elements.size())
    field_error("cells", "cells and elements must be arrays of equal length");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    OutcomeCell c;
    const std::string f = "cells[" + std::to_string(k) + "]";
    if (!cells[k].is_array()) field_error(f, "expected an array of indices");
    for (std::size_t t = 0; t < cells[k].size(); ++t) c.indices.push_back(as_size(cells[k][t], f));
    p.cells.push_back(std::move(c));
    p.elements.emplace_back(matrix_from_json(elements[k], "elements[" + std::to_string(k) + "]"));
  }
  return p;
}

Json validation_to_json(const ValidationReport& r) {
  return {{"pass", r.pass()},
          {"positive", r.positive},
          {"complete", r.complete},
          {"tolerance", r.tolerance},
          {"completeness_residual", r.completeness_residual},
          {"min_eigenvalues", r.min_eigenvalues}};
}

ScoreFunction score_from_json(const Json& j, std::size_t param_dim) {
  const std::string kind = as_string(require(j, "kind", "score"), "score.kind");
  if (kind == "delta") return delta_function(param_dim);
  if (kind == "constant") return constant_score(as_double(require(j, "a", "score"), "score.a"), param_dim);
  if (kind == "gaussian_t") return precision_gaussian_score(as_double(require(j, "t", "score"), "score.t"), param_dim);
  if (kind == "gaussian") {
    const auto& sj = require(j, "Sigma", "score");
    const auto n = static_cast<Eigen::Index>(param_dim);
    if (sj.is_number()) return gaussian_score(RMatrix::Identity(n, n) * sj.get<double>());
    if (!sj.is_array() || static_cast<Eigen::Index>(sj.size()) != n) field_error("score.Sigma", "expected a scalar or an N x N array");
    RMatrix sigma(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      RVector row = vector_from_json(sj[static_cast<std::size_t>(a)], "score.Sigma[" + std::to_string(a) + "]");
      if (row.size() != n) field_error("score.Sigma", "expected an N x N array");
      sigma.row(a) = row.transpose();
    }
    return gaussian_score(sigma);
  }
  field_error("score.kind", "unknown score kind '" + kind + "'");
}

ScoreMatrix score_matrix_from_json(const Json& j, const Ensemble& e) {
  if (as_string(require(j, "kind", "score"), "score.kind") == "delta") return delta_score(e.size());
  return score_matrix(score_from_json(j, e.param_dim()), e);
}

}  // namespace gpgm::io
