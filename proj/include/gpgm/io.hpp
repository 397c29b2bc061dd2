#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gpgm/povm.hpp"
#include "gpgm/score.hpp"

namespace gpgm::io {

using Json = nlohmann::json;

/// Parses text as JSON. Syntax errors become ParseError with line and column.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);

/// Complex matrix as rows of [re, im] pairs.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& field);

/// Explicit ensemble {label, param_dim, points, weights, states} or a
/// generator stanza {generator: "random" | "bosonic" | "gaussian_grid", ...}.
/// Shape errors throw ParseError naming the field; invariant violations throw
/// ValidationError naming the first offending index.
Ensemble ensemble_from_json(const Json& j);
Json ensemble_to_json(const Ensemble& e);

Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j);

Json validation_to_json(const ValidationReport& r);

/// {kind: "delta"} | {kind: "constant", a} | {kind: "gaussian", Sigma}
/// | {kind: "gaussian_t", t}. Sigma may be a scalar (times I) or an N x N array.
/// Delta is returned as the pointwise kernel; prefer score_matrix_from_json.
ScoreFunction score_from_json(const Json& j, std::size_t param_dim);
/// Score matrix on the ensemble's points. Delta always yields the identity,
/// so it also works for label-only ensembles (N = 0).
ScoreMatrix score_matrix_from_json(const Json& j, const Ensemble& e);

}  // namespace gpgm::io
