// Operator-spec files: line-oriented key=value text with an inline matrix
// block. Keys: name, kind, field, formula, multiplicity, null_dim, matrix.
// kind=matrix uses the matrix block for entries; kind=diagonal uses either a
// formula or a one-row matrix block as an explicit eigenvalue list.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amop/operator_model.hpp"

namespace amop {

struct OperatorSpecFile {
  std::string name;
  std::string kind;   // "matrix" | "diagonal"
  std::string field = "complex";
  std::optional<std::string> formula;
  std::optional<std::string> multiplicity;
  std::string null_dim = "0";  // nonnegative integer or "inf"
  std::vector<std::vector<cplx>> matrix;
};

// "re", "imi", "re+imi", "re-imi" with scientific notation supported.
cplx parse_complex_token(const std::string& token);
std::string format_complex_token(const cplx& v);

OperatorSpecFile parse_spec_text(const std::string& text);
OperatorSpecFile load_spec_file(const std::string& path);

// Parses, builds and validates the model described by the spec.
OperatorModel build_model(const OperatorSpecFile& spec);
OperatorModel load_spec(const std::string& path);

// Whitespace/comma-separated complex tokens (for right-hand sides).
Vector load_vector_file(const std::string& path);

}  // namespace amop
