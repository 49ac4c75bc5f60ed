#include "amop/spec_file.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "amop/formula.hpp"
#include "amop/tolerances.hpp"

namespace amop {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& s, const std::string& token) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty()) {
    throw ParseError("malformed numeric part '" + s + "' in token '" + token +
                         "'",
                     0);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

cplx parse_complex_token(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw ParseError("empty complex token", 0);
  if (t.back() != 'i' && t.back() != 'I') {
    return cplx(parse_real(t, token), 0.0);
  }
  const std::string body = t.substr(0, t.size() - 1);
  // Find the sign separating the real part from the imaginary part, skipping
  // a leading sign and exponent signs.
  std::size_t cut = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    const char c = body[i];
    if ((c == '+' || c == '-') &&
        body[i - 1] != 'e' && body[i - 1] != 'E') {
      cut = i;  // keep the last eligible sign: exponent signs never qualify
    }
  }
  if (cut == std::string::npos) {
    // Pure imaginary: "i", "-i", "2.5i"
    if (body.empty() || body == "+") return cplx(0.0, 1.0);
    if (body == "-") return cplx(0.0, -1.0);
    return cplx(0.0, parse_real(body, token));
  }
  const std::string re = body.substr(0, cut);
  std::string im = body.substr(cut);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return cplx(parse_real(re, token), parse_real(im, token));
}

std::string format_complex_token(const cplx& v) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.16e%+.16ei", v.real(), v.imag());
  return buf;
}

OperatorSpecFile parse_spec_text(const std::string& text) {
  OperatorSpecFile out;
  std::istringstream is(text);
  std::string line;
  long lineno = 0;
  bool in_matrix = false;
  bool matrix_seen = false;
  auto fail = [&lineno](const std::string& msg) {
    throw ParseError("spec line " + std::to_string(lineno) + ": " + msg,
                     static_cast<std::size_t>(lineno));
  };

  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;

    if (in_matrix) {
      if (t == "]") {
        in_matrix = false;
        continue;
      }
      std::vector<cplx> row;
      for (const std::string& tok : split(t, ',')) {
        if (trim(tok).empty()) continue;
        try {
          row.push_back(parse_complex_token(tok));
        } catch (const ParseError& e) {
          fail(e.what());
        }
      }
      if (row.empty()) fail("empty matrix row");
      out.matrix.push_back(std::move(row));
      continue;
    }

    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    if (key == "name") {
      out.name = value;
    } else if (key == "kind") {
      if (value != "matrix" && value != "diagonal") {
        fail("kind must be 'matrix' or 'diagonal'");
      }
      out.kind = value;
    } else if (key == "field") {
      if (value != "real" && value != "complex") {
        fail("field must be 'real' or 'complex'");
      }
      out.field = value;
    } else if (key == "formula") {
      out.formula = value;
    } else if (key == "multiplicity") {
      out.multiplicity = value;
    } else if (key == "null_dim") {
      out.null_dim = value;
    } else if (key == "matrix") {
      if (value != "[") fail("matrix block must open with '['");
      if (matrix_seen) fail("duplicate matrix block");
      matrix_seen = true;
      in_matrix = true;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (in_matrix) {
    throw ParseError("unterminated matrix block", static_cast<std::size_t>(lineno));
  }
  if (out.kind.empty()) {
    throw ParseError("missing 'kind' key", 0);
  }
  return out;
}

OperatorSpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

OperatorModel build_model(const OperatorSpecFile& spec) {
  const bool has_formula = spec.formula.has_value();
  const bool has_matrix = !spec.matrix.empty();
  if (has_formula == has_matrix) {
    throw ParseError("exactly one of formula/matrix must be present", 0);
  }

  std::optional<long> null_dim;
  if (spec.null_dim == "inf" || spec.null_dim == "infinite") {
    null_dim = std::nullopt;
  } else {
    char* end = nullptr;
    const long v = std::strtol(spec.null_dim.c_str(), &end, 10);
    if (end != spec.null_dim.c_str() + spec.null_dim.size() || v < 0) {
      throw ParseError("null_dim must be a nonnegative integer or 'inf'", 0);
    }
    null_dim = v;
  }
  const ScalarField field =
      spec.field == "real" ? ScalarField::Real : ScalarField::Complex;

  if (spec.kind == "matrix") {
    const std::size_t cols = spec.matrix[0].size();
    for (const auto& row : spec.matrix) {
      if (row.size() != cols) {
        throw ParseError("matrix rows have unequal lengths", 0);
      }
    }
    Matrix m(spec.matrix.size(), cols);
    for (std::size_t i = 0; i < spec.matrix.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = spec.matrix[i][j];
    }
    if (field == ScalarField::Real &&
        m.imag().cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.norm())) {
      throw FieldError("real-field matrix has complex entries");
    }
    const Structure tag = infer_structure(m);
    FiniteOperator op(std::move(m), tag);
    auto res = validate(op);
    if (!res.valid) {
      throw StructureError("matrix violates its structure tag: " +
                           res.violations[0].what);
    }
    return op;
  }

  // kind == diagonal
  std::vector<long> mult_list;
  std::optional<Formula> mult_formula;
  if (spec.multiplicity) {
    const std::string mv = trim(*spec.multiplicity);
    if (mv.find(',') != std::string::npos) {
      for (const std::string& tok : split(mv, ',')) {
        char* end = nullptr;
        const long v = std::strtol(trim(tok).c_str(), &end, 10);
        if (*end != '\0' || v < 1) {
          throw ParseError("multiplicity list entries must be integers >= 1", 0);
        }
        mult_list.push_back(v);
      }
    } else {
      mult_formula = parse_formula(mv);
    }
  }

  if (has_formula) {
    Formula f = parse_formula(*spec.formula);
    if (!mult_list.empty()) {
      throw ParseError(
          "multiplicity lists pair with explicit eigenvalue lists; use a "
          "formula",
          0);
    }
    return DiagonalModel({}, {}, std::move(f), std::move(mult_formula),
                         null_dim, field);
  }

  if (spec.matrix.size() != 1) {
    throw ParseError(
        "diagonal kind takes a one-row matrix block as its eigenvalue list",
        0);
  }
  std::vector<cplx> values = spec.matrix[0];
  if (mult_formula && mult_formula->depends_on_n()) {
    throw ParseError(
        "multiplicity formulas over n pair with formula eigenvalues", 0);
  }
  if (mult_formula) {
    const double v = mult_formula->eval(1.0);
    const long k = static_cast<long>(std::nearbyint(v));
    if (k < 1 || std::fabs(v - k) > 1e-9) {
      throw ParseError("constant multiplicity must be an integer >= 1", 0);
    }
    mult_list.assign(values.size(), k);
  }
  return DiagonalModel(std::move(values), std::move(mult_list), std::nullopt,
                       std::nullopt, null_dim, field);
}

OperatorModel load_spec(const std::string& path) {
  return build_model(load_spec_file(path));
}

Vector load_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vector file: " + path);
  std::vector<cplx> values;
  std::string tok;
  std::string buffer;
  char c;
  while (in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!buffer.empty()) {
        values.push_back(parse_complex_token(buffer));
        buffer.clear();
      }
    } else {
      buffer += c;
    }
  }
  if (!buffer.empty()) values.push_back(parse_complex_token(buffer));
  if (values.empty()) throw ParseError("vector file has no entries", 0);
  Vector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v(i) = values[i];
  return v;
}

}  // namespace amop
