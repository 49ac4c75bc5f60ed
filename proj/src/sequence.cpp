#include "amop/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "amop/tolerances.hpp"

namespace amop {

namespace {

// Thrown internally when a formula leaves the certified class; every
// analysis entry point catches it and degrades to "no certificate".
struct Bail {};

constexpr int kMaxPolyDegree = 80;
constexpr int kMaxIntExponent = 32;

// ---------------------------------------------------------------------------
// Dense polynomials with double coefficients, ascending order.

struct Poly {
  std::vector<double> c;

  static Poly zero() { return {}; }
  static Poly constant(double v) {
    Poly p;
    if (v != 0.0) p.c = {v};
    return p;
  }
  static Poly x() { return Poly{{0.0, 1.0}}; }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  double lead() const { return c.empty() ? 0.0 : c.back(); }

  double max_abs() const {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::fabs(v));
    return m;
  }

  // Leading coefficient distinguishable from accumulated rounding noise.
  bool reliable() const {
    if (c.empty()) return true;
    return std::fabs(c.back()) >= 1e-11 * max_abs();
  }

  void trim() {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
  }

  double eval(double x) const {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  }
};

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.trim();
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly::zero();
  if (a.degree() + b.degree() > kMaxPolyDegree) throw Bail{};
  Poly r;
  r.c.resize(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      r.c[i + j] += a.c[i] * b.c[j];
    }
  }
  r.trim();
  return r;
}

Poly scale(const Poly& a, double s) {
  if (s == 0.0) return Poly::zero();
  Poly r = a;
  for (double& v : r.c) v *= s;
  r.trim();
  return r;
}

Poly derivative(const Poly& a) {
  Poly r;
  for (std::size_t i = 1; i < a.c.size(); ++i) {
    r.c.push_back(a.c[i] * static_cast<double>(i));
  }
  r.trim();
  return r;
}

// Every real root x of p satisfies |x| <= cauchy_bound(p).
double cauchy_bound(const Poly& p) {
  if (p.degree() < 1) return 0.0;
  if (!p.reliable()) throw Bail{};
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < p.c.size(); ++i) {
    m = std::max(m, std::fabs(p.c[i]));
  }
  return 1.0 + m / std::fabs(p.lead());
}

// ---------------------------------------------------------------------------
// Rational functions num/den.

struct RationalFn {
  Poly num, den;

  static RationalFn zero() { return {Poly::zero(), Poly::constant(1.0)}; }
  static RationalFn constant(double v) {
    return {Poly::constant(v), Poly::constant(1.0)};
  }
  static RationalFn x() { return {Poly::x(), Poly::constant(1.0)}; }

  bool is_zero() const { return num.is_zero(); }
  bool is_constant() const { return num.degree() <= 0 && den.degree() <= 0; }

  double constant_value() const {
    return num.is_zero() ? 0.0 : num.c[0] / den.c[0];
  }

  void normalize() {
    num.trim();
    den.trim();
    if (den.is_zero()) throw Bail{};
    const double l = den.lead();
    num = scale(num, 1.0 / l);
    den = scale(den, 1.0 / l);
    if (num.degree() > kMaxPolyDegree || den.degree() > kMaxPolyDegree) {
      throw Bail{};
    }
  }

  double eval(double x) const { return num.eval(x) / den.eval(x); }
};

RationalFn make_rational(Poly n, Poly d) {
  RationalFn r{std::move(n), std::move(d)};
  r.normalize();
  return r;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  return make_rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) {
  return make_rational(a.num * b.den - b.num * a.den, a.den * b.den);
}

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
  return make_rational(a.num * b.num, a.den * b.den);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
  if (b.is_zero()) throw Bail{};
  return make_rational(a.num * b.den, a.den * b.num);
}

RationalFn neg(const RationalFn& a) {
  return {scale(a.num, -1.0), a.den};
}

RationalFn rational_derivative(const RationalFn& a) {
  return make_rational(derivative(a.num) * a.den - a.num * derivative(a.den),
                       a.den * a.den);
}

bool poly_approx_equal(const Poly& a, const Poly& b) {
  const double s = 1.0 + std::max(a.max_abs(), b.max_abs());
  const std::size_t n = std::max(a.c.size(), b.c.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double av = i < a.c.size() ? a.c[i] : 0.0;
    const double bv = i < b.c.size() ? b.c[i] : 0.0;
    if (std::fabs(av - bv) > 1e-9 * s) return false;
  }
  return true;
}

bool rational_equal(const RationalFn& a, const RationalFn& b) {
  return poly_approx_equal(a.num * b.den, b.num * a.den);
}

// ---------------------------------------------------------------------------
// Field elements a + b*sqrt(rad) over Q(n).

struct FieldElem {
  RationalFn a = RationalFn::zero();
  RationalFn b = RationalFn::zero();
  std::optional<RationalFn> rad;

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool is_rational() const { return b.is_zero(); }

  void drop_unused_rad() {
    if (b.is_zero()) rad.reset();
  }
};

std::optional<RationalFn> unify_rad(const FieldElem& x, const FieldElem& y) {
  if (x.rad && y.rad) {
    if (!rational_equal(*x.rad, *y.rad)) throw Bail{};
    return x.rad;
  }
  return x.rad ? x.rad : y.rad;
}

FieldElem elem_add(const FieldElem& x, const FieldElem& y) {
  FieldElem r;
  r.rad = unify_rad(x, y);
  r.a = x.a + y.a;
  r.b = x.b + y.b;
  r.drop_unused_rad();
  return r;
}

FieldElem elem_neg(const FieldElem& x) {
  FieldElem r = x;
  r.a = neg(r.a);
  r.b = neg(r.b);
  return r;
}

FieldElem elem_sub(const FieldElem& x, const FieldElem& y) {
  return elem_add(x, elem_neg(y));
}

FieldElem elem_mul(const FieldElem& x, const FieldElem& y) {
  FieldElem r;
  r.rad = unify_rad(x, y);
  r.a = x.a * y.a;
  if (r.rad && !x.b.is_zero() && !y.b.is_zero()) {
    r.a = r.a + x.b * y.b * (*r.rad);
  }
  r.b = x.a * y.b + x.b * y.a;
  r.drop_unused_rad();
  return r;
}

FieldElem elem_inv(const FieldElem& x) {
  if (x.is_zero()) throw Bail{};
  FieldElem r;
  r.rad = x.rad;
  RationalFn d = x.a * x.a;
  if (x.rad && !x.b.is_zero()) d = d - x.b * x.b * (*x.rad);
  if (d.is_zero()) throw Bail{};
  r.a = x.a / d;
  r.b = neg(x.b) / d;
  r.drop_unused_rad();
  return r;
}

FieldElem elem_div(const FieldElem& x, const FieldElem& y) {
  return elem_mul(x, elem_inv(y));
}

FieldElem elem_pow(const FieldElem& x, long k) {
  if (std::labs(k) > kMaxIntExponent) throw Bail{};
  if (k < 0) return elem_inv(elem_pow(x, -k));
  FieldElem r;
  r.a = RationalFn::constant(1.0);
  FieldElem base = x;
  long e = k;
  while (e > 0) {
    if (e & 1) r = elem_mul(r, base);
    base = elem_mul(base, base);
    e >>= 1;
  }
  return r;
}

// Polynomial whose real roots contain every zero of the element.
Poly zeros_poly(const FieldElem& e) {
  if (e.is_rational() || !e.rad) return e.a.num;
  RationalFn t = e.a * e.a - e.b * e.b * (*e.rad);
  return t.num;
}

double eval_elem(const FieldElem& e, double x) {
  double v = e.a.eval(x);
  if (e.rad && !e.b.is_zero()) {
    const double rv = e.rad->eval(x);
    if (rv < 0.0) throw Bail{};
    v += e.b.eval(x) * std::sqrt(rv);
  }
  return v;
}

FieldElem elem_derivative(const FieldElem& e) {
  FieldElem r;
  r.rad = e.rad;
  r.a = rational_derivative(e.a);
  if (e.rad && !e.b.is_zero()) {
    // (b*sqrt(r))' = (b' + b r' / (2r)) sqrt(r)
    r.b = rational_derivative(e.b) +
          e.b * rational_derivative(*e.rad) /
              (RationalFn::constant(2.0) * (*e.rad));
  }
  r.drop_unused_rad();
  return r;
}

// ---------------------------------------------------------------------------
// Normalization of a formula tree into the field.

FieldElem normalize(const FormulaNode& node) {
  switch (node.op) {
    case FormulaOp::Number: {
      FieldElem r;
      r.a = RationalFn::constant(node.value);
      return r;
    }
    case FormulaOp::Var: {
      FieldElem r;
      r.a = RationalFn::x();
      return r;
    }
    case FormulaOp::Neg:
      return elem_neg(normalize(*node.lhs));
    case FormulaOp::Add:
      return elem_add(normalize(*node.lhs), normalize(*node.rhs));
    case FormulaOp::Sub:
      return elem_sub(normalize(*node.lhs), normalize(*node.rhs));
    case FormulaOp::Mul:
      return elem_mul(normalize(*node.lhs), normalize(*node.rhs));
    case FormulaOp::Div:
      return elem_div(normalize(*node.lhs), normalize(*node.rhs));
    case FormulaOp::Pow: {
      FieldElem expo = normalize(*node.rhs);
      if (!expo.is_rational() || !expo.a.is_constant()) throw Bail{};
      const double kv = expo.a.constant_value();
      const double kr = std::nearbyint(kv);
      if (std::fabs(kv - kr) > 1e-9) throw Bail{};
      return elem_pow(normalize(*node.lhs), static_cast<long>(kr));
    }
    case FormulaOp::Sqrt: {
      FieldElem o = normalize(*node.lhs);
      if (!o.is_rational()) throw Bail{};
      if (o.a.is_constant()) {
        const double v = o.a.constant_value();
        if (v < 0.0) throw Bail{};
        FieldElem r;
        r.a = RationalFn::constant(std::sqrt(v));
        return r;
      }
      FieldElem r;
      r.rad = o.a;
      r.b = RationalFn::constant(1.0);
      return r;
    }
    case FormulaOp::Abs: {
      // Folded after sign analysis in analyze_algebraic; at normalization
      // time we only accept operands of eventually-known sign.
      throw Bail{};
    }
  }
  throw Bail{};
}

// ---------------------------------------------------------------------------
// Leading asymptotics helpers.

struct LeadingPart {
  double delta = 0.0;  // f-part ~ coeff * n^delta
  double coeff = 0.0;
};

std::optional<LeadingPart> leading_rational(const RationalFn& r) {
  if (r.is_zero()) return std::nullopt;
  if (!r.num.reliable() || !r.den.reliable()) throw Bail{};
  return LeadingPart{static_cast<double>(r.num.degree() - r.den.degree()),
                     r.num.lead() / r.den.lead()};
}

// Combined leading term of the element; nullopt when leading parts cancel.
std::optional<LeadingPart> leading_elem(const FieldElem& e) {
  auto pa = leading_rational(e.a);
  std::optional<LeadingPart> pb;
  if (e.rad && !e.b.is_zero()) {
    auto lb = leading_rational(e.b);
    auto lr = leading_rational(*e.rad);
    if (!lb || !lr) return pa;
    if (lr->coeff <= 0.0) throw Bail{};  // radicand eventually negative
    pb = LeadingPart{lb->delta + lr->delta / 2.0,
                     lb->coeff * std::sqrt(lr->coeff)};
  }
  if (!pa) return pb;
  if (!pb) return pa;
  if (pa->delta > pb->delta + 1e-12) return pa;
  if (pb->delta > pa->delta + 1e-12) return pb;
  const double c = pa->coeff + pb->coeff;
  if (std::fabs(c) <= 1e-9 * (std::fabs(pa->coeff) + std::fabs(pb->coeff))) {
    return std::nullopt;  // cancellation; lower-order terms decide
  }
  return LeadingPart{pa->delta, c};
}

LimitValue limit_from_profile(const GrowthProfile& p) {
  if (p.is_zero()) return LimitValue::finite(0.0);
  if (p.rho > 1.0 + 1e-12) {
    return p.coeff > 0 ? LimitValue::plus_infinity()
                       : LimitValue::minus_infinity();
  }
  if (p.rho < 1.0 - 1e-12) return LimitValue::finite(0.0);
  if (p.alpha > 1e-12) {
    return p.coeff > 0 ? LimitValue::plus_infinity()
                       : LimitValue::minus_infinity();
  }
  if (p.alpha < -1e-12) return LimitValue::finite(0.0);
  return LimitValue::finite(p.coeff);
}

// ---------------------------------------------------------------------------
// Full algebraic analysis.

struct AlgebraicAnalysis {
  FieldElem f;
  long tail_start = 1;     // no zeros, poles or critical points at or beyond
  int tail_sign = 0;       // sign of f on [tail_start, inf)
  int tail_direction = 0;  // sign of f' there; 0 means f constant
  LimitValue limit = LimitValue::unknown();
  std::optional<GrowthProfile> profile;
};

// Folds abs nodes away: abs(g) is replaced by +-g once g has certified
// constant sign on every integer n >= 1. Sign is certified with the same
// tail machinery plus a scan of the finite head.
FieldElem normalize_with_abs(const FormulaNode& node);

int certified_sign_all(const FieldElem& e);  // +1/-1 certain, 0 unknown/mixed

FieldElem normalize_with_abs(const FormulaNode& node) {
  if (node.op == FormulaOp::Abs) {
    FieldElem inner = normalize_with_abs(*node.lhs);
    if (inner.is_zero()) return inner;
    const int s = certified_sign_all(inner);
    if (s > 0) return inner;
    if (s < 0) return elem_neg(inner);
    throw Bail{};
  }
  // Delegate non-abs structure; recurse manually so nested abs works.
  switch (node.op) {
    case FormulaOp::Neg:
      return elem_neg(normalize_with_abs(*node.lhs));
    case FormulaOp::Add:
      return elem_add(normalize_with_abs(*node.lhs),
                      normalize_with_abs(*node.rhs));
    case FormulaOp::Sub:
      return elem_sub(normalize_with_abs(*node.lhs),
                      normalize_with_abs(*node.rhs));
    case FormulaOp::Mul:
      return elem_mul(normalize_with_abs(*node.lhs),
                      normalize_with_abs(*node.rhs));
    case FormulaOp::Div:
      return elem_div(normalize_with_abs(*node.lhs),
                      normalize_with_abs(*node.rhs));
    case FormulaOp::Pow: {
      FieldElem expo = normalize_with_abs(*node.rhs);
      if (!expo.is_rational() || !expo.a.is_constant()) throw Bail{};
      const double kv = expo.a.constant_value();
      const double kr = std::nearbyint(kv);
      if (std::fabs(kv - kr) > 1e-9) throw Bail{};
      return elem_pow(normalize_with_abs(*node.lhs), static_cast<long>(kr));
    }
    case FormulaOp::Sqrt: {
      FieldElem o = normalize_with_abs(*node.lhs);
      if (!o.is_rational()) throw Bail{};
      if (o.a.is_constant()) {
        const double v = o.a.constant_value();
        if (v < 0.0) throw Bail{};
        FieldElem r;
        r.a = RationalFn::constant(std::sqrt(v));
        return r;
      }
      FieldElem r;
      r.rad = o.a;
      r.b = RationalFn::constant(1.0);
      return r;
    }
    default:
      return normalize(node);
  }
}

// Largest location of any zero, pole or radicand boundary of e (and poles
// of the radicand), as an upper bound via Cauchy's root bound.
double structural_bound(const FieldElem& e) {
  double x = 1.0;
  auto acc = [&x](const Poly& p) { x = std::max(x, cauchy_bound(p)); };
  acc(zeros_poly(e));
  acc(e.a.den);
  acc(e.b.den);
  if (e.rad) {
    acc(e.rad->num);
    acc(e.rad->den);
  }
  return x;
}

int certified_sign_all(const FieldElem& e) {
  if (e.is_zero()) return 0;
  double bound = structural_bound(e);
  if (bound > static_cast<double>(tol::kScanMax)) throw Bail{};
  const long start = static_cast<long>(std::ceil(bound)) + 1;
  const double tail = eval_elem(e, static_cast<double>(start));
  if (!std::isfinite(tail) || tail == 0.0) throw Bail{};
  const int s = tail > 0 ? 1 : -1;
  for (long n = 1; n <= start; ++n) {
    const double v = eval_elem(e, static_cast<double>(n));
    if (!std::isfinite(v)) throw Bail{};
    if (v == 0.0 || (v > 0) != (s > 0)) return 0;
  }
  return s;
}

std::optional<AlgebraicAnalysis> analyze_algebraic(const FormulaNode& root) {
  try {
    AlgebraicAnalysis out;
    out.f = normalize_with_abs(root);

    const FieldElem df = elem_derivative(out.f);

    double bound = std::max(structural_bound(out.f), structural_bound(df));
    if (bound > static_cast<double>(tol::kScanMax)) return std::nullopt;
    out.tail_start = static_cast<long>(std::ceil(bound)) + 1;

    const double probe = static_cast<double>(out.tail_start) + 0.5;
    if (out.f.is_zero()) {
      out.tail_sign = 0;
    } else {
      const double v = eval_elem(out.f, probe);
      if (!std::isfinite(v)) return std::nullopt;
      out.tail_sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (out.tail_sign == 0) return std::nullopt;
    }
    if (df.is_zero()) {
      out.tail_direction = 0;
    } else {
      const double dv = eval_elem(df, probe);
      if (!std::isfinite(dv)) return std::nullopt;
      out.tail_direction = dv > 0 ? 1 : (dv < 0 ? -1 : 0);
      if (out.tail_direction == 0) return std::nullopt;
    }

    if (out.f.is_zero()) {
      out.limit = LimitValue::finite(0.0);
      out.profile = GrowthProfile{1.0, 0.0, 0.0};
    } else {
      auto lead = leading_elem(out.f);
      if (lead) {
        out.profile = GrowthProfile{1.0, lead->delta, lead->coeff};
        out.limit = limit_from_profile(*out.profile);
      }
    }
    return out;
  } catch (const Bail&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Growth profiles for formulas with geometric atoms.

std::optional<double> structural_constant(const FormulaNode& node) {
  bool depends = false;
  // cheap check without building Formula wrappers
  struct {
    void operator()(const FormulaNode& n, bool& dep) const {
      if (n.op == FormulaOp::Var) dep = true;
      if (n.lhs) (*this)(*n.lhs, dep);
      if (n.rhs) (*this)(*n.rhs, dep);
    }
  } walk;
  walk(node, depends);
  if (depends) return std::nullopt;
  Formula f(std::make_shared<FormulaNode>(node));
  const double v = f.eval(1.0);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

GrowthProfile profile_add(const GrowthProfile& f, const GrowthProfile& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  const bool rho_eq = std::fabs(f.rho - g.rho) <= 1e-12 * std::max(f.rho, g.rho);
  if (!rho_eq) return f.rho > g.rho ? f : g;
  if (std::fabs(f.alpha - g.alpha) > 1e-12) return f.alpha > g.alpha ? f : g;
  const double c = f.coeff + g.coeff;
  if (std::fabs(c) <= 1e-9 * (std::fabs(f.coeff) + std::fabs(g.coeff))) {
    throw Bail{};  // leading cancellation
  }
  return GrowthProfile{f.rho, f.alpha, c};
}

GrowthProfile growth_profile_node(const FormulaNode& node) {
  if (auto cv = structural_constant(node)) {
    return GrowthProfile{1.0, 0.0, *cv};
  }
  switch (node.op) {
    case FormulaOp::Number:
      return GrowthProfile{1.0, 0.0, node.value};
    case FormulaOp::Var:
      return GrowthProfile{1.0, 1.0, 1.0};
    case FormulaOp::Neg: {
      GrowthProfile p = growth_profile_node(*node.lhs);
      p.coeff = -p.coeff;
      return p;
    }
    case FormulaOp::Add:
      return profile_add(growth_profile_node(*node.lhs),
                         growth_profile_node(*node.rhs));
    case FormulaOp::Sub: {
      GrowthProfile g = growth_profile_node(*node.rhs);
      g.coeff = -g.coeff;
      return profile_add(growth_profile_node(*node.lhs), g);
    }
    case FormulaOp::Mul: {
      GrowthProfile f = growth_profile_node(*node.lhs);
      GrowthProfile g = growth_profile_node(*node.rhs);
      if (f.is_zero() || g.is_zero()) return GrowthProfile{1.0, 0.0, 0.0};
      return GrowthProfile{f.rho * g.rho, f.alpha + g.alpha, f.coeff * g.coeff};
    }
    case FormulaOp::Div: {
      GrowthProfile f = growth_profile_node(*node.lhs);
      GrowthProfile g = growth_profile_node(*node.rhs);
      if (g.is_zero()) throw Bail{};
      if (f.is_zero()) return f;
      return GrowthProfile{f.rho / g.rho, f.alpha - g.alpha, f.coeff / g.coeff};
    }
    case FormulaOp::Pow: {
      auto expo_const = structural_constant(*node.rhs);
      if (expo_const) {
        const double k = *expo_const;
        GrowthProfile f = growth_profile_node(*node.lhs);
        if (f.is_zero()) {
          if (k > 0) return f;
          throw Bail{};
        }
        const double kr = std::nearbyint(k);
        const bool integer = std::fabs(k - kr) <= 1e-9;
        if (!integer && f.coeff <= 0.0) throw Bail{};
        return GrowthProfile{std::pow(f.rho, k), f.alpha * k,
                             std::pow(f.coeff, k)};
      }
      auto base_const = structural_constant(*node.lhs);
      if (!base_const || *base_const <= 0.0) throw Bail{};
      // exponent must be an exact linear polynomial a1*n + a0
      FieldElem e = normalize(*node.rhs);
      if (!e.is_rational() || e.a.den.degree() != 0) throw Bail{};
      if (e.a.num.degree() > 1) throw Bail{};
      const double d0 = e.a.den.c[0];
      const double a0 = e.a.num.c.empty() ? 0.0 : e.a.num.c[0] / d0;
      const double a1 = e.a.num.degree() >= 1 ? e.a.num.c[1] / d0 : 0.0;
      return GrowthProfile{std::pow(*base_const, a1), 0.0,
                           std::pow(*base_const, a0)};
    }
    case FormulaOp::Sqrt: {
      GrowthProfile f = growth_profile_node(*node.lhs);
      if (f.is_zero()) return f;
      if (f.coeff <= 0.0) throw Bail{};
      return GrowthProfile{std::sqrt(f.rho), f.alpha / 2.0,
                           std::sqrt(f.coeff)};
    }
    case FormulaOp::Abs: {
      GrowthProfile f = growth_profile_node(*node.lhs);
      f.coeff = std::fabs(f.coeff);
      return f;
    }
  }
  throw Bail{};
}

std::optional<GrowthProfile> growth_profile(const FormulaNode& root) {
  try {
    return growth_profile_node(root);
  } catch (const Bail&) {
    return std::nullopt;
  }
}

LimitValue abs_of_limit(const LimitValue& l) {
  switch (l.kind) {
    case LimitValue::Kind::Finite:
      return LimitValue::finite(std::fabs(l.value));
    case LimitValue::Kind::PlusInfinity:
    case LimitValue::Kind::MinusInfinity:
      return LimitValue::plus_infinity();
    default:
      return LimitValue::unknown();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// IndexSet

IndexSet IndexSet::all() { return IndexSet{}; }

IndexSet IndexSet::finite(std::vector<long> members) {
  IndexSet s;
  s.kind_ = Kind::Finite;
  std::erase_if(members, [](long n) { return n < 1; });
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  s.values_ = std::move(members);
  return s;
}

IndexSet IndexSet::cofinite(std::vector<long> excluded) {
  IndexSet s;
  s.kind_ = Kind::Cofinite;
  std::erase_if(excluded, [](long n) { return n < 1; });
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  s.values_ = std::move(excluded);
  return s;
}

IndexSet IndexSet::periodic(long modulus, std::vector<long> residues) {
  if (modulus < 1) throw ConfigError("periodic index set needs modulus >= 1");
  for (long& r : residues) r = ((r % modulus) + modulus) % modulus;
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  if (residues.empty()) return finite({});
  IndexSet s;
  s.kind_ = Kind::Periodic;
  s.modulus_ = modulus;
  s.values_ = std::move(residues);
  return s;
}

bool IndexSet::contains(long n) const {
  if (n < 1) return false;
  switch (kind_) {
    case Kind::All:
      return true;
    case Kind::Finite:
      return std::binary_search(values_.begin(), values_.end(), n);
    case Kind::Cofinite:
      return !std::binary_search(values_.begin(), values_.end(), n);
    case Kind::Periodic:
      return std::binary_search(values_.begin(), values_.end(), n % modulus_);
  }
  return false;
}

bool IndexSet::is_finite_set() const { return kind_ == Kind::Finite; }

bool IndexSet::empty() const {
  return kind_ == Kind::Finite && values_.empty();
}

std::optional<long> IndexSet::first_at_least(long n) const {
  n = std::max(n, 1L);
  switch (kind_) {
    case Kind::All:
      return n;
    case Kind::Finite: {
      auto it = std::lower_bound(values_.begin(), values_.end(), n);
      if (it == values_.end()) return std::nullopt;
      return *it;
    }
    case Kind::Cofinite: {
      long k = n;
      while (std::binary_search(values_.begin(), values_.end(), k)) ++k;
      return k;
    }
    case Kind::Periodic: {
      for (long k = n; k < n + modulus_; ++k) {
        if (contains(k)) return k;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string IndexSet::describe() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<long>& v) {
    os << '{';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      os << v[i];
    }
    os << '}';
  };
  switch (kind_) {
    case Kind::All:
      os << "all n>=1";
      break;
    case Kind::Finite:
      list(values_);
      break;
    case Kind::Cofinite:
      os << "complement of ";
      list(values_);
      break;
    case Kind::Periodic:
      os << "residues ";
      list(values_);
      os << " mod " << modulus_;
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SequenceAnalysis

SequenceAnalysis::SequenceAnalysis(Formula f) : formula_(std::move(f)) {
  std::optional<AlgebraicAnalysis> alg;
  if (!formula_.empty()) alg = analyze_algebraic(formula_.root());

  if (alg) {
    algebraic_ok_ = true;
    limit_ = alg->limit;
    profile_ = alg->profile;
    monotone_ = MonotoneTail{alg->tail_start, alg->tail_direction};
    const int abs_dir = alg->tail_sign * alg->tail_direction;
    abs_monotone_ = MonotoneTail{alg->tail_start, abs_dir};
  } else if (!formula_.empty()) {
    profile_ = growth_profile(formula_.root());
    if (profile_) limit_ = limit_from_profile(*profile_);
  }
  abs_limit_ = abs_of_limit(limit_);

  // Positivity: certified tail sign (when algebraic) plus a full scan of the
  // head; without a tail certificate a violation still yields a definite No.
  const long scan_to = alg ? std::min(alg->tail_start, tol::kScanMax)
                           : tol::kScanPrefix;
  bool any_nonpos = false, any_neg = false, bad_eval = false;
  if (!formula_.empty()) {
    for (long n = 1; n <= scan_to; ++n) {
      const double v = formula_.eval(static_cast<double>(n));
      if (!std::isfinite(v)) {
        bad_eval = true;
        break;
      }
      if (v <= 0.0) any_nonpos = true;
      if (v < -1e-12) any_neg = true;
    }
  }
  if (bad_eval || formula_.empty()) {
    strictly_positive_ = TriState::Unknown;
    nonnegative_ = TriState::Unknown;
  } else if (alg) {
    strictly_positive_ = any_nonpos                 ? TriState::No
                         : (alg->tail_sign > 0)     ? TriState::Yes
                                                    : TriState::No;
    nonnegative_ = any_neg                      ? TriState::No
                   : (alg->tail_sign >= 0)      ? TriState::Yes
                                                : TriState::No;
  } else {
    strictly_positive_ = any_nonpos ? TriState::No : TriState::Unknown;
    nonnegative_ = any_neg ? TriState::No : TriState::Unknown;
  }
}

InfimumResult SequenceAnalysis::infimum_abs(const IndexSet& set) const {
  InfimumResult out;
  auto absval = [this](long n) {
    return std::fabs(formula_.eval(static_cast<double>(n)));
  };

  if (set.empty()) {
    out.value = std::numeric_limits<double>::infinity();
    out.attainment = Attainment::NotAttained;
    out.certified = true;
    out.note = "empty index set; infimum is +infinity by convention";
    return out;
  }

  if (set.is_finite_set()) {
    double best = std::numeric_limits<double>::infinity();
    long arg = 0;
    for (long n : set.values()) {
      const double v = absval(n);
      if (!std::isfinite(v)) {
        out.attainment = Attainment::Undecidable;
        out.note = "formula not finite at index " + std::to_string(n);
        return out;
      }
      if (v < best) {
        best = v;
        arg = n;
      }
    }
    out.value = best;
    out.attainment = Attainment::Attained;
    out.certified = true;
    out.witness = arg;
    out.note = "minimum over a finite index set";
    return out;
  }

  // Infinite index set.
  auto scan_min = [&](long upto, double& best, long& arg) -> bool {
    for (long n = 1; n <= upto; ++n) {
      if (!set.contains(n)) continue;
      const double v = absval(n);
      if (!std::isfinite(v)) return false;
      if (v < best) {
        best = v;
        arg = n;
      }
    }
    return true;
  };

  if (abs_monotone_ && abs_monotone_->start <= tol::kScanMax) {
    const long n0 = abs_monotone_->start;
    double best = std::numeric_limits<double>::infinity();
    long arg = 0;
    if (!scan_min(n0, best, arg)) {
      out.attainment = Attainment::Undecidable;
      out.note = "formula not finite on scanned prefix";
      return out;
    }
    const auto t0 = set.first_at_least(n0 + 1);
    if (!t0) {  // infinite kinds always have a tail member
      out.value = best;
      out.attainment = Attainment::Attained;
      out.certified = true;
      out.witness = arg;
      return out;
    }
    const double v0 = absval(*t0);
    if (abs_monotone_->direction >= 0) {
      // tail is nondecreasing: its first member is its minimum
      if (v0 < best) {
        best = v0;
        arg = *t0;
      }
      out.value = best;
      out.attainment = Attainment::Attained;
      out.certified = true;
      out.witness = arg;
      out.note = "monotone tail from n=" + std::to_string(n0);
      return out;
    }
    // Strictly decreasing tail: its infimum is the limit of |f|.
    if (!abs_limit_.is_finite()) {
      out.value = std::min(best, v0);
      out.attainment = Attainment::Undecidable;
      out.note = "decreasing tail without a certified limit";
      return out;
    }
    const double tail_inf = abs_limit_.value;
    if (best <= tail_inf) {
      out.value = best;
      out.attainment = Attainment::Attained;
      out.certified = true;
      out.witness = arg;
      out.note = "head minimum is below the tail limit";
    } else {
      out.value = tail_inf;
      out.attainment = Attainment::NotAttained;
      out.certified = true;
      out.note = "infimum equals the unattained tail limit";
    }
    return out;
  }

  // No monotonicity certificate; bounded scan.
  double best = std::numeric_limits<double>::infinity();
  long arg = 0;
  const long window = 100000;
  if (!scan_min(window, best, arg)) {
    out.attainment = Attainment::Undecidable;
    out.note = "formula not finite on scanned prefix";
    return out;
  }
  out.value = best;
  out.witness = arg;
  if (unbounded_abs()) {
    // |f| -> inf makes every sublevel set finite, so the infimum is attained;
    // the scanned value is the best candidate but is not certified exact.
    out.attainment = Attainment::Attained;
    out.certified = false;
    out.note = "attainment certified by divergence; value from bounded scan";
  } else {
    out.attainment = Attainment::Undecidable;
    out.certified = false;
    out.note = "no certificate; value is a bounded-scan upper bound";
  }
  return out;
}

std::optional<double> SequenceAnalysis::certified_abs_distance(
    double real_shift) const {
  if (formula_.empty()) return std::nullopt;
  Formula shifted(make_binary(FormulaOp::Sub, formula_.root_ptr(),
                              make_number(real_shift)));
  SequenceAnalysis sh(shifted);
  InfimumResult inf = sh.infimum_abs(IndexSet::all());
  if (!inf.certified) return std::nullopt;
  return inf.value;
}

SeriesVerdict series_converges(const Formula& term) {
  if (term.empty()) return SeriesVerdict::Undecidable;
  std::optional<GrowthProfile> p;
  if (auto alg = analyze_algebraic(term.root()); alg && alg->profile) {
    p = alg->profile;
  } else {
    p = growth_profile(term.root());
  }
  if (!p) return SeriesVerdict::Undecidable;
  if (p->is_zero()) return SeriesVerdict::Converges;
  if (p->coeff < 0.0) return SeriesVerdict::Undecidable;  // not a nonneg term
  if (p->rho < 1.0 - 1e-12) return SeriesVerdict::Converges;
  if (p->rho > 1.0 + 1e-12) return SeriesVerdict::Diverges;
  if (p->alpha < -1.0 - 1e-12) return SeriesVerdict::Converges;
  return SeriesVerdict::Diverges;
}

}  // namespace amop
