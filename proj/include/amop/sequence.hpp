// Symbolic analysis of formula-defined real sequences f(n), n >= 1.
//
// Two certificate routes:
//  * algebraic — the formula normalizes in the field Q(n)[sqrt(r)] of
//    rational functions extended by one radical; gives exact limits,
//    eventual-monotonicity tails with an explicit start index, sign
//    constancy, and exact infima over index subsets.
//  * growth profile — leading-order asymptotics c * rho^n * n^alpha; also
//    covers geometric atoms (constant^(linear in n)), enough to certify
//    limits and series convergence at polynomial/exponential rates.
//
// Formulas outside both classes degrade to bounded scans and Undecidable
// verdicts; no certificate is ever fabricated.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amop/formula.hpp"
#include "amop/verdicts.hpp"

namespace amop {

// Subset of N = {1, 2, ...} used to select eigenvalue indices.
class IndexSet {
 public:
  enum class Kind { All, Finite, Cofinite, Periodic };

  static IndexSet all();
  static IndexSet finite(std::vector<long> members);
  static IndexSet cofinite(std::vector<long> excluded);
  // Members n >= 1 with n mod modulus in residues.
  static IndexSet periodic(long modulus, std::vector<long> residues);

  Kind kind() const { return kind_; }
  bool contains(long n) const;
  bool is_finite_set() const;
  bool empty() const;
  const std::vector<long>& values() const { return values_; }
  long modulus() const { return modulus_; }
  // Smallest member >= n, if any.
  std::optional<long> first_at_least(long n) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::All;
  std::vector<long> values_;  // members (Finite) or excluded (Cofinite) or residues
  long modulus_ = 0;
};

struct LimitValue {
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Unknown };
  Kind kind = Kind::Unknown;
  double value = 0.0;  // Finite only

  static LimitValue finite(double v) { return {Kind::Finite, v}; }
  static LimitValue plus_infinity() { return {Kind::PlusInfinity, 0.0}; }
  static LimitValue minus_infinity() { return {Kind::MinusInfinity, 0.0}; }
  static LimitValue unknown() { return {Kind::Unknown, 0.0}; }
  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const {
    return kind == Kind::PlusInfinity || kind == Kind::MinusInfinity;
  }
  bool known() const { return kind != Kind::Unknown; }
};

// f is monotone on [start, inf); direction +1 increasing, -1 decreasing,
// 0 constant. Strict unless constant.
struct MonotoneTail {
  long start = 1;
  int direction = 0;
};

struct InfimumResult {
  double value = 0.0;  // exact infimum when certified, scan minimum otherwise
  Attainment attainment = Attainment::Undecidable;
  bool certified = false;  // value is the true infimum
  std::optional<long> witness;  // attaining index
  std::string note;
};

// Leading-order growth c * rho^n * n^alpha (c != 0), or identically zero.
struct GrowthProfile {
  double rho = 1.0;
  double alpha = 0.0;
  double coeff = 0.0;
  bool is_zero() const { return coeff == 0.0; }
};

class SequenceAnalysis {
 public:
  explicit SequenceAnalysis(Formula f);

  const Formula& formula() const { return formula_; }

  // lim f(n) and lim |f(n)| (Unknown when uncertified).
  LimitValue limit() const { return limit_; }
  LimitValue abs_limit() const { return abs_limit_; }

  // Certified |f| -> +infinity.
  bool unbounded_abs() const {
    return abs_limit_.kind == LimitValue::Kind::PlusInfinity;
  }
  // Certified finite limit of |f| (bounded tail).
  bool bounded_abs() const { return abs_limit_.is_finite(); }

  std::optional<MonotoneTail> abs_monotone() const { return abs_monotone_; }
  std::optional<MonotoneTail> monotone() const { return monotone_; }

  // Certified f(n) > 0 for every integer n >= 1 (strict, scans the head).
  TriState strictly_positive() const { return strictly_positive_; }
  // Certified f(n) >= 0 for every integer n >= 1 within tolerance.
  TriState nonnegative() const { return nonnegative_; }

  bool has_algebraic_certificate() const { return algebraic_ok_; }
  bool has_profile() const { return profile_.has_value(); }
  std::optional<GrowthProfile> profile() const { return profile_; }

  // Infimum of |f(n)| over n in the index set.
  InfimumResult infimum_abs(const IndexSet& set) const;

  // Smallest |f(n)| over all n with distance information: certified lower
  // bound on inf_n |f(n) - z| for a complex shift z (used by the resolvent
  // guard). Returns nullopt when uncertifiable.
  std::optional<double> certified_abs_distance(double real_shift) const;

 private:
  Formula formula_;
  bool algebraic_ok_ = false;
  std::optional<GrowthProfile> profile_;
  LimitValue limit_ = LimitValue::unknown();
  LimitValue abs_limit_ = LimitValue::unknown();
  std::optional<MonotoneTail> monotone_;
  std::optional<MonotoneTail> abs_monotone_;
  TriState strictly_positive_ = TriState::Unknown;
  TriState nonnegative_ = TriState::Unknown;
};

// Convergence of sum_{n>=1} term(n) for eventually nonnegative terms.
SeriesVerdict series_converges(const Formula& term);

}  // namespace amop
