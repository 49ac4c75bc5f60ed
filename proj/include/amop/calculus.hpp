// The computable objects of the operator calculus: minimum modulus, modulus,
// square root, polar decomposition, Moore-Penrose inverse, minimal-norm
// least squares, bounded transform and resolvent — for dense matrices and
// for diagonal models.
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "amop/diagonal_model.hpp"
#include "amop/finite_operator.hpp"
#include "amop/sequence.hpp"
#include "amop/verdicts.hpp"

namespace amop {

// --- minimum modulus --------------------------------------------------------

// Smallest singular value.
double minimum_modulus(const FiniteOperator& op);

struct MinimumModulus {
  double value = 0.0;
  Attainment attainment = Attainment::Undecidable;
  bool exact = false;  // value certified as the true infimum
  // 1-based sequence index of an attaining eigenvalue; 0 denotes the kernel.
  std::optional<long> witness_index;
  std::string note;
};

// inf over {|lambda_n|}, plus 0 if the model has a kernel. Symbolic when the
// tail certifies a monotone pattern, bounded search otherwise; uncertified
// cases yield an Undecidable attainment, never a silently wrong number.
MinimumModulus minimum_modulus(const DiagonalModel& model);

// inf of |lambda_n| over a subset of sequence indices (the kernel block is
// not part of the sequence). Prefix values are scanned; the tail is decided
// by the certificate machinery.
InfimumResult sequence_infimum_abs(const DiagonalModel& model,
                                   const IndexSet& subset);

// Whether inf{|lambda_n| : n in subset} is achieved by a member; for
// eigenvalue sequences diverging to infinity this is Attained for every
// subset. Requires a positive model (real nonnegative spectrum).
InfimumResult minimum_modulus_attained(const DiagonalModel& model,
                                       const IndexSet& subset);

// --- modulus, square root, polar -------------------------------------------

// |T| = (T^*T)^(1/2), a positive operator on the domain space.
FiniteOperator modulus(const FiniteOperator& op);
DiagonalModel modulus(const DiagonalModel& model);

// Square root of a positive operator by spectral functional calculus.
FiniteOperator sqrt_positive(const FiniteOperator& op);

struct PolarParts {
  FiniteOperator partial_isometry;  // V, vanishing on R(T^*) orthocomplement
  FiniteOperator modulus;           // |T|, positive
};

// T = V |T| with V a partial isometry with initial space R(T^*) and final
// space R(T).
PolarParts polar_decompose(const FiniteOperator& op);

// --- Moore-Penrose and least squares ----------------------------------------

FiniteOperator moore_penrose(const FiniteOperator& op);
// Reciprocal nonzero eigenvalues, zero block preserved.
DiagonalModel moore_penrose(const DiagonalModel& model);

// Relative deviations of the defining Moore-Penrose properties.
struct MpDeviations {
  double projection_range = 0.0;    // T T^+ is the orthoprojector onto R(T)
  double projection_carrier = 0.0;  // T^+ T is the orthoprojector onto C(T)
  double kernel = 0.0;              // N(T^+) = R(T) orthocomplement
  double reproduce_t = 0.0;         // T T^+ T = T
  double reproduce_dagger = 0.0;    // T^+ T T^+ = T^+
  double max() const;
};
MpDeviations mp_deviations(const FiniteOperator& op,
                           const FiniteOperator& dagger);

struct LeastSquaresSolution {
  Vector solution;
  double residual_norm = 0.0;
  double mp_certificate = 0.0;  // max MP-property deviation
};

// Minimal-norm least-squares solution of T x = y, i.e. x = T^+ y.
LeastSquaresSolution least_squares_min_norm(const FiniteOperator& op,
                                            const Vector& y);

// --- bounded transform and resolvent ----------------------------------------

// Z_T = T (I + T^*T)^(-1/2); a contraction.
FiniteOperator bounded_transform(const FiniteOperator& op);
// Eigenvalues map to lambda / sqrt(1 + |lambda|^2); zero block unchanged.
DiagonalModel bounded_transform(const DiagonalModel& model);

struct ResolventSample {
  cplx lambda;
  std::optional<FiniteOperator> inverse;  // finite case: (T - lambda I)^{-1}
  std::optional<DiagonalModel> base;      // diagonal case: the sampled model
  bool coefficient_decay = false;         // coefficients -> 0 (compactness)

  // Diagonal case: 1/(lambda_n - lambda) at sequence index n, and the value
  // on the zero block.
  cplx coefficient(long n) const;
  cplx null_coefficient() const;
};

// Requires lambda at certified distance > tol::kZeroAbs from the spectrum.
ResolventSample resolvent(const FiniteOperator& op, cplx lambda);
ResolventSample resolvent(const DiagonalModel& model, cplx lambda);

// --- the S + iI identity ------------------------------------------------------

// lhs = m(S + iI) computed directly, rhs = sqrt(1 + m(S)^2); both sides via
// independent spectral routes. Requires a self-adjoint tag.
std::pair<double, double> perturbed_min_modulus_check(const FiniteOperator& op);

}  // namespace amop
