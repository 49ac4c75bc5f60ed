// Numerical tolerances and scan limits shared across the library.
#pragma once

namespace amop::tol {

// Structure-tag checks (self-adjoint / normal / positive), relative to the
// Frobenius norm of the operand.
inline constexpr double kStruct = 1e-10;

// Algebraic identity checks (MP axioms, polar reconstruction, transforms),
// relative.
inline constexpr double kNum = 1e-9;

// Numerical rank cutoff, relative to the largest singular value.
inline constexpr double kZeroRel = 1e-8;

// Absolute guards: resolvent distance to the spectrum, rejection of
// eigenvalues indistinguishable from zero.
inline constexpr double kZeroAbs = 1e-8;

// Validation evaluates this many leading terms of a formula sequence.
inline constexpr long kScanPrefix = 1000;

// Bounded-search ceiling for scans without a symbolic certificate.
inline constexpr long kScanMax = 1000000;

}  // namespace amop::tol
