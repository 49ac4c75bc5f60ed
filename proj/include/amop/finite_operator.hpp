// Dense complex matrices with structural tags: the desk-scale stand-in for a
// bounded Hilbert-space operator, plus spectral extraction and the
// kernel/carrier splitting.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "amop/errors.hpp"

namespace amop {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Structure { General, SelfAdjoint, Normal, Positive };

const char* to_string(Structure s);

class FiniteOperator {
 public:
  FiniteOperator(Matrix entries, Structure structure);

  long rows() const { return entries_.rows(); }
  long cols() const { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }
  Structure structure() const { return structure_; }

  bool is_square() const { return rows() == cols(); }
  double frobenius() const { return entries_.norm(); }

  static FiniteOperator identity(long n);
  static FiniteOperator zero(long rows, long cols);
  static FiniteOperator diagonal(const Vector& d, Structure structure);

 private:
  Matrix entries_;
  Structure structure_;
};

struct Violation {
  std::string what;
  double deviation = 0.0;
};

struct ValidationResult {
  bool valid = true;
  std::vector<Violation> violations;
};

// Checks the structure-tag invariants; throws StructureError when a tagged
// operator is not square (dimension mismatch), otherwise reports violations.
ValidationResult validate(const FiniteOperator& op);

// Strongest structure tag the entries support within tolerance.
Structure infer_structure(const Matrix& entries);

// Ordered spectral pairs; basis columns (when present) are grouped per pair,
// column block i starting at offsets[i].
struct SpectralData {
  struct Pair {
    cplx lambda;
    long multiplicity = 1;
  };
  std::vector<Pair> pairs;  // |lambda| ascending, ties by argument ascending
  std::optional<Matrix> basis;
  std::vector<long> offsets;

  long total_multiplicity() const;
};

// Eigendecomposition with an orthonormal eigenbasis. Requires a SelfAdjoint,
// Positive or Normal tag (a general matrix need not admit one).
SpectralData extract_spectral(const FiniteOperator& op);

// Multiset union of spectral pairs; multiplicities add on collisions within
// tolerance. Bases are dropped (they live in different spaces).
SpectralData merge_spectral(const SpectralData& a, const SpectralData& b);

struct CarrierSplit {
  Matrix null_basis;     // orthonormal, spans N(T)
  Matrix carrier_basis;  // orthonormal, spans C(T) = N(T)^perp
};

struct CarrierCompression {
  CarrierSplit split;
  Matrix range_basis;  // orthonormal, spans R(T)
  // T restricted to the carrier, injective; absent for the zero operator
  // (empty carrier block).
  std::optional<FiniteOperator> compressed;

  // range_basis * compressed * carrier_basis^*; reproduces the original
  // operator within tolerance.
  Matrix embed(long rows, long cols) const;
};

// Splits the domain into kernel and carrier and compresses T to an injective
// operator on the carrier. For an invertible operator the carrier basis is
// the standard basis and the compression is T itself.
CarrierCompression restrict_to_carrier(const FiniteOperator& op);

}  // namespace amop
