// Lazily-defined diagonal operators: an eigenvalue sequence given as an
// explicit finite list, a formula over n, or a list-prefix followed by a
// formula tail (the direct-sum closure of the first two), with per-index
// multiplicities and a separate zero block of finite or infinite dimension.
// Unbounded operators are representable without truncation; truncation is
// an explicit act (see truncation.hpp).
#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "amop/finite_operator.hpp"
#include "amop/formula.hpp"
#include "amop/sequence.hpp"

namespace amop {

enum class ScalarField { Real, Complex };

const char* to_string(ScalarField f);

class DiagonalModel {
 public:
  // null_dim: nullopt means an infinite-dimensional kernel.
  DiagonalModel(std::vector<cplx> prefix, std::vector<long> prefix_mults,
                std::optional<Formula> tail, std::optional<Formula> tail_mult,
                std::optional<long> null_dim, ScalarField field);

  static DiagonalModel from_formula(Formula eigenvalues,
                                    std::optional<long> null_dim,
                                    ScalarField field);
  static DiagonalModel from_list(std::vector<cplx> values,
                                 std::optional<long> null_dim,
                                 ScalarField field);

  const std::vector<cplx>& prefix() const { return prefix_; }
  const std::vector<long>& prefix_mults() const { return prefix_mults_; }
  const std::optional<Formula>& tail() const { return tail_; }
  const std::optional<Formula>& tail_mult() const { return tail_mult_; }
  std::optional<long> null_dim() const { return null_dim_; }
  bool null_infinite() const { return !null_dim_.has_value(); }
  ScalarField field() const { return field_; }

  bool has_tail() const { return tail_.has_value(); }
  // Count of sequence indices (not expanded by multiplicity); nullopt when
  // the sequence is infinite.
  std::optional<long> sequence_size() const;
  // 1-based access over prefix then tail.
  cplx eigenvalue(long n) const;
  long multiplicity_at(long n) const;

  bool is_finite_model() const;
  // Total dimension including the zero block; requires is_finite_model().
  long finite_dimension() const;

  // Analysis of the tail formula; null when there is no tail.
  const SequenceAnalysis* tail_analysis() const { return analysis_.get(); }

  // Entrywise-conjugated model (the adjoint of a diagonal operator).
  DiagonalModel adjoint() const;

 private:
  std::vector<cplx> prefix_;
  std::vector<long> prefix_mults_;  // empty = all ones
  std::optional<Formula> tail_;
  std::optional<Formula> tail_mult_;  // evaluated at tail-local index
  std::optional<long> null_dim_;
  ScalarField field_;
  std::shared_ptr<const SequenceAnalysis> analysis_;
};

// Block-diagonal composition: zero blocks add, eigenvalue sequences
// concatenate. At most one operand may carry a formula tail.
DiagonalModel direct_sum(const DiagonalModel& a, const DiagonalModel& b);
FiniteOperator direct_sum(const FiniteOperator& a, const FiniteOperator& b);

// First `count` sequence entries (multiplicities kept) plus the zero block
// when finite; no basis. Ordered like every SpectralData.
SpectralData read_spectral(const DiagonalModel& model, long count);

}  // namespace amop
