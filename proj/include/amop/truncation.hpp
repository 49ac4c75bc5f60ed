// Finite sections of diagonal models, optionally hidden behind a seeded
// random unitary similarity, and the identity/property suites run at
// increasing sizes: the desk-scale verification engine.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amop/calculus.hpp"
#include "amop/diagonal_model.hpp"

namespace amop {

struct TruncationPlan {
  std::vector<long> sizes = {4, 8, 16, 32, 64};
  bool conjugate = false;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;  // empty = defaults for the model
};

struct ConvergenceRecord {
  std::string check_id;
  std::vector<double> values;  // one per size
  bool monotone = false;       // values are monotone across sizes
  std::optional<double> limit_estimate;  // last-value extrapolation
  double bound = 0.0;          // pass threshold; +inf marks a trend row
  bool passed = true;
};

// n-by-n finite section: zero block first (an infinite zero block take
// ceil(n/2) slots, mirroring the two summands of H (+) H), then eigenvalues
// expanded by multiplicity. Conjugation applies a Haar-ish random unitary
// built from the seed. The structure tag is SelfAdjoint for real-field
// models, Normal otherwise.
FiniteOperator materialize(const DiagonalModel& model, long n, bool conjugate,
                           std::uint64_t seed);

// Orthonormalized seeded complex Gaussian matrix with phase-fixed columns;
// deterministic per (n, seed).
Matrix random_unitary(long n, std::uint64_t seed);

// Unit vector attaining the minimum modulus (smallest singular direction)
// together with the attained value.
std::pair<Vector, double> attaining_vector(const FiniteOperator& op);

// Known check identifiers, bounded and trend rows alike.
std::vector<std::string> known_checks();
// Applicable defaults (drops the self-adjoint-only checks on complex models).
std::vector<std::string> default_checks(const DiagonalModel& model);

// Runs every requested check at every plan size. Unknown identifiers raise
// ConfigError; results are deterministic given (model, plan).
std::vector<ConvergenceRecord> run_suite(const DiagonalModel& model,
                                         const TruncationPlan& plan);

}  // namespace amop
