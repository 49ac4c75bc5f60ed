// Sum type over the two operator representations plus mixed composition.
#pragma once

#include <variant>

#include "amop/diagonal_model.hpp"
#include "amop/finite_operator.hpp"

namespace amop {

using OperatorModel = std::variant<FiniteOperator, DiagonalModel>;

// Block-diagonal composition across representations. A finite diagonal model
// paired with a matrix is materialized; a formula-tailed model cannot be
// combined with a matrix (the result would have off-diagonal structure on an
// infinite space).
OperatorModel direct_sum(const OperatorModel& a, const OperatorModel& b);

// Dense materialization of a finite diagonal model (zero block first, then
// eigenvalues expanded by multiplicity).
FiniteOperator to_finite(const DiagonalModel& model);

}  // namespace amop
