#include "amop/operator_model.hpp"

namespace amop {

FiniteOperator to_finite(const DiagonalModel& model) {
  if (!model.is_finite_model()) {
    throw CompositionError("model with an infinite part cannot be materialized in full");
  }
  const long dim = model.finite_dimension();
  if (dim < 1) {
    throw RangeError("zero-dimensional model has no matrix form");
  }
  Vector d(dim);
  long k = 0;
  for (long i = 0; i < *model.null_dim(); ++i) d(k++) = 0.0;
  const long seq = *model.sequence_size();
  for (long i = 1; i <= seq; ++i) {
    const cplx v = model.eigenvalue(i);
    for (long j = 0; j < model.multiplicity_at(i); ++j) d(k++) = v;
  }
  Structure s = Structure::Normal;
  if (model.field() == ScalarField::Real) {
    bool nonneg = true;
    for (long i = 0; i < dim; ++i) nonneg = nonneg && d(i).real() >= 0.0;
    s = nonneg ? Structure::Positive : Structure::SelfAdjoint;
  }
  return FiniteOperator::diagonal(d, s);
}

OperatorModel direct_sum(const OperatorModel& a, const OperatorModel& b) {
  if (std::holds_alternative<FiniteOperator>(a) &&
      std::holds_alternative<FiniteOperator>(b)) {
    return direct_sum(std::get<FiniteOperator>(a), std::get<FiniteOperator>(b));
  }
  if (std::holds_alternative<DiagonalModel>(a) &&
      std::holds_alternative<DiagonalModel>(b)) {
    return direct_sum(std::get<DiagonalModel>(a), std::get<DiagonalModel>(b));
  }
  // Mixed: the diagonal side must be finite so it can be materialized.
  const auto& fin = std::holds_alternative<FiniteOperator>(a)
                        ? std::get<FiniteOperator>(a)
                        : std::get<FiniteOperator>(b);
  const auto& dia = std::holds_alternative<DiagonalModel>(a)
                        ? std::get<DiagonalModel>(a)
                        : std::get<DiagonalModel>(b);
  if (!dia.is_finite_model()) {
    throw CompositionError(
        "direct sum of a matrix with an infinite diagonal model is not "
        "representable");
  }
  if (dia.field() == ScalarField::Real &&
      (fin.entries().imag().cwiseAbs().maxCoeff() >
       1e-12 * (1.0 + fin.frobenius()))) {
    throw FieldError("direct sum mixes real and complex scalar fields");
  }
  const FiniteOperator mat = to_finite(dia);
  return std::holds_alternative<FiniteOperator>(a) ? direct_sum(fin, mat)
                                                   : direct_sum(mat, fin);
}

}  // namespace amop
