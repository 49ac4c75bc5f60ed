#include "amop/diagonal_model.hpp"

#include <cmath>

#include "amop/tolerances.hpp"

namespace amop {

namespace {

long rounded_multiplicity(double v, long index) {
  const double r = std::nearbyint(v);
  if (!std::isfinite(v) || std::fabs(v - r) > 1e-6 || r < 1.0) {
    throw StructureError("multiplicity at index " + std::to_string(index) +
                         " is not a positive integer: " + std::to_string(v));
  }
  return static_cast<long>(r);
}

}  // namespace

const char* to_string(ScalarField f) {
  return f == ScalarField::Real ? "real" : "complex";
}

DiagonalModel::DiagonalModel(std::vector<cplx> prefix,
                             std::vector<long> prefix_mults,
                             std::optional<Formula> tail,
                             std::optional<Formula> tail_mult,
                             std::optional<long> null_dim, ScalarField field)
    : prefix_(std::move(prefix)),
      prefix_mults_(std::move(prefix_mults)),
      tail_(std::move(tail)),
      tail_mult_(std::move(tail_mult)),
      null_dim_(null_dim),
      field_(field) {
  if (null_dim_ && *null_dim_ < 0) {
    throw StructureError("null_dim must be nonnegative");
  }
  if (!prefix_mults_.empty() && prefix_mults_.size() != prefix_.size()) {
    throw StructureError("multiplicity list length differs from eigenvalue list");
  }
  for (std::size_t i = 0; i < prefix_mults_.size(); ++i) {
    if (prefix_mults_[i] < 1) {
      throw StructureError("multiplicity at index " + std::to_string(i + 1) +
                           " must be >= 1");
    }
  }
  if (tail_mult_ && !tail_) {
    throw StructureError("multiplicity formula requires a formula tail");
  }

  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    const cplx v = prefix_[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw StructureError("eigenvalue " + std::to_string(i + 1) +
                           " is not finite");
    }
    // Explicit values numerically indistinguishable from zero must be
    // declared through null_dim instead.
    if (std::abs(v) <= tol::kZeroAbs) {
      throw StructureError("eigenvalue " + std::to_string(i + 1) +
                           " is within the zero threshold; use null_dim");
    }
    if (field_ == ScalarField::Real &&
        std::fabs(v.imag()) > 1e-12 * (1.0 + std::abs(v))) {
      throw FieldError("complex eigenvalue in a real-field model");
    }
  }

  if (tail_) {
    analysis_ = std::make_shared<const SequenceAnalysis>(*tail_);
    for (long n = 1; n <= tol::kScanPrefix; ++n) {
      const double v = tail_->eval(static_cast<double>(n));
      if (!std::isfinite(v)) {
        throw StructureError("formula is not finite at n=" + std::to_string(n));
      }
      // Only exact (underflow-level) zeros are rejected here: sequences may
      // legitimately decay below any fixed threshold (compact inverses).
      if (std::fabs(v) < 1e-300) {
        throw StructureError("formula vanishes at n=" + std::to_string(n) +
                             "; zero eigenvalues live in null_dim");
      }
      if (tail_mult_) {
        rounded_multiplicity(tail_mult_->eval(static_cast<double>(n)), n);
      }
    }
  }
}

DiagonalModel DiagonalModel::from_formula(Formula eigenvalues,
                                          std::optional<long> null_dim,
                                          ScalarField field) {
  return DiagonalModel({}, {}, std::move(eigenvalues), std::nullopt, null_dim,
                       field);
}

DiagonalModel DiagonalModel::from_list(std::vector<cplx> values,
                                       std::optional<long> null_dim,
                                       ScalarField field) {
  return DiagonalModel(std::move(values), {}, std::nullopt, std::nullopt,
                       null_dim, field);
}

std::optional<long> DiagonalModel::sequence_size() const {
  if (tail_) return std::nullopt;
  return static_cast<long>(prefix_.size());
}

cplx DiagonalModel::eigenvalue(long n) const {
  if (n < 1) throw RangeError("eigenvalue index must be >= 1");
  if (n <= static_cast<long>(prefix_.size())) return prefix_[n - 1];
  if (!tail_) {
    throw RangeError("eigenvalue index " + std::to_string(n) +
                     " beyond the finite sequence");
  }
  const long k = n - static_cast<long>(prefix_.size());
  return cplx(tail_->eval(static_cast<double>(k)), 0.0);
}

long DiagonalModel::multiplicity_at(long n) const {
  if (n < 1) throw RangeError("multiplicity index must be >= 1");
  if (n <= static_cast<long>(prefix_.size())) {
    return prefix_mults_.empty() ? 1 : prefix_mults_[n - 1];
  }
  if (!tail_) {
    throw RangeError("multiplicity index beyond the finite sequence");
  }
  if (!tail_mult_) return 1;
  const long k = n - static_cast<long>(prefix_.size());
  return rounded_multiplicity(tail_mult_->eval(static_cast<double>(k)), k);
}

bool DiagonalModel::is_finite_model() const {
  return !tail_ && null_dim_.has_value();
}

long DiagonalModel::finite_dimension() const {
  if (!is_finite_model()) {
    throw RangeError("model is not finite-dimensional");
  }
  long d = *null_dim_;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    d += prefix_mults_.empty() ? 1 : prefix_mults_[i];
  }
  return d;
}

DiagonalModel DiagonalModel::adjoint() const {
  std::vector<cplx> conj_prefix = prefix_;
  for (cplx& v : conj_prefix) v = std::conj(v);
  return DiagonalModel(std::move(conj_prefix), prefix_mults_, tail_, tail_mult_,
                       null_dim_, field_);
}

DiagonalModel direct_sum(const DiagonalModel& a, const DiagonalModel& b) {
  if (a.field() != b.field()) {
    throw FieldError("direct sum mixes real and complex scalar fields");
  }
  if (a.has_tail() && b.has_tail()) {
    throw CompositionError(
        "direct sum of two formula-defined sequences is not representable");
  }

  std::vector<cplx> prefix = a.prefix();
  prefix.insert(prefix.end(), b.prefix().begin(), b.prefix().end());

  std::vector<long> mults;
  if (!a.prefix_mults().empty() || !b.prefix_mults().empty()) {
    auto expand = [&mults](const DiagonalModel& m) {
      if (m.prefix_mults().empty()) {
        mults.insert(mults.end(), m.prefix().size(), 1);
      } else {
        mults.insert(mults.end(), m.prefix_mults().begin(),
                     m.prefix_mults().end());
      }
    };
    expand(a);
    expand(b);
  }

  std::optional<long> null_dim;
  if (a.null_dim() && b.null_dim()) null_dim = *a.null_dim() + *b.null_dim();

  const DiagonalModel& tail_side = a.has_tail() ? a : b;
  return DiagonalModel(std::move(prefix), std::move(mults), tail_side.tail(),
                       tail_side.tail_mult(), null_dim, a.field());
}

SpectralData read_spectral(const DiagonalModel& model, long count) {
  if (auto size = model.sequence_size(); size && count > *size) {
    throw RangeError("model supplies only " + std::to_string(*size) +
                     " eigenvalues");
  }
  SpectralData raw;
  if (!model.null_infinite() && *model.null_dim() > 0) {
    raw.pairs.push_back({cplx(0.0, 0.0), *model.null_dim()});
  }
  for (long n = 1; n <= count; ++n) {
    raw.pairs.push_back({model.eigenvalue(n), model.multiplicity_at(n)});
  }
  return merge_spectral(raw, SpectralData{});
}

FiniteOperator direct_sum(const FiniteOperator& a, const FiniteOperator& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a.entries();
  m.bottomRightCorner(b.rows(), b.cols()) = b.entries();
  // The combined block keeps the weaker of the two structure guarantees.
  auto rank = [](Structure s) {
    switch (s) {
      case Structure::Positive: return 3;
      case Structure::SelfAdjoint: return 2;
      case Structure::Normal: return 1;
      default: return 0;
    }
  };
  Structure s = rank(a.structure()) < rank(b.structure()) ? a.structure()
                                                          : b.structure();
  return FiniteOperator(std::move(m), s);
}

}  // namespace amop
