#include "amop/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amop/tolerances.hpp"

namespace amop {

namespace {

Eigen::JacobiSVD<Matrix> thin_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

// Functional calculus on T^*T: returns Q f(s) Q^* where T^*T = Q s Q^*.
template <typename F>
Matrix gram_calculus(const Matrix& t, F&& f) {
  const Matrix gram = t.adjoint() * t;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Eigen::VectorXd s = es.eigenvalues();
  Eigen::VectorXd mapped(s.size());
  const double top = std::max(s.maxCoeff(), 0.0);
  for (long i = 0; i < s.size(); ++i) mapped(i) = f(s(i), top);
  return es.eigenvectors() * mapped.asDiagonal().toDenseMatrix().cast<cplx>() *
         es.eigenvectors().adjoint();
}

void require_tag(const FiniteOperator& op, Structure tag, const char* what) {
  if (op.structure() != tag &&
      !(tag == Structure::SelfAdjoint && op.structure() == Structure::Positive)) {
    throw StructureError(std::string(what) + " requires a " + to_string(tag) +
                         " structure tag, got " + to_string(op.structure()));
  }
  auto res = validate(op);
  if (!res.valid) {
    throw StructureError(std::string(what) + ": structure tag invalid: " +
                         res.violations[0].what);
  }
}

Formula reciprocal_formula(const Formula& f) {
  return Formula(make_binary(FormulaOp::Div, make_number(1.0), f.root_ptr()));
}

Formula abs_formula(const Formula& f) {
  return Formula(make_unary(FormulaOp::Abs, f.root_ptr()));
}

Formula transform_formula(const Formula& f) {
  // lambda / sqrt(1 + lambda^2)
  auto sq = make_binary(FormulaOp::Pow, f.root_ptr(), make_number(2.0));
  auto rad = make_unary(FormulaOp::Sqrt,
                        make_binary(FormulaOp::Add, make_number(1.0), sq));
  return Formula(make_binary(FormulaOp::Div, f.root_ptr(), rad));
}

}  // namespace

// --- minimum modulus --------------------------------------------------------

double minimum_modulus(const FiniteOperator& op) {
  Eigen::JacobiSVD<Matrix> svd(op.entries());
  return svd.singularValues().minCoeff();
}

MinimumModulus minimum_modulus(const DiagonalModel& model) {
  MinimumModulus out;

  const bool has_kernel = model.null_infinite() || *model.null_dim() > 0;
  if (has_kernel) {
    out.value = 0.0;
    out.attainment = Attainment::Attained;
    out.exact = true;
    out.witness_index = 0;
    out.note = "kernel vector attains the infimum";
    return out;
  }

  double prefix_min = std::numeric_limits<double>::infinity();
  long prefix_arg = 0;
  for (long i = 1; i <= static_cast<long>(model.prefix().size()); ++i) {
    const double v = std::abs(model.eigenvalue(i));
    if (v < prefix_min) {
      prefix_min = v;
      prefix_arg = i;
    }
  }

  if (!model.has_tail()) {
    if (model.prefix().empty()) {
      // Zero-dimensional domain: the convention is +infinity, flagged.
      out.value = std::numeric_limits<double>::infinity();
      out.attainment = Attainment::NotAttained;
      out.exact = true;
      out.note = "trivial domain; minimum modulus is +infinity by convention";
      return out;
    }
    out.value = prefix_min;
    out.attainment = Attainment::Attained;
    out.exact = true;
    out.witness_index = prefix_arg;
    return out;
  }

  InfimumResult tail = model.tail_analysis()->infimum_abs(IndexSet::all());
  const long shift = static_cast<long>(model.prefix().size());
  if (prefix_min <= tail.value) {
    out.value = prefix_min;
    out.witness_index = prefix_arg;
    // The prefix value undercuts the tail only when the tail infimum is
    // trustworthy as a lower bound, which requires a certificate.
    out.attainment = tail.certified ? Attainment::Attained
                                    : Attainment::Undecidable;
    out.exact = tail.certified;
    out.note = tail.certified ? "explicit eigenvalue attains the infimum"
                              : tail.note;
    return out;
  }
  out.value = tail.value;
  out.attainment = tail.attainment;
  out.exact = tail.certified;
  if (tail.witness) out.witness_index = *tail.witness + shift;
  out.note = tail.note;
  return out;
}

InfimumResult sequence_infimum_abs(const DiagonalModel& model,
                                   const IndexSet& subset) {
  // Pure-formula models delegate to the sequence machinery directly.
  if (model.prefix().empty() && model.has_tail()) {
    return model.tail_analysis()->infimum_abs(subset);
  }

  // With an explicit prefix, split the subset at the prefix boundary.
  const long shift = static_cast<long>(model.prefix().size());
  InfimumResult out;
  double best = std::numeric_limits<double>::infinity();
  long arg = 0;
  for (long n = 1; n <= shift; ++n) {
    if (!subset.contains(n)) continue;
    const double v = std::abs(model.eigenvalue(n));
    if (v < best) {
      best = v;
      arg = n;
    }
  }

  if (!model.has_tail()) {
    if (!std::isfinite(best) && arg == 0) {
      out.value = std::numeric_limits<double>::infinity();
      out.attainment = Attainment::NotAttained;
      out.certified = true;
      out.note = "subset selects no eigenvalue";
      return out;
    }
    out.value = best;
    out.attainment = Attainment::Attained;
    out.certified = true;
    out.witness = arg;
    return out;
  }

  // Translate the subset into tail-local indices.
  IndexSet tail_set = [&]() -> IndexSet {
    switch (subset.kind()) {
      case IndexSet::Kind::All:
        return IndexSet::all();
      case IndexSet::Kind::Finite: {
        std::vector<long> v;
        for (long m : subset.values()) {
          if (m > shift) v.push_back(m - shift);
        }
        return IndexSet::finite(std::move(v));
      }
      case IndexSet::Kind::Cofinite: {
        std::vector<long> v;
        for (long m : subset.values()) {
          if (m > shift) v.push_back(m - shift);
        }
        return IndexSet::cofinite(std::move(v));
      }
      case IndexSet::Kind::Periodic: {
        std::vector<long> v;
        for (long r : subset.values()) {
          v.push_back(((r - shift) % subset.modulus() + subset.modulus()) %
                      subset.modulus());
        }
        return IndexSet::periodic(subset.modulus(), std::move(v));
      }
    }
    return IndexSet::all();
  }();

  InfimumResult tail = model.tail_analysis()->infimum_abs(tail_set);
  if (arg != 0 && best <= tail.value) {
    out.value = best;
    out.witness = arg;
    out.attainment =
        tail.certified ? Attainment::Attained : Attainment::Undecidable;
    out.certified = tail.certified;
    out.note = "explicit eigenvalue attains the subset infimum";
    return out;
  }
  if (tail.witness) tail.witness = *tail.witness + shift;
  return tail;
}

InfimumResult minimum_modulus_attained(const DiagonalModel& model,
                                       const IndexSet& subset) {
  if (model.field() != ScalarField::Real) {
    throw StructureError("subset attainment requires a positive (real) model");
  }
  for (long i = 1; i <= static_cast<long>(model.prefix().size()); ++i) {
    if (model.eigenvalue(i).real() < 0.0) {
      throw StructureError("subset attainment requires nonnegative eigenvalues");
    }
  }
  if (model.tail_analysis() &&
      model.tail_analysis()->nonnegative() == TriState::No) {
    throw StructureError("subset attainment requires nonnegative eigenvalues");
  }
  return sequence_infimum_abs(model, subset);
}

// --- modulus, square root, polar --------------------------------------------

FiniteOperator modulus(const FiniteOperator& op) {
  Matrix m = gram_calculus(op.entries(), [](double s, double) {
    return std::sqrt(std::max(s, 0.0));
  });
  return FiniteOperator(std::move(m), Structure::Positive);
}

DiagonalModel modulus(const DiagonalModel& model) {
  std::vector<cplx> prefix;
  prefix.reserve(model.prefix().size());
  for (const cplx& v : model.prefix()) prefix.emplace_back(std::abs(v), 0.0);
  std::optional<Formula> tail;
  if (model.tail()) tail = abs_formula(*model.tail());
  return DiagonalModel(std::move(prefix), model.prefix_mults(), std::move(tail),
                       model.tail_mult(), model.null_dim(), ScalarField::Real);
}

FiniteOperator sqrt_positive(const FiniteOperator& op) {
  require_tag(op, Structure::Positive, "square root");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.entries());
  const Eigen::VectorXd& s = es.eigenvalues();
  const double scale = std::max(op.frobenius(), 1.0);
  if (s.minCoeff() < -tol::kStruct * scale) {
    throw StructureError("square root: eigenvalue below the positive cone");
  }
  Eigen::VectorXd r(s.size());
  for (long i = 0; i < s.size(); ++i) r(i) = std::sqrt(std::max(s(i), 0.0));
  Matrix m = es.eigenvectors() *
             r.asDiagonal().toDenseMatrix().cast<cplx>() *
             es.eigenvectors().adjoint();
  return FiniteOperator(std::move(m), Structure::Positive);
}

PolarParts polar_decompose(const FiniteOperator& op) {
  // |T| and its pseudoinverse from one eigendecomposition of T^*T; this is
  // the spectral route, independent of the SVD-based oracle used in tests.
  const Matrix gram = op.entries().adjoint() * op.entries();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Eigen::VectorXd& s = es.eigenvalues();
  const double top = std::max(s.maxCoeff(), 0.0);
  const double cutoff = tol::kZeroRel * tol::kZeroRel * top;
  Eigen::VectorXd root(s.size()), inv_root(s.size());
  for (long i = 0; i < s.size(); ++i) {
    root(i) = std::sqrt(std::max(s(i), 0.0));
    inv_root(i) = s(i) > cutoff ? 1.0 / root(i) : 0.0;
  }
  const Matrix q = es.eigenvectors();
  Matrix mod = q * root.asDiagonal().toDenseMatrix().cast<cplx>() * q.adjoint();
  Matrix mod_pinv =
      q * inv_root.asDiagonal().toDenseMatrix().cast<cplx>() * q.adjoint();
  Matrix v = op.entries() * mod_pinv;
  return PolarParts{FiniteOperator(std::move(v), Structure::General),
                    FiniteOperator(std::move(mod), Structure::Positive)};
}

// --- Moore-Penrose -----------------------------------------------------------

FiniteOperator moore_penrose(const FiniteOperator& op) {
  auto svd = thin_svd(op.entries());
  const auto& s = svd.singularValues();
  const double cutoff = s.size() ? tol::kZeroRel * s(0) : 0.0;
  Eigen::VectorXd inv(s.size());
  for (long i = 0; i < s.size(); ++i) inv(i) = s(i) > cutoff ? 1.0 / s(i) : 0.0;
  Matrix dagger = svd.matrixV() *
                  inv.asDiagonal().toDenseMatrix().cast<cplx>() *
                  svd.matrixU().adjoint();
  return FiniteOperator(std::move(dagger), Structure::General);
}

DiagonalModel moore_penrose(const DiagonalModel& model) {
  std::vector<cplx> prefix;
  prefix.reserve(model.prefix().size());
  for (const cplx& v : model.prefix()) prefix.push_back(1.0 / v);
  std::optional<Formula> tail;
  if (model.tail()) tail = reciprocal_formula(*model.tail());
  return DiagonalModel(std::move(prefix), model.prefix_mults(), std::move(tail),
                       model.tail_mult(), model.null_dim(), model.field());
}

double MpDeviations::max() const {
  return std::max({projection_range, projection_carrier, kernel, reproduce_t,
                   reproduce_dagger});
}

MpDeviations mp_deviations(const FiniteOperator& op,
                           const FiniteOperator& dagger) {
  const Matrix& t = op.entries();
  const Matrix& d = dagger.entries();
  const double st = std::max(t.norm(), 1e-300);
  const double sd = std::max(d.norm(), 1e-300);

  MpDeviations out;
  const Matrix td = t * d;  // candidate projector onto R(T)
  const Matrix dt = d * t;  // candidate projector onto the carrier
  const double std_ = std::max(td.norm(), 1.0);
  const double sdt = std::max(dt.norm(), 1.0);
  out.projection_range =
      ((td * td - td).norm() + (td.adjoint() - td).norm()) / std_;
  out.projection_carrier =
      ((dt * dt - dt).norm() + (dt.adjoint() - dt).norm()) / sdt;
  out.kernel = (d * (Matrix::Identity(t.rows(), t.rows()) - td)).norm() / sd;
  out.reproduce_t = (t * dt - t).norm() / st;
  out.reproduce_dagger = (d * td - d).norm() / sd;
  return out;
}

LeastSquaresSolution least_squares_min_norm(const FiniteOperator& op,
                                            const Vector& y) {
  if (y.size() != op.rows()) {
    throw RangeError("right-hand side has dimension " +
                     std::to_string(y.size()) + ", operator has " +
                     std::to_string(op.rows()) + " rows");
  }
  const FiniteOperator dagger = moore_penrose(op);
  LeastSquaresSolution out;
  out.solution = dagger.entries() * y;
  out.residual_norm = (op.entries() * out.solution - y).norm();
  out.mp_certificate = mp_deviations(op, dagger).max();
  return out;
}

// --- bounded transform -------------------------------------------------------

FiniteOperator bounded_transform(const FiniteOperator& op) {
  Matrix w = gram_calculus(op.entries(), [](double s, double) {
    return 1.0 / std::sqrt(1.0 + std::max(s, 0.0));
  });
  Matrix z = op.entries() * w;
  Structure tag = op.is_square() ? op.structure() : Structure::General;
  return FiniteOperator(std::move(z), tag);
}

DiagonalModel bounded_transform(const DiagonalModel& model) {
  std::vector<cplx> prefix;
  prefix.reserve(model.prefix().size());
  for (const cplx& v : model.prefix()) {
    prefix.push_back(v / std::sqrt(1.0 + std::norm(v)));
  }
  std::optional<Formula> tail;
  if (model.tail()) tail = transform_formula(*model.tail());
  return DiagonalModel(std::move(prefix), model.prefix_mults(), std::move(tail),
                       model.tail_mult(), model.null_dim(), model.field());
}

// --- resolvent ----------------------------------------------------------------

cplx ResolventSample::coefficient(long n) const {
  if (!base) throw RangeError("coefficient access on a finite resolvent");
  return 1.0 / (base->eigenvalue(n) - lambda);
}

cplx ResolventSample::null_coefficient() const { return -1.0 / lambda; }

ResolventSample resolvent(const FiniteOperator& op, cplx lambda) {
  if (!op.is_square()) {
    throw StructureError("resolvent requires a square operator");
  }
  Eigen::ComplexEigenSolver<Matrix> es(op.entries());
  const auto& ev = es.eigenvalues();
  for (long i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - lambda) <= tol::kZeroAbs) {
      throw SpectrumError("lambda within the zero threshold of eigenvalue " +
                          std::to_string(i));
    }
  }
  Matrix shifted = op.entries() -
                   lambda * Matrix::Identity(op.rows(), op.cols());
  ResolventSample out;
  out.lambda = lambda;
  out.inverse = FiniteOperator(shifted.partialPivLu().inverse(),
                               Structure::General);
  out.coefficient_decay = true;  // finite rank: trivially compact
  return out;
}

ResolventSample resolvent(const DiagonalModel& model, cplx lambda) {
  const bool has_kernel = model.null_infinite() || *model.null_dim() > 0;
  if (has_kernel && std::abs(lambda) <= tol::kZeroAbs) {
    throw SpectrumError("lambda within the zero threshold of the kernel");
  }
  for (long i = 1; i <= static_cast<long>(model.prefix().size()); ++i) {
    if (std::abs(model.eigenvalue(i) - lambda) <= tol::kZeroAbs) {
      throw SpectrumError("lambda within the zero threshold of eigenvalue " +
                          std::to_string(i));
    }
  }
  bool certified = true;
  if (model.has_tail()) {
    if (std::fabs(lambda.imag()) > tol::kZeroAbs) {
      // real spectrum: the imaginary offset alone is a distance bound
    } else {
      auto dist = model.tail_analysis()->certified_abs_distance(lambda.real());
      if (dist && *dist > tol::kZeroAbs) {
        // certified by the formula analyzer
      } else if (dist) {
        throw SpectrumError("lambda within the zero threshold of the spectrum");
      } else {
        // scan fallback: acceptable only alongside certified divergence,
        // which pushes the tail away from any fixed lambda eventually
        bool scan_ok = model.tail_analysis()->unbounded_abs();
        if (scan_ok) {
          for (long n = 1; n <= tol::kScanPrefix && scan_ok; ++n) {
            scan_ok = std::abs(cplx(model.tail()->eval(n), 0.0) - lambda) >
                      tol::kZeroAbs;
          }
        }
        if (!scan_ok) {
          throw SpectrumError(
              "cannot certify the distance from lambda to the spectrum");
        }
        certified = false;
      }
    }
  }
  (void)certified;
  ResolventSample out;
  out.lambda = lambda;
  out.base = model;
  out.coefficient_decay =
      !model.has_tail() || model.tail_analysis()->unbounded_abs();
  return out;
}

// --- the S + iI identity -------------------------------------------------------

std::pair<double, double> perturbed_min_modulus_check(const FiniteOperator& op) {
  require_tag(op, Structure::SelfAdjoint, "perturbed minimum modulus");
  const long n = op.rows();
  Matrix shifted = op.entries() + cplx(0.0, 1.0) * Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(shifted);
  const double lhs = svd.singularValues().minCoeff();

  Eigen::SelfAdjointEigenSolver<Matrix> es(op.entries());
  const double m = es.eigenvalues().cwiseAbs().minCoeff();
  const double rhs = std::sqrt(1.0 + m * m);
  return {lhs, rhs};
}

}  // namespace amop
