#include "amop/finite_operator.hpp"

#include <algorithm>
#include <cmath>

#include "amop/tolerances.hpp"

namespace amop {

namespace {

// Deterministic ordering: |lambda| ascending, ties by argument ascending.
bool spectral_less(const cplx& a, const cplx& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  return std::arg(a) < std::arg(b);
}

}  // namespace

const char* to_string(Structure s) {
  switch (s) {
    case Structure::General: return "general";
    case Structure::SelfAdjoint: return "self-adjoint";
    case Structure::Normal: return "normal";
    case Structure::Positive: return "positive";
  }
  return "general";
}

FiniteOperator::FiniteOperator(Matrix entries, Structure structure)
    : entries_(std::move(entries)), structure_(structure) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw StructureError("operator must have at least one row and column");
  }
}

FiniteOperator FiniteOperator::identity(long n) {
  return FiniteOperator(Matrix::Identity(n, n), Structure::Positive);
}

FiniteOperator FiniteOperator::zero(long rows, long cols) {
  return FiniteOperator(Matrix::Zero(rows, cols),
                        rows == cols ? Structure::Positive : Structure::General);
}

FiniteOperator FiniteOperator::diagonal(const Vector& d, Structure structure) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  m.diagonal() = d;
  return FiniteOperator(std::move(m), structure);
}

ValidationResult validate(const FiniteOperator& op) {
  ValidationResult out;
  const Structure s = op.structure();
  if (s == Structure::General) return out;
  if (!op.is_square()) {
    throw StructureError(std::string("structure tag '") + to_string(s) +
                         "' requires a square matrix, got " +
                         std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()));
  }
  const Matrix& t = op.entries();
  const double scale = std::max(op.frobenius(), 1e-300);

  if (s == Structure::SelfAdjoint || s == Structure::Positive) {
    const double dev = (t - t.adjoint()).norm();
    if (dev > tol::kStruct * scale) {
      out.valid = false;
      out.violations.push_back({"entries differ from conjugate transpose", dev});
    }
  }
  if (s == Structure::Normal) {
    const double dev = (t * t.adjoint() - t.adjoint() * t).norm();
    if (dev > tol::kStruct * scale * scale) {
      out.valid = false;
      out.violations.push_back({"T*T differs from T T*", dev});
    }
  }
  if (s == Structure::Positive && out.valid) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(t);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -tol::kStruct * std::max(scale, 1.0)) {
      out.valid = false;
      out.violations.push_back({"negative eigenvalue", -lo});
    }
  }
  return out;
}

Structure infer_structure(const Matrix& entries) {
  if (entries.rows() != entries.cols()) return Structure::General;
  const double scale = std::max(entries.norm(), 1e-300);
  const bool hermitian =
      (entries - entries.adjoint()).norm() <= tol::kStruct * scale;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries);
    if (es.eigenvalues().minCoeff() >= -tol::kStruct * std::max(scale, 1.0)) {
      return Structure::Positive;
    }
    return Structure::SelfAdjoint;
  }
  const double comm = (entries * entries.adjoint() - entries.adjoint() * entries).norm();
  if (comm <= tol::kStruct * scale * scale) return Structure::Normal;
  return Structure::General;
}

long SpectralData::total_multiplicity() const {
  long n = 0;
  for (const auto& p : pairs) n += p.multiplicity;
  return n;
}

SpectralData extract_spectral(const FiniteOperator& op) {
  const Structure s = op.structure();
  if (s == Structure::General) {
    throw StructureError(
        "spectral extraction needs a self-adjoint, positive or normal tag");
  }
  auto res = validate(op);
  if (!res.valid) {
    throw StructureError("structure tag invalid: " + res.violations[0].what);
  }

  const long n = op.rows();
  Vector lambdas(n);
  Matrix basis(n, n);
  if (s == Structure::SelfAdjoint || s == Structure::Positive) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.entries());
    lambdas = es.eigenvalues().cast<cplx>();
    basis = es.eigenvectors();
  } else {
    Eigen::ComplexSchur<Matrix> schur(op.entries());
    // Normality makes the Schur form diagonal up to rounding.
    Matrix t = schur.matrixT();
    const double off = (t - Matrix(t.diagonal().asDiagonal())).norm();
    if (off > 1e-7 * std::max(op.frobenius(), 1.0)) {
      throw StructureError("matrix is not normal within tolerance");
    }
    lambdas = t.diagonal();
    basis = schur.matrixU();
  }

  std::vector<long> order(n);
  for (long i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](long i, long j) {
    return spectral_less(lambdas(i), lambdas(j));
  });

  SpectralData out;
  Matrix sorted(n, n);
  for (long k = 0; k < n; ++k) sorted.col(k) = basis.col(order[k]);
  out.basis = std::move(sorted);

  // Cluster equal eigenvalues within tolerance into multiplicity groups.
  const double cluster_tol = 1e-8 * std::max(op.frobenius(), 1.0);
  long k = 0;
  while (k < n) {
    long j = k + 1;
    while (j < n &&
           std::abs(lambdas(order[j]) - lambdas(order[k])) <= cluster_tol) {
      ++j;
    }
    out.offsets.push_back(k);
    out.pairs.push_back({lambdas(order[k]), j - k});
    k = j;
  }
  return out;
}

SpectralData merge_spectral(const SpectralData& a, const SpectralData& b) {
  SpectralData out;
  std::vector<SpectralData::Pair> all = a.pairs;
  all.insert(all.end(), b.pairs.begin(), b.pairs.end());
  std::sort(all.begin(), all.end(),
            [](const SpectralData::Pair& x, const SpectralData::Pair& y) {
              return spectral_less(x.lambda, y.lambda);
            });
  double scale = 1.0;
  for (const auto& p : all) scale = std::max(scale, std::abs(p.lambda));
  for (const auto& p : all) {
    if (!out.pairs.empty() &&
        std::abs(out.pairs.back().lambda - p.lambda) <= 1e-8 * scale) {
      out.pairs.back().multiplicity += p.multiplicity;
    } else {
      out.pairs.push_back(p);
    }
  }
  return out;
}

Matrix CarrierCompression::embed(long rows, long cols) const {
  Matrix t = Matrix::Zero(rows, cols);
  if (compressed && split.carrier_basis.cols() > 0) {
    t = range_basis * compressed->entries() * split.carrier_basis.adjoint();
  }
  return t;
}

CarrierCompression restrict_to_carrier(const FiniteOperator& op) {
  const long rows = op.rows(), cols = op.cols();
  Eigen::JacobiSVD<Matrix> svd(op.entries(),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? tol::kZeroRel * sv(0) : 0.0;
  long rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  CarrierCompression out;

  if (rank == cols && rows == cols) {
    // Trivial kernel on a square operator: keep the standard bases so the
    // compression is the operator itself.
    out.split.null_basis = Matrix::Zero(cols, 0);
    out.split.carrier_basis = Matrix::Identity(cols, cols);
    out.range_basis = Matrix::Identity(rows, rows);
    out.compressed = op;
    return out;
  }

  out.split.carrier_basis = svd.matrixV().leftCols(rank);
  out.split.null_basis = svd.matrixV().rightCols(cols - rank);
  out.range_basis = svd.matrixU().leftCols(rank);
  if (rank == 0) {
    return out;  // zero operator: empty carrier block
  }
  Matrix t0 = out.range_basis.adjoint() * op.entries() * out.split.carrier_basis;
  out.compressed = FiniteOperator(std::move(t0), Structure::General);
  return out;
}

}  // namespace amop
