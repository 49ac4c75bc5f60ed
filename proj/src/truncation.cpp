#include "amop/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "amop/classifier.hpp"
#include "amop/tolerances.hpp"

namespace amop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t seed, long size) {
  return seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(size + 1));
}

Vector seeded_probe(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  v.normalize();
  return v;
}

double check_value(const std::string& id, const FiniteOperator& m,
                   const Vector& diag_entries, std::uint64_t seed) {
  const Matrix& t = m.entries();
  const long n = t.rows();
  const double scale = 1.0 + m.frobenius();

  if (id == "mp_axioms") {
    return mp_deviations(m, moore_penrose(m)).max();
  }
  if (id == "bounded_transform") {
    const FiniteOperator z = bounded_transform(m);
    const Matrix gram = t.adjoint() * t;
    const Matrix lhs = z.entries().adjoint() * z.entries();
    const Matrix rhs =
        Matrix::Identity(n, n) -
        (Matrix::Identity(n, n) + gram).partialPivLu().inverse();
    return (lhs - rhs).norm() / std::sqrt(static_cast<double>(n));
  }
  if (id == "znorm") {
    Eigen::JacobiSVD<Matrix> svd(bounded_transform(m).entries());
    return svd.singularValues().maxCoeff();
  }
  if (id == "perturb") {
    auto [lhs, rhs] = perturbed_min_modulus_check(m);
    return std::fabs(lhs * lhs - rhs * rhs);
  }
  if (id == "polar") {
    const PolarParts parts = polar_decompose(m);
    const Matrix& v = parts.partial_isometry.entries();
    const double rec =
        (v * parts.modulus.entries() - t).norm() / scale;
    const Matrix vv = v.adjoint() * v;
    const double iso =
        ((vv * vv - vv).norm() + (vv.adjoint() - vv).norm()) /
        std::max(1.0, vv.norm());
    return std::max(rec, iso);
  }
  if (id == "carrier") {
    const CarrierCompression cc = restrict_to_carrier(m);
    return (cc.embed(m.rows(), m.cols()) - t).norm() / scale;
  }
  if (id == "minmod_oracle") {
    const double direct = minimum_modulus(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(t.adjoint() * t);
    const double oracle = std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0));
    return std::fabs(direct - oracle) / (1.0 + direct);
  }
  if (id == "resolvent") {
    const cplx lambda(0.0, 1.0 + m.frobenius());
    const ResolventSample rs = resolvent(m, lambda);
    const Matrix prod =
        (t - lambda * Matrix::Identity(n, n)) * rs.inverse->entries();
    return (prod - Matrix::Identity(n, n)).norm() /
           std::sqrt(static_cast<double>(n));
  }
  if (id == "synthesis") {
    const SpectralData data = extract_spectral(m);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Vector x = seeded_probe(n, seed + 17 * k + 3);
      worst = std::max(worst,
                       (spectral_synthesize(data, x) - t * x).norm() / scale);
    }
    return worst;
  }
  if (id == "attain") {
    auto [x, reached] = attaining_vector(m);
    return std::fabs(reached - minimum_modulus(m)) / (1.0 + reached);
  }
  if (id == "reciprocal_decay") {
    // Largest singular value of the generalized inverse on the carrier,
    // i.e. the reciprocal of the smallest nonzero singular value; for AM
    // models it decays like 1/|lambda| as the section grows.
    Eigen::JacobiSVD<Matrix> svd(t);
    const auto& s = svd.singularValues();
    const double cutoff = tol::kZeroRel * s(0);
    double smallest = 0.0;
    for (long i = s.size() - 1; i >= 0; --i) {
      if (s(i) > cutoff) {
        smallest = s(i);
        break;
      }
    }
    (void)diag_entries;
    return smallest > 0.0 ? 1.0 / smallest : 0.0;
  }
  throw ConfigError("unknown check id '" + id + "'");
}

double check_bound(const std::string& id) {
  if (id == "znorm") return 1.0 + tol::kNum;
  if (id == "perturb") return 1e-10;
  if (id == "reciprocal_decay") return kInf;  // trend row
  return tol::kNum;
}

}  // namespace

Matrix random_unitary(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0, 0.0);
  }
  return q;
}

FiniteOperator materialize(const DiagonalModel& model, long n, bool conjugate,
                           std::uint64_t seed) {
  if (n < 1) throw RangeError("section size must be >= 1");
  Vector d(n);
  long k = 0;
  const long zeros = model.null_infinite()
                         ? (n + 1) / 2
                         : std::min<long>(*model.null_dim(), n);
  for (long i = 0; i < zeros; ++i) d(k++) = 0.0;
  long idx = 1;
  while (k < n) {
    cplx v;
    try {
      v = model.eigenvalue(idx);
    } catch (const RangeError&) {
      throw RangeError("model supplies fewer than " + std::to_string(n) +
                       " diagonal entries");
    }
    const long mult = model.multiplicity_at(idx);
    for (long j = 0; j < mult && k < n; ++j) d(k++) = v;
    ++idx;
  }

  const Structure tag = model.field() == ScalarField::Real
                            ? Structure::SelfAdjoint
                            : Structure::Normal;
  if (!conjugate) return FiniteOperator::diagonal(d, tag);
  const Matrix u = random_unitary(n, mix_seed(seed, n));
  Matrix m = u * d.asDiagonal() * u.adjoint();
  if (tag == Structure::SelfAdjoint) m = (m + m.adjoint()) / 2.0;
  return FiniteOperator(std::move(m), tag);
}

std::pair<Vector, double> attaining_vector(const FiniteOperator& op) {
  Eigen::JacobiSVD<Matrix> svd(op.entries(), Eigen::ComputeThinV);
  const Vector x = svd.matrixV().col(svd.matrixV().cols() - 1);
  return {x, (op.entries() * x).norm()};
}

std::vector<std::string> known_checks() {
  return {"mp_axioms", "bounded_transform", "znorm",   "perturb",
          "polar",     "carrier",           "minmod_oracle", "resolvent",
          "synthesis", "attain",            "reciprocal_decay"};
}

std::vector<std::string> default_checks(const DiagonalModel& model) {
  std::vector<std::string> all = known_checks();
  if (model.field() != ScalarField::Real) {
    std::erase(all, "perturb");
  }
  return all;
}

std::vector<ConvergenceRecord> run_suite(const DiagonalModel& model,
                                         const TruncationPlan& plan) {
  if (plan.sizes.empty()) throw ConfigError("plan has no sizes");
  for (std::size_t i = 0; i < plan.sizes.size(); ++i) {
    if (plan.sizes[i] < 1 || (i > 0 && plan.sizes[i] <= plan.sizes[i - 1])) {
      throw ConfigError("sizes must be strictly ascending and >= 1");
    }
  }
  std::vector<std::string> checks =
      plan.checks.empty() ? default_checks(model) : plan.checks;
  const auto known = known_checks();
  for (const auto& id : checks) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw ConfigError("unknown check id '" + id + "'");
    }
    if (id == "perturb" && model.field() != ScalarField::Real) {
      throw ConfigError("check 'perturb' requires a real (self-adjoint) model");
    }
  }

  std::vector<ConvergenceRecord> out;
  out.reserve(checks.size());
  for (const auto& id : checks) {
    ConvergenceRecord rec;
    rec.check_id = id;
    rec.bound = check_bound(id);
    for (long size : plan.sizes) {
      const FiniteOperator m =
          materialize(model, size, plan.conjugate, plan.seed);
      Vector diag(size);
      const FiniteOperator plain = materialize(model, size, false, plan.seed);
      diag = plain.entries().diagonal();
      const double v = check_value(id, m, diag, mix_seed(plan.seed, size));
      rec.values.push_back(v);
      rec.passed = rec.passed && (v <= rec.bound);
    }
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < rec.values.size(); ++i) {
      const double slack = 1e-15 * (1.0 + std::fabs(rec.values[i - 1]));
      inc = inc && rec.values[i] >= rec.values[i - 1] - slack;
      dec = dec && rec.values[i] <= rec.values[i - 1] + slack;
    }
    rec.monotone = inc || dec;
    if (!rec.values.empty()) rec.limit_estimate = rec.values.back();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace amop
