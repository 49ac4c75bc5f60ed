#include "amop/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "amop/tolerances.hpp"

namespace amop {

namespace {

enum class TailRegime { None, Unbounded, Bounded, Unknown };

TailRegime tail_regime(const DiagonalModel& m) {
  if (!m.has_tail()) return TailRegime::None;
  const SequenceAnalysis* a = m.tail_analysis();
  if (a->unbounded_abs()) return TailRegime::Unbounded;
  if (a->bounded_abs()) return TailRegime::Bounded;
  return TailRegime::Unknown;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_positive(const DiagonalModel& model, const char* what) {
  if (model.field() != ScalarField::Real) {
    throw StructureError(std::string(what) + " requires a positive model");
  }
  for (long i = 1; i <= static_cast<long>(model.prefix().size()); ++i) {
    if (model.eigenvalue(i).real() < 0.0) {
      throw StructureError(std::string(what) +
                           " requires nonnegative eigenvalues");
    }
  }
  if (model.tail_analysis() &&
      model.tail_analysis()->nonnegative() == TriState::No) {
    throw StructureError(std::string(what) +
                         " requires nonnegative eigenvalues");
  }
}

// Certified non-attainment of the infimum over the tail indices; the
// restriction to the span of those eigenvectors then fails to attain its
// minimum modulus, which rules AM out for any diagonal normal model.
bool tail_nonattainment_witness(const DiagonalModel& model,
                                InfimumResult* witness) {
  if (!model.has_tail()) return false;
  InfimumResult inf = model.tail_analysis()->infimum_abs(IndexSet::all());
  if (inf.certified && inf.attainment == Attainment::NotAttained) {
    if (witness) *witness = inf;
    return true;
  }
  return false;
}

}  // namespace

const Clause* ClassificationReport::find(const std::string& id) const {
  for (const auto& c : clauses) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

ClassificationReport classify_am(const DiagonalModel& model) {
  ClassificationReport rep;
  const bool null_inf = model.null_infinite();
  const bool has_tail = model.has_tail();
  const TailRegime regime = tail_regime(model);
  const SequenceAnalysis* a = model.tail_analysis();

  rep.null_dim_finite = !null_inf;
  rep.clauses.push_back(
      {"null_dim_finite", null_inf ? TriState::No : TriState::Yes,
       null_inf ? "null space is infinite-dimensional"
                : "null space has dimension " + std::to_string(*model.null_dim())});

  Clause mp{"mp_compact", TriState::Unknown, ""};
  switch (regime) {
    case TailRegime::None:
      mp.status = TriState::Yes;
      mp.evidence = "finite eigenvalue list; the generalized inverse has finite rank";
      break;
    case TailRegime::Unbounded:
      mp.status = TriState::Yes;
      mp.evidence = "certified |lambda(n)| -> infinity; reciprocal eigenvalues vanish";
      break;
    case TailRegime::Bounded: {
      const double lim = a->abs_limit().value;
      mp.status = TriState::No;
      mp.evidence = lim <= tol::kZeroAbs
                        ? "certified |lambda(n)| -> 0; reciprocals diverge"
                        : "certified |lambda(n)| -> " + fmt(lim) +
                              "; reciprocals tend to " + fmt(1.0 / lim) +
                              " instead of 0";
      break;
    }
    case TailRegime::Unknown:
      mp.status = TriState::Unknown;
      mp.evidence = "formula outside the certified class; no compactness certificate";
      break;
  }
  rep.clauses.push_back(mp);
  rep.mp_compact = mp.status;

  Clause mult{"multiplicity_finite", TriState::Unknown, ""};
  if (!has_tail) {
    mult.status = TriState::Yes;
    mult.evidence = "finitely many eigenvalues";
  } else if (regime == TailRegime::Unbounded) {
    mult.status = TriState::Yes;
    mult.evidence = "divergent sequence leaves every value finitely often";
  } else if (regime == TailRegime::Bounded && a->monotone() &&
             a->monotone()->direction == 0) {
    mult.status = TriState::No;
    mult.evidence = "constant eigenvalue repeated with infinite multiplicity";
  } else if (regime == TailRegime::Bounded && a->monotone()) {
    mult.status = TriState::Yes;
    mult.evidence = "eventually strictly monotone sequence";
  }
  rep.clauses.push_back(mult);

  // Verdict.
  if (null_inf && has_tail) {
    rep.verdict = AmVerdict::NotAM;
    rep.clauses.push_back(
        {"kernel_mixing_witness", TriState::No,
         "infinite-dimensional kernel mixed with infinitely many nonzero "
         "eigenvalues yields a subspace on which the minimum modulus 0 is "
         "not attained"});
  } else if (null_inf) {
    rep.verdict = AmVerdict::Undecidable;
    rep.clauses.push_back(
        {"bounded_finite_rank", TriState::Unknown,
         "finite-rank operator with an infinite kernel sits outside the "
         "unbounded characterization (bounded finite-rank operators are "
         "absolutely minimum attaining)"});
  } else if (!has_tail) {
    rep.verdict = AmVerdict::AM;
    rep.clauses.push_back({"finite_dimension", TriState::Yes,
                           "finite-dimensional model attains every restricted minimum"});
  } else if (regime == TailRegime::Unbounded) {
    rep.verdict = AmVerdict::AM;
  } else if (regime == TailRegime::Bounded) {
    InfimumResult witness;
    if (tail_nonattainment_witness(model, &witness)) {
      rep.verdict = AmVerdict::NotAM;
      rep.clauses.push_back(
          {"attainment_witness", TriState::No,
           "infimum " + fmt(witness.value) +
               " over the tail indices is not attained; the restriction to "
               "that eigenvector span is not minimum attaining"});
    } else {
      rep.verdict = AmVerdict::Undecidable;
      rep.clauses.push_back(
          {"bounded_regime", TriState::Unknown,
           "spectrum is certified bounded; the Moore-Penrose "
           "characterization covers unbounded operators only and no "
           "non-attainment witness exists"});
    }
  } else {
    rep.verdict = AmVerdict::Undecidable;
  }

  // sigma = sigma_d?
  if (!has_tail) {
    rep.spectrum_discrete = null_inf ? TriState::No : TriState::Yes;
  } else if (regime == TailRegime::Unbounded) {
    rep.spectrum_discrete = null_inf ? TriState::No : TriState::Yes;
  } else if (regime == TailRegime::Bounded) {
    rep.spectrum_discrete = TriState::No;
  } else {
    rep.spectrum_discrete = TriState::Unknown;
  }
  return rep;
}

ClassificationReport classify_am_finite(const FiniteOperator& op) {
  ClassificationReport rep;
  rep.verdict = AmVerdict::AM;
  rep.null_dim_finite = true;
  rep.mp_compact = TriState::Yes;
  rep.spectrum_discrete = TriState::Yes;
  rep.clauses.push_back(
      {"finite_dimension", TriState::Yes,
       "finite rank, compact generalized inverse, finite-dimensional kernel"});

  Eigen::JacobiSVD<Matrix> svd(op.entries(),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double m = svd.singularValues().minCoeff();
  const Vector x = svd.matrixV().col(svd.matrixV().cols() - 1);
  const double reached = (op.entries() * x).norm();
  const bool ok = std::fabs(reached - m) <= tol::kNum * (1.0 + op.frobenius());
  rep.clauses.push_back(
      {"minimum_attained", ok ? TriState::Yes : TriState::Unknown,
       "m(T) = " + fmt(m) + " attained by the smallest right singular vector"});
  return rep;
}

SpectrumReport spectrum_report(const DiagonalModel& model) {
  SpectrumReport out;
  const bool null_inf = model.null_infinite();
  const long null_dim = null_inf ? -1 : *model.null_dim();
  out.zero_in_spectrum = null_inf || null_dim > 0;

  std::ostringstream point;
  bool first = true;
  if (out.zero_in_spectrum) {
    point << "0 (multiplicity "
          << (null_inf ? std::string("infinite") : std::to_string(null_dim))
          << ")";
    first = false;
  }
  if (!model.prefix().empty()) {
    if (!first) point << "; ";
    point << "listed eigenvalues: " << model.prefix().size() << " entries";
    first = false;
  }
  if (model.tail()) {
    if (!first) point << "; ";
    point << "lambda(k) = " << model.tail()->str() << " for k >= 1";
  }
  out.point_spectrum = point.str();

  const TailRegime regime = tail_regime(model);
  out.essential_certified = true;
  if (null_inf) out.essential_points.push_back(cplx(0.0, 0.0));
  switch (regime) {
    case TailRegime::None:
    case TailRegime::Unbounded:
      break;
    case TailRegime::Bounded: {
      const LimitValue lim = model.tail_analysis()->limit();
      if (lim.is_finite()) {
        const cplx l(lim.value, 0.0);
        bool dup = false;
        for (const cplx& p : out.essential_points) {
          dup = dup || std::abs(p - l) <= 1e-12;
        }
        if (!dup) out.essential_points.push_back(l);
      } else {
        out.essential_certified = false;
      }
      break;
    }
    case TailRegime::Unknown: {
      out.essential_certified = false;
      // Scan-based candidate limit points, flagged non-certified.
      std::vector<double> samples;
      for (long n = 9001; n <= 10000; ++n) {
        const double v = model.tail()->eval(static_cast<double>(n));
        if (std::isfinite(v)) samples.push_back(v);
      }
      std::sort(samples.begin(), samples.end());
      for (double v : samples) {
        if (out.essential_candidates.empty() ||
            std::abs(out.essential_candidates.back().real() - v) >
                1e-6 * (1.0 + std::fabs(v))) {
          if (out.essential_candidates.size() < 8) {
            out.essential_candidates.push_back(cplx(v, 0.0));
          }
        }
      }
      break;
    }
  }

  std::ostringstream disc;
  disc << "point-spectrum values outside the essential set";
  if (!null_inf && null_dim > 0) {
    disc << "; includes 0 (multiplicity " << null_dim << ")";
  }
  out.discrete_spectrum = disc.str();
  return out;
}

ChainReport equivalence_chain_check(const DiagonalModel& model) {
  require_positive(model, "equivalence chain");
  ChainReport out;
  const bool null_inf = model.null_infinite();
  const bool has_tail = model.has_tail();
  const TailRegime regime = tail_regime(model);
  const SequenceAnalysis* a = model.tail_analysis();

  // Link 1: T itself.
  {
    ClassificationReport rep = classify_am(model);
    std::string note;
    for (const auto& c : rep.clauses) {
      if (c.status != TriState::Yes) {
        note = c.id + ": " + c.evidence;
        break;
      }
    }
    out.links.push_back({"T", rep.verdict, note});
  }

  // Link 2: T^2 + I. Kernel becomes the eigenvalue 1 with the old kernel's
  // multiplicity; sequence values map to lambda^2 + 1 > 1.
  {
    AmVerdict v;
    std::string note;
    if (null_inf && has_tail) {
      v = AmVerdict::NotAM;
      note =
          "eigenvalue 1 has infinite multiplicity and infinitely many "
          "eigenvalues lie above it";
    } else if (null_inf) {
      v = AmVerdict::AM;
      note =
          "bounded with essential spectrum {1} and finitely many eigenvalues "
          "above it";
    } else if (!has_tail) {
      v = AmVerdict::AM;
      note = "finite-dimensional";
    } else if (regime == TailRegime::Unbounded) {
      v = AmVerdict::AM;
      note = "lambda(n)^2 + 1 diverges and the kernel is trivial";
    } else if (regime == TailRegime::Bounded) {
      InfimumResult witness;
      if (tail_nonattainment_witness(model, &witness)) {
        v = AmVerdict::NotAM;
        note =
            "x -> x^2+1 preserves the unattained infimum over the tail "
            "indices";
      } else {
        v = AmVerdict::Undecidable;
        note = "bounded regime without a non-attainment witness";
      }
    } else {
      v = AmVerdict::Undecidable;
      note = "tail behaviour uncertified";
    }
    out.links.push_back({"T^2+I", v, note});
  }

  // Link 3: Z_T, a bounded positive operator with eigenvalues
  // mu = lambda / sqrt(1 + lambda^2) < 1; decided by the bounded criterion:
  // a single essential point carrying the top of the spectrum.
  {
    AmVerdict v;
    std::string note;
    if (model.is_finite_model()) {
      v = AmVerdict::AM;
      note = "finite-dimensional";
    } else if (null_inf && has_tail) {
      v = AmVerdict::NotAM;
      note = regime == TailRegime::Unbounded
                 ? "essential spectrum {0, 1} has two points"
                 : "infinite-dimensional kernel mixed with infinitely many "
                   "nonzero eigenvalues";
    } else if (null_inf) {
      v = AmVerdict::AM;
      note =
          "bounded with essential spectrum {0} and finitely many eigenvalues "
          "above it";
    } else if (regime == TailRegime::Unbounded) {
      v = AmVerdict::AM;
      note =
          "essential spectrum {1} is the top of the spectrum; no eigenvalue "
          "exceeds it";
    } else if (regime == TailRegime::Bounded) {
      if (a->abs_monotone() && a->abs_monotone()->direction < 0) {
        v = AmVerdict::NotAM;
        note =
            "infinitely many eigenvalues above the single essential point";
      } else if (a->abs_monotone()) {
        v = AmVerdict::AM;
        note =
            "single essential point with at most finitely many eigenvalues "
            "above it";
      } else {
        v = AmVerdict::Undecidable;
        note = "no monotonicity certificate for the tail";
      }
    } else {
      v = AmVerdict::Undecidable;
      note = "tail behaviour uncertified";
    }
    out.links.push_back({"Z_T", v, note});
  }

  out.all_consistent = true;
  for (const auto& x : out.links) {
    for (const auto& y : out.links) {
      if (x.verdict != AmVerdict::Undecidable &&
          y.verdict != AmVerdict::Undecidable && x.verdict != y.verdict) {
        out.all_consistent = false;
      }
    }
  }
  return out;
}

// --- spectral synthesis -------------------------------------------------------

Vector spectral_synthesize(const SpectralData& data, const Vector& x) {
  if (!data.basis) {
    throw StructureError("spectral synthesis needs an eigenbasis");
  }
  const Matrix& b = *data.basis;
  if (x.size() != b.rows()) {
    throw RangeError("vector dimension does not match the eigenbasis");
  }
  Vector out = Vector::Zero(x.size());
  for (std::size_t i = 0; i < data.pairs.size(); ++i) {
    const long off = data.offsets[i];
    const long mult = data.pairs[i].multiplicity;
    const auto block = b.middleCols(off, mult);
    out += data.pairs[i].lambda * (block * (block.adjoint() * x));
  }
  return out;
}

SynthesisResult spectral_synthesize(const DiagonalModel& model,
                                    const CoefficientSource& coeffs) {
  if (std::holds_alternative<std::vector<cplx>>(coeffs)) {
    const auto& c = std::get<std::vector<cplx>>(coeffs);
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      out[i] = model.eigenvalue(static_cast<long>(i) + 1) * c[i];
    }
    return out;
  }

  const Formula& c = std::get<Formula>(coeffs);
  if (!model.prefix().empty() || !model.has_tail()) {
    throw CompositionError(
        "formula coefficients require a pure-formula model");
  }
  const Formula& lam = *model.tail();
  Formula product(make_binary(FormulaOp::Mul, lam.root_ptr(), c.root_ptr()));
  Formula term(make_binary(FormulaOp::Pow, product.root_ptr(), make_number(2.0)));

  switch (series_converges(term)) {
    case SeriesVerdict::Converges:
      break;
    case SeriesVerdict::Diverges:
      throw DomainError(
          "sum of lambda(n)^2 |c(n)|^2 diverges; vector outside the domain");
    case SeriesVerdict::Undecidable: {
      // Partial-sum growth test.
      double sum = 0.0;
      for (long n = 1; n <= 100000; ++n) {
        const double t = term.eval(static_cast<double>(n));
        if (!std::isfinite(t) || (sum += t) > 1e12) {
          throw DomainError("partial sums of lambda(n)^2 |c(n)|^2 blow up");
        }
      }
      break;
    }
  }
  return product;
}

DomainVerdict domain_membership(const DiagonalModel& model,
                                const CoefficientSource& coeffs) {
  if (std::holds_alternative<std::vector<cplx>>(coeffs)) {
    return DomainVerdict::InDomain;  // finitely supported
  }
  const Formula& c = std::get<Formula>(coeffs);

  // The coefficients must describe a vector of H at all.
  Formula csq(make_binary(FormulaOp::Pow, c.root_ptr(), make_number(2.0)));
  if (series_converges(csq) == SeriesVerdict::Diverges) {
    return DomainVerdict::NotInDomain;
  }

  if (!model.has_tail()) return DomainVerdict::InDomain;
  const long shift = static_cast<long>(model.prefix().size());
  const Formula c_tail = shift_index(c, static_cast<double>(shift));
  Formula product(make_binary(FormulaOp::Mul, model.tail()->root_ptr(),
                              c_tail.root_ptr()));
  Formula term(
      make_binary(FormulaOp::Pow, product.root_ptr(), make_number(2.0)));

  switch (series_converges(term)) {
    case SeriesVerdict::Converges:
      return DomainVerdict::InDomain;
    case SeriesVerdict::Diverges:
      return DomainVerdict::NotInDomain;
    case SeriesVerdict::Undecidable:
      break;
  }
  // Bounded partial-sum scan.
  double sum = 0.0;
  double at_checkpoint = 0.0;
  for (long n = 1; n <= tol::kScanMax; ++n) {
    const double t = term.eval(static_cast<double>(n));
    if (!std::isfinite(t) || (sum += t) > 1e12) {
      return DomainVerdict::NotInDomain;
    }
    if (n == tol::kScanMax / 10) at_checkpoint = sum;
  }
  if (sum - at_checkpoint < 1e-9 * (1.0 + sum)) {
    return DomainVerdict::InDomain;  // scan-based: partial sums settled
  }
  return DomainVerdict::Undecidable;
}

// --- hyperinvariant subspaces ---------------------------------------------------

const char* to_string(WitnessReport::Branch b) {
  switch (b) {
    case WitnessReport::Branch::NullSpace: return "null-space";
    case WitnessReport::Branch::Range: return "range";
    case WitnessReport::Branch::BijectiveInverse: return "bijective-inverse";
    default: return "not-applicable";
  }
}

namespace {

WitnessReport witness_finite(const FiniteOperator& op) {
  WitnessReport out;
  Eigen::JacobiSVD<Matrix> svd(op.entries());
  const auto& s = svd.singularValues();
  const double cutoff = s.size() ? tol::kZeroRel * s(0) : 0.0;
  long rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;

  if (rank < op.cols()) {
    out.branch = WitnessReport::Branch::NullSpace;
    out.witness_dim = op.cols() - rank;
    out.evidence = "nontrivial kernel of dimension " +
                   std::to_string(out.witness_dim) +
                   " is hyperinvariant";
    return out;
  }
  if (op.rows() > op.cols()) {
    out.branch = WitnessReport::Branch::Range;
    out.witness_dim = rank;
    out.evidence = "injective but not onto; the closed range is a nontrivial "
                   "hyperinvariant subspace";
    return out;
  }
  out.branch = WitnessReport::Branch::BijectiveInverse;
  Eigen::ComplexEigenSolver<Matrix> es(op.entries());
  long best = 0;
  for (long i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(best))) {
      best = i;
    }
  }
  const cplx lam = es.eigenvalues()(best);
  long dim = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) - lam) <=
        1e-8 * std::max(1.0, op.frobenius())) {
      ++dim;
    }
  }
  out.witness_dim = dim;
  std::ostringstream ev;
  ev << "bijective; bounded-inverse branch with the eigenspace of the "
        "smallest-|lambda| eigenvalue ("
     << lam.real() << (lam.imag() < 0 ? "-" : "+") << std::fabs(lam.imag())
     << "i, dimension " << dim << ") as evidence";
  out.evidence = ev.str();
  return out;
}

WitnessReport witness_diagonal(const DiagonalModel& model) {
  WitnessReport out;
  ClassificationReport rep = classify_am(model);
  if (rep.verdict != AmVerdict::AM) {
    out.branch = WitnessReport::Branch::NotApplicable;
    out.evidence = std::string("model classifies ") + to_string(rep.verdict);
    return out;
  }
  if (*model.null_dim() > 0) {
    out.branch = WitnessReport::Branch::NullSpace;
    out.witness_dim = *model.null_dim();
    out.evidence = "nontrivial kernel of dimension " +
                   std::to_string(out.witness_dim) + " is hyperinvariant";
    return out;
  }
  // Injective AM diagonal models have closed dense range, hence bijective.
  out.branch = WitnessReport::Branch::BijectiveInverse;
  MinimumModulus mm = minimum_modulus(model);
  out.witness_dim =
      mm.witness_index && *mm.witness_index >= 1
          ? model.multiplicity_at(*mm.witness_index)
          : 0;
  out.evidence = "bijective; eigenspace of the smallest-|lambda| eigenvalue (" +
                 fmt(mm.value) + ") as evidence via the compact inverse";
  return out;
}

}  // namespace

WitnessReport hyperinvariant_witness(const OperatorModel& model) {
  if (std::holds_alternative<FiniteOperator>(model)) {
    return witness_finite(std::get<FiniteOperator>(model));
  }
  return witness_diagonal(std::get<DiagonalModel>(model));
}

}  // namespace amop
