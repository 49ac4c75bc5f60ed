// AM-membership decisions and spectra: the Moore-Penrose characterization
// (finite-dimensional kernel + compact generalized inverse), essential and
// discrete spectra of diagonal models, the equivalence chain through the
// bounded transform, spectral synthesis, domain membership and
// hyperinvariant-subspace witnesses.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "amop/calculus.hpp"
#include "amop/operator_model.hpp"
#include "amop/verdicts.hpp"

namespace amop {

struct Clause {
  std::string id;
  TriState status = TriState::Unknown;
  std::string evidence;
};

struct ClassificationReport {
  AmVerdict verdict = AmVerdict::Undecidable;
  std::vector<Clause> clauses;
  bool null_dim_finite = true;
  TriState mp_compact = TriState::Unknown;
  TriState spectrum_discrete = TriState::Unknown;

  const Clause* find(const std::string& id) const;
};

// The characterization for densely defined closed operators: AM iff the
// kernel is finite-dimensional and the Moore-Penrose inverse is compact
// (reciprocal nonzero eigenvalues vanish), with every nonzero eigenvalue of
// finite multiplicity. Models whose spectrum is certified bounded describe
// bounded operators, which sit outside that characterization: they classify
// NotAM only on a concrete non-attainment witness and stay Undecidable
// otherwise.
ClassificationReport classify_am(const DiagonalModel& model);

// Finite dimension forces both clauses; always AM, with the attaining unit
// vector computed as evidence.
ClassificationReport classify_am_finite(const FiniteOperator& op);

struct SpectrumReport {
  std::string point_spectrum;  // description: zero block, list, formula
  std::vector<cplx> essential_points;
  bool essential_certified = false;
  std::vector<cplx> essential_candidates;  // scan-based, not certified
  std::string discrete_spectrum;
  bool zero_in_spectrum = false;
};

// Essential spectrum = finite limit points of the eigenvalue sequence plus
// eigenvalues of infinite multiplicity; discrete = the isolated
// finite-multiplicity rest.
SpectrumReport spectrum_report(const DiagonalModel& model);

struct ChainLink {
  std::string id;  // "T", "T^2+I", "Z_T"
  AmVerdict verdict = AmVerdict::Undecidable;
  std::string note;
};

struct ChainReport {
  std::vector<ChainLink> links;
  bool all_consistent = false;  // no two definite verdicts disagree
};

// Classifies T, T^2+I and Z_T independently (the latter two as derived
// spectra; Z_T through the bounded-operator criterion on its essential
// spectrum) and reports verdict agreement. Requires a positive model.
ChainReport equivalence_chain_check(const DiagonalModel& model);

// --- spectral synthesis -------------------------------------------------------

// Tx = sum lambda_i <x, v_i> v_i over the eigenbasis blocks.
Vector spectral_synthesize(const SpectralData& data, const Vector& x);

using CoefficientSource = std::variant<std::vector<cplx>, Formula>;
using SynthesisResult = std::variant<std::vector<cplx>, Formula>;

// Applies the spectral series to coefficients against the eigenbasis.
// Formula coefficients require a pure-formula model; divergence of
// sum lambda_n^2 |c_n|^2 raises DomainError.
SynthesisResult spectral_synthesize(const DiagonalModel& model,
                                    const CoefficientSource& coeffs);

// Decides convergence of sum lambda_n^2 |c_n|^2 by rate certificates, with a
// bounded partial-sum scan as evidence otherwise.
DomainVerdict domain_membership(const DiagonalModel& model,
                                const CoefficientSource& coeffs);

// --- hyperinvariant subspaces ---------------------------------------------------

struct WitnessReport {
  enum class Branch { NullSpace, Range, BijectiveInverse, NotApplicable };
  Branch branch = Branch::NotApplicable;
  long witness_dim = 0;  // dimension of the witnessing subspace when finite
  std::string evidence;
};

const char* to_string(WitnessReport::Branch b);

// N(T) when the kernel is nontrivial; R(T) when injective but not onto;
// otherwise the bounded-inverse branch with the smallest-eigenvalue
// eigenspace as evidence. NotApplicable unless the model classifies AM.
WitnessReport hyperinvariant_witness(const OperatorModel& model);

}  // namespace amop
