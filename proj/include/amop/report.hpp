// Deterministic report documents: JSON with lexicographically sorted keys.
// Machine-facing floats are fixed 17-significant-digit scientific strings so
// identical inputs serialize byte-identically; the human summary uses 6
// significant digits.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amop/calculus.hpp"
#include "amop/classifier.hpp"
#include "amop/truncation.hpp"

namespace amop {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

std::string format_machine(double v);
std::string format_human(double v);
std::string format_machine(const cplx& v);

Json to_json(const ClassificationReport& rep);
Json to_json(const SpectrumReport& rep);
Json to_json(const ChainReport& rep);
Json to_json(const LeastSquaresSolution& sol);
Json to_json(const std::vector<ConvergenceRecord>& records);

// Final serialization: stable key order, two-space indent, trailing newline.
std::string render_report(const Json& document);

}  // namespace amop
