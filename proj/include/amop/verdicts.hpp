// Small verdict enums shared across modules. Sound-over-complete: an
// undecidable verdict is a value, never an exception, and never a guess.
#pragma once

namespace amop {

enum class TriState { Yes, No, Unknown };

enum class Attainment { Attained, NotAttained, Undecidable };

enum class SeriesVerdict { Converges, Diverges, Undecidable };

enum class DomainVerdict { InDomain, NotInDomain, Undecidable };

enum class AmVerdict { AM, NotAM, Undecidable };

inline const char* to_string(TriState v) {
  switch (v) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    default: return "unknown";
  }
}

inline const char* to_string(Attainment v) {
  switch (v) {
    case Attainment::Attained: return "attained";
    case Attainment::NotAttained: return "not-attained";
    default: return "undecidable";
  }
}

inline const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Converges: return "converges";
    case SeriesVerdict::Diverges: return "diverges";
    default: return "undecidable";
  }
}

inline const char* to_string(DomainVerdict v) {
  switch (v) {
    case DomainVerdict::InDomain: return "in-domain";
    case DomainVerdict::NotInDomain: return "not-in-domain";
    default: return "undecidable";
  }
}

inline const char* to_string(AmVerdict v) {
  switch (v) {
    case AmVerdict::AM: return "AM";
    case AmVerdict::NotAM: return "NotAM";
    default: return "Undecidable";
  }
}

}  // namespace amop
