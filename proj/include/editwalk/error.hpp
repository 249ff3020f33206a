#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace editwalk {

enum class Errc {
  duplicate_edge,
  self_loop,
  vertex_out_of_range,
  edge_out_of_range,
  host_mismatch,
  not_a_chamber,
  closure_too_large,
  not_a_flat,
  not_comparable,
  bad_representative,
  probability_out_of_range,
  empty_edge_set,
  cap_exceeded,
  bad_distribution,
  support_not_covering,
  length_mismatch,
  degenerate_gap,
  not_irreducible,
  not_reversible,
  parse_error,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::self_loop: return "SelfLoop";
    case Errc::vertex_out_of_range: return "VertexOutOfRange";
    case Errc::edge_out_of_range: return "EdgeOutOfRange";
    case Errc::host_mismatch: return "HostMismatch";
    case Errc::not_a_chamber: return "NotAChamber";
    case Errc::closure_too_large: return "ClosureTooLarge";
    case Errc::not_a_flat: return "NotAFlat";
    case Errc::not_comparable: return "NotComparable";
    case Errc::bad_representative: return "BadRepresentative";
    case Errc::probability_out_of_range: return "ProbabilityOutOfRange";
    case Errc::empty_edge_set: return "EmptyEdgeSet";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::bad_distribution: return "BadDistribution";
    case Errc::support_not_covering: return "SupportNotCovering";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::degenerate_gap: return "DegenerateGap";
    case Errc::not_irreducible: return "NotIrreducible";
    case Errc::not_reversible: return "NotReversible";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  /// Message without the error-name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace editwalk
