#pragma once

// Unary inclusion-dependency discovery, exact and approximate.

#include <string>
#include <vector>

#include "automode/relstore.hpp"

namespace automode {

/// R[A] <= S[B] with the fraction of distinct R[A] values missing from S[B].
struct UnaryInd {
  AttributeRef lhs;
  AttributeRef rhs;
  double error = 0.0;

  bool exact() const { return error == 0.0; }
  /// `R[A] <= S[B] err=0.500000`
  std::string to_string() const;
};

struct IndSet {
  std::vector<UnaryInd> inds;  // canonical order: (lhs, rhs)
  double alpha = 0.5;
};

inline constexpr double kDefaultApproxIndThreshold = 0.5;

/// Every ordered pair of distinct attributes whose lhs is non-empty and whose
/// containment error is at most `alpha`. Throws ConfigError when alpha is
/// outside [0,1].
IndSet discover_inds(const DatabaseInstance& db, double alpha = kDefaultApproxIndThreshold);

/// Of two mutual INDs where at least one is approximate, keeps the lower-error
/// one (ties: smaller lhs). Mutual exact INDs are both kept.
IndSet dedupe_bidirectional(const IndSet& inds);

/// One IND per line, sorted lexicographically.
std::string format_inds(const IndSet& inds);

}  // namespace automode
