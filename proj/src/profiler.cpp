#include "automode/profiler.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "automode/errors.hpp"

namespace automode {

std::string UnaryInd::to_string() const {
  char err[32];
  std::snprintf(err, sizeof err, "%.6f", error);
  return lhs.to_string() + " <= " + rhs.to_string() + " err=" + err;
}

namespace {

std::size_t count_missing(const std::vector<Constant>& lhs, const std::vector<Constant>& rhs) {
  std::size_t missing = 0;
  auto r = rhs.begin();
  for (Constant v : lhs) {
    while (r != rhs.end() && *r < v) ++r;
    if (r == rhs.end() || *r != v) ++missing;
  }
  return missing;
}

bool canonical_less(const UnaryInd& a, const UnaryInd& b) {
  if (!(a.lhs == b.lhs)) return a.lhs < b.lhs;
  return a.rhs < b.rhs;
}

}  // namespace

IndSet discover_inds(const DatabaseInstance& db, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("approximate IND threshold must be in [0,1]");
  const auto attrs = db.attributes();
  std::vector<std::vector<Constant>> values;
  values.reserve(attrs.size());
  for (const auto& a : attrs) values.push_back(attribute_stats(db, a).distinct_values);

  IndSet out;
  out.alpha = alpha;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (values[i].empty()) continue;
    for (std::size_t j = 0; j < attrs.size(); ++j) {
      if (i == j) continue;
      const auto missing = count_missing(values[i], values[j]);
      const double error = static_cast<double>(missing) / static_cast<double>(values[i].size());
      if (error <= alpha) out.inds.push_back(UnaryInd{attrs[i], attrs[j], error});
    }
  }
  std::sort(out.inds.begin(), out.inds.end(), canonical_less);
  return out;
}

IndSet dedupe_bidirectional(const IndSet& inds) {
  std::map<std::pair<AttributeRef, AttributeRef>, const UnaryInd*> by_pair;
  for (const auto& ind : inds.inds) by_pair[{ind.lhs, ind.rhs}] = &ind;

  IndSet out;
  out.alpha = inds.alpha;
  for (const auto& ind : inds.inds) {
    auto rev = by_pair.find({ind.rhs, ind.lhs});
    if (rev == by_pair.end()) {
      out.inds.push_back(ind);
      continue;
    }
    const auto& other = *rev->second;
    if (ind.exact() && other.exact()) {
      out.inds.push_back(ind);
      continue;
    }
    const bool keep = ind.error < other.error || (ind.error == other.error && ind.lhs < other.lhs);
    if (keep) out.inds.push_back(ind);
  }
  std::sort(out.inds.begin(), out.inds.end(), canonical_less);
  return out;
}

std::string format_inds(const IndSet& inds) {
  std::vector<std::string> lines;
  lines.reserve(inds.inds.size());
  for (const auto& ind : inds.inds) lines.push_back(ind.to_string());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

}  // namespace automode
