#pragma once

// Packaged desk-scale inputs: the UW-CSE fragment used by `automode demo`
// and a profiling fixture with approximate author containment.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "automode/relstore.hpp"

namespace automode {

struct Fixture {
  std::string schema;                                      // schema.txt
  std::vector<std::pair<std::string, std::string>> facts;  // relation -> CSV text
  std::string examples;                                    // examples.txt, may be empty
  std::string bias;                                        // hand-written bias.txt, may be empty
  std::string target;
};

/// Twelve facts about alice, john, bob and mary, advisedBy examples and the
/// hand-written bias for advisedBy.
const Fixture& uwcse_fragment();

/// Students s1..s6, professors p1..p5, authors {s1,s2,p1,p2}: author values
/// are contained in students and in professors with error 0.5, but not the
/// other way round.
const Fixture& author_overlap_fixture();

DatabaseInstance load_fixture(const Fixture& fixture);

/// Writes schema.txt, facts/<rel>.csv and, when present, examples.txt and
/// bias_manual.txt under `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace automode
