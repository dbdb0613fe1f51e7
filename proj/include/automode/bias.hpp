#pragma once

// Language bias: predicate (type) declarations and mode declarations, plus
// the `bias.txt` exchange format shared by bias induction and the learner.

#include <string>
#include <string_view>
#include <vector>

namespace automode {

enum class ModeSymbol : char {
  Input = '+',     // existing variable
  Output = '-',    // existing or new variable
  Constant = '#',  // constant
};

struct PredicateDecl {
  std::string relation;
  std::vector<std::string> types;  // one per attribute

  std::string to_string() const;
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
  friend auto operator<=>(const PredicateDecl&, const PredicateDecl&) = default;
};

struct ModeDecl {
  std::string relation;
  std::vector<ModeSymbol> symbols;

  std::string to_string() const;
  bool has_input() const;
  friend bool operator==(const ModeDecl&, const ModeDecl&) = default;
  friend bool operator<(const ModeDecl& a, const ModeDecl& b) {
    if (a.relation != b.relation) return a.relation < b.relation;
    return a.symbols < b.symbols;
  }
};

inline constexpr int kDefaultConstantThreshold = 5;

struct BiasSpec {
  std::vector<PredicateDecl> predicates;
  std::vector<ModeDecl> modes;  // body modes, head excluded
  ModeDecl head_mode;
  int constant_threshold = kDefaultConstantThreshold;

  const std::string& target() const { return head_mode.relation; }
  std::vector<const PredicateDecl*> predicates_for(std::string_view relation) const;
  std::vector<const ModeDecl*> modes_for(std::string_view relation) const;
};

PredicateDecl parse_predicate_decl(std::string_view text);
ModeDecl parse_mode_decl(std::string_view text);

/// Parses the `PREDICATES:` / `MODES:` format. The first line under `MODES:`
/// is the head mode, required unless `require_head` is false. Throws LoadError.
BiasSpec parse_bias(std::string_view text, bool require_head = true);
BiasSpec load_bias(const std::string& path, bool require_head = true);
std::string format_bias(const BiasSpec& bias);

}  // namespace automode
