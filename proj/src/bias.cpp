#include "automode/bias.hpp"

#include <fstream>
#include <sstream>

#include "automode/errors.hpp"
#include "text_util.hpp"

namespace automode {

std::string PredicateDecl::to_string() const {
  std::string s = relation + "(";
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i) s += ',';
    s += types[i];
  }
  return s + ")";
}

std::string ModeDecl::to_string() const {
  std::string s = relation + "(";
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) s += ',';
    s += static_cast<char>(symbols[i]);
  }
  return s + ")";
}

bool ModeDecl::has_input() const {
  for (auto s : symbols)
    if (s == ModeSymbol::Input) return true;
  return false;
}

std::vector<const PredicateDecl*> BiasSpec::predicates_for(std::string_view relation) const {
  std::vector<const PredicateDecl*> out;
  for (const auto& p : predicates)
    if (p.relation == relation) out.push_back(&p);
  return out;
}

std::vector<const ModeDecl*> BiasSpec::modes_for(std::string_view relation) const {
  std::vector<const ModeDecl*> out;
  for (const auto& m : modes)
    if (m.relation == relation) out.push_back(&m);
  return out;
}

namespace {

std::pair<std::string, std::vector<std::string>> split_atom(std::string_view text) {
  text = detail::trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || open == 0 || text.back() != ')')
    throw LoadError("malformed declaration: '" + std::string(text) + "'");
  std::pair<std::string, std::vector<std::string>> out;
  out.first = std::string(detail::trim(text.substr(0, open)));
  if (!detail::is_identifier(out.first))
    throw LoadError("invalid relation name in declaration: '" + std::string(text) + "'");
  for (auto a : detail::split(text.substr(open + 1, text.size() - open - 2), ','))
    out.second.emplace_back(detail::trim(a));
  return out;
}

}  // namespace

PredicateDecl parse_predicate_decl(std::string_view text) {
  auto [rel, args] = split_atom(text);
  for (const auto& a : args)
    if (a.empty()) throw LoadError("empty type in '" + std::string(text) + "'");
  return PredicateDecl{std::move(rel), std::move(args)};
}

ModeDecl parse_mode_decl(std::string_view text) {
  auto [rel, args] = split_atom(text);
  ModeDecl m{std::move(rel), {}};
  for (const auto& a : args) {
    if (a == "+") m.symbols.push_back(ModeSymbol::Input);
    else if (a == "-" || a == "\xE2\x88\x92") m.symbols.push_back(ModeSymbol::Output);
    else if (a == "#") m.symbols.push_back(ModeSymbol::Constant);
    else throw LoadError("unknown mode symbol '" + a + "' in '" + std::string(text) + "'");
  }
  return m;
}

BiasSpec parse_bias(std::string_view text, bool require_head) {
  enum class Section { None, Predicates, Modes } section = Section::None;
  BiasSpec bias;
  bool head_seen = false;
  std::size_t lineno = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++lineno;
    auto line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# constant_threshold=";
      if (line.substr(0, key.size()) == key)
        bias.constant_threshold = std::stoi(std::string(line.substr(key.size())));
      continue;
    }
    if (line == "PREDICATES:") {
      section = Section::Predicates;
      continue;
    }
    if (line == "MODES:") {
      section = Section::Modes;
      continue;
    }
    try {
      switch (section) {
        case Section::None:
          throw LoadError("declaration outside a PREDICATES:/MODES: section");
        case Section::Predicates:
          bias.predicates.push_back(parse_predicate_decl(line));
          break;
        case Section::Modes:
          if (!head_seen) {
            bias.head_mode = parse_mode_decl(line);
            head_seen = true;
          } else {
            bias.modes.push_back(parse_mode_decl(line));
          }
          break;
      }
    } catch (const LoadError& e) {
      throw LoadError("bias line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (require_head && !head_seen) throw LoadError("bias has no head mode (first line under MODES:)");
  return bias;
}

BiasSpec load_bias(const std::string& path, bool require_head) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open bias file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_bias(buf.str(), require_head);
}

std::string format_bias(const BiasSpec& bias) {
  std::string out = "# constant_threshold=" + std::to_string(bias.constant_threshold) + "\n";
  out += "PREDICATES:\n";
  for (const auto& p : bias.predicates) out += p.to_string() + '\n';
  out += "MODES:\n";
  out += bias.head_mode.to_string() + '\n';
  for (const auto& m : bias.modes) out += m.to_string() + '\n';
  return out;
}

}  // namespace automode
