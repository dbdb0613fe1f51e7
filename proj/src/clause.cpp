#include "automode/clause.hpp"

#include <algorithm>
#include <unordered_map>

#include "automode/errors.hpp"
#include "text_util.hpp"

namespace automode {

std::vector<VarId> Clause::variables() const {
  std::vector<VarId> out;
  auto collect = [&](const Literal& l) {
    for (const auto& t : l.args)
      if (t.is_var()) out.push_back(t.id);
  };
  collect(head);
  for (const auto& l : body) collect(l);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VarId Clause::next_var() const {
  auto vars = variables();
  return vars.empty() ? 0 : vars.back() + 1;
}

Clause canonical_variables(const Clause& c) {
  std::unordered_map<VarId, VarId> rename;
  auto map_literal = [&](const Literal& l) {
    Literal out{l.relation, {}};
    for (const auto& t : l.args) {
      if (!t.is_var()) {
        out.args.push_back(t);
        continue;
      }
      auto [it, fresh] = rename.emplace(t.id, static_cast<VarId>(rename.size()));
      out.args.push_back(Term::var(it->second));
    }
    return out;
  };
  Clause out;
  out.head = map_literal(c.head);
  for (const auto& l : c.body) out.body.push_back(map_literal(l));
  return out;
}

Clause remove_disconnected(const Clause& c) {
  std::vector<VarId> reached;
  for (const auto& t : c.head.args)
    if (t.is_var()) reached.push_back(t.id);
  auto has = [&](VarId v) { return std::find(reached.begin(), reached.end(), v) != reached.end(); };

  std::vector<bool> keep(c.body.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (keep[i]) continue;
      bool touches = false;
      for (const auto& t : c.body[i].args)
        if (t.is_var() && has(t.id)) touches = true;
      if (!touches) continue;
      keep[i] = true;
      changed = true;
      for (const auto& t : c.body[i].args)
        if (t.is_var() && !has(t.id)) reached.push_back(t.id);
    }
  }
  Clause out{c.head, {}};
  for (std::size_t i = 0; i < c.body.size(); ++i)
    if (keep[i]) out.body.push_back(c.body[i]);
  return out;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string format_literal(const Literal& l, const SymbolTable& symbols,
                           const std::vector<std::string>* var_names) {
  std::string s = l.relation + "(";
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (i) s += ',';
    const auto& t = l.args[i];
    if (t.is_const()) {
      s += quote(symbols.name(t.id));
    } else if (var_names && t.id < var_names->size() && !(*var_names)[t.id].empty()) {
      s += (*var_names)[t.id];
    } else {
      s += "V" + std::to_string(t.id);
    }
  }
  return s + ")";
}

std::string format_clause(const Clause& c, const SymbolTable& symbols) {
  std::vector<std::string> names(c.next_var());
  std::size_t heads = 0, bodies = 0;
  auto name = [&](const Literal& l, bool in_head) {
    for (const auto& t : l.args) {
      if (!t.is_var() || !names[t.id].empty()) continue;
      names[t.id] = in_head ? "X" + std::to_string(heads++) : "Z" + std::to_string(bodies++);
    }
  };
  name(c.head, true);
  for (const auto& l : c.body) name(l, false);

  std::string s = format_literal(c.head, symbols, &names);
  if (!c.body.empty()) {
    s += " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) s += ", ";
      s += format_literal(c.body[i], symbols, &names);
    }
  }
  return s + ".";
}

std::string format_definition(const HornDefinition& def, const SymbolTable& symbols) {
  std::string out;
  for (const auto& c : def.clauses) out += format_clause(c, symbols) + '\n';
  return out;
}

namespace {

class ClauseParser {
 public:
  ClauseParser(std::string_view text, SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  Clause parse() {
    Clause c;
    c.head = literal();
    skip_ws();
    if (consume(":-")) {
      do {
        c.body.push_back(literal());
        skip_ws();
      } while (consume(","));
    }
    skip_ws();
    consume(".");
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return c;
  }

 private:
  Literal literal() {
    skip_ws();
    Literal l{identifier(), {}};
    skip_ws();
    if (!consume("(")) fail("expected '('");
    do {
      skip_ws();
      l.args.push_back(term());
      skip_ws();
    } while (consume(","));
    if (!consume(")")) fail("expected ')'");
    return l;
  }

  Term term() {
    if (pos_ < text_.size() && text_[pos_] == '"') {
      ++pos_;
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        value += text_[pos_++];
      }
      if (!consume("\"")) fail("unterminated constant");
      return Term::constant(symbols_.intern(value));
    }
    auto name = identifier();
    auto [it, fresh] = vars_.emplace(name, static_cast<VarId>(vars_.size()));
    return Term::var(it->second);
  }

  std::string identifier() {
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start])))
      fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view tok) {
    if (text_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw LoadError("clause parse error at offset " + std::to_string(pos_) + ": " + what + " in '" +
                    std::string(text_) + "'");
  }

  std::string_view text_;
  SymbolTable& symbols_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, VarId> vars_;
};

}  // namespace

Clause parse_clause(std::string_view text, SymbolTable& symbols) {
  return ClauseParser(text, symbols).parse();
}

HornDefinition parse_definition(std::string_view text, SymbolTable& symbols) {
  HornDefinition def;
  for (auto line : detail::split(text, '\n')) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    def.clauses.push_back(parse_clause(line, symbols));
  }
  return def;
}

}  // namespace automode
