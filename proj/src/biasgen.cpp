#include "automode/biasgen.hpp"

#include <algorithm>

#include "automode/errors.hpp"

namespace automode {

std::vector<int> TypeGraph::types(std::size_t node) const {
  std::vector<int> out;
  for (const auto& t : tokens.at(node)) out.push_back(t.type);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> TypeGraph::types(const AttributeRef& attr) const {
  const auto n = node_of(attr);
  if (n < 0) return {};
  return types(static_cast<std::size_t>(n));
}

std::ptrdiff_t TypeGraph::node_of(const AttributeRef& attr) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == attr) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

namespace {

// Tarjan; components come out in reverse topological order of the condensation.
struct SccFinder {
  const std::vector<std::vector<std::size_t>>& adj;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<std::size_t> stack;
  int counter = 0;
  int comps = 0;

  explicit SccFinder(const std::vector<std::vector<std::size_t>>& a)
      : adj(a), index(a.size(), -1), low(a.size(), 0), comp(a.size(), -1), on_stack(a.size(), false) {
    for (std::size_t v = 0; v < a.size(); ++v)
      if (index[v] < 0) visit(v);
  }

  void visit(std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        auto w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps;
        if (w == v) break;
      }
      ++comps;
    }
  }
};

void propagate(TypeGraph& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : g.edges) {
      const auto source = g.tokens[e.to];
      for (const auto& tok : source) {
        if (e.exact) {
          changed |= g.tokens[e.from].insert(tok).second;
        } else if (!tok.approx_crossed) {
          changed |= g.tokens[e.from].insert(TypeToken{tok.type, true}).second;
        }
      }
    }
  }
}

}  // namespace

TypeGraph build_type_graph(const std::vector<RelationSchema>& schema, const IndSet& inds) {
  TypeGraph g;
  for (const auto& rel : schema)
    for (std::size_t p = 0; p < rel.arity(); ++p) g.nodes.push_back(AttributeRef{rel.name, p, rel.attributes[p]});
  g.tokens.resize(g.nodes.size());

  std::vector<std::vector<std::size_t>> adj(g.nodes.size());
  for (const auto& ind : inds.inds) {
    const auto from = g.node_of(ind.lhs);
    const auto to = g.node_of(ind.rhs);
    if (from < 0 || to < 0 || from == to) continue;
    g.edges.push_back(TypeEdge{static_cast<std::size_t>(from), static_cast<std::size_t>(to),
                               ind.exact(), ind.error});
    adj[static_cast<std::size_t>(from)].push_back(static_cast<std::size_t>(to));
  }

  SccFinder scc(adj);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(scc.comps));
  for (std::size_t v = 0; v < g.nodes.size(); ++v) members[static_cast<std::size_t>(scc.comp[v])].push_back(v);
  std::vector<bool> has_out(members.size(), false);
  for (const auto& e : g.edges)
    if (scc.comp[e.from] != scc.comp[e.to]) has_out[static_cast<std::size_t>(scc.comp[e.from])] = true;

  // Sink components and cycles get one fresh type each, numbered by their
  // first member in schema order.
  std::vector<std::size_t> seeded;
  for (std::size_t c = 0; c < members.size(); ++c)
    if (!has_out[c] || members[c].size() > 1) seeded.push_back(c);
  std::sort(seeded.begin(), seeded.end(),
            [&](std::size_t a, std::size_t b) { return members[a].front() < members[b].front(); });
  for (auto c : seeded) {
    const int type = static_cast<int>(g.type_origins.size());
    g.type_origins.push_back(members[c]);
    for (auto v : members[c]) g.tokens[v].insert(TypeToken{type, false});
  }
  propagate(g);

  // Nodes cut off by the one-hop rule: sinks-first (Tarjan order).
  for (std::size_t c = 0; c < members.size(); ++c) {
    for (auto v : members[c]) {
      if (!g.tokens[v].empty()) continue;
      const int type = static_cast<int>(g.type_origins.size());
      g.type_origins.push_back({v});
      g.tokens[v].insert(TypeToken{type, false});
      propagate(g);
    }
  }
  return g;
}

std::vector<PredicateDecl> generate_predicates(const TypeGraph& graph) {
  std::vector<PredicateDecl> out;
  std::size_t i = 0;
  while (i < graph.nodes.size()) {
    const auto& rel = graph.nodes[i].relation;
    std::vector<std::vector<int>> per_attr;
    while (i < graph.nodes.size() && graph.nodes[i].relation == rel) per_attr.push_back(graph.types(i++));

    std::vector<std::size_t> pick(per_attr.size(), 0);
    while (true) {
      PredicateDecl decl{rel, {}};
      for (std::size_t a = 0; a < per_attr.size(); ++a)
        decl.types.push_back(TypeGraph::type_name(per_attr[a][pick[a]]));
      out.push_back(std::move(decl));
      std::size_t a = per_attr.size();
      while (a > 0 && ++pick[a - 1] == per_attr[a - 1].size()) {
        pick[a - 1] = 0;
        --a;
      }
      if (a == 0) break;
    }
  }
  return out;
}

ModeSet generate_modes(const DatabaseInstance& db, const std::vector<RelationSchema>& schema,
                       int threshold, const std::string& target) {
  if (threshold < 1) throw ConfigError("threshold must be >= 1");
  ModeSet out;
  bool target_found = false;
  for (const auto& rel : schema) {
    const auto n = rel.arity();
    if (rel.name == target) {
      out.head = ModeDecl{rel.name, std::vector<ModeSymbol>(n, ModeSymbol::Input)};
      target_found = true;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      ModeDecl m{rel.name, std::vector<ModeSymbol>(n, ModeSymbol::Output)};
      m.symbols[i] = ModeSymbol::Input;
      out.body.push_back(std::move(m));
    }
    std::vector<std::size_t> eligible;
    if (db.find(rel.name)) {
      for (std::size_t p = 0; p < n; ++p) {
        const auto stats = attribute_stats(db, AttributeRef{rel.name, p, rel.attributes[p]});
        if (stats.distinct_count > 0 && stats.distinct_count < static_cast<std::size_t>(threshold))
          eligible.push_back(p);
      }
    }
    const std::size_t subsets = std::size_t{1} << eligible.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<bool> in_m(n, false);
      for (std::size_t b = 0; b < eligible.size(); ++b)
        if (mask & (std::size_t{1} << b)) in_m[eligible[b]] = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (in_m[i]) continue;
        ModeDecl m{rel.name, std::vector<ModeSymbol>(n, ModeSymbol::Output)};
        for (std::size_t p = 0; p < n; ++p)
          if (in_m[p]) m.symbols[p] = ModeSymbol::Constant;
        m.symbols[i] = ModeSymbol::Input;
        if (std::find(out.body.begin(), out.body.end(), m) == out.body.end()) out.body.push_back(std::move(m));
      }
    }
  }
  if (!target_found) throw ConfigError("target relation not in schema: " + target);
  return out;
}

std::vector<RelationSchema> schemas_of(const DatabaseInstance& db) {
  std::vector<RelationSchema> out;
  for (std::size_t r = 0; r < db.relation_count(); ++r) out.push_back(db.relation(r).schema());
  return out;
}

BiasSpec induce_bias(const DatabaseInstance& db, double alpha, int threshold, const std::string& target) {
  if (threshold < 1) throw ConfigError("threshold must be >= 1");
  const auto schema = schemas_of(db);
  const auto inds = dedupe_bidirectional(discover_inds(db, alpha));
  const auto graph = build_type_graph(schema, inds);
  auto modes = generate_modes(db, schema, threshold, target);
  BiasSpec bias;
  bias.predicates = generate_predicates(graph);
  bias.head_mode = std::move(modes.head);
  bias.modes = std::move(modes.body);
  bias.constant_threshold = threshold;
  return bias;
}

}  // namespace automode
