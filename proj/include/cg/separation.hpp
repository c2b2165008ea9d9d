#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <cg/graph.hpp>

namespace cg {

/// Largest node set for which exhaustive model enumeration is attempted by
/// default. Overridable per call; the CLI exposes --max-nodes.
inline constexpr size_t kDefaultNodeBound = 10;

/// Default cap for the graphoid axiom sweep (5^n assignments).
inline constexpr size_t kGraphoidNodeBound = 8;

/// A walk through a graph. Consecutive nodes must be adjacent; nodes and
/// edges may repeat. A single node is a route of length zero. The step types
/// (line, arc forwards, arc backwards) are inferred: a pair of nodes carries
/// at most one edge.
struct Route {
  std::vector<NodeId> nodes;
};

struct SeparationTriple {
  NodeSet x, y, z;

  SeparationTriple(NodeSet x_, NodeSet y_, NodeSet z_)
      : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
    if (x.empty() || y.empty()) {
      throw input_error("separation triple: X and Y must be nonempty");
    }
    auto disjoint = [](const NodeSet& a, const NodeSet& b) {
      for (const auto& n : a) {
        if (b.contains(n)) return false;
      }
      return true;
    };
    if (!disjoint(x, y) || !disjoint(x, z) || !disjoint(y, z)) {
      throw input_error("separation triple: X, Y, Z must be pairwise disjoint");
    }
  }
};

/// Activity of one concrete route: split the route into its maximal
/// undirected sections, call a section a collider when the flanking edges on
/// both sides point into it, and require collider sections to meet Z and all
/// other sections to avoid Z.
inline bool is_active_route(const HybridGraph& g, const Route& route, const NodeSet& z) {
  const auto& seq = route.nodes;
  if (seq.empty()) throw input_error("route must contain at least one node");
  for (const auto& n : seq) {
    if (!g.has_node(n)) throw input_error("route: unknown node '" + n + "'");
  }
  detail::check_subset(g, z, "is_active_route");

  enum class Step { line, fwd, back };
  std::vector<Step> steps;
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    if (g.has_line(seq[i], seq[i + 1])) {
      steps.push_back(Step::line);
    } else if (g.has_arc(seq[i], seq[i + 1])) {
      steps.push_back(Step::fwd);
    } else if (g.has_arc(seq[i + 1], seq[i])) {
      steps.push_back(Step::back);
    } else {
      throw input_error("route: '" + seq[i] + "' and '" + seq[i + 1] + "' are not adjacent");
    }
  }

  size_t begin = 0;
  for (size_t pos = 0; pos < seq.size(); ++pos) {
    bool last_of_section = pos + 1 == seq.size() || steps[pos] != Step::line;
    if (!last_of_section) continue;
    // section occupies [begin, pos]
    bool head_in = begin > 0 && steps[begin - 1] == Step::fwd;
    bool head_out = pos + 1 < seq.size() && steps[pos] == Step::back;
    bool collider = head_in && head_out;
    bool meets_z = false;
    for (size_t i = begin; i <= pos; ++i) {
      if (z.contains(seq[i])) meets_z = true;
    }
    if (collider != meets_z) return false;
    begin = pos + 1;
  }
  return true;
}

namespace detail {

/// Reachability-based decision procedure for c-separation. A state is
/// (node, entered the current section through an arrowhead?, has the section
/// shown a Z node so far?); leaving a section checks the collider /
/// non-collider condition accumulated in the state.
class SeparationEngine {
 public:
  explicit SeparationEngine(const HybridGraph& g) {
    if (!is_chain_graph(g)) throw domain_error("separation requires a chain graph");
    for (const auto& n : g.nodes()) {
      index_[n] = static_cast<int>(labels_.size());
      labels_.push_back(n);
    }
    size_t n = labels_.size();
    line_adj_.resize(n);
    arc_out_.resize(n);
    arc_in_.resize(n);
    for (const auto& [a, b] : g.lines()) {
      line_adj_[at(a)].push_back(at(b));
      line_adj_[at(b)].push_back(at(a));
    }
    for (const auto& [tail, head] : g.arcs()) {
      arc_out_[at(tail)].push_back(at(head));
      arc_in_[at(head)].push_back(at(tail));
    }
  }

  size_t node_count() const { return labels_.size(); }

  bool separated(const NodeSet& x, const NodeSet& y, const NodeSet& z) const {
    if (x.empty() || y.empty()) return true;  // no routes start or end in an empty set
    std::vector<char> in_y(labels_.size(), 0), in_z(labels_.size(), 0);
    for (const auto& n : y) in_y[at(n)] = 1;
    for (const auto& n : z) in_z[at(n)] = 1;

    // state id: node * 4 + entry_head * 2 + z_seen
    std::vector<char> visited(labels_.size() * 4, 0);
    std::vector<int> stack;
    bool active_found = false;
    auto visit = [&](int node, int entry_head, int z_seen) {
      if (in_y[node] && !z_seen) {
        active_found = true;
        return;
      }
      int id = node * 4 + entry_head * 2 + z_seen;
      if (!visited[id]) {
        visited[id] = 1;
        stack.push_back(id);
      }
    };

    for (const auto& n : x) {
      visit(at(n), 0, in_z[at(n)]);
      if (active_found) return false;
    }
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      int z_seen = id & 1, entry_head = (id >> 1) & 1, v = id >> 2;
      for (int w : line_adj_[v]) {
        visit(w, entry_head, z_seen | in_z[w]);
        if (active_found) return false;
      }
      // leaving through the tail of an arc: the finished section is a
      // non-collider and must have avoided Z
      if (!z_seen) {
        for (int w : arc_out_[v]) {
          visit(w, 1, in_z[w]);
          if (active_found) return false;
        }
      }
      // leaving against an arc pointing into the section: collider iff the
      // section was also entered through an arrowhead
      for (int w : arc_in_[v]) {
        bool ok = entry_head ? z_seen != 0 : z_seen == 0;
        if (ok) {
          visit(w, 0, in_z[w]);
          if (active_found) return false;
        }
      }
    }
    return true;
  }

  int at(const NodeId& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw input_error("separation: unknown node '" + n + "'");
    return it->second;
  }

 private:
  std::vector<NodeId> labels_;
  std::map<NodeId, int> index_;
  std::vector<std::vector<int>> line_adj_, arc_out_, arc_in_;
};

}  // namespace detail

/// X is separated from Y given Z when no Z-active route joins them.
inline bool separated(const HybridGraph& g, const SeparationTriple& t) {
  detail::SeparationEngine engine(g);
  return engine.separated(t.x, t.y, t.z);
}

/// Test oracle: enumerate routes of up to max_len steps and check each
/// candidate with is_active_route. An active route exists iff one whose
/// bookkeeping states never repeat does, and such a route fits in the
/// 4 * |V| state space, hence the required bound on max_len. Prefixes are
/// abandoned once a completed section already violates its condition, which
/// discards no active continuation.
inline bool separated_bruteforce(const HybridGraph& g, const SeparationTriple& t, size_t max_len) {
  if (!is_chain_graph(g)) throw domain_error("separation requires a chain graph");
  if (max_len < 4 * g.nodes().size()) {
    throw input_error("separated_bruteforce: max_len must be at least 4 * |V|");
  }
  std::vector<NodeId> labels(g.nodes().begin(), g.nodes().end());
  std::map<NodeId, int> index;
  for (size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);
  size_t n = labels.size();
  std::vector<std::vector<int>> line_adj(n), arc_out(n), arc_in(n);
  for (const auto& [a, b] : g.lines()) {
    line_adj[index.at(a)].push_back(index.at(b));
    line_adj[index.at(b)].push_back(index.at(a));
  }
  for (const auto& [tail, head] : g.arcs()) {
    arc_out[index.at(tail)].push_back(index.at(head));
    arc_in[index.at(head)].push_back(index.at(tail));
  }
  std::vector<char> in_y(n, 0), in_z(n, 0);
  for (const auto& m : t.y) in_y[index.at(m)] = 1;
  for (const auto& m : t.z) in_z[index.at(m)] = 1;
  for (const auto& m : t.x) index.at(m);

  std::vector<int> route;
  std::vector<char> on_path(n * 4, 0);
  bool found = false;

  auto confirm = [&]() {
    Route r;
    for (int v : route) r.nodes.push_back(labels[v]);
    if (!is_active_route(g, r, t.z)) {
      throw internal_error("separated_bruteforce: enumeration and route check disagree");
    }
    found = true;
  };

  std::function<void(int, int, int)> dfs = [&](int v, int entry_head, int z_seen) {
    if (found) return;
    if (in_y[v] && !z_seen) {
      confirm();
      return;
    }
    if (route.size() - 1 >= max_len) return;
    auto step = [&](int w, int next_entry, int next_z) {
      int id = w * 4 + next_entry * 2 + next_z;
      if (on_path[id]) return;
      on_path[id] = 1;
      route.push_back(w);
      dfs(w, next_entry, next_z);
      route.pop_back();
      on_path[id] = 0;
    };
    for (int w : line_adj[v]) {
      step(w, entry_head, z_seen | in_z[w]);
      if (found) return;
    }
    if (!z_seen) {
      for (int w : arc_out[v]) {
        step(w, 1, in_z[w]);
        if (found) return;
      }
    }
    for (int w : arc_in[v]) {
      bool ok = entry_head ? z_seen != 0 : z_seen == 0;
      if (!ok) continue;
      step(w, 0, in_z[w]);
      if (found) return;
    }
  };

  for (const auto& m : t.x) {
    int v = index.at(m);
    int id = v * 4 + 0 * 2 + in_z[v];
    on_path[id] = 1;
    route.push_back(v);
    dfs(v, 0, in_z[v]);
    route.pop_back();
    on_path[id] = 0;
    if (found) return false;
  }
  return true;
}

/// Test oracle: classical criterion via the smallest anterior set. Close
/// X ∪ Y ∪ Z under boundaries, moralize the induced subgraph (marry the
/// parents of every component, drop orientations) and decide by plain
/// undirected vertex separation.
inline bool separated_moral(const HybridGraph& g, const SeparationTriple& t) {
  if (!is_chain_graph(g)) throw domain_error("separation requires a chain graph");
  detail::check_subset(g, t.x, "separated_moral");
  detail::check_subset(g, t.y, "separated_moral");
  detail::check_subset(g, t.z, "separated_moral");

  NodeSet anterior = t.x;
  anterior.insert(t.y.begin(), t.y.end());
  anterior.insert(t.z.begin(), t.z.end());
  std::vector<NodeId> work(anterior.begin(), anterior.end());
  while (!work.empty()) {
    NodeId v = work.back();
    work.pop_back();
    for (const auto& w : boundary(g, v)) {
      if (anterior.insert(w).second) work.push_back(w);
    }
  }

  HybridGraph sub = induced_subgraph(g, anterior);
  std::map<NodeId, NodeSet> moral;
  for (const auto& n : sub.nodes()) moral[n];
  auto marry = [&](const NodeId& a, const NodeId& b) {
    moral[a].insert(b);
    moral[b].insert(a);
  };
  for (const auto& [a, b] : sub.lines()) marry(a, b);
  for (const auto& [tail, head] : sub.arcs()) marry(tail, head);
  for (const auto& comp : components(sub)) {
    NodeSet pa = parents(sub, comp);
    for (auto it = pa.begin(); it != pa.end(); ++it) {
      for (auto jt = std::next(it); jt != pa.end(); ++jt) marry(*it, *jt);
    }
  }

  NodeSet reached;
  std::vector<NodeId> stack;
  for (const auto& n : t.x) {
    reached.insert(n);
    stack.push_back(n);
  }
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (t.y.contains(v)) return false;
    for (const auto& w : moral.at(v)) {
      if (t.z.contains(w)) continue;
      if (reached.insert(w).second) stack.push_back(w);
    }
  }
  return true;
}

/// Canonical statement <{x}, {y} | Z> with x < y. A model stores only these;
/// statements over larger sets are decided by conjunction, which is lossless
/// for separation-induced models because a route into a union is a route
/// into one of its parts.
struct CanonicalTriple {
  NodeId x, y;
  NodeSet z;
  auto operator<=>(const CanonicalTriple&) const = default;
};

struct IndependenceModel {
  NodeSet universe;
  std::set<CanonicalTriple> triples;
  bool operator==(const IndependenceModel&) const = default;
};

/// All separation statements of g, canonical form: every node pair against
/// every conditioning subset of the remaining nodes.
inline IndependenceModel enumerate_model(const HybridGraph& g, size_t node_bound = kDefaultNodeBound) {
  if (g.nodes().size() > node_bound) {
    throw resource_error("enumerate_model: graph has " + std::to_string(g.nodes().size()) +
                         " nodes, bound is " + std::to_string(node_bound));
  }
  detail::SeparationEngine engine(g);
  IndependenceModel model;
  model.universe = g.nodes();
  std::vector<NodeId> v(g.nodes().begin(), g.nodes().end());
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = i + 1; j < v.size(); ++j) {
      std::vector<NodeId> rest;
      for (size_t k = 0; k < v.size(); ++k) {
        if (k != i && k != j) rest.push_back(v[k]);
      }
      for (uint64_t mask = 0; mask < (uint64_t{1} << rest.size()); ++mask) {
        NodeSet z;
        for (size_t k = 0; k < rest.size(); ++k) {
          if (mask & (uint64_t{1} << k)) z.insert(rest[k]);
        }
        if (engine.separated({v[i]}, {v[j]}, z)) {
          model.triples.insert({v[i], v[j], std::move(z)});
        }
      }
    }
  }
  return model;
}

/// Decides a general statement from the canonical ones by conjunction.
inline bool is_independent(const IndependenceModel& m, const SeparationTriple& t) {
  for (const auto& a : t.x) {
    for (const auto& b : t.y) {
      const auto& [lo, hi] = std::minmax(a, b);
      if (!m.triples.contains({lo, hi, t.z})) return false;
    }
  }
  return true;
}

/// I(h) ⊆ I(g): every statement separated in h is separated in g.
inline bool is_imap(const HybridGraph& h, const HybridGraph& g, size_t node_bound = kDefaultNodeBound) {
  if (h.nodes() != g.nodes()) throw input_error("is_imap: graphs must share one node set");
  if (h.nodes().size() > node_bound) {
    throw resource_error("is_imap: graph has " + std::to_string(h.nodes().size()) +
                         " nodes, bound is " + std::to_string(node_bound));
  }
  detail::SeparationEngine eh(h), eg(g);
  std::vector<NodeId> v(h.nodes().begin(), h.nodes().end());
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = i + 1; j < v.size(); ++j) {
      std::vector<NodeId> rest;
      for (size_t k = 0; k < v.size(); ++k) {
        if (k != i && k != j) rest.push_back(v[k]);
      }
      for (uint64_t mask = 0; mask < (uint64_t{1} << rest.size()); ++mask) {
        NodeSet z;
        for (size_t k = 0; k < rest.size(); ++k) {
          if (mask & (uint64_t{1} << k)) z.insert(rest[k]);
        }
        if (eh.separated({v[i]}, {v[j]}, z) && !eg.separated({v[i]}, {v[j]}, z)) return false;
      }
    }
  }
  return true;
}

struct GraphoidViolation {
  std::string axiom;
  NodeSet x, y, z, w;
};

/// Exhaustive sweep of symmetry, decomposition, weak union, contraction and
/// intersection over all disjoint set assignments from the model's universe.
inline std::vector<GraphoidViolation> check_graphoid(const IndependenceModel& m,
                                                     size_t node_bound = kGraphoidNodeBound) {
  if (m.universe.size() > node_bound) {
    throw resource_error("check_graphoid: universe has " + std::to_string(m.universe.size()) +
                         " nodes, bound is " + std::to_string(node_bound));
  }
  std::vector<NodeId> u(m.universe.begin(), m.universe.end());
  std::vector<GraphoidViolation> violations;

  auto ind = [&](const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    for (const auto& a : x) {
      for (const auto& b : y) {
        const auto& [lo, hi] = std::minmax(a, b);
        if (!m.triples.contains({lo, hi, z})) return false;
      }
    }
    return true;
  };
  auto united = [](const NodeSet& a, const NodeSet& b) {
    NodeSet out = a;
    out.insert(b.begin(), b.end());
    return out;
  };

  // each node goes to one of X, Y, Z, W or stays out
  std::vector<int> bin(u.size(), 0);
  while (true) {
    NodeSet x, y, z, w;
    for (size_t i = 0; i < u.size(); ++i) {
      switch (bin[i]) {
        case 0: break;
        case 1: x.insert(u[i]); break;
        case 2: y.insert(u[i]); break;
        case 3: z.insert(u[i]); break;
        case 4: w.insert(u[i]); break;
      }
    }
    if (!x.empty() && !y.empty()) {
      if (w.empty()) {
        if (ind(x, y, z) && !ind(y, x, z)) violations.push_back({"symmetry", x, y, z, w});
      } else {
        NodeSet yw = united(y, w);
        NodeSet zw = united(z, w);
        bool x_yw_z = ind(x, yw, z);
        if (x_yw_z && !ind(x, y, z)) violations.push_back({"decomposition", x, y, z, w});
        if (x_yw_z && !ind(x, y, zw)) violations.push_back({"weak-union", x, y, z, w});
        if (ind(x, y, zw) && ind(x, w, z) && !x_yw_z) {
          violations.push_back({"contraction", x, y, z, w});
        }
        if (ind(x, y, zw) && ind(x, w, united(z, y)) && !x_yw_z) {
          violations.push_back({"intersection", x, y, z, w});
        }
      }
    }
    size_t pos = 0;
    while (pos < bin.size() && bin[pos] == 4) bin[pos++] = 0;
    if (pos == bin.size()) break;
    ++bin[pos];
  }
  return violations;
}

/// Answers "is X independent of Y given Z?" either from a chain graph's
/// separation relation or from an explicit model. Queries with an empty X
/// or Y hold vacuously.
struct IndependenceOracle {
  NodeSet universe;
  std::function<bool(const NodeSet&, const NodeSet&, const NodeSet&)> fn;

  bool query(const NodeSet& x, const NodeSet& y, const NodeSet& z) const {
    if (x.empty() || y.empty()) return true;
    return fn(x, y, z);
  }
};

/// Pairwise block-recursive Markov property of g (consistent with alpha)
/// with respect to the oracle: every non-adjacent pair must be independent
/// given the rest of the smallest chain prefix containing both.
inline bool check_pairwise_block_recursive(const HybridGraph& g, const Chain& alpha,
                                           const IndependenceOracle& oracle) {
  if (!is_consistent(g, alpha)) {
    throw domain_error("check_pairwise_block_recursive: chain is not consistent with the graph");
  }
  auto idx = detail::chain_block_index(alpha);
  std::vector<NodeSet> prefix(alpha.blocks.size());
  NodeSet acc;
  for (size_t i = 0; i < alpha.blocks.size(); ++i) {
    acc.insert(alpha.blocks[i].begin(), alpha.blocks[i].end());
    prefix[i] = acc;
  }
  std::vector<NodeId> v(g.nodes().begin(), g.nodes().end());
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = i + 1; j < v.size(); ++j) {
      if (g.adjacent(v[i], v[j])) continue;
      size_t k = std::max(idx.at(v[i]), idx.at(v[j]));
      NodeSet cond = prefix[k];
      cond.erase(v[i]);
      cond.erase(v[j]);
      if (!oracle.query({v[i]}, {v[j]}, cond)) return false;
    }
  }
  return true;
}

}  // namespace cg
