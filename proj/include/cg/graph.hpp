#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <cg/errors.hpp>

namespace cg {

using NodeId = std::string;
using NodeSet = std::set<NodeId>;

/// Directed edge, stored as (tail, head).
using Arc = std::pair<NodeId, NodeId>;
/// Undirected edge, stored with the endpoints in label order.
using Line = std::pair<NodeId, NodeId>;

namespace detail {

inline void check_label(const NodeId& label) {
  if (label.empty()) throw input_error("node label must be nonempty");
  for (char c : label) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw input_error("node label may not contain whitespace: '" + label + "'");
    }
  }
}

inline Line make_line(const NodeId& a, const NodeId& b) {
  return a < b ? Line{a, b} : Line{b, a};
}

}  // namespace detail

/// A graph with both directed and undirected edges over string-labelled
/// nodes. Immutable value type: every editing helper returns a new graph.
/// At most one edge may connect a pair of nodes, in particular A -> B
/// excludes both B -> A and A -- B.
class HybridGraph {
 public:
  HybridGraph() = default;

  HybridGraph(NodeSet nodes, const std::set<Arc>& arcs, const std::set<Line>& lines)
      : nodes_(std::move(nodes)) {
    for (const auto& n : nodes_) detail::check_label(n);
    for (const auto& [tail, head] : arcs) insert_arc(tail, head);
    for (const auto& [a, b] : lines) insert_line(a, b);
  }

  const NodeSet& nodes() const { return nodes_; }
  const std::set<Arc>& arcs() const { return arcs_; }
  const std::set<Line>& lines() const { return lines_; }

  bool has_node(const NodeId& n) const { return nodes_.contains(n); }
  bool has_arc(const NodeId& tail, const NodeId& head) const {
    return arcs_.contains({tail, head});
  }
  bool has_line(const NodeId& a, const NodeId& b) const {
    return lines_.contains(detail::make_line(a, b));
  }
  bool adjacent(const NodeId& a, const NodeId& b) const {
    return has_line(a, b) || has_arc(a, b) || has_arc(b, a);
  }
  size_t edge_count() const { return arcs_.size() + lines_.size(); }

  HybridGraph with_node(const NodeId& n) const {
    detail::check_label(n);
    HybridGraph g = *this;
    g.nodes_.insert(n);
    return g;
  }

  HybridGraph with_arc(const NodeId& tail, const NodeId& head) const {
    HybridGraph g = *this;
    g.insert_arc(tail, head);
    return g;
  }

  HybridGraph with_line(const NodeId& a, const NodeId& b) const {
    HybridGraph g = *this;
    g.insert_line(a, b);
    return g;
  }

  /// Reorients the line a -- b as the arc a -> b.
  HybridGraph line_to_arc(const NodeId& a, const NodeId& b) const {
    if (!has_line(a, b)) throw input_error("no undirected edge between '" + a + "' and '" + b + "'");
    HybridGraph g = *this;
    g.lines_.erase(detail::make_line(a, b));
    g.arcs_.insert({a, b});
    return g;
  }

  /// Drops the orientation of the arc tail -> head.
  HybridGraph arc_to_line(const NodeId& tail, const NodeId& head) const {
    if (!has_arc(tail, head)) throw input_error("no directed edge '" + tail + "' -> '" + head + "'");
    HybridGraph g = *this;
    g.arcs_.erase({tail, head});
    g.lines_.insert(detail::make_line(tail, head));
    return g;
  }

  bool operator==(const HybridGraph&) const = default;

 private:
  void check_endpoints(const NodeId& a, const NodeId& b) const {
    if (!has_node(a)) throw input_error("unknown node '" + a + "'");
    if (!has_node(b)) throw input_error("unknown node '" + b + "'");
    if (a == b) throw input_error("self-loop at '" + a + "' not allowed");
    if (adjacent(a, b)) {
      throw input_error("multiple edges between '" + a + "' and '" + b + "' not allowed");
    }
  }

  void insert_arc(const NodeId& tail, const NodeId& head) {
    check_endpoints(tail, head);
    arcs_.insert({tail, head});
  }

  void insert_line(const NodeId& a, const NodeId& b) {
    check_endpoints(a, b);
    lines_.insert(detail::make_line(a, b));
  }

  NodeSet nodes_;
  std::set<Arc> arcs_;
  std::set<Line> lines_;
};

/// Ordered partition of a node set into blocks. "X is left of Y" means X's
/// block strictly precedes Y's.
struct Chain {
  std::vector<NodeSet> blocks;

  NodeSet all_nodes() const {
    NodeSet out;
    for (const auto& b : blocks) out.insert(b.begin(), b.end());
    return out;
  }

  bool operator==(const Chain&) const = default;
};

namespace detail {

inline void check_subset(const HybridGraph& g, const NodeSet& s, const char* what) {
  for (const auto& n : s) {
    if (!g.has_node(n)) throw input_error(std::string(what) + ": unknown node '" + n + "'");
  }
}

/// Throws unless the chain's blocks are nonempty, pairwise disjoint and
/// cover exactly `universe`.
inline void check_chain_partition(const Chain& c, const NodeSet& universe, const char* what) {
  NodeSet seen;
  for (const auto& b : c.blocks) {
    if (b.empty()) throw input_error(std::string(what) + ": chain block may not be empty");
    for (const auto& n : b) {
      if (!seen.insert(n).second) {
        throw input_error(std::string(what) + ": node '" + n + "' appears in more than one block");
      }
      if (!universe.contains(n)) {
        throw input_error(std::string(what) + ": unknown node '" + n + "'");
      }
    }
  }
  if (seen != universe) throw input_error(std::string(what) + ": chain does not cover the node set");
}

inline std::map<NodeId, size_t> chain_block_index(const Chain& c) {
  std::map<NodeId, size_t> idx;
  for (size_t i = 0; i < c.blocks.size(); ++i) {
    for (const auto& n : c.blocks[i]) idx[n] = i;
  }
  return idx;
}

}  // namespace detail

inline NodeSet parents(const HybridGraph& g, const NodeSet& y) {
  detail::check_subset(g, y, "parents");
  NodeSet out;
  for (const auto& [tail, head] : g.arcs()) {
    if (y.contains(head)) out.insert(tail);
  }
  return out;
}

inline NodeSet neighbors(const HybridGraph& g, const NodeSet& y) {
  detail::check_subset(g, y, "neighbors");
  NodeSet out;
  for (const auto& [a, b] : g.lines()) {
    if (y.contains(b)) out.insert(a);
    if (y.contains(a)) out.insert(b);
  }
  return out;
}

inline NodeSet boundary(const HybridGraph& g, const NodeId& x) {
  if (!g.has_node(x)) throw input_error("boundary: unknown node '" + x + "'");
  NodeSet out = parents(g, NodeSet{x});
  NodeSet ne = neighbors(g, NodeSet{x});
  out.insert(ne.begin(), ne.end());
  return out;
}

/// Maximal sets of nodes pairwise connected by undirected routes, listed in
/// order of their smallest member.
inline std::vector<NodeSet> components(const HybridGraph& g) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& [a, b] : g.lines()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<NodeSet> out;
  NodeSet visited;
  for (const auto& start : g.nodes()) {
    if (visited.contains(start)) continue;
    NodeSet comp;
    std::vector<NodeId> stack{start};
    visited.insert(start);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.insert(v);
      auto it = adj.find(v);
      if (it == adj.end()) continue;
      for (const auto& w : it->second) {
        if (visited.insert(w).second) stack.push_back(w);
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

/// Connected components of the subgraph induced by `s`, using only
/// undirected edges with both endpoints in `s`. Ordered by smallest member.
inline std::vector<NodeSet> undirected_components_within(const HybridGraph& g, const NodeSet& s) {
  detail::check_subset(g, s, "undirected_components_within");
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& [a, b] : g.lines()) {
    if (s.contains(a) && s.contains(b)) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::vector<NodeSet> out;
  NodeSet visited;
  for (const auto& start : s) {
    if (visited.contains(start)) continue;
    NodeSet comp;
    std::vector<NodeId> stack{start};
    visited.insert(start);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.insert(v);
      auto it = adj.find(v);
      if (it == adj.end()) continue;
      for (const auto& w : it->second) {
        if (visited.insert(w).second) stack.push_back(w);
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

/// True when every pair of nodes in `s` is joined by an undirected route
/// that stays inside `s`. The empty set counts as connected.
inline bool connected_within(const HybridGraph& g, const NodeSet& s) {
  return undirected_components_within(g, s).size() <= 1;
}

namespace detail {

struct Quotient {
  std::vector<NodeSet> comps;
  std::map<NodeId, size_t> comp_of;
  std::set<std::pair<size_t, size_t>> arcs;  // between distinct components
  bool self_arc = false;                     // directed edge inside a component
};

inline Quotient quotient_digraph(const HybridGraph& g) {
  Quotient q;
  q.comps = components(g);
  for (size_t i = 0; i < q.comps.size(); ++i) {
    for (const auto& n : q.comps[i]) q.comp_of[n] = i;
  }
  for (const auto& [tail, head] : g.arcs()) {
    size_t a = q.comp_of.at(tail), b = q.comp_of.at(head);
    if (a == b) {
      q.self_arc = true;
    } else {
      q.arcs.insert({a, b});
    }
  }
  return q;
}

/// Topological order of the quotient, or empty when it has a cycle or a
/// directed edge inside a component. Ties pick the component with the
/// smallest member label.
inline std::vector<size_t> quotient_topological_order(const Quotient& q) {
  if (q.self_arc) return {};
  size_t n = q.comps.size();
  std::vector<size_t> indegree(n, 0);
  std::vector<std::vector<size_t>> out(n);
  for (const auto& [a, b] : q.arcs) {
    out[a].push_back(b);
    ++indegree[b];
  }
  // components are already listed by smallest member, so index order is
  // label order
  std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
  for (size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<size_t> order;
  while (!ready.empty()) {
    size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (size_t w : out[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) return {};
  return order;
}

}  // namespace detail

/// A chain graph is a hybrid graph whose component-level quotient digraph is
/// acyclic and has no directed edge inside a component.
inline bool is_chain_graph(const HybridGraph& g) {
  auto q = detail::quotient_digraph(g);
  if (q.self_arc) return false;
  return !(detail::quotient_topological_order(q).empty() && !q.comps.empty());
}

/// A chain with one block per component, ordered topologically. The result
/// is always consistent with `g`.
inline Chain consistent_chain(const HybridGraph& g) {
  auto q = detail::quotient_digraph(g);
  auto order = detail::quotient_topological_order(q);
  if (q.self_arc || (order.empty() && !q.comps.empty())) {
    throw domain_error("consistent_chain: not a chain graph");
  }
  Chain c;
  for (size_t i : order) c.blocks.push_back(q.comps[i]);
  return c;
}

/// True when every arc runs strictly left to right in `alpha` and every line
/// stays inside one block.
inline bool is_consistent(const HybridGraph& g, const Chain& alpha) {
  detail::check_chain_partition(alpha, g.nodes(), "is_consistent");
  auto idx = detail::chain_block_index(alpha);
  for (const auto& [tail, head] : g.arcs()) {
    if (idx.at(tail) >= idx.at(head)) return false;
  }
  for (const auto& [a, b] : g.lines()) {
    if (idx.at(a) != idx.at(b)) return false;
  }
  return true;
}

/// Everything reachable from `y` by routes made of lines and forward arcs.
/// Includes `y` itself: routes of length zero count.
inline NodeSet descendants(const HybridGraph& g, const NodeSet& y) {
  detail::check_subset(g, y, "descendants");
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& [a, b] : g.lines()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (const auto& [tail, head] : g.arcs()) adj[tail].push_back(head);
  NodeSet out = y;
  std::vector<NodeId> stack(y.begin(), y.end());
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    auto it = adj.find(v);
    if (it == adj.end()) continue;
    for (const auto& w : it->second) {
      if (out.insert(w).second) stack.push_back(w);
    }
  }
  return out;
}

/// Components whose descendant set is exactly themselves.
inline std::vector<NodeSet> terminal_components(const HybridGraph& g) {
  if (!is_chain_graph(g)) throw domain_error("terminal_components: not a chain graph");
  std::vector<NodeSet> out;
  for (const auto& c : components(g)) {
    if (descendants(g, c) == c) out.push_back(c);
  }
  return out;
}

/// The members of `k` none of whose nodes descends from the rest of `k`.
/// Every member must be a component of `g`.
inline std::vector<NodeSet> maximal_components(const HybridGraph& g, const std::vector<NodeSet>& k) {
  std::set<NodeSet> comps;
  for (auto& c : components(g)) comps.insert(std::move(c));
  for (const auto& c : k) {
    if (!comps.contains(c)) throw input_error("maximal_components: set is not a component");
  }
  std::vector<NodeSet> out;
  for (const auto& c : k) {
    NodeSet rest;
    for (const auto& other : k) {
      if (other != c) rest.insert(other.begin(), other.end());
    }
    NodeSet desc = descendants(g, rest);
    bool maximal = std::none_of(c.begin(), c.end(),
                                [&](const NodeId& n) { return desc.contains(n); });
    if (maximal) out.push_back(c);
  }
  return out;
}

/// True when `s` is a union of components with no directed edge between its
/// nodes. The empty set is a block.
inline bool is_block(const HybridGraph& g, const NodeSet& s) {
  detail::check_subset(g, s, "is_block");
  for (const auto& c : components(g)) {
    bool any = false, all = true;
    for (const auto& n : c) {
      if (s.contains(n)) {
        any = true;
      } else {
        all = false;
      }
    }
    if (any && !all) return false;
  }
  for (const auto& [tail, head] : g.arcs()) {
    if (s.contains(tail) && s.contains(head)) return false;
  }
  return true;
}

/// Subgraph on `keep`: those nodes plus every edge with both endpoints kept.
inline HybridGraph induced_subgraph(const HybridGraph& g, const NodeSet& keep) {
  detail::check_subset(g, keep, "induced_subgraph");
  std::set<Arc> arcs;
  std::set<Line> lines;
  for (const auto& [tail, head] : g.arcs()) {
    if (keep.contains(tail) && keep.contains(head)) arcs.insert({tail, head});
  }
  for (const auto& [a, b] : g.lines()) {
    if (keep.contains(a) && keep.contains(b)) lines.insert({a, b});
  }
  return HybridGraph(keep, arcs, lines);
}

}  // namespace cg
