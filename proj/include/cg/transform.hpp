#pragma once

#include <variant>
#include <vector>

#include <cg/graph.hpp>

namespace cg {

struct AddUndirectedOp {
  NodeId a, b;  // stored with a < b
  bool operator==(const AddUndirectedOp&) const = default;
};

struct AddDirectedOp {
  NodeId tail, head;
  bool operator==(const AddDirectedOp&) const = default;
};

struct SplitOp {
  NodeSet component, part;  // split component into (component \ part, part)
  bool operator==(const SplitOp&) const = default;
};

struct MergeOp {
  NodeSet left, right;
  bool operator==(const MergeOp&) const = default;
};

/// One replayable modification. Applying the recorded ops, in order, to the
/// graph they were recorded from reproduces the transformed graph exactly.
using ElementaryOp = std::variant<AddUndirectedOp, AddDirectedOp, SplitOp, MergeOp>;

namespace detail {

inline void check_component(const HybridGraph& g, const NodeSet& c, const char* what) {
  check_subset(g, c, what);
  for (const auto& comp : components(g)) {
    if (comp == c) return;
  }
  throw input_error(std::string(what) + ": set is not a component");
}

inline void check_split_args(const HybridGraph& g, const NodeSet& c, const NodeSet& l) {
  check_component(g, c, "split");
  NodeSet rest;
  for (const auto& n : c) {
    if (!l.contains(n)) rest.insert(n);
  }
  for (const auto& n : l) {
    if (!c.contains(n)) throw input_error("split: part is not a subset of the component");
  }
  if (l.empty() || rest.empty()) throw input_error("split: both parts must be nonempty");
  if (!connected_within(g, l) || !connected_within(g, rest)) {
    throw input_error("split: both parts must be connected");
  }
}

inline void check_merge_args(const HybridGraph& g, const NodeSet& l, const NodeSet& r) {
  check_component(g, l, "merge");
  check_component(g, r, "merge");
  NodeSet pa = parents(g, r);
  bool meets = false;
  for (const auto& n : l) {
    if (pa.contains(n)) meets = true;
  }
  if (!meets) throw input_error("merge: left component has no directed edge into the right one");
}

}  // namespace detail

/// Splits component c into (c \ l, l): every line with one endpoint in each
/// part becomes an arc pointing into l.
inline HybridGraph split(const HybridGraph& g, const NodeSet& c, const NodeSet& l) {
  detail::check_split_args(g, c, l);
  HybridGraph out = g;
  for (const auto& [a, b] : g.lines()) {
    if (c.contains(a) && l.contains(b) && !l.contains(a)) {
      out = out.line_to_arc(a, b);
    } else if (c.contains(b) && l.contains(a) && !l.contains(b)) {
      out = out.line_to_arc(b, a);
    }
  }
  return out;
}

/// A split is feasible when the neighbours of l left behind form a clique
/// and every parent of l already points at each of them. Feasible splits
/// keep the independence model unchanged.
inline bool is_feasible_split(const HybridGraph& g, const NodeSet& c, const NodeSet& l) {
  detail::check_split_args(g, c, l);
  NodeSet ne;
  for (const auto& n : neighbors(g, l)) {
    if (c.contains(n) && !l.contains(n)) ne.insert(n);
  }
  for (auto it = ne.begin(); it != ne.end(); ++it) {
    for (auto jt = std::next(it); jt != ne.end(); ++jt) {
      if (!g.has_line(*it, *jt)) return false;
    }
  }
  for (const auto& p : parents(g, l)) {
    for (const auto& y : ne) {
      if (!g.has_arc(p, y)) return false;
    }
  }
  return true;
}

/// Merges components l and r: every arc from l into r loses its orientation.
inline HybridGraph merge(const HybridGraph& g, const NodeSet& l, const NodeSet& r) {
  detail::check_merge_args(g, l, r);
  HybridGraph out = g;
  for (const auto& [tail, head] : g.arcs()) {
    if (l.contains(tail) && r.contains(head)) out = out.arc_to_line(tail, head);
  }
  return out;
}

/// A merging is feasible when the parents of r inside l form a clique and
/// every parent of r outside l points at each parent inside l.
inline bool is_feasible_merge(const HybridGraph& g, const NodeSet& l, const NodeSet& r) {
  detail::check_merge_args(g, l, r);
  NodeSet pa = parents(g, r);
  NodeSet inside, outside;
  for (const auto& n : pa) {
    if (l.contains(n)) {
      inside.insert(n);
    } else {
      outside.insert(n);
    }
  }
  for (auto it = inside.begin(); it != inside.end(); ++it) {
    for (auto jt = std::next(it); jt != inside.end(); ++jt) {
      if (!g.has_line(*it, *jt)) return false;
    }
  }
  for (const auto& x : outside) {
    for (const auto& y : inside) {
      if (!g.has_arc(x, y)) return false;
    }
  }
  return true;
}

struct TransformResult {
  HybridGraph graph;
  std::vector<ElementaryOp> ops;
};

/// Repeatedly splits components of g until l is a block, first adding the
/// smallest set of edges that makes each split feasible. k must be a block
/// of g containing l. Two phases over the maximal connected subsets of l:
/// edge additions (evaluated against the evolving graph), then the splits.
inline TransformResult fbsplit(const NodeSet& k, const NodeSet& l, const HybridGraph& g) {
  if (!is_chain_graph(g)) throw domain_error("fbsplit: not a chain graph");
  if (!is_block(g, k)) throw input_error("fbsplit: K is not a block");
  for (const auto& n : l) {
    if (!k.contains(n)) throw input_error("fbsplit: L is not a subset of K");
  }

  std::vector<NodeSet> parts = undirected_components_within(g, l);
  TransformResult res{g, {}};
  NodeSet k_minus_l;
  for (const auto& n : k) {
    if (!l.contains(n)) k_minus_l.insert(n);
  }

  for (const auto& li : parts) {
    NodeSet ne;
    for (const auto& n : neighbors(res.graph, li)) {
      if (k_minus_l.contains(n)) ne.insert(n);
    }
    for (auto it = ne.begin(); it != ne.end(); ++it) {
      for (auto jt = std::next(it); jt != ne.end(); ++jt) {
        if (!res.graph.adjacent(*it, *jt)) {
          res.graph = res.graph.with_line(*it, *jt);
          res.ops.push_back(AddUndirectedOp{*it, *jt});
        }
      }
    }
    for (const auto& p : parents(res.graph, li)) {
      for (const auto& y : ne) {
        if (!res.graph.has_arc(p, y)) {
          res.graph = res.graph.with_arc(p, y);
          res.ops.push_back(AddDirectedOp{p, y});
        }
      }
    }
  }

  for (const auto& li : parts) {
    NodeSet kj;
    for (const auto& comp : components(res.graph)) {
      if (comp.contains(*li.begin())) {
        kj = comp;
        break;
      }
    }
    if (kj == li) continue;  // already its own component
    if (!is_feasible_split(res.graph, kj, li)) {
      throw internal_error("fbsplit: scheduled split is not feasible");
    }
    res.graph = split(res.graph, kj, li);
    res.ops.push_back(SplitOp{kj, li});
  }

  if (!is_chain_graph(res.graph) || !is_block(res.graph, l)) {
    throw internal_error("fbsplit: postcondition violated");
  }
  return res;
}

/// Repeatedly merges components of g until l ∪ r is a block, first adding
/// the smallest set of edges that makes each merging feasible. l and r must
/// be disjoint blocks of g with no directed edge from r into l (such edges
/// could never be absorbed by mergings). Block pairs whose feasibility
/// edges cannot be added without creating a semi-directed cycle are
/// rejected as well; pairs of adjacent blocks of one chain never are.
inline TransformResult fbmerge(const NodeSet& l, const NodeSet& r, const HybridGraph& g) {
  if (!is_chain_graph(g)) throw domain_error("fbmerge: not a chain graph");
  if (!is_block(g, l)) throw input_error("fbmerge: L is not a block");
  if (!is_block(g, r)) throw input_error("fbmerge: R is not a block");
  for (const auto& n : l) {
    if (r.contains(n)) throw input_error("fbmerge: L and R must be disjoint");
  }
  for (const auto& [tail, head] : g.arcs()) {
    if (r.contains(tail) && l.contains(head)) {
      throw domain_error("fbmerge: directed edge from R into L cannot be absorbed");
    }
  }

  std::vector<NodeSet> r_comps;
  for (const auto& comp : components(g)) {
    bool inside = true;
    for (const auto& n : comp) {
      if (!r.contains(n)) inside = false;
    }
    if (inside && !comp.empty() && r.contains(*comp.begin())) r_comps.push_back(comp);
  }

  TransformResult res{g, {}};
  auto component_of = [&](const NodeId& n) {
    for (const auto& comp : components(res.graph)) {
      if (comp.contains(n)) return comp;
    }
    throw internal_error("fbmerge: node without a component");
  };
  for (const auto& ri : r_comps) {
    NodeSet pa = parents(res.graph, ri);
    NodeSet inside, outside;
    for (const auto& n : pa) {
      if (l.contains(n)) {
        inside.insert(n);
      } else {
        outside.insert(n);
      }
    }
    for (auto it = inside.begin(); it != inside.end(); ++it) {
      for (auto jt = std::next(it); jt != inside.end(); ++jt) {
        if (res.graph.adjacent(*it, *jt)) continue;
        NodeSet ca = component_of(*it), cb = component_of(*jt);
        if (ca != cb && (descendants(res.graph, ca).contains(*jt) ||
                         descendants(res.graph, cb).contains(*it))) {
          throw domain_error("fbmerge: joining '" + *it + "' and '" + *jt +
                             "' would create a cycle");
        }
        res.graph = res.graph.with_line(*it, *jt);
        res.ops.push_back(AddUndirectedOp{*it, *jt});
      }
    }
    for (const auto& x : outside) {
      for (const auto& y : inside) {
        if (res.graph.has_arc(x, y)) continue;
        if (res.graph.adjacent(x, y)) {
          throw domain_error("fbmerge: conflicting edge between '" + x + "' and '" + y +
                             "' prevents a feasible merging");
        }
        if (descendants(res.graph, component_of(y)).contains(x)) {
          throw domain_error("fbmerge: arc '" + x + "' -> '" + y + "' would create a cycle");
        }
        res.graph = res.graph.with_arc(x, y);
        res.ops.push_back(AddDirectedOp{x, y});
      }
    }
  }

  NodeSet l_or_r = l;
  l_or_r.insert(r.begin(), r.end());
  for (const auto& ri : r_comps) {
    NodeSet pa = parents(res.graph, ri);
    std::vector<NodeSet> candidates;
    for (const auto& comp : components(res.graph)) {
      bool in_union = true;
      for (const auto& n : comp) {
        if (!l_or_r.contains(n)) in_union = false;
      }
      if (!in_union) continue;
      bool meets = false;
      for (const auto& n : comp) {
        if (pa.contains(n)) meets = true;
      }
      if (meets) candidates.push_back(comp);
    }
    if (candidates.size() > 1) {
      throw internal_error("fbmerge: merge target is not unique");
    }
    if (candidates.empty()) continue;  // nothing points at this component
    if (!is_feasible_merge(res.graph, candidates.front(), ri)) {
      throw internal_error("fbmerge: scheduled merging is not feasible");
    }
    res.graph = merge(res.graph, candidates.front(), ri);
    res.ops.push_back(MergeOp{candidates.front(), ri});
  }

  if (!is_chain_graph(res.graph) || !is_block(res.graph, l_or_r)) {
    throw internal_error("fbmerge: postcondition violated");
  }
  return res;
}

/// Replays one recorded modification.
inline HybridGraph apply_op(const HybridGraph& g, const ElementaryOp& op) {
  return std::visit(
      [&](const auto& o) -> HybridGraph {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, AddUndirectedOp>) {
          return g.with_line(o.a, o.b);
        } else if constexpr (std::is_same_v<T, AddDirectedOp>) {
          return g.with_arc(o.tail, o.head);
        } else if constexpr (std::is_same_v<T, SplitOp>) {
          return split(g, o.component, o.part);
        } else {
          return merge(g, o.left, o.right);
        }
      },
      op);
}

inline HybridGraph apply_ops(const HybridGraph& g, const std::vector<ElementaryOp>& ops) {
  HybridGraph out = g;
  for (const auto& op : ops) out = apply_op(out, op);
  return out;
}

}  // namespace cg
