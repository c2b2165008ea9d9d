#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <cg/separation.hpp>
#include <cg/transform.hpp>

namespace cg {

/// A replayable transformation record: applying `ops` in order to `initial`
/// yields `final_graph`, and every intermediate graph is a chain graph.
struct Trace {
  HybridGraph initial;
  std::optional<Chain> chain;  // the chain the transformation was aimed at, if any
  std::vector<ElementaryOp> ops;
  HybridGraph final_graph;

  bool operator==(const Trace&) const = default;
};

/// Derives a chain that is consistent with g and as close to alpha as
/// possible: repeatedly prepend the terminal component whose leftmost node
/// in alpha sits rightmost (ties to the smallest member label), then bubble
/// it rightward past blocks it does not feed into and whose alpha positions
/// are strictly smaller.
inline Chain construct_beta(const HybridGraph& g, const Chain& alpha) {
  if (!is_chain_graph(g)) throw domain_error("construct_beta: not a chain graph");
  detail::check_chain_partition(alpha, g.nodes(), "construct_beta");
  auto alpha_idx = detail::chain_block_index(alpha);
  auto min_idx = [&](const NodeSet& s) {
    size_t out = alpha.blocks.size();
    for (const auto& n : s) out = std::min(out, alpha_idx.at(n));
    return out;
  };
  auto max_idx = [&](const NodeSet& s) {
    size_t out = 0;
    for (const auto& n : s) out = std::max(out, alpha_idx.at(n));
    return out;
  };

  Chain beta;
  HybridGraph h = g;
  while (!h.nodes().empty()) {
    auto terminals = terminal_components(h);
    size_t best = 0;
    for (size_t i = 1; i < terminals.size(); ++i) {
      // strict comparison keeps the first (smallest-member) component on ties
      if (min_idx(terminals[i]) > min_idx(terminals[best])) best = i;
    }
    NodeSet c = terminals[best];
    beta.blocks.insert(beta.blocks.begin(), c);

    size_t pos = 0;
    while (pos + 1 < beta.blocks.size()) {
      const NodeSet& right = beta.blocks[pos + 1];
      NodeSet pa = parents(g, right);  // parents in the original graph
      bool feeds_right = std::any_of(c.begin(), c.end(),
                                     [&](const NodeId& n) { return pa.contains(n); });
      if (feeds_right || min_idx(c) <= max_idx(right)) break;
      std::swap(beta.blocks[pos], beta.blocks[pos + 1]);
      ++pos;
    }

    NodeSet keep;
    for (const auto& n : h.nodes()) {
      if (!c.contains(n)) keep.insert(n);
    }
    h = induced_subgraph(h, keep);
  }

  if (!is_consistent(g, beta)) {
    throw internal_error("construct_beta: derived chain is not consistent with the graph");
  }
  return beta;
}

struct B3Result {
  HybridGraph graph;
  Trace trace;
};

/// Transforms g into the minimal independence map of its own model relative
/// to alpha, by feasible block splits and mergings only. Works through the
/// blocks of alpha right to left, each time gathering the block's nodes into
/// one block of the working chain beta via fbsplit/fbmerge, until beta
/// equals alpha.
inline B3Result method_b3(const HybridGraph& g, const Chain& alpha) {
  if (!is_chain_graph(g)) throw domain_error("method_b3: not a chain graph");
  detail::check_chain_partition(alpha, g.nodes(), "method_b3");
  auto alpha_idx = detail::chain_block_index(alpha);

  Chain beta = construct_beta(g, alpha);
  HybridGraph cur = g;
  std::vector<ElementaryOp> ops;
  size_t budget = 4 * alpha.blocks.size() * g.nodes().size() + 4;

  bool done = alpha.blocks.empty();
  for (size_t bi = alpha.blocks.size(); bi-- > 0 && !done;) {
    const NodeSet& c = alpha.blocks[bi];
    while (true) {
      if (budget-- == 0) throw internal_error("method_b3: iteration budget exhausted");

      // leftmost block of beta that meets c
      size_t kpos = beta.blocks.size();
      for (size_t i = 0; i < beta.blocks.size() && kpos == beta.blocks.size(); ++i) {
        for (const auto& n : beta.blocks[i]) {
          if (c.contains(n)) {
            kpos = i;
            break;
          }
        }
      }
      if (kpos == beta.blocks.size()) {
        throw internal_error("method_b3: no block of beta meets the current block");
      }

      NodeSet k = beta.blocks[kpos];
      NodeSet l, k_rest;
      for (const auto& n : k) {
        if (c.contains(n)) {
          l.insert(n);
        } else {
          k_rest.insert(n);
        }
      }
      if (!k_rest.empty()) {
        auto r = fbsplit(k, l, cur);
        cur = r.graph;
        ops.insert(ops.end(), r.ops.begin(), r.ops.end());
        beta.blocks[kpos] = k_rest;
        beta.blocks.insert(beta.blocks.begin() + static_cast<long>(kpos) + 1, l);
        ++kpos;
        if (!is_consistent(cur, beta)) {
          throw internal_error("method_b3: beta lost consistency after a split");
        }
      }

      if (kpos + 1 >= beta.blocks.size()) break;  // no right neighbour
      NodeSet right = beta.blocks[kpos + 1];
      size_t right_min = alpha.blocks.size();
      for (const auto& n : right) right_min = std::min(right_min, alpha_idx.at(n));
      if (right_min > bi) break;  // everything right of us belongs there

      auto m = fbmerge(l, right, cur);
      cur = m.graph;
      ops.insert(ops.end(), m.ops.begin(), m.ops.end());
      NodeSet fused = l;
      fused.insert(right.begin(), right.end());
      beta.blocks[kpos] = fused;
      beta.blocks.erase(beta.blocks.begin() + static_cast<long>(kpos) + 1);
      if (!is_consistent(cur, beta)) {
        throw internal_error("method_b3: beta lost consistency after a merging");
      }
    }
    if (beta == alpha) done = true;
  }

  if (beta != alpha) {
    throw internal_error("method_b3: chain mismatch after processing all blocks");
  }
  return {cur, Trace{g, alpha, std::move(ops), cur}};
}

/// Transforms g into h, given that h is an independence map of g's model:
/// run method_b3 against a chain consistent with h, then add the edges of h
/// that are still missing (lines first, then arcs, in label order). Every
/// intermediate graph is a chain graph of which h remains an independence
/// map; the trace ends exactly at h.
inline Trace method_g2h(const HybridGraph& g, const HybridGraph& h,
                        size_t node_bound = kDefaultNodeBound) {
  if (g.nodes() != h.nodes()) throw input_error("method_g2h: graphs must share one node set");
  if (!is_chain_graph(g) || !is_chain_graph(h)) {
    throw domain_error("method_g2h: both graphs must be chain graphs");
  }
  if (!is_imap(h, g, node_bound)) {
    throw domain_error("method_g2h: target is not an independence map of the source's model");
  }

  Chain alpha = consistent_chain(h);
  B3Result b3 = method_b3(g, alpha);
  HybridGraph cur = b3.graph;
  std::vector<ElementaryOp> ops = std::move(b3.trace.ops);

  for (const auto& [a, b] : cur.lines()) {
    if (!h.has_line(a, b)) {
      throw internal_error("method_g2h: transformed graph is not a subgraph of the target");
    }
  }
  for (const auto& [tail, head] : cur.arcs()) {
    if (!h.has_arc(tail, head)) {
      throw internal_error("method_g2h: transformed graph is not a subgraph of the target");
    }
  }

  for (const auto& [a, b] : h.lines()) {
    if (!cur.has_line(a, b)) {
      cur = cur.with_line(a, b);
      ops.push_back(AddUndirectedOp{a, b});
    }
  }
  for (const auto& [tail, head] : h.arcs()) {
    if (!cur.has_arc(tail, head)) {
      cur = cur.with_arc(tail, head);
      ops.push_back(AddDirectedOp{tail, head});
    }
  }
  if (cur != h) throw internal_error("method_g2h: final graph differs from the target");
  return Trace{g, alpha, std::move(ops), cur};
}

struct TraceReport {
  bool valid = false;
  std::optional<size_t> step;  // first violated snapshot; 0 is the initial graph
  std::string message;
};

/// Replays a trace against a target graph and checks, per snapshot: chain
/// graph, the target's model contained in the snapshot's, and no new
/// independences relative to the previous snapshot. Structural damage
/// (inapplicable ops, a final graph that does not match the replay) is a
/// corrupt trace and throws; semantic violations land in the report.
inline TraceReport verify_trace(const Trace& t, const HybridGraph& target,
                                size_t node_bound = kDefaultNodeBound) {
  if (t.initial.nodes().size() > node_bound) {
    throw resource_error("verify_trace: graph has " + std::to_string(t.initial.nodes().size()) +
                         " nodes, bound is " + std::to_string(node_bound));
  }
  if (t.initial.nodes() != target.nodes()) {
    throw input_error("verify_trace: target node set differs from the trace's");
  }
  if (!is_chain_graph(target)) throw domain_error("verify_trace: target is not a chain graph");

  auto contained = [](const IndependenceModel& small, const IndependenceModel& big) {
    return std::includes(big.triples.begin(), big.triples.end(), small.triples.begin(),
                         small.triples.end());
  };
  auto fail = [](size_t step, std::string message) {
    return TraceReport{false, step, std::move(message)};
  };

  if (!is_chain_graph(t.initial)) return fail(0, "initial graph is not a chain graph");
  IndependenceModel target_model = enumerate_model(target, node_bound);
  IndependenceModel prev = enumerate_model(t.initial, node_bound);
  if (!contained(target_model, prev)) {
    return fail(0, "target is not an independence map of the initial graph");
  }

  HybridGraph cur = t.initial;
  for (size_t i = 0; i < t.ops.size(); ++i) {
    try {
      cur = apply_op(cur, t.ops[i]);
    } catch (const error& e) {
      throw input_error("corrupt trace: op " + std::to_string(i + 1) +
                        " cannot be applied: " + e.what());
    }
    if (!is_chain_graph(cur)) {
      return fail(i + 1, "not a chain graph at step " + std::to_string(i + 1));
    }
    IndependenceModel model = enumerate_model(cur, node_bound);
    if (!contained(model, prev)) {
      return fail(i + 1, "step " + std::to_string(i + 1) + " introduces new independences");
    }
    if (!contained(target_model, model)) {
      return fail(i + 1, "target stops being an independence map at step " + std::to_string(i + 1));
    }
    prev = std::move(model);
  }

  if (cur != t.final_graph) {
    throw input_error("corrupt trace: replay does not reproduce the recorded final graph");
  }
  if (cur != target) return fail(t.ops.size(), "final graph differs from the target");
  return {true, std::nullopt, "valid"};
}

}  // namespace cg
