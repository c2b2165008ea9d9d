#pragma once

// Small test-side generators, kept independent of the library's own random
// instance generator so the two can cross-check each other.

#include <map>
#include <random>
#include <string>
#include <vector>

#include <cg/graph.hpp>

namespace test_support {

inline std::vector<cg::NodeId> labels(size_t n) {
  std::vector<cg::NodeId> out;
  for (size_t i = 0; i < n; ++i) {
    if (i < 26) {
      out.push_back(std::string(1, static_cast<char>('A' + i)));
    } else {
      out.push_back("N" + std::to_string(i + 1));
    }
  }
  return out;
}

/// Arbitrary hybrid graph (not necessarily a chain graph): each pair gets
/// one of {nothing, a -> b, b -> a, a -- b}.
inline cg::HybridGraph random_hybrid(std::mt19937_64& rng, size_t n, double edge_prob = 0.5) {
  auto ls = labels(n);
  cg::NodeSet nodes(ls.begin(), ls.end());
  std::set<cg::Arc> arcs;
  std::set<cg::Line> lines;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 2);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (coin(rng) >= edge_prob) continue;
      switch (kind(rng)) {
        case 0: arcs.insert({ls[i], ls[j]}); break;
        case 1: arcs.insert({ls[j], ls[i]}); break;
        default: lines.insert({ls[i], ls[j]}); break;
      }
    }
  }
  return cg::HybridGraph(nodes, arcs, lines);
}

/// Random chain graph built the direct way: draw a random ordered partition
/// (not uniform; good enough for property tests), then keep chain-legal
/// edges only.
inline cg::HybridGraph random_cg(std::mt19937_64& rng, size_t n, double edge_prob = 0.5) {
  auto ls = labels(n);
  cg::NodeSet nodes(ls.begin(), ls.end());
  std::uniform_int_distribution<size_t> pick_block(0, n == 0 ? 0 : n - 1);
  std::vector<size_t> block_of(n);
  for (size_t i = 0; i < n; ++i) block_of[i] = pick_block(rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::set<cg::Arc> arcs;
  std::set<cg::Line> lines;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (coin(rng) >= edge_prob) continue;
      if (block_of[i] == block_of[j]) {
        lines.insert({ls[i], ls[j]});
      } else if (block_of[i] < block_of[j]) {
        arcs.insert({ls[i], ls[j]});
      } else {
        arcs.insert({ls[j], ls[i]});
      }
    }
  }
  return cg::HybridGraph(nodes, arcs, lines);
}

inline cg::HybridGraph relabel(const cg::HybridGraph& g,
                               const std::map<cg::NodeId, cg::NodeId>& pi) {
  cg::NodeSet nodes;
  for (const auto& n : g.nodes()) nodes.insert(pi.at(n));
  std::set<cg::Arc> arcs;
  for (const auto& [tail, head] : g.arcs()) arcs.insert({pi.at(tail), pi.at(head)});
  std::set<cg::Line> lines;
  for (const auto& [a, b] : g.lines()) lines.insert(cg::detail::make_line(pi.at(a), pi.at(b)));
  return cg::HybridGraph(nodes, arcs, lines);
}

inline cg::NodeSet relabel(const cg::NodeSet& s, const std::map<cg::NodeId, cg::NodeId>& pi) {
  cg::NodeSet out;
  for (const auto& n : s) out.insert(pi.at(n));
  return out;
}

inline cg::Chain relabel(const cg::Chain& c, const std::map<cg::NodeId, cg::NodeId>& pi) {
  cg::Chain out;
  for (const auto& block : c.blocks) out.blocks.push_back(relabel(block, pi));
  return out;
}

/// For every component C of g there must be exactly one maximal component of
/// h among those containing a descendant of C in g. Holds whenever I(h) is
/// contained in I(g).
inline bool unique_maximal_component_holds(const cg::HybridGraph& g, const cg::HybridGraph& h) {
  auto h_comps = cg::components(h);
  for (const auto& c : cg::components(g)) {
    cg::NodeSet desc = cg::descendants(g, c);
    std::vector<cg::NodeSet> touching;
    for (const auto& k : h_comps) {
      bool touches = false;
      for (const auto& n : k) {
        if (desc.contains(n)) touches = true;
      }
      if (touches) touching.push_back(k);
    }
    if (cg::maximal_components(h, touching).size() != 1) return false;
  }
  return true;
}

/// When no descendant of a node in g sits left of it in a chain consistent
/// with h, its descendants in g must be descendants in h as well. Holds
/// whenever I(h) is contained in I(g).
inline bool descendants_preserved_holds(const cg::HybridGraph& g, const cg::HybridGraph& h,
                                        const cg::Chain& alpha) {
  auto idx = cg::detail::chain_block_index(alpha);
  for (const auto& x : g.nodes()) {
    cg::NodeSet dg = cg::descendants(g, {x});
    bool hypothesis = true;
    for (const auto& d : dg) {
      if (idx.at(d) < idx.at(x)) hypothesis = false;
    }
    if (!hypothesis) continue;
    cg::NodeSet dh = cg::descendants(h, {x});
    for (const auto& d : dg) {
      if (!dh.contains(d)) return false;
    }
  }
  return true;
}

/// Convenience builders for hand-written fixtures.
inline cg::HybridGraph graph(const std::vector<cg::NodeId>& nodes,
                             const std::vector<std::pair<cg::NodeId, cg::NodeId>>& arcs,
                             const std::vector<std::pair<cg::NodeId, cg::NodeId>>& lines) {
  cg::NodeSet ns(nodes.begin(), nodes.end());
  for (const auto& [a, b] : arcs) {
    ns.insert(a);
    ns.insert(b);
  }
  for (const auto& [a, b] : lines) {
    ns.insert(a);
    ns.insert(b);
  }
  std::set<cg::Arc> as(arcs.begin(), arcs.end());
  std::set<cg::Line> fixed;
  for (const auto& [a, b] : lines) fixed.insert(a < b ? cg::Line{a, b} : cg::Line{b, a});
  return cg::HybridGraph(ns, as, fixed);
}

}  // namespace test_support
