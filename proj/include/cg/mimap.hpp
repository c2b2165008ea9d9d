#pragma once

#include <memory>
#include <vector>

#include <cg/separation.hpp>

namespace cg {

/// Oracle answering from a chain graph's separation relation.
inline IndependenceOracle oracle_from_graph(const HybridGraph& g) {
  auto engine = std::make_shared<detail::SeparationEngine>(g);
  return IndependenceOracle{
      g.nodes(),
      [engine](const NodeSet& x, const NodeSet& y, const NodeSet& z) {
        return engine->separated(x, y, z);
      }};
}

/// Oracle answering from an explicit model by conjunction over its
/// canonical statements.
inline IndependenceOracle oracle_from_model(IndependenceModel m) {
  auto model = std::make_shared<IndependenceModel>(std::move(m));
  return IndependenceOracle{
      model->universe,
      [model](const NodeSet& x, const NodeSet& y, const NodeSet& z) {
        for (const auto& a : x) {
          for (const auto& b : y) {
            const auto& [lo, hi] = std::minmax(a, b);
            if (!model->triples.contains({lo, hi, z})) return false;
          }
        }
        return true;
      }};
}

namespace detail {

/// The smallest boundary candidate for x inside the chain prefix: the unique
/// minimum-cardinality B with x independent of (prefix \ {x} \ B) given B.
/// Searched by ascending size; a tie at the minimum size means the oracle is
/// not a graphoid and is reported as such.
inline NodeSet smallest_boundary(const IndependenceOracle& oracle, const NodeId& x,
                                 const NodeSet& prefix) {
  std::vector<NodeId> candidates;
  for (const auto& n : prefix) {
    if (n != x) candidates.push_back(n);
  }
  size_t m = candidates.size();
  auto next_combination = [m](std::vector<size_t>& comb) {
    size_t size = comb.size();
    for (size_t i = size; i-- > 0;) {
      if (comb[i] < m - size + i) {
        ++comb[i];
        for (size_t j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  for (size_t size = 0; size <= m; ++size) {
    std::vector<NodeSet> hits;
    // lexicographic combinations of `size` indices out of m
    std::vector<size_t> comb(size);
    for (size_t i = 0; i < size; ++i) comb[i] = i;
    while (true) {
      NodeSet b;
      for (size_t i : comb) b.insert(candidates[i]);
      NodeSet rest;
      for (const auto& n : candidates) {
        if (!b.contains(n)) rest.insert(n);
      }
      if (oracle.query({x}, rest, b)) hits.push_back(std::move(b));
      if (!next_combination(comb)) break;
    }
    if (hits.size() == 1) return hits.front();
    if (hits.size() > 1) {
      throw domain_error("mi_map: oracle is not a graphoid (smallest boundary of '" + x +
                         "' is not unique)");
    }
  }
  throw internal_error("mi_map: boundary search exhausted without a candidate");
}

}  // namespace detail

/// The minimal independence map of the oracle's model relative to alpha:
/// each node receives its smallest boundary within its chain prefix, with
/// same-block members joined by lines and earlier-block members by arcs.
/// Requires a graphoid oracle; asymmetric within-block adjacencies are
/// reported rather than patched up.
inline HybridGraph mi_map(const IndependenceOracle& oracle, const Chain& alpha) {
  detail::check_chain_partition(Chain{alpha.blocks}, oracle.universe, "mi_map");

  std::map<NodeId, NodeSet> bd;
  std::map<NodeId, size_t> block_of = detail::chain_block_index(alpha);
  NodeSet prefix;
  for (const auto& block : alpha.blocks) {
    prefix.insert(block.begin(), block.end());
    for (const auto& x : block) {
      bd[x] = detail::smallest_boundary(oracle, x, prefix);
    }
  }

  std::set<Arc> arcs;
  std::set<Line> lines;
  for (const auto& [x, b] : bd) {
    for (const auto& y : b) {
      if (block_of.at(y) == block_of.at(x)) {
        if (!bd.at(y).contains(x)) {
          throw domain_error(
              "mi_map: oracle is not a graphoid (asymmetric boundary between '" + x +
              "' and '" + y + "')");
        }
        lines.insert(detail::make_line(x, y));
      } else {
        arcs.insert({y, x});  // y lies in an earlier block
      }
    }
  }

  HybridGraph out(oracle.universe, arcs, lines);
  if (!is_consistent(out, alpha) || !is_chain_graph(out)) {
    throw internal_error("mi_map: result is not a chain graph consistent with the chain");
  }
  return out;
}

}  // namespace cg
