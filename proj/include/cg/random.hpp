#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <cg/mimap.hpp>

namespace cg {

/// Deterministic random source. Draws go through the bucket method and an
/// explicit threshold test so that identical seeds give identical streams on
/// every platform (std::mt19937_64 is fully specified; the std distributions
/// are not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  /// Uniform draw from [0, m).
  uint64_t below(uint64_t m) {
    if (m == 0) throw internal_error("Rng::below: empty range");
    uint64_t bucket = UINT64_MAX / m;
    uint64_t limit = bucket * m;
    uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return r / bucket;
  }

  bool bernoulli(double p) {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53 < p;
  }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<NodeId> make_labels(size_t n) {
  std::vector<NodeId> out;
  for (size_t i = 0; i < n; ++i) {
    if (i < 26) {
      out.push_back(std::string(1, static_cast<char>('A' + i)));
    } else {
      out.push_back("N" + std::to_string(i + 1));
    }
  }
  return out;
}

namespace detail {

// surj[m][k]: ordered set partitions of m labelled items into exactly k blocks
inline std::vector<std::vector<uint64_t>> surjection_table(size_t n) {
  std::vector<std::vector<uint64_t>> s(n + 1, std::vector<uint64_t>(n + 1, 0));
  s[0][0] = 1;
  for (size_t m = 1; m <= n; ++m) {
    for (size_t k = 1; k <= m; ++k) {
      s[m][k] = k * (s[m - 1][k] + s[m - 1][k - 1]);
    }
  }
  return s;
}

inline std::vector<std::vector<uint64_t>> binomial_table(size_t n) {
  std::vector<std::vector<uint64_t>> c(n + 1, std::vector<uint64_t>(n + 1, 0));
  for (size_t m = 0; m <= n; ++m) {
    c[m][0] = 1;
    for (size_t j = 1; j <= m; ++j) {
      c[m][j] = c[m - 1][j - 1] + (j <= m - 1 ? c[m - 1][j] : 0);
    }
  }
  return c;
}

}  // namespace detail

/// Uniform random chain over the given labels: an ordered set partition
/// drawn uniformly among all of them (exact integer arithmetic; labels up to
/// about 20 nodes before the counts overflow).
inline Chain random_chain(Rng& rng, const std::vector<NodeId>& labels) {
  size_t n = labels.size();
  if (n == 0) return Chain{};
  // the count of ordered set partitions of 20 items no longer fits in 64 bits
  if (n > 19) throw resource_error("random_chain: more than 19 labels");
  auto surj = detail::surjection_table(n);
  auto binom = detail::binomial_table(n);

  uint64_t total = 0;
  for (size_t k = 1; k <= n; ++k) total += surj[n][k];
  uint64_t r = rng.below(total);
  size_t blocks = 0;
  for (size_t k = 1; k <= n; ++k) {
    if (r < surj[n][k]) {
      blocks = k;
      break;
    }
    r -= surj[n][k];
  }

  std::vector<NodeId> remaining = labels;
  std::sort(remaining.begin(), remaining.end());
  Chain chain;
  size_t m = n;
  for (size_t k = blocks; k >= 1; --k) {
    // size of the next (leftmost) block, weighted by how many completions exist
    uint64_t total_j = surj[m][k];
    uint64_t rj = rng.below(total_j);
    size_t size = 0;
    for (size_t j = 1; j + (k - 1) <= m; ++j) {
      uint64_t weight = binom[m][j] * surj[m - j][k - 1];
      if (rj < weight) {
        size = j;
        break;
      }
      rj -= weight;
    }
    if (size == 0) throw internal_error("random_chain: block size selection failed");
    // lexicographic unranking of the chosen member subset
    uint64_t rank = rng.below(binom[m][size]);
    NodeSet block;
    std::vector<NodeId> rest;
    size_t needed = size;
    for (size_t i = 0; i < remaining.size(); ++i) {
      if (needed == 0) {
        rest.push_back(remaining[i]);
        continue;
      }
      uint64_t with_first = binom[remaining.size() - i - 1][needed - 1];
      if (rank < with_first) {
        block.insert(remaining[i]);
        --needed;
      } else {
        rank -= with_first;
        rest.push_back(remaining[i]);
      }
    }
    chain.blocks.push_back(std::move(block));
    remaining = std::move(rest);
    m -= size;
  }
  return chain;
}

/// Random chain graph: draw a uniform chain, then keep each chain-legal edge
/// independently with the given probability.
inline HybridGraph random_cg(Rng& rng, const std::vector<NodeId>& labels, double edge_prob = 0.4) {
  Chain chain = random_chain(rng, labels);
  auto idx = detail::chain_block_index(chain);
  std::vector<NodeId> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  NodeSet nodes(sorted.begin(), sorted.end());
  std::set<Arc> arcs;
  std::set<Line> lines;
  for (size_t i = 0; i < sorted.size(); ++i) {
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (!rng.bernoulli(edge_prob)) continue;
      size_t bi = idx.at(sorted[i]), bj = idx.at(sorted[j]);
      if (bi == bj) {
        lines.insert({sorted[i], sorted[j]});
      } else if (bi < bj) {
        arcs.insert({sorted[i], sorted[j]});
      } else {
        arcs.insert({sorted[j], sorted[i]});
      }
    }
  }
  return HybridGraph(nodes, arcs, lines);
}

struct ImapPair {
  HybridGraph g;
  HybridGraph h;
  Chain alpha;  // chain consistent with h
};

/// Pair (g, h) with h an independence map of g's model, by construction:
/// h is the minimal independence map of g relative to a fresh uniform chain,
/// plus a random subset of the chain-legal edges still absent. Adding edges
/// only removes independences, so the inclusion is preserved.
inline ImapPair random_imap_pair(Rng& rng, const std::vector<NodeId>& labels,
                                 double edge_prob = 0.4) {
  HybridGraph g = random_cg(rng, labels, edge_prob);
  Chain alpha = random_chain(rng, labels);
  HybridGraph h = mi_map(oracle_from_graph(g), alpha);
  auto idx = detail::chain_block_index(alpha);
  std::vector<NodeId> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (h.adjacent(sorted[i], sorted[j]) || !rng.bernoulli(edge_prob)) continue;
      size_t bi = idx.at(sorted[i]), bj = idx.at(sorted[j]);
      if (bi == bj) {
        h = h.with_line(sorted[i], sorted[j]);
      } else if (bi < bj) {
        h = h.with_arc(sorted[i], sorted[j]);
      } else {
        h = h.with_arc(sorted[j], sorted[i]);
      }
    }
  }
  if (labels.size() <= kDefaultNodeBound && !is_imap(h, g)) {
    throw internal_error("random_imap_pair: generated pair is not an imap pair");
  }
  return {std::move(g), std::move(h), std::move(alpha)};
}

}  // namespace cg
