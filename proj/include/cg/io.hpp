#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <cg/methods.hpp>

namespace cg {

// Graph text format, one item per line:
//   node <label>      isolated node
//   <a> -> <b>        directed edge
//   <a> -- <b>        undirected edge
//   # comment
// Chain text format: one block per line, labels whitespace-separated, first
// line is the leftmost block.
// Model text format: one statement per line, "x ; y | z1 z2 ..." with an
// empty conditioning set allowed.

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

inline HybridGraph parse_graph(const std::string& text) {
  NodeSet nodes;
  std::set<Arc> arcs;
  std::set<Line> lines;
  std::set<Line> used_pairs;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw input_error("line " + std::to_string(lineno) + ": " + msg);
  };
  auto add_pair = [&](const NodeId& a, const NodeId& b) {
    try {
      detail::check_label(a);
      detail::check_label(b);
    } catch (const input_error& e) {
      fail(e.what());
    }
    if (a == b) fail("self-loop at '" + a + "' not allowed");
    if (!used_pairs.insert(detail::make_line(a, b)).second) {
      fail("multiple edges between '" + a + "' and '" + b + "'");
    }
    nodes.insert(a);
    nodes.insert(b);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto toks = detail::tokenize(raw);
    if (toks.empty()) continue;
    if (toks[0] == "node" && toks.size() == 2) {
      try {
        detail::check_label(toks[1]);
      } catch (const input_error& e) {
        fail(e.what());
      }
      nodes.insert(toks[1]);
    } else if (toks.size() == 3 && toks[1] == "->") {
      add_pair(toks[0], toks[2]);
      arcs.insert({toks[0], toks[2]});
    } else if (toks.size() == 3 && toks[1] == "--") {
      add_pair(toks[0], toks[2]);
      lines.insert(detail::make_line(toks[0], toks[2]));
    } else {
      fail("expected 'node <label>', '<a> -> <b>' or '<a> -- <b>'");
    }
  }
  return HybridGraph(nodes, arcs, lines);
}

inline std::string print_graph(const HybridGraph& g) {
  std::ostringstream out;
  for (const auto& n : g.nodes()) {
    bool isolated = true;
    for (const auto& [tail, head] : g.arcs()) {
      if (tail == n || head == n) isolated = false;
    }
    for (const auto& [a, b] : g.lines()) {
      if (a == n || b == n) isolated = false;
    }
    if (isolated) out << "node " << n << "\n";
  }
  for (const auto& [tail, head] : g.arcs()) out << tail << " -> " << head << "\n";
  for (const auto& [a, b] : g.lines()) out << a << " -- " << b << "\n";
  return out.str();
}

inline Chain parse_chain(const std::string& text) {
  Chain chain;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  NodeSet seen;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto toks = detail::tokenize(raw);
    if (toks.empty()) continue;
    NodeSet block;
    for (const auto& t : toks) {
      try {
        detail::check_label(t);
      } catch (const input_error& e) {
        throw input_error("line " + std::to_string(lineno) + ": " + e.what());
      }
      if (!seen.insert(t).second) {
        throw input_error("line " + std::to_string(lineno) + ": node '" + t +
                          "' appears in more than one block");
      }
      block.insert(t);
    }
    chain.blocks.push_back(std::move(block));
  }
  return chain;
}

inline std::string print_chain(const Chain& chain) {
  std::ostringstream out;
  for (const auto& block : chain.blocks) {
    bool first = true;
    for (const auto& n : block) {
      out << (first ? "" : " ") << n;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

inline IndependenceModel parse_model(const std::string& text) {
  IndependenceModel model;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw input_error("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto toks = detail::tokenize(raw);
    if (toks.empty()) continue;
    if (toks.size() < 3 || toks[1] != ";") fail("expected 'x ; y | z1 z2 ...'");
    if (toks.size() > 3 && toks[3] != "|") fail("expected '|' after the pair");
    NodeId x = toks[0], y = toks[2];
    if (x == y) fail("statement pairs a node with itself");
    NodeSet z;
    for (size_t i = 4; i < toks.size(); ++i) {
      if (toks[i] == x || toks[i] == y) fail("conditioning set overlaps the pair");
      z.insert(toks[i]);
    }
    const auto& [lo, hi] = std::minmax(x, y);
    model.triples.insert({lo, hi, z});
    model.universe.insert(x);
    model.universe.insert(y);
    model.universe.insert(z.begin(), z.end());
  }
  return model;
}

inline std::string print_model(const IndependenceModel& model) {
  std::ostringstream out;
  for (const auto& t : model.triples) {
    out << t.x << " ; " << t.y << " |";
    for (const auto& n : t.z) out << " " << n;
    out << "\n";
  }
  return out.str();
}

inline uint64_t fnv1a64(const std::string& data) {
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::string graph_hash(const HybridGraph& g) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(print_graph(g));
  return out.str();
}

namespace detail {

inline nlohmann::json set_to_json(const NodeSet& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : s) arr.push_back(n);
  return arr;
}

inline NodeSet set_from_json(const nlohmann::json& j) {
  NodeSet out;
  for (const auto& n : j) out.insert(n.get<std::string>());
  return out;
}

inline nlohmann::json graph_to_json(const HybridGraph& g) {
  nlohmann::json j;
  j["nodes"] = set_to_json(g.nodes());
  j["directed"] = nlohmann::json::array();
  for (const auto& [tail, head] : g.arcs()) j["directed"].push_back({tail, head});
  j["undirected"] = nlohmann::json::array();
  for (const auto& [a, b] : g.lines()) j["undirected"].push_back({a, b});
  return j;
}

inline HybridGraph graph_from_json(const nlohmann::json& j) {
  NodeSet nodes = set_from_json(j.at("nodes"));
  std::set<Arc> arcs;
  std::set<Line> lines;
  for (const auto& e : j.at("directed")) {
    arcs.insert(Arc{e.at(0).get<std::string>(), e.at(1).get<std::string>()});
  }
  for (const auto& e : j.at("undirected")) {
    lines.insert(make_line(e.at(0).get<std::string>(), e.at(1).get<std::string>()));
  }
  return HybridGraph(nodes, arcs, lines);
}

inline nlohmann::json op_to_json(const ElementaryOp& op) {
  return std::visit(
      [](const auto& o) -> nlohmann::json {
        using T = std::decay_t<decltype(o)>;
        nlohmann::json j;
        j["type"] = "op";
        if constexpr (std::is_same_v<T, AddUndirectedOp>) {
          j["kind"] = "add-undirected";
          j["a"] = o.a;
          j["b"] = o.b;
        } else if constexpr (std::is_same_v<T, AddDirectedOp>) {
          j["kind"] = "add-directed";
          j["tail"] = o.tail;
          j["head"] = o.head;
        } else if constexpr (std::is_same_v<T, SplitOp>) {
          j["kind"] = "split";
          j["component"] = set_to_json(o.component);
          j["part"] = set_to_json(o.part);
        } else {
          j["kind"] = "merge";
          j["left"] = set_to_json(o.left);
          j["right"] = set_to_json(o.right);
        }
        return j;
      },
      op);
}

inline ElementaryOp op_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "add-undirected") {
    return AddUndirectedOp{j.at("a").get<std::string>(), j.at("b").get<std::string>()};
  }
  if (kind == "add-directed") {
    return AddDirectedOp{j.at("tail").get<std::string>(), j.at("head").get<std::string>()};
  }
  if (kind == "split") {
    return SplitOp{set_from_json(j.at("component")), set_from_json(j.at("part"))};
  }
  if (kind == "merge") {
    return MergeOp{set_from_json(j.at("left")), set_from_json(j.at("right"))};
  }
  throw input_error("corrupt trace: unknown op kind '" + kind + "'");
}

}  // namespace detail

/// JSON-lines: a header record {initial, chain}, one record per op, and a
/// trailer carrying the final graph's hash.
inline std::string write_trace(const Trace& t) {
  std::ostringstream out;
  nlohmann::json header;
  header["type"] = "header";
  header["initial"] = detail::graph_to_json(t.initial);
  if (t.chain) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : t.chain->blocks) blocks.push_back(detail::set_to_json(b));
    header["chain"] = blocks;
  } else {
    header["chain"] = nullptr;
  }
  out << header.dump() << "\n";
  for (const auto& op : t.ops) out << detail::op_to_json(op).dump() << "\n";
  nlohmann::json trailer;
  trailer["type"] = "trailer";
  trailer["final_hash"] = graph_hash(t.final_graph);
  out << trailer.dump() << "\n";
  return out.str();
}

/// Parses and replays a trace file. The ops are applied to the recorded
/// initial graph; a trailer hash that does not match the replayed result
/// means the file is corrupt.
inline Trace read_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw input_error(std::string("corrupt trace: ") + e.what());
    }
  }
  if (records.size() < 2) throw input_error("corrupt trace: missing header or trailer");
  Trace t;
  try {
    if (records.front().at("type") != "header") {
      throw input_error("corrupt trace: first record is not a header");
    }
    if (records.back().at("type") != "trailer") {
      throw input_error("corrupt trace: last record is not a trailer");
    }
    t.initial = detail::graph_from_json(records.front().at("initial"));
    if (!records.front().at("chain").is_null()) {
      Chain chain;
      for (const auto& b : records.front().at("chain")) {
        chain.blocks.push_back(detail::set_from_json(b));
      }
      t.chain = std::move(chain);
    }
    HybridGraph cur = t.initial;
    for (size_t i = 1; i + 1 < records.size(); ++i) {
      if (records[i].at("type") != "op") {
        throw input_error("corrupt trace: record " + std::to_string(i + 1) + " is not an op");
      }
      ElementaryOp op = detail::op_from_json(records[i]);
      try {
        cur = apply_op(cur, op);
      } catch (const error& e) {
        throw input_error("corrupt trace: op " + std::to_string(i) +
                          " cannot be applied: " + e.what());
      }
      t.ops.push_back(std::move(op));
    }
    t.final_graph = std::move(cur);
    if (graph_hash(t.final_graph) != records.back().at("final_hash").get<std::string>()) {
      throw input_error("corrupt trace: final graph hash does not match the replay");
    }
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("corrupt trace: ") + e.what());
  }
  return t;
}

}  // namespace cg
