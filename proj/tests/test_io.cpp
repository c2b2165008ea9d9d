#include <catch2/catch_amalgamated.hpp>

#include <cg/cg.hpp>

#include "test_support.hpp"

using namespace cg;
using test_support::graph;

TEST_CASE("graph parsing", "[io]") {
  auto g = parse_graph("A -> B\nB -- C\n");
  CHECK(g == graph({}, {{"A", "B"}}, {{"B", "C"}}));
  CHECK(is_chain_graph(g));

  CHECK(parse_graph("") == HybridGraph{});
  CHECK(parse_graph("# only a comment\n\n") == HybridGraph{});
  CHECK(parse_graph("node X\nA -- B # trailing comment\n") ==
        graph({"X"}, {}, {{"A", "B"}}));

  CHECK_THROWS_WITH(parse_graph("A -> B\nB -> A\n"),
                    Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_AS(parse_graph("A -> B\nB -> A\n"), input_error);
  CHECK_THROWS_AS(parse_graph("A -> A\n"), input_error);
  CHECK_THROWS_AS(parse_graph("A -+ B\n"), input_error);
  CHECK_THROWS_AS(parse_graph("node\n"), input_error);
}

TEST_CASE("graph round trip", "[io]") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = test_support::random_hybrid(rng, 1 + trial % 7);
    CHECK(parse_graph(print_graph(g)) == g);
  }
  CHECK(parse_graph(print_graph(HybridGraph{})) == HybridGraph{});
}

TEST_CASE("chain parsing and round trip", "[io]") {
  auto c = parse_chain("A C\nB\n");
  CHECK(c == Chain{{{"A", "C"}, {"B"}}});
  CHECK(parse_chain(print_chain(c)) == c);
  CHECK_THROWS_AS(parse_chain("A\nA B\n"), input_error);
  CHECK(parse_chain("").blocks.empty());
}

TEST_CASE("model parsing and round trip", "[io]") {
  auto m = parse_model("B ; A |\nA ; C | B D\n");
  CHECK(m.triples == std::set<CanonicalTriple>{{"A", "B", {}}, {"A", "C", {"B", "D"}}});
  CHECK(m.universe == NodeSet{"A", "B", "C", "D"});
  CHECK(parse_model(print_model(m)).triples == m.triples);
  CHECK_THROWS_AS(parse_model("A B\n"), input_error);
  CHECK_THROWS_AS(parse_model("A ; A |\n"), input_error);
  CHECK_THROWS_AS(parse_model("A ; B | A\n"), input_error);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = test_support::random_cg(rng, 1 + trial % 5);
    auto model = enumerate_model(g);
    CHECK(parse_model(print_model(model)).triples == model.triples);
  }
}

TEST_CASE("trace round trip", "[io]") {
  auto g = parse_graph("A -> B\nnode C\n");
  auto h = parse_graph("A -- B\nB -- C\n");
  REQUIRE(is_imap(h, g));
  auto t = method_g2h(g, h);
  std::string text = write_trace(t);
  auto back = read_trace(text);
  CHECK(back.initial == t.initial);
  CHECK(back.ops == t.ops);
  CHECK(back.final_graph == t.final_graph);
  REQUIRE(back.chain.has_value());
  CHECK(*back.chain == *t.chain);
  CHECK(verify_trace(back, h).valid);
}

TEST_CASE("corrupt traces are rejected", "[io]") {
  auto g = parse_graph("A -> B\n");
  auto h = parse_graph("A -- B\n");
  std::string text = write_trace(method_g2h(g, h));

  SECTION("tampered hash") {
    auto pos = text.find("final_hash");
    REQUIRE(pos != std::string::npos);
    text[pos + 14] = text[pos + 14] == '0' ? '1' : '0';
    CHECK_THROWS_AS(read_trace(text), input_error);
  }
  SECTION("edge deletions are not in the vocabulary") {
    std::string line = "{\"type\":\"op\",\"kind\":\"delete-edge\",\"a\":\"A\",\"b\":\"B\"}\n";
    auto pos = text.find('\n');
    std::string bad = text.substr(0, pos + 1) + line + text.substr(pos + 1);
    CHECK_THROWS_WITH(read_trace(bad), Catch::Matchers::ContainsSubstring("unknown op kind"));
  }
  SECTION("missing header") {
    CHECK_THROWS_AS(read_trace(""), input_error);
    CHECK_THROWS_AS(read_trace("{\"type\":\"trailer\",\"final_hash\":\"x\"}\n"), input_error);
  }
  SECTION("not json") {
    CHECK_THROWS_AS(read_trace("not json\nat all\n"), input_error);
  }
}

TEST_CASE("parsers reject garbage without crashing", "[io]") {
  std::mt19937_64 rng(666);
  const std::string alphabet = "AB ->-<;|#\nnode\t@";
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<size_t> len(0, 60);
  size_t parsed = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    size_t m = len(rng);
    for (size_t i = 0; i < m; ++i) text.push_back(alphabet[pick(rng)]);
    try {
      (void)parse_graph(text);
      ++parsed;
    } catch (const input_error&) {
    }
    try {
      (void)parse_chain(text);
    } catch (const input_error&) {
    }
    try {
      (void)parse_model(text);
    } catch (const input_error&) {
    }
    try {
      (void)read_trace(text);
    } catch (const input_error&) {
    }
  }
  CHECK(parsed > 0);  // comment-only and blank inputs parse as empty graphs
}

TEST_CASE("generator determinism", "[io]") {
  for (uint64_t seed : {1ull, 42ull, 9999ull}) {
    Rng a(seed), b(seed);
    auto labels = make_labels(5);
    CHECK(print_graph(random_cg(a, labels)) == print_graph(random_cg(b, labels)));
    auto pa = random_imap_pair(a, labels);
    auto pb = random_imap_pair(b, labels);
    CHECK(print_graph(pa.g) == print_graph(pb.g));
    CHECK(print_graph(pa.h) == print_graph(pb.h));
    CHECK(write_trace(method_g2h(pa.g, pa.h)) == write_trace(method_g2h(pb.g, pb.h)));
  }
}

TEST_CASE("random_chain draws ordered partitions uniformly", "[io]") {
  // 13 ordered set partitions of three labels; 2600 draws, expect 200 each
  Rng rng(31415);
  auto labels = make_labels(3);
  std::map<std::string, int> counts;
  for (int i = 0; i < 2600; ++i) counts[print_chain(random_chain(rng, labels))]++;
  CHECK(counts.size() == 13);
  for (const auto& [key, count] : counts) {
    CAPTURE(key, count);
    CHECK(count > 120);
    CHECK(count < 280);
  }
}

TEST_CASE("random_imap_pair output is a valid pair", "[io]") {
  Rng rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    auto pair = random_imap_pair(rng, make_labels(1 + trial % 5));
    CHECK(is_imap(pair.h, pair.g));
    CHECK(is_consistent(pair.h, pair.alpha));
    CHECK(is_chain_graph(pair.g));
  }
}
