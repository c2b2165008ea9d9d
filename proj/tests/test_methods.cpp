#include <catch2/catch_amalgamated.hpp>

#include <cg/methods.hpp>
#include <cg/mimap.hpp>

#include "test_support.hpp"

using namespace cg;
using test_support::graph;

TEST_CASE("construct_beta", "[methods]") {
  CHECK(construct_beta(graph({}, {{"A", "B"}}, {{"B", "C"}}), Chain{{{"A"}, {"B", "C"}}}) ==
        Chain{{{"A"}, {"B", "C"}}});
  CHECK(construct_beta(graph({"A", "B"}, {}, {}), Chain{{{"B"}, {"A"}}}) ==
        Chain{{{"B"}, {"A"}}});
  CHECK(construct_beta(graph({}, {}, {{"A", "B"}}), Chain{{{"A", "B"}}}) ==
        Chain{{{"A", "B"}}});
  CHECK_THROWS_AS(construct_beta(graph({}, {{"A", "B"}, {"B", "C"}, {"C", "A"}}, {}),
                                 Chain{{{"A", "B", "C"}}}),
                  domain_error);
  CHECK_THROWS_AS(construct_beta(graph({"A", "B"}, {}, {}), Chain{{{"A"}}}), input_error);

  // every block of beta is one component of g, and beta is consistent with g
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    size_t n = 1 + trial % 5;
    auto g = test_support::random_cg(rng, n);
    Chain alpha = consistent_chain(test_support::random_cg(rng, n));
    Chain beta = construct_beta(g, alpha);
    CHECK(is_consistent(g, beta));
    auto comps = components(g);
    for (const auto& b : beta.blocks) {
      CHECK(std::find(comps.begin(), comps.end(), b) != comps.end());
    }
  }
}

TEST_CASE("method_b3 on fixed instances", "[methods]") {
  SECTION("orient a line") {
    auto r = method_b3(graph({}, {}, {{"A", "B"}}), Chain{{{"A"}, {"B"}}});
    CHECK(r.graph == graph({}, {{"A", "B"}}, {}));
    CHECK(r.trace.final_graph == r.graph);
    CHECK(apply_ops(r.trace.initial, r.trace.ops) == r.graph);
  }
  SECTION("drop an orientation") {
    auto r = method_b3(graph({}, {{"A", "B"}}, {}), Chain{{{"A", "B"}}});
    CHECK(r.graph == graph({}, {}, {{"A", "B"}}));
  }
  SECTION("already minimal and consistent: empty trace") {
    auto g = graph({}, {{"A", "B"}}, {});
    auto r = method_b3(g, Chain{{{"A"}, {"B"}}});
    CHECK(r.graph == g);
    CHECK(r.trace.ops.empty());
  }
  SECTION("reverse the chain") {
    auto r = method_b3(graph({}, {{"A", "B"}}, {}), Chain{{{"B"}, {"A"}}});
    CHECK(r.graph == graph({}, {{"B", "A"}}, {}));
  }
  SECTION("empty graph") {
    auto r = method_b3(HybridGraph{}, Chain{});
    CHECK(r.graph == HybridGraph{});
    CHECK(r.trace.ops.empty());
  }
}

TEST_CASE("method_b3 equals mi_map on random instances", "[methods]") {
  std::mt19937_64 rng(987654);
  for (int trial = 0; trial < 60; ++trial) {
    size_t n = 1 + trial % 5;
    auto g = test_support::random_cg(rng, n);
    Chain alpha = consistent_chain(test_support::random_cg(rng, n));
    auto r = method_b3(g, alpha);
    CAPTURE(trial);
    CHECK(r.graph == mi_map(oracle_from_graph(g), alpha));
    CHECK(apply_ops(g, r.trace.ops) == r.graph);
    CHECK(is_consistent(r.graph, alpha));
  }
}

TEST_CASE("method_g2h on fixed instances", "[methods]") {
  SECTION("merge to a line") {
    auto g = graph({}, {{"A", "B"}}, {});
    auto h = graph({}, {}, {{"A", "B"}});
    auto t = method_g2h(g, h);
    CHECK(t.final_graph == h);
    std::vector<ElementaryOp> expected{MergeOp{{"A"}, {"B"}}};
    CHECK(t.ops == expected);
  }
  SECTION("identity needs no additions") {
    auto g = graph({}, {{"A", "B"}}, {{"B", "C"}});
    auto t = method_g2h(g, g);
    CHECK(t.final_graph == g);
    for (const auto& op : t.ops) {
      CHECK_FALSE(std::holds_alternative<AddUndirectedOp>(op));
      CHECK_FALSE(std::holds_alternative<AddDirectedOp>(op));
    }
  }
  SECTION("edge addition after b3") {
    auto g = graph({"A", "B", "C"}, {}, {});
    auto h = graph({"C"}, {{"A", "B"}}, {});
    auto t = method_g2h(g, h);
    CHECK(t.final_graph == h);
    CHECK(verify_trace(t, h).valid);
  }
  SECTION("rejects a non-imap target") {
    auto g = graph({}, {{"A", "B"}}, {});
    auto h = graph({"A", "B"}, {}, {});
    CHECK_THROWS_AS(method_g2h(g, h), domain_error);
  }
  SECTION("rejects mismatched node sets") {
    CHECK_THROWS_AS(method_g2h(graph({"A"}, {}, {}), graph({"B"}, {}, {})), input_error);
  }
}

TEST_CASE("verify_trace flags tampering", "[methods]") {
  auto g = graph({"A", "B", "C"}, {}, {});
  auto h = graph({"C"}, {{"A", "B"}}, {});
  auto good = method_g2h(g, h);
  REQUIRE(verify_trace(good, h).valid);

  SECTION("an infeasible split creates new independences") {
    auto g2 = graph({}, {{"w", "v"}}, {{"u", "v"}});
    Trace bad{g2, std::nullopt, {SplitOp{{"u", "v"}, {"v"}}}, split(g2, {"u", "v"}, {"v"})};
    auto report = verify_trace(bad, g2);
    CHECK_FALSE(report.valid);
    REQUIRE(report.step.has_value());
    CHECK(*report.step == 1);
    CHECK(report.message.find("new independences") != std::string::npos);
  }
  SECTION("semi-directed cycle at the component level") {
    // the infeasible merging passes through a non-chain-graph before the
    // split puts things back
    auto g2 = graph({}, {{"l", "r"}, {"l", "x"}, {"x", "r"}}, {});
    Trace bad{g2, std::nullopt, {MergeOp{{"l"}, {"r"}}, SplitOp{{"l", "r"}, {"r"}}}, g2};
    auto report = verify_trace(bad, g2);
    CHECK_FALSE(report.valid);
    REQUIRE(report.step.has_value());
    CHECK(*report.step == 1);
    CHECK(report.message.find("not a chain graph") != std::string::npos);
  }
  SECTION("replay mismatch is a corrupt trace") {
    Trace bad = good;
    bad.final_graph = bad.initial;
    if (bad.ops.empty()) {
      bad.ops.push_back(AddDirectedOp{"A", "C"});
    }
    CHECK_THROWS_AS(verify_trace(bad, h), input_error);
  }
  SECTION("inapplicable op is a corrupt trace") {
    Trace bad = good;
    bad.ops.push_back(AddDirectedOp{"A", "B"});  // already present in h
    CHECK_THROWS_AS(verify_trace(bad, h), input_error);
  }
  SECTION("wrong target") {
    auto report = verify_trace(good, graph({"A", "B", "C"}, {}, {}));
    CHECK_FALSE(report.valid);
  }
}

TEST_CASE("method_g2h satisfies the step-wise guarantee on random pairs", "[methods]") {
  std::mt19937_64 rng(5551212);
  size_t pairs = 0;
  for (int trial = 0; trial < 120 && pairs < 40; ++trial) {
    size_t n = 1 + trial % 5;
    auto g = test_support::random_cg(rng, n);
    auto h = test_support::random_cg(rng, n);
    if (!is_imap(h, g)) continue;
    ++pairs;
    auto t = method_g2h(g, h);
    auto report = verify_trace(t, h);
    CAPTURE(trial, report.message);
    CHECK(report.valid);

    // unique maximal component and descendant preservation
    CHECK(test_support::unique_maximal_component_holds(g, h));
    CHECK(test_support::descendants_preserved_holds(g, h, consistent_chain(h)));
  }
  CHECK(pairs >= 20);
}
