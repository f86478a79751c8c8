#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "spectral.hpp"
#include "support/case_study.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "walk.hpp"

using namespace dysparse;
using namespace dysparse::testing;

TEST_CASE("single walk on a path graph") {
  auto g = make_path(3);
  SplitMix64 rng(1);

  SUBCASE("reaches the far endpoint") {
    auto trace = single_walk(g, 0, 2, 1.0, 10.0, 10, rng);
    CHECK(trace.terminal == WalkTerminal::ReachedTarget);
    CHECK(trace.accumulated_resistance == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(trace.path == std::vector<VertexId>{0, 1, 2});
  }
  SUBCASE("budget cuts the walk even on arrival") {
    auto trace = single_walk(g, 0, 2, 1.0, 1.5, 10, rng);
    CHECK(trace.terminal == WalkTerminal::BudgetExceeded);
    CHECK(trace.accumulated_resistance == doctest::Approx(2.0));
    CHECK(trace.steps == 2);
  }
  SUBCASE("step cap") {
    auto trace = single_walk(g, 0, 2, 1.0, 100.0, 1, rng);
    CHECK(trace.terminal == WalkTerminal::StepCap);
    CHECK(trace.steps == 1);
  }
}

TEST_CASE("dead ends and isolated starts") {
  // Star with two leaves plus an unreachable target vertex.
  DynamicGraph g(4);
  g.insert_edge(0, 1, 1.0);
  g.insert_edge(0, 2, 1.0);
  SplitMix64 rng(3);
  auto trace = single_walk(g, 1, 3, 1.0, 100.0, 50, rng);
  CHECK(trace.terminal == WalkTerminal::DeadEnd);
  CHECK(trace.path == std::vector<VertexId>{1, 0, 2});

  CHECK_THROWS_AS(single_walk(g, 3, 1, 1.0, 100.0, 50, rng), Error);
}

TEST_CASE("walks never backtrack") {
  auto g = make_random_connected(40, 50, 17);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    auto trace = single_walk(g, 0, 39, 1.0, 1e18, 200, rng);
    for (std::size_t i = 0; i + 2 < trace.path.size(); ++i) {
      CHECK(trace.path[i] != trace.path[i + 2]);
    }
    for (std::size_t i = 0; i + 1 < trace.path.size(); ++i) {
      CHECK(g.has_edge(trace.path[i], trace.path[i + 1]));
    }
  }
}

TEST_CASE("tree walks recover the exact path resistance") {
  // A walker that steps off the unique p-q path of a tree dead-ends in that
  // side branch, so every walk that reaches q walked the path exactly.
  SUBCASE("forced on a path graph, one walker") {
    auto tree = make_path(12, 0.4);
    WalkConfig cfg;
    cfg.distortion_threshold = 1e18;
    cfg.walker_count = 1;
    cfg.global_seed = 11;
    auto verdict = nbrw_reach(tree, 0, 11, 1.0, cfg, 0);
    REQUIRE(verdict.reached);
    CHECK(verdict.best_estimate ==
          doctest::Approx(tree_path_resistance(tree, 0, 11)).epsilon(1e-12));
  }
  SUBCASE("conditioned on reaching, on branching trees") {
    WalkConfig cfg;
    cfg.distortion_threshold = 1e18;
    cfg.walker_count = 16;
    cfg.global_seed = 11;
    int reaching = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto tree = make_random_connected(30, 0, seed, 0.2, 5.0);
      for (const auto& [pair, weight] : tree.edges()) {
        auto verdict = nbrw_reach(tree, pair.first, pair.second, 1.0, cfg,
                                  pair.first * 31 + pair.second);
        if (!verdict.reached) continue;
        ++reaching;
        const double exact = tree_path_resistance(tree, pair.first, pair.second);
        CHECK(verdict.best_estimate == doctest::Approx(exact).epsilon(1e-12));
      }
    }
    CHECK(reaching > 50);
  }
}

TEST_CASE("estimate upper-bounds the true resistance") {
  // Indirect route only: a triangle with the direct edge left out of the
  // walked graph measures 2.0 where the full triangle's resistance is 2/3.
  auto walked = make_path(3);
  WalkConfig cfg;
  cfg.distortion_threshold = 1e18;
  cfg.walker_count = 8;
  cfg.global_seed = 5;
  auto verdict = nbrw_reach(walked, 0, 2, 1.0, cfg, 0);
  REQUIRE(verdict.reached);
  CHECK(verdict.best_estimate == doctest::Approx(2.0).epsilon(1e-12));
  const double full_triangle = effective_resistance_exact(make_triangle(), 0, 2);
  CHECK(full_triangle == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(verdict.best_estimate >= full_triangle);

  SUBCASE("against the dense oracle on a random graph") {
    auto g = make_random_connected(100, 150, 23);
    ResistanceOracle oracle(g);
    WalkConfig wide = cfg;
    wide.walker_count = 16;
    wide.step_cap = 100;
    SplitMix64 pick(77);
    for (int query = 0; query < 200; ++query) {
      const VertexId p = static_cast<VertexId>(pick.next_below(100));
      VertexId q = static_cast<VertexId>(pick.next_below(100));
      if (p == q) q = (q + 1) % 100;
      auto v = nbrw_reach(g, p, q, 1.0, wide, query);
      if (!v.reached) continue;
      CHECK(v.best_estimate >= oracle.resistance(p, q) - 1e-9);
      CHECK(v.steps_used <= static_cast<std::uint64_t>(wide.walker_count) * wide.step_cap);
    }
  }
}

TEST_CASE("verdicts are monotone in the walker count") {
  auto g = make_random_connected(60, 90, 31);
  WalkConfig small;
  small.distortion_threshold = 1e18;
  small.walker_count = 4;
  small.global_seed = 13;
  WalkConfig large = small;
  large.walker_count = 16;
  for (std::uint64_t id = 0; id < 50; ++id) {
    auto a = nbrw_reach(g, 3, 42, 1.0, small, id);
    auto b = nbrw_reach(g, 3, 42, 1.0, large, id);
    if (a.reached) {
      REQUIRE(b.reached);  // walkers 0..3 are a prefix of 0..15
      CHECK(b.best_estimate <= a.best_estimate);
    }
  }
}

TEST_CASE("reachability is monotone in the budget") {
  auto g = make_random_connected(60, 80, 37);
  WalkConfig tight;
  tight.distortion_threshold = 3.0;
  tight.walker_count = 8;
  tight.global_seed = 29;
  WalkConfig loose = tight;
  loose.distortion_threshold = 9.0;
  for (std::uint64_t id = 0; id < 60; ++id) {
    auto a = nbrw_reach(g, 5, 51, 2.0, tight, id);
    auto b = nbrw_reach(g, 5, 51, 2.0, loose, id);
    if (a.reached) {
      REQUIRE(b.reached);
      CHECK(b.best_estimate <= a.best_estimate + 1e-15);
    }
  }
}

TEST_CASE("loop erasure") {
  const std::vector<VertexId> raw{0, 1, 2, 3, 1, 4};
  CHECK(loop_erase(raw) == std::vector<VertexId>{0, 1, 4});
  const std::vector<VertexId> no_loop{0, 1, 2};
  CHECK(loop_erase(no_loop) == no_loop);
  const std::vector<VertexId> nested{0, 1, 2, 3, 2, 4, 1, 5};
  CHECK(loop_erase(nested) == std::vector<VertexId>{0, 1, 5});
}

TEST_CASE("minimum-resistance path on a tree is the tree path") {
  auto tree = make_path(20, 0.8);  // reaching is forced on a path
  WalkConfig cfg;
  cfg.distortion_threshold = 1e18;
  cfg.walker_count = 4;
  cfg.global_seed = 19;
  auto path = nbrw_min_path(tree, 2, 17, cfg, 0);
  REQUIRE(path.has_value());
  CHECK(path->resistance ==
        doctest::Approx(tree_path_resistance(tree, 2, 17)).epsilon(1e-12));
  CHECK(path->vertices.front() == 2);
  CHECK(path->vertices.back() == 17);
  for (std::size_t i = 0; i + 1 < path->vertices.size(); ++i) {
    CHECK(tree.has_edge(path->vertices[i], path->vertices[i + 1]));
  }

  SUBCASE("branching tree, conditioned on reaching") {
    auto branchy = make_random_connected(25, 0, 41, 0.5, 4.0);
    WalkConfig wide = cfg;
    wide.walker_count = 64;
    int found = 0;
    for (const auto& [pair, weight] : branchy.edges()) {
      auto recovered = nbrw_min_path(branchy, pair.first, pair.second, wide,
                                     pair.first * 131 + pair.second);
      if (!recovered) continue;
      ++found;
      CHECK(recovered->resistance ==
            doctest::Approx(tree_path_resistance(branchy, pair.first, pair.second))
                .epsilon(1e-12));
    }
    CHECK(found > 10);
  }
}

TEST_CASE("case-study recovery path") {
  CaseStudy fixture;
  DynamicGraph g = fixture.graph;
  g.delete_edge(16, 17);
  WalkConfig cfg;
  cfg.distortion_threshold = 1e18;
  cfg.step_cap = 100;
  cfg.walker_count = 32;
  cfg.global_seed = 2024;
  auto path = nbrw_min_path(g, 16, 17, cfg, 0);
  REQUIRE(path.has_value());
  CHECK(path->vertices == std::vector<VertexId>{16, 21, 22, 17});
  CHECK(path->resistance == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("batch execution matches sequential execution") {
  auto g = make_random_connected(80, 120, 47);
  WalkConfig cfg;
  cfg.distortion_threshold = 20.0;
  cfg.walker_count = 8;
  cfg.global_seed = 3;

  std::vector<WalkQuery> queries;
  SplitMix64 pick(9);
  for (std::uint64_t id = 0; id < 64; ++id) {
    WalkQuery query;
    query.kind = (id % 3 == 0) ? WalkQuery::Kind::MinPath : WalkQuery::Kind::Reach;
    query.p = static_cast<VertexId>(pick.next_below(80));
    query.q = static_cast<VertexId>(pick.next_below(80));
    if (query.p == query.q) query.q = (query.q + 1) % 80;
    query.w_pq = 0.5 + pick.next_double();
    query.update_id = id;
    queries.push_back(query);
  }

  auto serial = run_batch(g, queries, cfg, 1);
  auto parallel = run_batch(g, queries, cfg, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].steps_used == parallel[i].steps_used);
    CHECK(serial[i].verdict.reached == parallel[i].verdict.reached);
    CHECK(serial[i].verdict.best_estimate == parallel[i].verdict.best_estimate);
    CHECK(serial[i].path.has_value() == parallel[i].path.has_value());
    if (serial[i].path) {
      CHECK(serial[i].path->vertices == parallel[i].path->vertices);
      CHECK(serial[i].path->resistance == parallel[i].path->resistance);
    }
  }

  SUBCASE("a batch of one equals a direct call") {
    auto direct = nbrw_reach(g, queries[1].p, queries[1].q, queries[1].w_pq, cfg,
                             queries[1].update_id);
    auto batched = run_batch(g, {&queries[1], 1}, cfg);
    CHECK(batched[0].verdict.reached == direct.reached);
    CHECK(batched[0].verdict.best_estimate == direct.best_estimate);
    CHECK(batched[0].verdict.steps_used == direct.steps_used);
  }
}

TEST_CASE("commute time on a unit 8-cycle matches 2 m R") {
  auto cycle = make_cycle(8);
  // Adjacent pair: R = 7/8 in parallel with ... 1 || 7 = 7/8; 2 m R = 14.
  const double exact = 2.0 * 8.0 * effective_resistance_exact(cycle, 0, 1);
  CHECK(exact == doctest::Approx(14.0).epsilon(1e-9));
  const double mc = commute_time_estimate(cycle, 0, 1, 100000, 15);
  CHECK(mc == doctest::Approx(exact).epsilon(0.05));
}
