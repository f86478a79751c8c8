#include "walk.hpp"

#include <cstdlib>
#include <limits>
#include <thread>
#include <unordered_map>

namespace dysparse {

namespace {

constexpr VertexId kNoVertex = 0xFFFFFFFFu;

// Weight-proportional draw over the neighbors of `u` excluding `previous`,
// by cumulative-weight inversion in adjacency order. Returns kNoVertex when
// no candidate exists.
VertexId sample_neighbor(const DynamicGraph& g, VertexId u, VertexId previous,
                         SplitMix64& rng, double* edge_weight) {
  const auto nbs = g.neighbors(u);
  double total = 0.0;
  for (const Neighbor& nb : nbs) {
    if (nb.id != previous) total += nb.weight;
  }
  if (total <= 0.0) return kNoVertex;
  const double target = rng.next_double() * total;
  double cumulative = 0.0;
  const Neighbor* last = nullptr;
  for (const Neighbor& nb : nbs) {
    if (nb.id == previous) continue;
    cumulative += nb.weight;
    last = &nb;
    if (target < cumulative) break;
  }
  // Rounding can leave target == total; fall back to the last candidate.
  *edge_weight = last->weight;
  return last->id;
}

}  // namespace

WalkTrace single_walk(const DynamicGraph& g, VertexId p, VertexId q, double w_pq,
                      double budget, std::uint32_t cap, SplitMix64& rng) {
  if (p == q) {
    throw_usage("walk endpoints must differ");
  }
  if (g.degree(p) == 0) {
    throw_usage("walk started at an isolated vertex");
  }
  WalkTrace trace;
  trace.path.push_back(p);
  VertexId current = p;
  VertexId previous = kNoVertex;
  while (true) {
    if (trace.steps >= cap) {
      trace.terminal = WalkTerminal::StepCap;
      return trace;
    }
    double edge_weight = 0.0;
    const VertexId next = sample_neighbor(g, current, previous, rng, &edge_weight);
    if (next == kNoVertex) {
      trace.terminal = WalkTerminal::DeadEnd;
      return trace;
    }
    trace.accumulated_resistance += 1.0 / edge_weight;
    ++trace.steps;
    previous = current;
    current = next;
    trace.path.push_back(current);
    // Budget first: arriving at q on an edge that overflows the budget does
    // not count as reaching it.
    if (w_pq * trace.accumulated_resistance > budget) {
      trace.terminal = WalkTerminal::BudgetExceeded;
      return trace;
    }
    if (current == q) {
      trace.terminal = WalkTerminal::ReachedTarget;
      return trace;
    }
  }
}

ReachVerdict nbrw_reach(const DynamicGraph& g, VertexId p, VertexId q, double w_pq,
                        const WalkConfig& cfg, std::uint64_t update_id) {
  ReachVerdict verdict;
  for (std::uint32_t i = 0; i < cfg.walker_count; ++i) {
    SplitMix64 rng(walker_seed(cfg.global_seed, update_id, i));
    WalkTrace trace =
        single_walk(g, p, q, w_pq, cfg.distortion_threshold, cfg.step_cap, rng);
    verdict.steps_used += trace.steps;
    if (trace.terminal != WalkTerminal::ReachedTarget) continue;
    // Ascending walker order makes strict < a tie-break to the lowest index.
    if (!verdict.reached || trace.accumulated_resistance < verdict.best_estimate) {
      verdict.best_estimate = trace.accumulated_resistance;
    }
    verdict.reached = true;
  }
  return verdict;
}

std::vector<VertexId> loop_erase(std::span<const VertexId> path) {
  std::vector<VertexId> erased;
  std::unordered_map<VertexId, std::size_t> position;
  for (VertexId v : path) {
    auto it = position.find(v);
    if (it != position.end()) {
      // Revisit: drop the cycle back to the first occurrence.
      for (std::size_t i = it->second + 1; i < erased.size(); ++i) {
        position.erase(erased[i]);
      }
      erased.resize(it->second + 1);
    } else {
      position.emplace(v, erased.size());
      erased.push_back(v);
    }
  }
  return erased;
}

std::optional<RecoveredPath> nbrw_min_path(const DynamicGraph& g, VertexId p,
                                           VertexId q, const WalkConfig& cfg,
                                           std::uint64_t update_id,
                                           std::uint64_t* steps_used) {
  std::optional<WalkTrace> best;
  std::uint64_t steps = 0;
  for (std::uint32_t i = 0; i < cfg.walker_count; ++i) {
    SplitMix64 rng(walker_seed(cfg.global_seed, update_id, i));
    WalkTrace trace =
        single_walk(g, p, q, 1.0, cfg.distortion_threshold, cfg.step_cap, rng);
    steps += trace.steps;
    if (trace.terminal != WalkTerminal::ReachedTarget) continue;
    if (!best || trace.accumulated_resistance < best->accumulated_resistance) {
      best = std::move(trace);
    }
  }
  if (steps_used != nullptr) *steps_used = steps;
  if (!best) return std::nullopt;
  RecoveredPath recovered;
  recovered.vertices = loop_erase(best->path);
  recovered.steps_used = steps;
  for (std::size_t i = 0; i + 1 < recovered.vertices.size(); ++i) {
    recovered.resistance +=
        1.0 / g.edge_weight(recovered.vertices[i], recovered.vertices[i + 1]);
  }
  return recovered;
}

unsigned resolve_worker_count(unsigned requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("DYSPARSE_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<WalkResult> run_batch(const DynamicGraph& g,
                                  std::span<const WalkQuery> queries,
                                  const WalkConfig& cfg, unsigned workers) {
  std::vector<WalkResult> results(queries.size());
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const WalkQuery& query = queries[i];
      WalkResult& result = results[i];
      if (query.kind == WalkQuery::Kind::Reach) {
        result.verdict =
            nbrw_reach(g, query.p, query.q, query.w_pq, cfg, query.update_id);
        result.steps_used = result.verdict.steps_used;
      } else {
        std::uint64_t steps = 0;
        result.path = nbrw_min_path(g, query.p, query.q, cfg, query.update_id, &steps);
        result.steps_used = steps;
      }
    }
  };
  const unsigned worker_count = std::min<std::size_t>(
      resolve_worker_count(workers), std::max<std::size_t>(queries.size(), 1));
  if (worker_count <= 1 || queries.size() <= 1) {
    run_range(0, queries.size());
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  const std::size_t chunk = (queries.size() + worker_count - 1) / worker_count;
  for (unsigned t = 0; t < worker_count; ++t) {
    const std::size_t begin = std::min<std::size_t>(t * chunk, queries.size());
    const std::size_t end = std::min<std::size_t>(begin + chunk, queries.size());
    if (begin == end) break;
    pool.emplace_back(run_range, begin, end);
  }
  for (std::thread& worker : pool) worker.join();
  return results;
}

}  // namespace dysparse
