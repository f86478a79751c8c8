#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace dysparse {

struct WalkConfig {
  double distortion_threshold = 10.0;  // K
  std::uint32_t step_cap = 100;        // T
  std::uint32_t walker_count = 16;     // s
  std::uint64_t global_seed = 0;
};

enum class WalkTerminal { ReachedTarget, BudgetExceeded, StepCap, DeadEnd };

struct WalkTrace {
  std::vector<VertexId> path;     // starts at the source vertex
  double accumulated_resistance = 0.0;  // sum of 1/w over traversed edges
  WalkTerminal terminal = WalkTerminal::DeadEnd;
  std::uint32_t steps = 0;
};

struct ReachVerdict {
  bool reached = false;
  double best_estimate = 0.0;  // min resistance over reaching walkers; valid iff reached
  std::uint64_t steps_used = 0;
};

struct RecoveredPath {
  std::vector<VertexId> vertices;  // loop-erased, source to target
  double resistance = 0.0;
  std::uint64_t steps_used = 0;
};

// One non-backtracking walk from p towards q. The next vertex is drawn
// among the current neighbors minus the previous vertex, with probability
// proportional to edge weight (the first step has no previous vertex).
// After each traversed edge, in this order, the walk terminates when
//   1. w_pq * accumulated_resistance > budget   (the offending edge counts),
//   2. the current vertex is q,
//   3. the step count has reached `cap`.
// Standing at a vertex whose only neighbor is the previous vertex (or that
// has none) terminates as DeadEnd. Walking from an isolated vertex is a
// usage error; callers decide what isolation means for them.
WalkTrace single_walk(const DynamicGraph& g, VertexId p, VertexId q, double w_pq,
                      double budget, std::uint32_t cap, SplitMix64& rng);

// s independent walkers from p; walker i draws from a stream seeded by
// (global_seed, update_id, i), so the verdict is a pure function of the
// graph snapshot, the query, the config, and update_id.
ReachVerdict nbrw_reach(const DynamicGraph& g, VertexId p, VertexId q, double w_pq,
                        const WalkConfig& cfg, std::uint64_t update_id);

// Deletion-side search: the budget applies to raw accumulated resistance
// (w_pq fixed at 1). Among walkers that reach q, the trace with the least
// accumulated resistance wins (ties to the lowest walker index); the trace
// is then loop-erased (first visits kept) and its resistance recomputed.
// steps_used, when given, receives the total steps across all walkers even
// if none reached.
std::optional<RecoveredPath> nbrw_min_path(const DynamicGraph& g, VertexId p,
                                           VertexId q, const WalkConfig& cfg,
                                           std::uint64_t update_id,
                                           std::uint64_t* steps_used = nullptr);

struct WalkQuery {
  enum class Kind { Reach, MinPath };
  Kind kind = Kind::Reach;
  VertexId p = 0;
  VertexId q = 0;
  double w_pq = 1.0;  // Reach only
  std::uint64_t update_id = 0;
};

struct WalkResult {
  ReachVerdict verdict;                    // Reach queries
  std::optional<RecoveredPath> path;       // MinPath queries
  std::uint64_t steps_used = 0;
};

// Runs the queries against one immutable graph snapshot, possibly across
// threads. Results are identical to running each query alone, regardless
// of worker count. workers == 0 picks DYSPARSE_THREADS or the hardware
// concurrency.
std::vector<WalkResult> run_batch(const DynamicGraph& g,
                                  std::span<const WalkQuery> queries,
                                  const WalkConfig& cfg, unsigned workers = 0);

// Removes cycles from a walk trace by keeping first visits only.
std::vector<VertexId> loop_erase(std::span<const VertexId> path);

unsigned resolve_worker_count(unsigned requested);

}  // namespace dysparse
