#include "sparsifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "matrix_market.hpp"
#include "rng.hpp"
#include "spectral.hpp"

namespace dysparse {

namespace {

struct DisjointSet {
  explicit DisjointSet(std::uint32_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<std::uint32_t> parent;
};

// Tree-path resistance between vertex pairs, O(log n) per query via
// binary-lifting LCA over resistance-to-root prefixes.
class TreeResistance {
 public:
  explicit TreeResistance(const DynamicGraph& tree) {
    const std::uint32_t n = tree.vertex_count();
    depth_.assign(n, 0);
    resistance_to_root_.assign(n, 0.0);
    std::vector<std::uint32_t> parent(n, 0);
    std::vector<bool> visited(n, false);
    std::queue<VertexId> frontier;
    visited[0] = true;
    frontier.push(0);
    while (!frontier.empty()) {
      const VertexId u = frontier.front();
      frontier.pop();
      for (const Neighbor& nb : tree.neighbors(u)) {
        if (visited[nb.id]) continue;
        visited[nb.id] = true;
        parent[nb.id] = u;
        depth_[nb.id] = depth_[u] + 1;
        resistance_to_root_[nb.id] = resistance_to_root_[u] + 1.0 / nb.weight;
        frontier.push(nb.id);
      }
    }
    levels_ = 1;
    while ((1u << levels_) < n) ++levels_;
    up_.assign(levels_, parent);
    for (std::uint32_t k = 1; k < levels_; ++k) {
      for (std::uint32_t v = 0; v < n; ++v) {
        up_[k][v] = up_[k - 1][up_[k - 1][v]];
      }
    }
  }

  double between(VertexId u, VertexId v) const {
    return resistance_to_root_[u] + resistance_to_root_[v] -
           2.0 * resistance_to_root_[lca(u, v)];
  }

 private:
  VertexId lca(VertexId u, VertexId v) const {
    if (depth_[u] < depth_[v]) std::swap(u, v);
    std::uint32_t gap = depth_[u] - depth_[v];
    for (std::uint32_t k = 0; gap != 0; ++k, gap >>= 1) {
      if (gap & 1u) u = up_[k][u];
    }
    if (u == v) return u;
    for (std::uint32_t k = levels_; k-- > 0;) {
      if (up_[k][u] != up_[k][v]) {
        u = up_[k][u];
        v = up_[k][v];
      }
    }
    return up_[0][u];
  }

  std::vector<std::uint32_t> depth_;
  std::vector<double> resistance_to_root_;
  std::vector<std::vector<std::uint32_t>> up_;
  std::uint32_t levels_ = 1;
};

}  // namespace

DynamicGraph build_initial_sparsifier(const DynamicGraph& g, double target_density,
                                      std::uint64_t seed) {
  if (target_density < 0.0) {
    throw_usage("target density must be nonnegative");
  }
  if (!is_connected(g)) {
    throw_data("graph must be connected to build a sparsifier");
  }
  const std::uint32_t n = g.vertex_count();
  auto edges = g.edges();
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  DynamicGraph h(n);
  DisjointSet components(n);
  std::vector<std::size_t> off_tree;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& [pair, weight] = edges[i];
    if (components.unite(pair.first, pair.second)) {
      h.insert_edge(pair.first, pair.second, weight);
    } else {
      off_tree.push_back(i);
    }
  }

  TreeResistance tree(h);
  struct Ranked {
    double distortion;
    std::uint64_t tiebreak;
    std::size_t edge_index;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(off_tree.size());
  for (std::size_t i : off_tree) {
    const auto& [pair, weight] = edges[i];
    ranked.push_back({weight * tree.between(pair.first, pair.second),
                      hash_mix(seed ^ (static_cast<std::uint64_t>(pair.first) << 32 |
                                       pair.second)),
                      i});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.distortion != b.distortion) return a.distortion > b.distortion;
    return a.tiebreak < b.tiebreak;
  });

  for (const Ranked& r : ranked) {
    // A bare tree (negative density) already meets a zero target.
    if (std::max(h.density(), 0.0) >= target_density) break;
    const auto& [pair, weight] = edges[r.edge_index];
    h.insert_edge(pair.first, pair.second, weight);
  }
  return h;
}

DynamicGraph import_sparsifier(const DynamicGraph& g, const std::string& path) {
  DynamicGraph h = load_matrix_market(path);
  if (h.vertex_count() != g.vertex_count()) {
    std::ostringstream os;
    os << "sparsifier has " << h.vertex_count() << " vertices, graph has "
       << g.vertex_count();
    throw_data(os.str());
  }
  for (const auto& [pair, weight] : h.edges()) {
    if (!g.has_edge(pair.first, pair.second)) {
      std::ostringstream os;
      os << "sparsifier edge (" << pair.first << ", " << pair.second
         << ") is not an edge of the base graph";
      throw_data(os.str());
    }
  }
  if (!is_connected(h)) {
    throw_data("imported sparsifier is disconnected");
  }
  return h;
}

SparsifierState::SparsifierState(DynamicGraph graph, DynamicGraph sparsifier,
                                 SparsifierOptions options)
    : graph_(std::move(graph)),
      sparsifier_(std::move(sparsifier)),
      options_(options) {
  if (graph_.vertex_count() != sparsifier_.vertex_count()) {
    throw_usage("graph and sparsifier must share a vertex set");
  }
  if (options_.walk.distortion_threshold < 0.0 || options_.walk.step_cap == 0 ||
      options_.walk.walker_count == 0) {
    throw_usage("invalid walk configuration");
  }
  for (const auto& [pair, weight] : sparsifier_.edges()) {
    if (!graph_.has_edge(pair.first, pair.second)) {
      std::ostringstream os;
      os << "sparsifier edge (" << pair.first << ", " << pair.second
         << ") missing from the graph";
      throw_data(os.str());
    }
  }
}

namespace {

// Make the H copy of an existing edge carry exactly `target` weight.
void set_edge_weight(DynamicGraph& h, VertexId u, VertexId v, double target) {
  const double current = h.edge_weight(u, v);
  if (target > current) {
    h.insert_edge(u, v, target - current);
  } else if (target < current) {
    h.delete_edge(u, v);
    h.insert_edge(u, v, target);
  }
}

}  // namespace

InsertionDecision SparsifierState::commit_insertion(VertexId u, VertexId v,
                                                    double /*event_weight*/,
                                                    bool have_verdict, bool reached) {
  if (options_.freeze_sparsifier) {
    return InsertionDecision::Pruned;
  }
  const double total = graph_.edge_weight(u, v);
  // Default Kept covers the no-filter baseline (threshold 0) and the no-walk
  // case, where an H-isolated endpoint made the target trivially unreachable.
  InsertionDecision decision = InsertionDecision::Kept;
  if (options_.walk.distortion_threshold != 0.0 && have_verdict && reached) {
    decision = InsertionDecision::Pruned;
  }
  if (sparsifier_.has_edge(u, v)) {
    // A retained edge tracks G's coalesced weight whatever the verdict says;
    // anything else would break H as a weighted subgraph.
    set_edge_weight(sparsifier_, u, v, total);
  } else if (decision == InsertionDecision::Kept) {
    sparsifier_.insert_edge(u, v, total);
  }
  return decision;
}

InsertionDecision SparsifierState::apply_insertion(VertexId u, VertexId v,
                                                   double weight) {
  graph_.insert_edge(u, v, weight);  // validates endpoints and weight
  const std::uint64_t update_id = update_counter_++;
  last_event_steps_ = 0;

  bool have_verdict = false;
  bool reached = false;
  const bool filtering =
      options_.walk.distortion_threshold != 0.0 && !options_.freeze_sparsifier;
  if (filtering && sparsifier_.degree(u) > 0 && sparsifier_.degree(v) > 0) {
    const double total = graph_.edge_weight(u, v);
    const ReachVerdict verdict =
        nbrw_reach(sparsifier_, u, v, total, options_.walk, update_id);
    last_event_steps_ = verdict.steps_used;
    have_verdict = true;
    reached = verdict.reached;
  }
  return commit_insertion(u, v, weight, have_verdict, reached);
}

DeletionOutcome SparsifierState::run_local_fallback(VertexId u, VertexId v) {
  DeletionOutcome outcome;
  outcome.kind = DeletionOutcome::Kind::LocalFallback;
  for (const VertexId endpoint : {u, v}) {
    if (sparsifier_.degree(endpoint) != 0 || graph_.degree(endpoint) == 0) continue;
    const Neighbor* best = nullptr;
    for (const Neighbor& nb : graph_.neighbors(endpoint)) {
      if (best == nullptr || nb.weight > best->weight ||
          (nb.weight == best->weight && nb.id < best->id)) {
        best = &nb;
      }
    }
    sparsifier_.insert_edge(endpoint, best->id, best->weight);
    ++outcome.edges_added;
  }
  return outcome;
}

DeletionOutcome SparsifierState::apply_deletion(VertexId u, VertexId v) {
  graph_.delete_edge(u, v);  // data error when absent
  const std::uint64_t update_id = update_counter_++;
  last_event_steps_ = 0;

  DeletionOutcome outcome;
  if (!sparsifier_.has_edge(u, v)) {
    outcome.kind = DeletionOutcome::Kind::GraphOnly;
    return outcome;
  }
  sparsifier_.delete_edge(u, v);
  if (options_.freeze_sparsifier) {
    outcome.kind = DeletionOutcome::Kind::LocalFallback;
    return outcome;
  }
  if (graph_.degree(u) > 0 && graph_.degree(v) > 0) {
    WalkConfig deletion_cfg = options_.walk;
    deletion_cfg.distortion_threshold = std::numeric_limits<double>::infinity();
    std::uint64_t steps = 0;
    const auto path = nbrw_min_path(graph_, u, v, deletion_cfg, update_id, &steps);
    last_event_steps_ = steps;
    if (path) {
      outcome.kind = DeletionOutcome::Kind::PathRecovered;
      for (std::size_t i = 0; i + 1 < path->vertices.size(); ++i) {
        const VertexId a = path->vertices[i];
        const VertexId b = path->vertices[i + 1];
        if (!sparsifier_.has_edge(a, b)) {
          sparsifier_.insert_edge(a, b, graph_.edge_weight(a, b));
          ++outcome.edges_added;
        }
      }
      return outcome;
    }
  }
  return run_local_fallback(u, v);
}

namespace {

void validate_event_shape(const EdgeEvent& event, std::uint32_t n,
                          std::size_t position) {
  std::ostringstream os;
  if (event.u >= n || event.v >= n) {
    os << "event " << position << ": vertex id out of range";
    throw_data(os.str());
  }
  if (event.u == event.v) {
    os << "event " << position << ": self-loop";
    throw_data(os.str());
  }
  if (event.kind == EdgeEvent::Kind::Insertion &&
      (!(event.weight > 0.0) || !std::isfinite(event.weight))) {
    os << "event " << position << ": non-positive weight";
    throw_data(os.str());
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

}  // namespace

BatchReport SparsifierState::replay_batch_immediate(const UpdateStream& stream,
                                                    std::uint32_t batch_index) {
  BatchReport report;
  report.batch_index = batch_index;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const EdgeEvent& event = stream.events[i];
    if (event.batch_index != batch_index) continue;
    try {
      validate_event_shape(event, graph_.vertex_count(), i);
      if (event.kind == EdgeEvent::Kind::Insertion) {
        ++report.insertions_seen;
        const InsertionDecision decision =
            apply_insertion(event.u, event.v, event.weight);
        if (decision == InsertionDecision::Kept) {
          ++report.insertions_kept;
        } else {
          ++report.insertions_pruned;
        }
      } else {
        ++report.deletions_seen;
        const DeletionOutcome outcome = apply_deletion(event.u, event.v);
        if (outcome.kind != DeletionOutcome::Kind::GraphOnly) {
          ++report.deletions_in_sparsifier;
        }
        if (outcome.kind == DeletionOutcome::Kind::PathRecovered) {
          ++report.paths_recovered;
          report.edges_recovered += outcome.edges_added;
        } else if (outcome.kind == DeletionOutcome::Kind::LocalFallback) {
          ++report.fallback_activations;
          report.edges_recovered += outcome.edges_added;
        }
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "event " << i << ": " << e.what();
      throw Error(e.kind() == ErrorKind::Numeric ? ErrorKind::Numeric : ErrorKind::Data,
                  os.str());
    }
    report.walker_steps += last_event_steps_;
    report.max_event_steps = std::max(report.max_event_steps, last_event_steps_);
  }
  report.wall_ms = elapsed_ms(start);
  report.density_graph = graph_.density();
  report.density_sparsifier = sparsifier_.density();
  return report;
}

BatchReport SparsifierState::replay_batch_deferred(const UpdateStream& stream,
                                                   std::uint32_t batch_index) {
  BatchReport report;
  report.batch_index = batch_index;
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    if (stream.events[i].batch_index == batch_index) positions.push_back(i);
  }
  for (std::size_t pos : positions) {
    validate_event_shape(stream.events[pos], graph_.vertex_count(), pos);
  }

  const bool filtering =
      options_.walk.distortion_threshold != 0.0 && !options_.freeze_sparsifier;

  // Walk phase. Insertions see the batch-start sparsifier; deletions see the
  // batch-start graph with all of this batch's deletions already applied, so
  // a recovery path can never ride an edge that vanishes at commit.
  const DynamicGraph h_snapshot = sparsifier_;
  DynamicGraph shadow = graph_;
  for (std::size_t pos : positions) {
    const EdgeEvent& event = stream.events[pos];
    if (event.kind == EdgeEvent::Kind::Deletion &&
        shadow.has_edge(event.u, event.v)) {
      shadow.delete_edge(event.u, event.v);
    }
  }

  constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(positions.size(), kNoSlot);
  std::vector<WalkQuery> insert_queries;
  std::vector<WalkQuery> delete_queries;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const EdgeEvent& event = stream.events[positions[k]];
    const std::uint64_t update_id = update_counter_ + k;
    if (event.kind == EdgeEvent::Kind::Insertion) {
      if (!filtering) continue;
      if (h_snapshot.degree(event.u) == 0 || h_snapshot.degree(event.v) == 0) {
        continue;  // trivially unreachable, kept without walking
      }
      WalkQuery query;
      query.kind = WalkQuery::Kind::Reach;
      query.p = event.u;
      query.q = event.v;
      query.w_pq = graph_.edge_weight(event.u, event.v) + event.weight;
      query.update_id = update_id;
      slot[k] = insert_queries.size();
      insert_queries.push_back(query);
    } else {
      if (options_.freeze_sparsifier) continue;
      if (!h_snapshot.has_edge(event.u, event.v)) continue;  // planned graph-only
      if (shadow.degree(event.u) == 0 || shadow.degree(event.v) == 0) continue;
      WalkQuery query;
      query.kind = WalkQuery::Kind::MinPath;
      query.p = event.u;
      query.q = event.v;
      query.update_id = update_id;
      slot[k] = delete_queries.size();
      delete_queries.push_back(query);
    }
  }
  WalkConfig deletion_cfg = options_.walk;
  deletion_cfg.distortion_threshold = std::numeric_limits<double>::infinity();
  const auto insert_results = run_batch(h_snapshot, insert_queries, options_.walk);
  const auto delete_results = run_batch(shadow, delete_queries, deletion_cfg);

  // Commit phase, sequential in event order. Interacting events inside one
  // batch resolve against the live state here (membership is re-checked), so
  // the subgraph invariant survives even adversarial batches.
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const std::size_t pos = positions[k];
    const EdgeEvent& event = stream.events[pos];
    ++update_counter_;
    std::uint64_t event_steps = 0;
    try {
      if (event.kind == EdgeEvent::Kind::Insertion) {
        ++report.insertions_seen;
        graph_.insert_edge(event.u, event.v, event.weight);
        bool have_verdict = false;
        bool reached = false;
        if (slot[k] != kNoSlot) {
          have_verdict = true;
          reached = insert_results[slot[k]].verdict.reached;
          event_steps = insert_results[slot[k]].steps_used;
        }
        const InsertionDecision decision =
            commit_insertion(event.u, event.v, event.weight, have_verdict, reached);
        if (decision == InsertionDecision::Kept) {
          ++report.insertions_kept;
        } else {
          ++report.insertions_pruned;
        }
      } else {
        ++report.deletions_seen;
        graph_.delete_edge(event.u, event.v);
        if (sparsifier_.has_edge(event.u, event.v)) {
          ++report.deletions_in_sparsifier;
          sparsifier_.delete_edge(event.u, event.v);
          if (!options_.freeze_sparsifier) {
            const RecoveredPath* path = nullptr;
            if (slot[k] != kNoSlot) {
              event_steps = delete_results[slot[k]].steps_used;
              if (delete_results[slot[k]].path) {
                path = &*delete_results[slot[k]].path;
              }
            }
            if (path != nullptr) {
              std::uint32_t added = 0;
              for (std::size_t i = 0; i + 1 < path->vertices.size(); ++i) {
                const VertexId a = path->vertices[i];
                const VertexId b = path->vertices[i + 1];
                if (!sparsifier_.has_edge(a, b)) {
                  sparsifier_.insert_edge(a, b, graph_.edge_weight(a, b));
                  ++added;
                }
              }
              ++report.paths_recovered;
              report.edges_recovered += added;
            } else {
              const DeletionOutcome fallback = run_local_fallback(event.u, event.v);
              ++report.fallback_activations;
              report.edges_recovered += fallback.edges_added;
            }
          } else {
            ++report.fallback_activations;
          }
        }
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "event " << pos << ": " << e.what();
      throw Error(e.kind() == ErrorKind::Numeric ? ErrorKind::Numeric : ErrorKind::Data,
                  os.str());
    }
    report.walker_steps += event_steps;
    report.max_event_steps = std::max(report.max_event_steps, event_steps);
  }

  report.wall_ms = elapsed_ms(start);
  report.density_graph = graph_.density();
  report.density_sparsifier = sparsifier_.density();
  return report;
}

BatchReport SparsifierState::replay_batch(const UpdateStream& stream,
                                          std::uint32_t batch_index) {
  if (batch_index >= stream.batch_count && stream.batch_count > 0) {
    throw_usage("batch index out of range");
  }
  return options_.batched ? replay_batch_deferred(stream, batch_index)
                          : replay_batch_immediate(stream, batch_index);
}

UpdateReport SparsifierState::replay(const UpdateStream& stream) {
  UpdateReport report;
  report.batches.reserve(stream.batch_count);
  for (std::uint32_t b = 0; b < stream.batch_count; ++b) {
    report.batches.push_back(replay_batch(stream, b));
  }
  report.final_density_graph = graph_.density();
  report.final_density_sparsifier = sparsifier_.density();
  return report;
}

double calibrate_budget(const DynamicGraph& g, const DynamicGraph& h,
                        double probe_fraction, double rho, std::uint64_t seed) {
  if (!(probe_fraction > 0.0) || probe_fraction > 1.0) {
    throw_usage("probe fraction must lie in (0, 1]");
  }
  if (!(rho > 0.0)) {
    throw_usage("budget ratio must be positive");
  }
  ConditionOptions options;
  options.seed = seed;
  options.tolerance = 1e-3;  // a coarse kappa is enough to place the budget
  const double probe_iterations = std::ceil(probe_fraction * g.vertex_count());
  options.max_iterations = static_cast<std::uint32_t>(
      std::clamp(probe_iterations, 30.0, 2000.0));
  const ConditionEstimate estimate = condition_number(g, h, options);
  return std::clamp(rho * estimate.kappa, 1.0, 1e6);
}

double calibrate_budget(const SparsifierState& state, double probe_fraction,
                        double rho) {
  return calibrate_budget(state.graph(), state.sparsifier(), probe_fraction, rho,
                          state.options().walk.global_seed);
}

}  // namespace dysparse
