#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"
#include "stream.hpp"
#include "walk.hpp"

namespace dysparse {

// Initial sparsifier: a maximum-weight spanning tree plus off-tree edges of
// G in decreasing order of w_e times the tree-path resistance between the
// endpoints, added until the off-tree density reaches target_density. The
// seed only breaks distortion ties.
DynamicGraph build_initial_sparsifier(const DynamicGraph& g, double target_density,
                                      std::uint64_t seed);

// Loads a sparsifier from a MatrixMarket file and validates it against G:
// same vertex count, every edge present in G, connected. Weights come from
// the file.
DynamicGraph import_sparsifier(const DynamicGraph& g, const std::string& path);

struct SparsifierOptions {
  WalkConfig walk;
  bool batched = false;
  // Leaves H untouched while updates mutate G; the drift baseline. Under
  // freeze, insertions count as pruned and deletions only shrink H when the
  // deleted edge was in it (no recovery runs).
  bool freeze_sparsifier = false;
  // walk.distortion_threshold == 0 keeps every insertion without walking
  // (the no-filter baseline).
};

enum class InsertionDecision { Kept, Pruned };

struct DeletionOutcome {
  enum class Kind { GraphOnly, PathRecovered, LocalFallback };
  Kind kind = Kind::GraphOnly;
  std::uint32_t edges_added = 0;
};

struct BatchReport {
  std::uint32_t batch_index = 0;
  std::uint64_t insertions_seen = 0;
  std::uint64_t insertions_kept = 0;
  std::uint64_t insertions_pruned = 0;
  std::uint64_t deletions_seen = 0;
  std::uint64_t deletions_in_sparsifier = 0;
  std::uint64_t paths_recovered = 0;
  std::uint64_t edges_recovered = 0;
  std::uint64_t fallback_activations = 0;
  std::uint64_t walker_steps = 0;
  std::uint64_t max_event_steps = 0;
  double wall_ms = 0.0;
  double density_graph = 0.0;
  double density_sparsifier = 0.0;
};

struct UpdateReport {
  std::vector<BatchReport> batches;
  double final_density_graph = 0.0;
  double final_density_sparsifier = 0.0;
};

// The (G, H) pair under a stream of edge updates. Insertions are filtered
// by non-backtracking walks on H; deletions that hit H trigger path
// recovery on the updated G. Single writer; walks inside a batch may run
// in parallel.
class SparsifierState {
 public:
  SparsifierState(DynamicGraph graph, DynamicGraph sparsifier,
                  SparsifierOptions options);

  const DynamicGraph& graph() const { return graph_; }
  const DynamicGraph& sparsifier() const { return sparsifier_; }
  const SparsifierOptions& options() const { return options_; }
  std::uint64_t update_counter() const { return update_counter_; }

  // Adds (u, v, w) to G (coalescing), then decides H membership by walking
  // on the pre-event H. An edge already in H stays retained and its H
  // weight tracks G's new total regardless of the reported verdict.
  InsertionDecision apply_insertion(VertexId u, VertexId v, double weight);

  // Removes (u, v) from G; when the edge was in H, removes it there and
  // recovers the minimum-resistance path found on the updated G, or falls
  // back to one maximum-weight incident edge per isolation-threatened
  // endpoint when no walker reaches.
  DeletionOutcome apply_deletion(VertexId u, VertexId v);

  // Walker steps consumed by the most recent apply_* call.
  std::uint64_t last_event_steps() const { return last_event_steps_; }

  BatchReport replay_batch(const UpdateStream& stream, std::uint32_t batch_index);
  UpdateReport replay(const UpdateStream& stream);

 private:
  InsertionDecision commit_insertion(VertexId u, VertexId v, double event_weight,
                                     bool have_verdict, bool reached);
  DeletionOutcome run_local_fallback(VertexId u, VertexId v);
  BatchReport replay_batch_immediate(const UpdateStream& stream,
                                     std::uint32_t batch_index);
  BatchReport replay_batch_deferred(const UpdateStream& stream,
                                    std::uint32_t batch_index);

  DynamicGraph graph_;
  DynamicGraph sparsifier_;
  SparsifierOptions options_;
  std::uint64_t update_counter_ = 0;
  std::uint64_t last_event_steps_ = 0;
};

// K = clamp(rho * kappa(L_G, L_H), 1, 1e6), with kappa estimated by the
// spectral module. probe_fraction bounds the iterative eigensolver's work
// as a fraction of |V|. Deterministic for a given state.
double calibrate_budget(const DynamicGraph& g, const DynamicGraph& h,
                        double probe_fraction, double rho = 0.1,
                        std::uint64_t seed = 0);
double calibrate_budget(const SparsifierState& state, double probe_fraction,
                        double rho = 0.1);

}  // namespace dysparse
