#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"

namespace dysparse {

struct EdgeEvent {
  enum class Kind { Insertion, Deletion };
  Kind kind = Kind::Insertion;
  VertexId u = 0;
  VertexId v = 0;
  double weight = 0.0;  // insertions only
  std::uint32_t batch_index = 0;
};

struct UpdateStream {
  std::vector<EdgeEvent> events;
  std::uint32_t batch_count = 0;
};

// Text format, one event per line:
//   i <u> <v> <w>     edge insertion (0-based ids, positive weight)
//   d <u> <v>         edge deletion
//   #batch            closes the current batch
//   # ...             comment
UpdateStream load_update_stream(const std::string& path);
void save_update_stream(const UpdateStream& stream, const std::string& path);

struct StreamGenOptions {
  double insert_fraction = 0.0;  // insertions = round(fraction * |V|)
  double delete_fraction = 0.0;  // deletions  = round(fraction * |E|)
  std::uint32_t batches = 1;
  std::uint64_t seed = 0;
  // 0 samples insertion endpoints uniformly over all non-edges; a positive
  // value restricts the second endpoint to within that many hops of the
  // first, modelling localized updates.
  std::uint32_t locality = 0;
};

// Deterministic per seed. Insertions are sampled non-edges (no repeats)
// with weights uniform over [min, max] of the existing weights; deletions
// are existing edges sampled without replacement. Insertion batches come
// first, then deletion batches.
UpdateStream generate_update_stream(const DynamicGraph& g, const StreamGenOptions& options);

}  // namespace dysparse
