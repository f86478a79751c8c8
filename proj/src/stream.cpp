#include "stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "rng.hpp"

namespace dysparse {

UpdateStream load_update_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw_data("cannot open file: " + path);
  }
  UpdateStream stream;
  std::uint32_t current_batch = 0;
  std::uint32_t max_batch_with_events = 0;
  bool any_events = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#batch", 0) == 0) ++current_batch;
      continue;
    }
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    EdgeEvent event;
    event.batch_index = current_batch;
    if (op == "i") {
      event.kind = EdgeEvent::Kind::Insertion;
      if (!(ls >> event.u >> event.v >> event.weight)) {
        throw_data(path + ":" + std::to_string(line_no) + ": malformed insertion");
      }
    } else if (op == "d") {
      event.kind = EdgeEvent::Kind::Deletion;
      if (!(ls >> event.u >> event.v)) {
        throw_data(path + ":" + std::to_string(line_no) + ": malformed deletion");
      }
    } else {
      throw_data(path + ":" + std::to_string(line_no) + ": unknown event '" + op + "'");
    }
    stream.events.push_back(event);
    max_batch_with_events = current_batch;
    any_events = true;
  }
  stream.batch_count = any_events ? max_batch_with_events + 1 : 0;
  return stream;
}

void save_update_stream(const UpdateStream& stream, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw_data("cannot write file: " + path);
  }
  char buffer[64];
  std::uint32_t current_batch = 0;
  for (const EdgeEvent& event : stream.events) {
    while (current_batch < event.batch_index) {
      out << "#batch\n";
      ++current_batch;
    }
    if (event.kind == EdgeEvent::Kind::Insertion) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", event.weight);
      out << "i " << event.u << ' ' << event.v << ' ' << buffer << '\n';
    } else {
      out << "d " << event.u << ' ' << event.v << '\n';
    }
  }
  if (!stream.events.empty()) {
    out << "#batch\n";
  }
  if (!out) {
    throw_data("write failed: " + path);
  }
}

namespace {

// Vertices within `radius` hops of `start`, excluding start itself.
std::vector<VertexId> vertices_within(const DynamicGraph& g, VertexId start,
                                      std::uint32_t radius) {
  std::vector<std::uint32_t> dist(g.vertex_count(),
                                  std::numeric_limits<std::uint32_t>::max());
  std::vector<VertexId> found;
  std::queue<VertexId> frontier;
  dist[start] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    VertexId u = frontier.front();
    frontier.pop();
    if (dist[u] == radius) continue;
    for (const Neighbor& nb : g.neighbors(u)) {
      if (dist[nb.id] != std::numeric_limits<std::uint32_t>::max()) continue;
      dist[nb.id] = dist[u] + 1;
      found.push_back(nb.id);
      frontier.push(nb.id);
    }
  }
  return found;
}

}  // namespace

UpdateStream generate_update_stream(const DynamicGraph& g,
                                    const StreamGenOptions& options) {
  if (options.insert_fraction < 0.0 || options.delete_fraction < 0.0) {
    throw_usage("update fractions must be nonnegative");
  }
  if (options.batches == 0) {
    throw_usage("batch count must be positive");
  }
  const std::uint32_t n = g.vertex_count();
  const std::uint64_t insert_count = static_cast<std::uint64_t>(
      std::llround(options.insert_fraction * static_cast<double>(n)));
  const std::uint64_t delete_count = static_cast<std::uint64_t>(
      std::llround(options.delete_fraction * static_cast<double>(g.edge_count())));

  double weight_min = std::numeric_limits<double>::infinity();
  double weight_max = 0.0;
  auto edges = g.edges();
  for (const auto& [pair, weight] : edges) {
    weight_min = std::min(weight_min, weight);
    weight_max = std::max(weight_max, weight);
  }
  if (insert_count > 0 && edges.empty()) {
    throw_data("cannot derive insertion weights from an edgeless graph");
  }

  SplitMix64 rng(hash_mix(options.seed + 0x12345678ull));
  UpdateStream stream;

  // Insertions: batches 0 .. batches-1.
  std::unordered_set<std::uint64_t> used;
  const std::uint64_t attempt_cap = 200 * std::max<std::uint64_t>(insert_count, 1) + 10000;
  std::uint64_t attempts = 0;
  for (std::uint64_t k = 0; k < insert_count; ++k) {
    VertexId u = 0, v = 0;
    bool found = false;
    while (attempts < attempt_cap) {
      ++attempts;
      u = static_cast<VertexId>(rng.next_below(n));
      if (options.locality == 0) {
        v = static_cast<VertexId>(rng.next_below(n));
      } else {
        auto nearby = vertices_within(g, u, options.locality);
        if (nearby.empty()) continue;
        v = nearby[rng.next_below(nearby.size())];
      }
      if (u == v) continue;
      const std::uint64_t key =
          static_cast<std::uint64_t>(std::min(u, v)) * n + std::max(u, v);
      if (g.has_edge(u, v) || used.count(key) != 0) continue;
      used.insert(key);
      found = true;
      break;
    }
    if (!found) {
      throw_data("could not sample enough non-edges (graph too dense?)");
    }
    EdgeEvent event;
    event.kind = EdgeEvent::Kind::Insertion;
    event.u = std::min(u, v);
    event.v = std::max(u, v);
    event.weight = weight_min + rng.next_double() * (weight_max - weight_min);
    event.batch_index = static_cast<std::uint32_t>(k * options.batches / std::max<std::uint64_t>(insert_count, 1));
    stream.events.push_back(event);
  }

  // Deletions: batches after the insertion batches.
  if (delete_count > g.edge_count()) {
    throw_data("deletion fraction exceeds edge count");
  }
  const std::uint32_t deletion_base = insert_count > 0 ? options.batches : 0;
  // Partial Fisher-Yates over the edge list.
  for (std::uint64_t k = 0; k < delete_count; ++k) {
    const std::uint64_t pick = k + rng.next_below(edges.size() - k);
    std::swap(edges[k], edges[pick]);
    EdgeEvent event;
    event.kind = EdgeEvent::Kind::Deletion;
    event.u = edges[k].first.first;
    event.v = edges[k].first.second;
    event.batch_index = deletion_base + static_cast<std::uint32_t>(
        k * options.batches / std::max<std::uint64_t>(delete_count, 1));
    stream.events.push_back(event);
  }

  stream.batch_count =
      stream.events.empty() ? 0 : stream.events.back().batch_index + 1;
  return stream;
}

}  // namespace dysparse
