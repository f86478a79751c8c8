#include "graph.hpp"

#include <cmath>
#include <queue>
#include <sstream>

namespace dysparse {

DynamicGraph::DynamicGraph(std::uint32_t vertex_count) {
  if (vertex_count == 0) {
    throw_usage("graph must have at least one vertex");
  }
  adjacency_.resize(vertex_count);
}

void DynamicGraph::check_vertex(VertexId u) const {
  if (u >= adjacency_.size()) {
    std::ostringstream os;
    os << "vertex id " << u << " out of range (n = " << adjacency_.size() << ")";
    throw_usage(os.str());
  }
}

std::uint32_t DynamicGraph::degree(VertexId u) const {
  check_vertex(u);
  return static_cast<std::uint32_t>(adjacency_[u].size());
}

std::span<const Neighbor> DynamicGraph::neighbors(VertexId u) const {
  check_vertex(u);
  return {adjacency_[u].data(), adjacency_[u].size()};
}

Neighbor* DynamicGraph::find(VertexId u, VertexId v) {
  for (Neighbor& nb : adjacency_[u]) {
    if (nb.id == v) return &nb;
  }
  return nullptr;
}

const Neighbor* DynamicGraph::find(VertexId u, VertexId v) const {
  for (const Neighbor& nb : adjacency_[u]) {
    if (nb.id == v) return &nb;
  }
  return nullptr;
}

bool DynamicGraph::has_edge(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  // Scan the smaller adjacency array.
  if (adjacency_[u].size() > adjacency_[v].size()) std::swap(u, v);
  return find(u, v) != nullptr;
}

double DynamicGraph::edge_weight(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  if (adjacency_[u].size() > adjacency_[v].size()) std::swap(u, v);
  const Neighbor* nb = find(u, v);
  return nb ? nb->weight : 0.0;
}

DynamicGraph::InsertOutcome DynamicGraph::insert_edge(VertexId u, VertexId v,
                                                      double weight) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) {
    throw_usage("self-loops are not allowed");
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw_usage("edge weight must be a positive finite number");
  }
  if (Neighbor* nb = find(u, v)) {
    nb->weight += weight;
    find(v, u)->weight = nb->weight;
    total_weight_ += weight;
    return InsertOutcome::Coalesced;
  }
  adjacency_[u].push_back({v, weight});
  adjacency_[v].push_back({u, weight});
  ++edge_count_;
  total_weight_ += weight;
  return InsertOutcome::New;
}

double DynamicGraph::delete_edge(VertexId u, VertexId v) {
  check_vertex(u);
  check_vertex(v);
  Neighbor* nb = find(u, v);
  if (nb == nullptr) {
    std::ostringstream os;
    os << "edge (" << u << ", " << v << ") does not exist";
    throw_data(os.str());
  }
  const double weight = nb->weight;
  auto remove_from = [this](VertexId a, VertexId b) {
    auto& list = adjacency_[a];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].id == b) {
        list[i] = list.back();
        list.pop_back();
        return;
      }
    }
  };
  remove_from(u, v);
  remove_from(v, u);
  --edge_count_;
  total_weight_ -= weight;
  return weight;
}

double DynamicGraph::density() const {
  return static_cast<double>(edge_count_) / static_cast<double>(vertex_count()) - 1.0;
}

std::vector<std::pair<std::pair<VertexId, VertexId>, double>> DynamicGraph::edges() const {
  std::vector<std::pair<std::pair<VertexId, VertexId>, double>> out;
  out.reserve(edge_count_);
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (const Neighbor& nb : adjacency_[u]) {
      if (u < nb.id) out.push_back({{u, nb.id}, nb.weight});
    }
  }
  return out;
}

bool DynamicGraph::check_consistency(std::string* why) const {
  auto fail = [&](const std::string& message) {
    if (why != nullptr) *why = message;
    return false;
  };
  std::uint64_t entries = 0;
  double weight_sum = 0.0;
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (const Neighbor& nb : adjacency_[u]) {
      if (nb.id >= vertex_count()) return fail("neighbor id out of range");
      if (nb.id == u) return fail("self-loop present");
      if (!(nb.weight > 0.0)) return fail("non-positive weight");
      const Neighbor* mirror = find(nb.id, u);
      if (mirror == nullptr) return fail("asymmetric adjacency entry");
      if (mirror->weight != nb.weight) return fail("mirror weight mismatch");
      ++entries;
      if (u < nb.id) weight_sum += nb.weight;
    }
    // One entry per unordered pair.
    for (std::size_t i = 0; i < adjacency_[u].size(); ++i) {
      for (std::size_t j = i + 1; j < adjacency_[u].size(); ++j) {
        if (adjacency_[u][i].id == adjacency_[u][j].id) {
          return fail("duplicate adjacency entry");
        }
      }
    }
  }
  if (entries != 2 * edge_count_) return fail("edge_count out of sync");
  if (std::abs(weight_sum - total_weight_) >
      1e-9 * std::max(1.0, std::abs(weight_sum))) {
    return fail("total_weight cache out of sync");
  }
  return true;
}

std::vector<std::uint32_t> connected_components(const DynamicGraph& g,
                                                std::uint32_t* component_count) {
  const std::uint32_t n = g.vertex_count();
  constexpr std::uint32_t kUnvisited = 0xFFFFFFFFu;
  std::vector<std::uint32_t> label(n, kUnvisited);
  std::uint32_t next_label = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != kUnvisited) continue;
    label[s] = next_label;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(u)) {
        if (label[nb.id] == kUnvisited) {
          label[nb.id] = next_label;
          stack.push_back(nb.id);
        }
      }
    }
    ++next_label;
  }
  if (component_count != nullptr) *component_count = next_label;
  return label;
}

bool is_connected(const DynamicGraph& g) {
  std::uint32_t count = 0;
  connected_components(g, &count);
  return count <= 1;
}

}  // namespace dysparse
