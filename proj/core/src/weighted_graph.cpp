#include "cheeger/weighted_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace cheeger {

bool is_connected(const Adjacency& adjacency) {
  const std::size_t n = adjacency.vertex_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index a = adjacency.offsets[v]; a < adjacency.offsets[v + 1]; ++a) {
      const Index w = adjacency.targets[a];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

WeightedGraph::WeightedGraph(std::vector<double> vertex_weights, std::vector<GraphEdge> edges)
    : weights_(std::move(vertex_weights)), edges_(std::move(edges)) {
  const std::size_t n = weights_.size();
  if (n == 0) throw std::invalid_argument("weighted graph: no vertices");
  for (std::size_t v = 0; v < n; ++v) {
    if (!(weights_[v] > 0.0) || !std::isfinite(weights_[v]))
      throw std::invalid_argument("weighted graph: vertex weight " + std::to_string(v) + " must be positive");
    total_weight_ += weights_[v];
  }
  std::set<std::pair<Index, Index>> seen;
  for (const GraphEdge& e : edges_) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n || static_cast<std::size_t>(e.v) >= n)
      throw std::invalid_argument("weighted graph: edge references a missing vertex");
    if (e.u == e.v) throw std::invalid_argument("weighted graph: self loop at " + std::to_string(e.u));
    if (!(e.conductance > 0.0) || !(e.length > 0.0))
      throw std::invalid_argument("weighted graph: conductances and lengths must be positive");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw std::invalid_argument("weighted graph: duplicate edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
  }

  adjacency_.offsets.assign(n + 1, 0);
  for (const GraphEdge& e : edges_) {
    ++adjacency_.offsets[e.u + 1];
    ++adjacency_.offsets[e.v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) adjacency_.offsets[v + 1] += adjacency_.offsets[v];
  const auto arcs = static_cast<std::size_t>(adjacency_.offsets.back());
  adjacency_.targets.resize(arcs);
  adjacency_.lengths.resize(arcs);
  adjacency_.edge_ids.resize(arcs);
  std::vector<Index> cursor(adjacency_.offsets.begin(), adjacency_.offsets.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const GraphEdge& e = edges_[i];
    for (auto [from, to] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      const Index slot = cursor[from]++;
      adjacency_.targets[slot] = to;
      adjacency_.lengths[slot] = e.length;
      adjacency_.edge_ids[slot] = static_cast<Index>(i);
    }
  }
  if (!is_connected(adjacency_)) throw std::invalid_argument("weighted graph: graph is not connected");
}

WeightedGraph WeightedGraph::unit(std::size_t vertex_count, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<GraphEdge> list;
  list.reserve(edges.size());
  for (auto [u, v] : edges) list.push_back({u, v, 1.0, 1.0});
  return WeightedGraph(std::vector<double>(vertex_count, 1.0), std::move(list));
}

}  // namespace cheeger
