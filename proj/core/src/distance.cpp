#include "cheeger/distance.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace cheeger {

namespace {

using QueueEntry = std::pair<double, Index>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

}  // namespace

DistanceField geodesic_distance(const Adjacency& adjacency, std::span<const Index> sources, double cutoff) {
  const std::size_t n = adjacency.vertex_count();
  if (sources.empty()) throw std::invalid_argument("geodesic distance: empty source set");
  DistanceField out;
  out.values.assign(n, kUnreached);
  MinQueue queue;
  for (Index s : sources) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) throw std::invalid_argument("geodesic distance: bad source");
    if (out.values[s] != 0.0) {
      out.values[s] = 0.0;
      queue.emplace(0.0, s);
    }
  }
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > out.values[v]) continue;
    for (Index a = adjacency.offsets[v]; a < adjacency.offsets[v + 1]; ++a) {
      const Index w = adjacency.targets[a];
      const double nd = d + adjacency.lengths[a];
      if (nd < out.values[w] && nd <= cutoff) {
        out.values[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  out.unreached = static_cast<std::size_t>(std::count(out.values.begin(), out.values.end(), kUnreached));
  return out;
}

DistanceField geodesic_distance(const SurfaceMesh& mesh, std::span<const Index> sources, double cutoff) {
  return geodesic_distance(mesh.adjacency(), sources, cutoff);
}

DistanceField geodesic_distance(const WeightedGraph& graph, std::span<const Index> sources, double cutoff) {
  return geodesic_distance(graph.adjacency(), sources, cutoff);
}

// Eccentricity bounding (Takes and Kosters): every Dijkstra run from v
// tightens max(d, ecc(v) - d) <= ecc(w) <= ecc(v) + d for all w, and
// vertices whose upper bound cannot beat the best lower bound are dropped.
// Sources alternate between the largest upper and the smallest lower bound.
double graph_diameter(const Adjacency& adjacency) {
  const std::size_t n = adjacency.vertex_count();
  std::vector<double> lower(n, 0.0);
  std::vector<double> upper(n, kUnreached);
  std::vector<char> seen(n, 0);
  BoundedDijkstra dijkstra(adjacency);
  double best = 0.0;
  std::vector<Index> candidates;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    candidates.clear();
    for (const auto& [w, d] : dijkstra.run(static_cast<Index>(root), kUnreached)) {
      seen[w] = 1;
      candidates.push_back(w);
    }
    bool from_upper = true;
    while (!candidates.empty()) {
      const auto pick = from_upper
                            ? std::max_element(candidates.begin(), candidates.end(),
                                               [&](Index a, Index b) { return upper[a] < upper[b]; })
                            : std::min_element(candidates.begin(), candidates.end(),
                                               [&](Index a, Index b) { return lower[a] < lower[b]; });
      from_upper = !from_upper;
      const auto settled = dijkstra.run(*pick, kUnreached);
      double ecc = 0.0;
      for (const auto& entry : settled) ecc = std::max(ecc, entry.second);
      for (const auto& [w, d] : settled) {
        lower[w] = std::max({lower[w], d, ecc - d});
        upper[w] = std::min(upper[w], ecc + d);
        best = std::max(best, lower[w]);
      }
      const double cut = best * (1.0 + 1e-12);
      std::erase_if(candidates, [&](Index w) { return upper[w] <= cut; });
    }
  }
  return best;
}

BoundedDijkstra::BoundedDijkstra(const Adjacency& adjacency)
    : adjacency_(&adjacency), dist_(adjacency.vertex_count(), kUnreached) {}

std::span<const std::pair<Index, double>> BoundedDijkstra::run(Index source, double radius) {
  for (Index v : touched_) dist_[v] = kUnreached;
  touched_.clear();
  settled_.clear();

  const Adjacency& adj = *adjacency_;
  MinQueue queue;
  dist_[source] = 0.0;
  touched_.push_back(source);
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist_[v]) continue;
    settled_.emplace_back(v, d);
    for (Index a = adj.offsets[v]; a < adj.offsets[v + 1]; ++a) {
      const Index w = adj.targets[a];
      const double nd = d + adj.lengths[a];
      if (nd <= radius && nd < dist_[w]) {
        if (dist_[w] == kUnreached) touched_.push_back(w);
        dist_[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  return settled_;
}

}  // namespace cheeger
