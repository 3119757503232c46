#pragma once

#include <stdexcept>
#include <vector>

#include "erasim/decoding_graph.hpp"
#include "erasim/peeling.hpp"

namespace erasim {

namespace detail {

// Union-by-rank with path compression; cluster parity and boundary contact
// live at the root.
struct ClusterForest {
  std::vector<int> parent;
  std::vector<int> rank;
  std::vector<uint8_t> parity;
  std::vector<uint8_t> boundary;

  explicit ClusterForest(int n)
      : parent(static_cast<std::size_t>(n)),
        rank(static_cast<std::size_t>(n), 0),
        parity(static_cast<std::size_t>(n), 0),
        boundary(static_cast<std::size_t>(n), 0) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }

  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    parity[static_cast<std::size_t>(a)] ^= parity[static_cast<std::size_t>(b)];
    boundary[static_cast<std::size_t>(a)] |= boundary[static_cast<std::size_t>(b)];
    if (rank[static_cast<std::size_t>(a)] == rank[static_cast<std::size_t>(b)])
      ++rank[static_cast<std::size_t>(a)];
  }
};

}  // namespace detail

// Erasure-aware union-find decoder. Erased edges pre-grow clusters at zero
// cost; odd clusters then grow by half-edge increments (ties broken by edge
// index) until every cluster is even or touches the boundary. The correction
// is peeled from the grown support, so it is always syndrome-valid.
inline Correction union_find_decode(const DecodingGraph& graph,
                                    const std::vector<int>& erased_edges,
                                    const BitVec& syndrome) {
  const int num_v = graph.num_vertices;
  detail::ClusterForest forest(num_v);
  std::vector<int> odd_candidates;
  for (int v = 0; v < num_v; ++v)
    if (syndrome.get(static_cast<std::size_t>(v))) {
      forest.parity[static_cast<std::size_t>(v)] = 1;
      odd_candidates.push_back(v);
    }

  std::vector<uint8_t> growth(graph.edges.size(), 0);
  std::vector<int> support;
  support.reserve(erased_edges.size());

  auto absorb_edge = [&](int e) {
    const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    support.push_back(e);
    if (edge.u == kBoundary || edge.v == kBoundary) {
      const int v = edge.u == kBoundary ? edge.v : edge.u;
      if (v != kBoundary) forest.boundary[static_cast<std::size_t>(forest.find(v))] = 1;
    } else {
      forest.unite(edge.u, edge.v);
    }
  };

  for (int e : erased_edges) {
    if (e < 0 || e >= static_cast<int>(graph.edges.size()))
      throw std::invalid_argument("union_find_decode: erased edge out of range");
    if (growth[static_cast<std::size_t>(e)] >= 2) continue;  // duplicate flag
    growth[static_cast<std::size_t>(e)] = 2;
    absorb_edge(e);
  }

  auto is_active_vertex = [&](int v) {
    const int root = forest.find(v);
    return forest.parity[static_cast<std::size_t>(root)] &&
           !forest.boundary[static_cast<std::size_t>(root)];
  };

  std::vector<int> newly_full;
  while (true) {
    bool any_active = false;
    for (int v : odd_candidates)
      if (is_active_vertex(v)) {
        any_active = true;
        break;
      }
    if (!any_active) break;

    bool grew = false;
    newly_full.clear();
    for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
      if (growth[static_cast<std::size_t>(e)] >= 2) continue;
      const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
      int units = 0;
      if (edge.u != kBoundary && is_active_vertex(edge.u)) ++units;
      if (edge.v != kBoundary && is_active_vertex(edge.v)) ++units;
      if (units == 0) continue;
      growth[static_cast<std::size_t>(e)] =
          static_cast<uint8_t>(growth[static_cast<std::size_t>(e)] + units);
      grew = true;
      if (growth[static_cast<std::size_t>(e)] >= 2) newly_full.push_back(e);
    }
    if (!grew)
      throw std::logic_error("union_find_decode: odd cluster with no growable edges");
    for (int e : newly_full) absorb_edge(e);
  }

  std::optional<Correction> correction = detail::peel_within(graph, support, syndrome);
  if (!correction)
    throw std::logic_error("union_find_decode: peeling failed on grown support");
  return *correction;
}

}  // namespace erasim
