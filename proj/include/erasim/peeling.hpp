#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "erasim/bitvec.hpp"
#include "erasim/decoding_graph.hpp"

namespace erasim {

struct Correction {
  std::vector<int> edges;
  uint32_t obs_mask = 0;
};

namespace detail {

// Spanning forest over a subset of edges, then leaf peeling. Forest roots sit
// at the boundary where a component touches it (scanning boundary edges in
// index order), remaining components root at their lowest vertex. Returns
// nullopt when a syndrome vertex lies outside the subset's span or a
// component's syndrome parity is odd with no boundary relief.
inline std::optional<Correction> peel_within(const DecodingGraph& graph,
                                             const std::vector<int>& support_edges,
                                             BitVec syndrome) {
  const int num_v = graph.num_vertices;
  std::vector<uint8_t> in_support(graph.edges.size(), 0);
  std::vector<uint8_t> touched(static_cast<std::size_t>(num_v), 0);
  for (int e : support_edges) {
    in_support[static_cast<std::size_t>(e)] = 1;
    const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    if (edge.u != kBoundary) touched[static_cast<std::size_t>(edge.u)] = 1;
    if (edge.v != kBoundary) touched[static_cast<std::size_t>(edge.v)] = 1;
  }
  for (int v = 0; v < num_v; ++v)
    if (syndrome.get(static_cast<std::size_t>(v)) && !touched[static_cast<std::size_t>(v)])
      return std::nullopt;

  std::vector<int> parent_edge(static_cast<std::size_t>(num_v), -1);
  std::vector<uint8_t> visited(static_cast<std::size_t>(num_v), 0);
  std::vector<uint8_t> is_root(static_cast<std::size_t>(num_v), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(num_v));
  std::vector<int> queue;

  auto expand = [&](int start) {
    queue.clear();
    queue.push_back(start);
    std::size_t head = 0;
    while (head < queue.size()) {
      const int v = queue[head++];
      for (int e : graph.incident[static_cast<std::size_t>(v)]) {
        if (!in_support[static_cast<std::size_t>(e)]) continue;
        const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
        const int other = edge.u == v ? edge.v : edge.u;
        if (other == kBoundary || visited[static_cast<std::size_t>(other)]) continue;
        visited[static_cast<std::size_t>(other)] = 1;
        parent_edge[static_cast<std::size_t>(other)] = e;
        order.push_back(other);
        queue.push_back(other);
      }
    }
  };

  // Boundary-rooted trees first: the boundary edge becomes the root vertex's
  // parent so leftover syndrome drains into the boundary.
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
    if (!in_support[static_cast<std::size_t>(e)]) continue;
    const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    if (edge.u != kBoundary && edge.v != kBoundary) continue;
    const int v = edge.u == kBoundary ? edge.v : edge.u;
    if (v == kBoundary || visited[static_cast<std::size_t>(v)]) continue;
    visited[static_cast<std::size_t>(v)] = 1;
    parent_edge[static_cast<std::size_t>(v)] = e;
    order.push_back(v);
    expand(v);
  }
  // Remaining components by lowest vertex index.
  for (int v = 0; v < num_v; ++v) {
    if (!touched[static_cast<std::size_t>(v)] || visited[static_cast<std::size_t>(v)]) continue;
    visited[static_cast<std::size_t>(v)] = 1;
    is_root[static_cast<std::size_t>(v)] = 1;
    order.push_back(v);
    expand(v);
  }

  Correction correction;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (!syndrome.get(static_cast<std::size_t>(v))) continue;
    if (is_root[static_cast<std::size_t>(v)]) return std::nullopt;  // odd isolated component
    const int e = parent_edge[static_cast<std::size_t>(v)];
    const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    correction.edges.push_back(e);
    correction.obs_mask ^= edge.obs_mask;
    syndrome.set(static_cast<std::size_t>(v), false);
    const int other = edge.u == v ? edge.v : edge.u;
    if (other != kBoundary) syndrome.flip(static_cast<std::size_t>(other));
  }
  return correction;
}

}  // namespace detail

// Pure-erasure peeling decoder: spanning forest of the erased subgraph,
// boundary-rooted where possible, then leaf peeling. Fails (nullopt) when the
// syndrome is not covered by the erasure; callers fall back to union-find.
inline std::optional<Correction> peel_decode(const DecodingGraph& graph,
                                             const std::vector<int>& erased_edges,
                                             const BitVec& syndrome) {
  return detail::peel_within(graph, erased_edges, syndrome);
}

// Test oracle surface: does the correction's edge-boundary parity reproduce
// the syndrome?
inline bool correction_valid(const DecodingGraph& graph, const Correction& correction,
                             const BitVec& syndrome) {
  BitVec parity(static_cast<std::size_t>(graph.num_vertices));
  for (int e : correction.edges) {
    const DecodingEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    if (edge.u != kBoundary) parity.flip(static_cast<std::size_t>(edge.u));
    if (edge.v != kBoundary) parity.flip(static_cast<std::size_t>(edge.v));
  }
  return parity == syndrome;
}

// Hook for plugging in an external matching decoder over the reweighted
// graph. Deliberately interface-only: union-find plus erasure reweighting
// covers everything this project asserts.
class MatchingAdapter {
 public:
  virtual ~MatchingAdapter() = default;
  virtual Correction decode(const DecodingGraph& reweighted_graph, const BitVec& syndrome) = 0;
};

}  // namespace erasim
