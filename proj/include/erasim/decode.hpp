#pragma once

#include <optional>
#include <string>

#include "erasim/decoding_graph.hpp"
#include "erasim/peeling.hpp"
#include "erasim/union_find.hpp"

namespace erasim {

enum class DecoderKind { Peeling, UnionFind };

inline const char* to_string(DecoderKind d) {
  return d == DecoderKind::Peeling ? "peeling" : "unionfind";
}

struct ShotDecision {
  bool x_flip = false;  // predicted flip of the Z-basis logical readout (X-side graph)
  bool z_flip = false;  // predicted flip of the X-basis readout (Z-side graph)
};

// Decode one side. Peeling falls back to union-find when the syndrome is not
// covered by the erasure.
inline Correction decode_side(const DecodingGraph& graph, const std::vector<int>& erased,
                              const BitVec& syndrome, DecoderKind decoder) {
  if (decoder == DecoderKind::Peeling) {
    std::optional<Correction> peeled = peel_decode(graph, erased, syndrome);
    if (peeled) return *peeled;
  }
  return union_find_decode(graph, erased, syndrome);
}

inline ShotDecision decode_shot(const GraphPair& graphs, const ShotRecord& shot,
                                DecoderKind decoder, bool use_flags = true,
                                bool decode_z_side = true) {
  static const std::vector<int> kNoErasure;
  const auto erased = use_flags ? erased_edges_from_flags(graphs, shot.flags)
                                : std::pair<std::vector<int>, std::vector<int>>{};
  ShotDecision decision;
  {
    const BitVec syndrome = graph_syndrome(graphs.x, shot.detectors);
    const Correction c = decode_side(graphs.x, use_flags ? erased.first : kNoErasure,
                                     syndrome, decoder);
    decision.x_flip = (c.obs_mask & 1u) != 0;
  }
  if (decode_z_side) {
    const BitVec syndrome = graph_syndrome(graphs.z, shot.detectors);
    const Correction c = decode_side(graphs.z, use_flags ? erased.second : kNoErasure,
                                     syndrome, decoder);
    decision.z_flip = (c.obs_mask & 1u) != 0;
  }
  return decision;
}

}  // namespace erasim
