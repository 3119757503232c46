#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "erasim/circuit.hpp"
#include "erasim/frame_sampler.hpp"

namespace erasim {

struct HypergraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kBoundary = -1;

struct DecodingEdge {
  int u = kBoundary;
  int v = kBoundary;
  double p = 0.0;        // total fault probability, XOR-combined across sources
  double weight = 0.0;   // log((1-p)/p)
  uint32_t obs_mask = 0;
  std::vector<int> sources;  // instruction indices of contributing mechanisms
};

// Matching graph for one CSS side: vertices are that side's detectors plus an
// implicit boundary. check_to_edges maps a heralding check id to the edges its
// conversion could have fired in this graph.
struct DecodingGraph {
  int num_vertices = 0;
  std::vector<DecodingEdge> edges;
  std::vector<std::vector<int>> incident;       // vertex -> incident edge ids
  std::vector<int> detector_to_vertex;          // global detector id -> vertex or -1
  std::vector<int> vertex_to_detector;
  std::vector<std::vector<int>> check_to_edges; // check id -> edge ids
  double invisible_obs_prob = 0.0;  // observable-flipping faults with no detectors

  void rebuild_incidence() {
    incident.assign(static_cast<std::size_t>(num_vertices), {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      if (edges[static_cast<std::size_t>(e)].u != kBoundary)
        incident[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].u)].push_back(e);
      if (edges[static_cast<std::size_t>(e)].v != kBoundary)
        incident[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].v)].push_back(e);
    }
  }
};

// X-side graph decodes X-component faults (Z-type detectors); Z-side the dual.
struct GraphPair {
  DecodingGraph x;
  DecodingGraph z;
};

inline double edge_weight_from_p(double p) {
  const double clamped = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
  return std::log((1.0 - clamped) / clamped);
}

// Erased edges become free (probability 1/2); everything else is unchanged.
inline DecodingGraph reweight_for_erasure(const DecodingGraph& graph,
                                          const std::vector<int>& erased_edges) {
  DecodingGraph out = graph;
  for (int e : erased_edges) {
    if (e < 0 || e >= static_cast<int>(out.edges.size()))
      throw std::invalid_argument("reweight_for_erasure: edge index out of range");
    out.edges[static_cast<std::size_t>(e)].weight = 0.0;
  }
  return out;
}

namespace detail {

struct FaultMechanism {
  bool is_meas_flip = false;
  bool x_side = false;  // Pauli components only
  double prob = 0.0;
  int instr_index = -1;  // where the component or flip lands
  int qubit = -1;
  int source = -1;                // originating instruction
  std::vector<int> herald_checks; // flags that herald this mechanism
};

// Mechanisms born from a mark set at `origin` (erasure at a noise site, or a
// unitary-reset false positive at a check) on `qubit` with probability
// `start_prob`: conversion components at every later check while the mark
// survives, coin-flip readout corruption at measurements, and optional
// partner corruption at CX gates.
inline void walk_mark_chain(const Circuit& circuit, int origin, int qubit, double start_prob,
                            int origin_flag, std::vector<FaultMechanism>& out) {
  double survive = start_prob;
  for (int idx = origin + 1;
       idx < static_cast<int>(circuit.instructions.size()) && survive > 1e-15; ++idx) {
    const Instruction& in = circuit.instructions[static_cast<std::size_t>(idx)];
    const bool on_qubit = in.a == qubit || (in.kind == OpKind::CX && in.b == qubit);
    if (!on_qubit) continue;
    switch (in.kind) {
      case OpKind::Reset: return;
      case OpKind::ErasureCheck: {
        FaultMechanism mech;
        mech.prob = survive * 0.5;
        mech.instr_index = idx;
        mech.qubit = qubit;
        mech.source = origin;
        mech.herald_checks.push_back(in.check_id);
        if (origin_flag >= 0) mech.herald_checks.push_back(origin_flag);
        if (in.conversion == ConversionMode::Mixed) {
          mech.x_side = true;
          out.push_back(mech);
        }
        mech.x_side = false;
        out.push_back(mech);
        survive *= in.f_neg;
        break;
      }
      case OpKind::MeasureZ: {
        FaultMechanism mech;
        mech.is_meas_flip = true;
        mech.prob = survive * 0.5;
        mech.instr_index = idx;
        mech.qubit = qubit;
        mech.source = origin;
        if (origin_flag >= 0) mech.herald_checks.push_back(origin_flag);
        out.push_back(mech);
        break;
      }
      case OpKind::CX: {
        if (!circuit.cx_leak_corruption) break;
        const int partner = in.a == qubit ? in.b : in.a;
        const PauliChannel conv = conversion_channel(circuit.leak_conversion);
        FaultMechanism mech;
        mech.instr_index = idx;
        mech.qubit = partner;
        mech.source = origin;
        if (origin_flag >= 0) mech.herald_checks.push_back(origin_flag);
        if (conv.p_x + conv.p_y > 0.0) {
          mech.x_side = true;
          mech.prob = survive * (conv.p_x + conv.p_y);
          out.push_back(mech);
        }
        if (conv.p_z + conv.p_y > 0.0) {
          mech.x_side = false;
          mech.prob = survive * (conv.p_z + conv.p_y);
          out.push_back(mech);
        }
        break;
      }
      default: break;
    }
  }
}

inline std::vector<FaultMechanism> enumerate_mechanisms(const Circuit& circuit) {
  std::vector<FaultMechanism> out;
  for (int idx = 0; idx < static_cast<int>(circuit.instructions.size()); ++idx) {
    const Instruction& in = circuit.instructions[static_cast<std::size_t>(idx)];
    switch (in.kind) {
      case OpKind::NoiseSite: {
        if (in.px + in.py > 0.0)
          out.push_back({false, true, in.px + in.py, idx, in.a, idx, {}});
        if (in.pz + in.py > 0.0)
          out.push_back({false, false, in.pz + in.py, idx, in.a, idx, {}});
        if (in.e > 0.0) walk_mark_chain(circuit, idx, in.a, in.e, -1, out);
        break;
      }
      case OpKind::ErasureCheck: {
        if (in.f_pos <= 0.0) break;
        if (in.reset == ResetMode::OneWay) {
          FaultMechanism mech;
          mech.prob = in.f_pos * 0.5;
          mech.instr_index = idx;
          mech.qubit = in.a;
          mech.source = idx;
          mech.herald_checks.push_back(in.check_id);
          if (in.conversion == ConversionMode::Mixed) {
            mech.x_side = true;
            out.push_back(mech);
          }
          mech.x_side = false;
          out.push_back(mech);
        } else {
          walk_mark_chain(circuit, idx, in.a, in.f_pos, in.check_id, out);
        }
        break;
      }
      case OpKind::MeasureFlip: {
        if (in.flip_prob <= 0.0) break;
        for (int j = idx + 1; j < static_cast<int>(circuit.instructions.size()); ++j) {
          const Instruction& later = circuit.instructions[static_cast<std::size_t>(j)];
          if (later.kind == OpKind::Reset && later.a == in.a) break;
          if (later.kind == OpKind::MeasureZ && later.a == in.a) {
            out.push_back({true, false, in.flip_prob, j, in.a, idx, {}});
            break;
          }
        }
        break;
      }
      default: break;
    }
  }
  return out;
}

}  // namespace detail

// Builds the CSS pair of matching graphs by propagating every elementary
// fault mechanism through the circuit. Parallel edges with equal endpoints
// and observable mask merge by XOR convolution p1(1-p2) + p2(1-p1); a
// mechanism firing three or more detectors on one side is a hypergraph and is
// rejected.
inline GraphPair build_decoding_graphs(const Circuit& circuit) {
  GraphPair pair;
  // Partition detectors by stabilizer type: Z-type stabilizers catch
  // X-component faults and belong to the X-side graph.
  pair.x.detector_to_vertex.assign(static_cast<std::size_t>(circuit.num_detectors), -1);
  pair.z.detector_to_vertex.assign(static_cast<std::size_t>(circuit.num_detectors), -1);
  for (int d = 0; d < circuit.num_detectors; ++d) {
    const bool x_type_stab = circuit.detector_meta[static_cast<std::size_t>(d)].x_type;
    DecodingGraph& g = x_type_stab ? pair.z : pair.x;
    g.detector_to_vertex[static_cast<std::size_t>(d)] = g.num_vertices++;
    g.vertex_to_detector.push_back(d);
  }
  pair.x.check_to_edges.assign(static_cast<std::size_t>(circuit.num_checks), {});
  pair.z.check_to_edges.assign(static_cast<std::size_t>(circuit.num_checks), {});

  const std::vector<detail::FaultMechanism> mechanisms = detail::enumerate_mechanisms(circuit);
  FrameSampler sampler(circuit);

  // Merge key: (u, v, obs_mask) per graph.
  std::map<std::tuple<int, int, uint32_t>, int> edge_index[2];

  for (const auto& mech : mechanisms) {
    ShotRecord response;
    if (mech.is_meas_flip)
      response = sampler.propagate({}, {{mech.instr_index}});
    else
      response = sampler.propagate(
          {{mech.instr_index, mech.qubit, mech.x_side ? Pauli::X : Pauli::Z}});

    uint32_t obs_mask = 0;
    for (int o = 0; o < circuit.num_observables; ++o)
      if (response.observables.get(static_cast<std::size_t>(o))) obs_mask |= 1u << o;

    // Locate the fired detectors; they must live in a single graph.
    int fired[2];
    int num_fired = 0;
    bool fired_x_graph = mech.x_side;
    bool any = false;
    for (int d = 0; d < circuit.num_detectors; ++d) {
      if (!response.detectors.get(static_cast<std::size_t>(d))) continue;
      const bool in_x = pair.x.detector_to_vertex[static_cast<std::size_t>(d)] >= 0;
      if (!any) {
        fired_x_graph = in_x;
        any = true;
      } else if (in_x != fired_x_graph) {
        throw HypergraphError("fault mechanism spans both CSS graphs");
      }
      if (num_fired == 2) throw HypergraphError("fault mechanism flips three or more detectors");
      fired[num_fired++] = d;
    }

    DecodingGraph& g = fired_x_graph ? pair.x : pair.z;
    if (num_fired == 0) {
      if (obs_mask != 0) {
        // Undecodable fault: herald-less observable flip.
        DecodingGraph& side = mech.x_side || mech.is_meas_flip ? pair.x : pair.z;
        side.invisible_obs_prob = side.invisible_obs_prob * (1.0 - mech.prob) +
                                  mech.prob * (1.0 - side.invisible_obs_prob);
      }
      continue;
    }

    int u = g.detector_to_vertex[static_cast<std::size_t>(fired[0])];
    int v = num_fired == 2 ? g.detector_to_vertex[static_cast<std::size_t>(fired[1])]
                           : kBoundary;
    if (num_fired == 2 && v < u) std::swap(u, v);

    auto& index = edge_index[fired_x_graph ? 0 : 1];
    const auto key = std::make_tuple(u, v, obs_mask);
    auto it = index.find(key);
    int eid;
    if (it == index.end()) {
      DecodingEdge edge;
      edge.u = u;
      edge.v = v;
      edge.obs_mask = obs_mask;
      edge.p = mech.prob;
      g.edges.push_back(edge);
      eid = static_cast<int>(g.edges.size()) - 1;
      index.emplace(key, eid);
    } else {
      eid = it->second;
      double& p = g.edges[static_cast<std::size_t>(eid)].p;
      p = p * (1.0 - mech.prob) + mech.prob * (1.0 - p);
    }
    g.edges[static_cast<std::size_t>(eid)].sources.push_back(mech.source);
    for (int check : mech.herald_checks) {
      auto& list = g.check_to_edges[static_cast<std::size_t>(check)];
      if (list.empty() || list.back() != eid) list.push_back(eid);
    }
  }

  for (DecodingGraph* g : {&pair.x, &pair.z}) {
    for (auto& edge : g->edges) edge.weight = edge_weight_from_p(edge.p);
    for (auto& list : g->check_to_edges) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    g->rebuild_incidence();
  }
  return pair;
}

// Per-shot erased edge sets, one per graph, from the shot's heralded flags.
inline std::pair<std::vector<int>, std::vector<int>> erased_edges_from_flags(
    const GraphPair& graphs, const std::vector<int>& flags) {
  std::pair<std::vector<int>, std::vector<int>> out;
  for (int flag : flags) {
    for (int e : graphs.x.check_to_edges[static_cast<std::size_t>(flag)])
      out.first.push_back(e);
    for (int e : graphs.z.check_to_edges[static_cast<std::size_t>(flag)])
      out.second.push_back(e);
  }
  for (auto* v : {&out.first, &out.second}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return out;
}

// Graph-local syndrome from the global detector bits.
inline BitVec graph_syndrome(const DecodingGraph& graph, const BitVec& detectors) {
  BitVec syndrome(static_cast<std::size_t>(graph.num_vertices));
  for (int v = 0; v < graph.num_vertices; ++v)
    if (detectors.get(static_cast<std::size_t>(graph.vertex_to_detector[static_cast<std::size_t>(v)])))
      syndrome.set(static_cast<std::size_t>(v), true);
  return syndrome;
}

}  // namespace erasim
