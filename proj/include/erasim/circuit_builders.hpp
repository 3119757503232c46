#pragma once

#include <stdexcept>
#include <vector>

#include "erasim/circuit.hpp"
#include "erasim/dual_rail.hpp"
#include "erasim/stabilizer_code.hpp"

namespace erasim {

struct CheckParams {
  double f_pos = 0.0;
  double f_neg = 0.0;
  ConversionMode conversion = ConversionMode::Mixed;
  ResetMode reset = ResetMode::OneWay;
};

namespace detail {

struct ExtractionNoise {
  bool noisy = false;        // NoiseSite after every gate
  double e = 0.0;            // per-gate erasure (decay) rate
  double pz = 0.0;           // per-gate dephasing rate
  double measure_flip = 0.0; // classical flip on ancilla readout
  bool checks_every_gate = false;
  bool check_wall_end = false;  // one wall before the measurement layer
  CheckParams check;
};

inline int ancilla_index(const StabilizerCode& code, int stab) {
  return static_cast<int>(code.n) + stab;
}

inline void maybe_noise(Circuit& c, const ExtractionNoise& opts, int q) {
  if (opts.noisy && (opts.e > 0.0 || opts.pz > 0.0)) c.append_noise(q, opts.e, 0.0, 0.0, opts.pz);
}

inline void check_wall(Circuit& c, const CheckParams& p, const std::vector<int>& qubits) {
  for (int q : qubits) c.append_check(q, p.f_pos, p.f_neg, p.conversion, p.reset);
}

// One full syndrome-extraction round; returns the readout measurement index
// per stabilizer. Rotated codes run the standard four-step CX dance; the
// four-qubit example code extracts one stabilizer at a time so that the
// weight-4 Z block reproduces the reference EC grid (a check wall over the
// block's five qubits after each CX layer when checks_every_gate is set).
inline std::vector<int> append_extraction_round(Circuit& circuit, const StabilizerCode& code,
                                                const ExtractionNoise& opts) {
  const int num_stabs = static_cast<int>(code.num_stabilizers());
  std::vector<int> readout(static_cast<std::size_t>(num_stabs), -1);

  std::vector<int> all_qubits;
  for (int q = 0; q < circuit.num_qubits; ++q) all_qubits.push_back(q);

  if (code.kind == CodeKind::Rotated) {
    for (int i = 0; i < num_stabs; ++i) {
      circuit.append_reset(ancilla_index(code, i));
      maybe_noise(circuit, opts, ancilla_index(code, i));
    }
    for (int i = 0; i < num_stabs; ++i)
      if (code.stabilizers[static_cast<std::size_t>(i)].x_type) {
        circuit.append_h(ancilla_index(code, i));
        maybe_noise(circuit, opts, ancilla_index(code, i));
      }
    for (int step = 0; step < 4; ++step) {
      for (int i = 0; i < num_stabs; ++i) {
        const auto& stab = code.stabilizers[static_cast<std::size_t>(i)];
        const int data = stab.ladder[static_cast<std::size_t>(step)];
        if (data < 0) continue;
        const int anc = ancilla_index(code, i);
        if (stab.x_type)
          circuit.append_cx(anc, data);
        else
          circuit.append_cx(data, anc);
        maybe_noise(circuit, opts, anc);
        maybe_noise(circuit, opts, data);
      }
      if (opts.checks_every_gate) check_wall(circuit, opts.check, all_qubits);
    }
    for (int i = 0; i < num_stabs; ++i)
      if (code.stabilizers[static_cast<std::size_t>(i)].x_type) {
        circuit.append_h(ancilla_index(code, i));
        maybe_noise(circuit, opts, ancilla_index(code, i));
      }
    if (opts.check_wall_end) check_wall(circuit, opts.check, all_qubits);
    for (int i = 0; i < num_stabs; ++i) {
      const int anc = ancilla_index(code, i);
      if (opts.measure_flip > 0.0) circuit.append_measure_flip(anc, opts.measure_flip);
      readout[static_cast<std::size_t>(i)] = circuit.append_measure_z(anc);
    }
    return readout;
  }

  // Sequential per-stabilizer blocks (example code).
  for (int i = 0; i < num_stabs; ++i) {
    const auto& stab = code.stabilizers[static_cast<std::size_t>(i)];
    const int anc = ancilla_index(code, i);
    std::vector<int> block_qubits;
    for (std::size_t q = 0; q < code.n; ++q) block_qubits.push_back(static_cast<int>(q));
    block_qubits.push_back(anc);

    circuit.append_reset(anc);
    maybe_noise(circuit, opts, anc);
    if (stab.x_type) {
      circuit.append_h(anc);
      maybe_noise(circuit, opts, anc);
    }
    for (int data : stab.ladder) {
      if (stab.x_type)
        circuit.append_cx(anc, data);
      else
        circuit.append_cx(data, anc);
      maybe_noise(circuit, opts, anc);
      maybe_noise(circuit, opts, data);
      if (opts.checks_every_gate) check_wall(circuit, opts.check, block_qubits);
    }
    if (stab.x_type) {
      circuit.append_h(anc);
      maybe_noise(circuit, opts, anc);
    }
    if (opts.measure_flip > 0.0) circuit.append_measure_flip(anc, opts.measure_flip);
    readout[static_cast<std::size_t>(i)] = circuit.append_measure_z(anc);
  }
  if (opts.check_wall_end) {
    std::vector<int> data_qubits;
    for (std::size_t q = 0; q < code.n; ++q) data_qubits.push_back(static_cast<int>(q));
    check_wall(circuit, opts.check, data_qubits);
  }
  return readout;
}

inline void append_round_detectors(Circuit& circuit, const StabilizerCode& code,
                                   const std::vector<int>& current,
                                   const std::vector<int>& previous, int round) {
  for (std::size_t i = 0; i < current.size(); ++i)
    circuit.append_detector({current[i], previous[i]},
                            {static_cast<int>(i), code.stabilizers[i].x_type, round});
}

// Final transversal Z-basis readout of the data qubits; the observable is the
// logical-Z parity.
inline void append_data_readout(Circuit& circuit, const StabilizerCode& code) {
  std::vector<int> readout(code.n, -1);
  for (std::size_t q = 0; q < code.n; ++q)
    readout[q] = circuit.append_measure_z(static_cast<int>(q));
  std::vector<int> obs;
  for (std::size_t q = 0; q < code.n; ++q)
    if (code.logical_z.at(q) != Pauli::I) obs.push_back(readout[q]);
  circuit.append_observable(std::move(obs));
}

inline Circuit fresh_circuit(const StabilizerCode& code) {
  Circuit circuit;
  circuit.num_qubits = static_cast<int>(code.n + code.num_stabilizers());
  return circuit;
}

}  // namespace detail

// Idealized limit: perfect preparation round, one noise site and one erasure
// check per data qubit, one perfect measurement of every stabilizer (one
// detector each), final data readout carrying the logical observable.
inline Circuit build_code_capacity_circuit(const StabilizerCode& code, double e, double p,
                                           const CheckParams& check = {}) {
  if (!(e >= 0.0 && e <= 1.0 && p >= 0.0 && p <= 1.0 && e + p <= 1.0 + 1e-12))
    throw std::invalid_argument("build_code_capacity_circuit: need e, p >= 0 and e + p <= 1");
  Circuit circuit = detail::fresh_circuit(code);
  detail::ExtractionNoise quiet;
  const std::vector<int> prep = detail::append_extraction_round(circuit, code, quiet);
  for (std::size_t q = 0; q < code.n; ++q)
    circuit.append_noise(static_cast<int>(q), e, p / 3.0, p / 3.0, p / 3.0);
  for (std::size_t q = 0; q < code.n; ++q)
    circuit.append_check(static_cast<int>(q), check.f_pos, check.f_neg, check.conversion,
                         check.reset);
  const std::vector<int> final_meas = detail::append_extraction_round(circuit, code, quiet);
  detail::append_round_detectors(circuit, code, final_meas, prep, 1);
  detail::append_data_readout(circuit, code);
  return circuit;
}

// Phenomenological model: per round, data noise sites and erasure checks,
// then an ideal extraction whose ancilla readouts flip with probability q.
// Detectors compare consecutive rounds; the first noisy round compares to the
// perfect preparation round, and a final perfect round closes the record.
inline Circuit build_phenomenological_circuit(const StabilizerCode& code, int rounds, double e,
                                              double p, double q,
                                              const CheckParams& check = {}) {
  if (rounds < 1) throw std::invalid_argument("build_phenomenological_circuit: rounds >= 1");
  if (!(e >= 0.0 && e <= 1.0 && p >= 0.0 && p <= 1.0 && e + p <= 1.0 + 1e-12))
    throw std::invalid_argument("build_phenomenological_circuit: need e, p >= 0 and e + p <= 1");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("build_phenomenological_circuit: q outside [0,1]");

  Circuit circuit = detail::fresh_circuit(code);
  detail::ExtractionNoise quiet;
  std::vector<int> previous = detail::append_extraction_round(circuit, code, quiet);
  for (int r = 1; r <= rounds; ++r) {
    for (std::size_t dq = 0; dq < code.n; ++dq)
      circuit.append_noise(static_cast<int>(dq), e, p / 3.0, p / 3.0, p / 3.0);
    for (std::size_t dq = 0; dq < code.n; ++dq)
      circuit.append_check(static_cast<int>(dq), check.f_pos, check.f_neg, check.conversion,
                           check.reset);
    detail::ExtractionNoise flips;
    flips.measure_flip = q;
    const std::vector<int> current = detail::append_extraction_round(circuit, code, flips);
    detail::append_round_detectors(circuit, code, current, previous, r);
    previous = current;
  }
  const std::vector<int> final_meas = detail::append_extraction_round(circuit, code, quiet);
  detail::append_round_detectors(circuit, code, final_meas, previous, rounds + 1);
  detail::append_data_readout(circuit, code);
  return circuit;
}

// Circuit-level memory experiment: full syndrome-extraction rounds with a
// NoiseSite after every gate (decay rate gamma, dephasing phi) and erasure
// checks placed per the schedule. The preparation and final rounds are ideal.
inline Circuit build_memory_circuit(const StabilizerCode& code, int rounds,
                                    const DualRailParams& dual, const Schedule& schedule) {
  if (rounds < 1) throw std::invalid_argument("build_memory_circuit: rounds >= 1");
  dual.validate();

  Circuit circuit = detail::fresh_circuit(code);
  circuit.leak_conversion = dual.conversion;
  detail::ExtractionNoise quiet;
  std::vector<int> previous = detail::append_extraction_round(circuit, code, quiet);
  for (int r = 1; r <= rounds; ++r) {
    detail::ExtractionNoise opts;
    opts.noisy = true;
    opts.e = dual.gamma;
    opts.pz = dual.phi;
    opts.check = {dual.f_pos, dual.f_neg, dual.conversion, dual.reset};
    switch (schedule.kind) {
      case Schedule::Kind::EveryGate: opts.checks_every_gate = true; break;
      case Schedule::Kind::EveryRound: opts.check_wall_end = true; break;
      case Schedule::Kind::EveryN: opts.check_wall_end = (r % schedule.n) == 0; break;
      case Schedule::Kind::EndOnly: opts.check_wall_end = (r == rounds); break;
    }
    const std::vector<int> current = detail::append_extraction_round(circuit, code, opts);
    detail::append_round_detectors(circuit, code, current, previous, r);
    previous = current;
  }
  const std::vector<int> final_meas = detail::append_extraction_round(circuit, code, quiet);
  detail::append_round_detectors(circuit, code, final_meas, previous, rounds + 1);
  detail::append_data_readout(circuit, code);
  return circuit;
}

}  // namespace erasim
