#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "erasim/circuit.hpp"
#include "erasim/frame_sampler.hpp"
#include "erasim/pauli.hpp"

namespace erasim {

// Aaronson-Gottesman stabilizer tableau over at most 64 qubits (bit-packed
// rows). Random measurement outcomes are forced to zero: detector and
// observable parities are branch-independent, so any valid branch reproduces
// the exact values, which is all the reference oracle needs.
class TableauSim {
 public:
  explicit TableauSim(int n) : n_(n) {
    if (n < 1 || n > 64) throw std::invalid_argument("TableauSim: 1..64 qubits");
    x_.assign(2 * static_cast<std::size_t>(n), 0);
    z_.assign(2 * static_cast<std::size_t>(n), 0);
    r_.assign(2 * static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      x_[static_cast<std::size_t>(i)] = bit(i);                       // destabilizer X_i
      z_[static_cast<std::size_t>(n + i)] = bit(i);                   // stabilizer Z_i
    }
  }

  void h(int q) {
    const uint64_t m = bit(q);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const bool xq = x_[i] & m, zq = z_[i] & m;
      if (xq && zq) r_[i] ^= 1;
      if (xq != zq) {
        x_[i] ^= m;
        z_[i] ^= m;
      }
    }
  }

  void cx(int c, int t) {
    const uint64_t mc = bit(c), mt = bit(t);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const bool xc = x_[i] & mc, zc = z_[i] & mc;
      const bool xt = x_[i] & mt, zt = z_[i] & mt;
      if (xc && zt && (xt == zc)) r_[i] ^= 1;
      if (xc) x_[i] ^= mt;
      if (zt) z_[i] ^= mc;
    }
  }

  // Pauli errors only move stabilizer phases.
  void apply_pauli(int q, Pauli p) {
    const uint64_t m = bit(q);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const bool xq = x_[i] & m, zq = z_[i] & m;
      bool anti = false;
      switch (p) {
        case Pauli::I: break;
        case Pauli::X: anti = zq; break;
        case Pauli::Z: anti = xq; break;
        case Pauli::Y: anti = xq != zq; break;
      }
      if (anti) r_[i] ^= 1;
    }
  }

  // Measure Z_q; random outcomes are forced to 0.
  int measure_z(int q) {
    const uint64_t m = bit(q);
    const std::size_t n = static_cast<std::size_t>(n_);
    std::size_t p = 2 * n;
    for (std::size_t i = n; i < 2 * n; ++i)
      if (x_[i] & m) {
        p = i;
        break;
      }
    if (p < 2 * n) {
      for (std::size_t i = 0; i < 2 * n; ++i)
        if (i != p && (x_[i] & m)) rowsum(i, p);
      x_[p - n] = x_[p];
      z_[p - n] = z_[p];
      r_[p - n] = r_[p];
      x_[p] = 0;
      z_[p] = m;
      r_[p] = 0;  // forced branch
      return 0;
    }
    // Deterministic: accumulate the matching stabilizers into scratch.
    scratch_x_ = 0;
    scratch_z_ = 0;
    scratch_r_ = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (x_[i] & m) rowsum_scratch(i + n);
    return scratch_r_;
  }

  void reset(int q) {
    if (measure_z(q) == 1) apply_pauli(q, Pauli::X);
  }

 private:
  static uint64_t bit(int q) { return uint64_t{1} << q; }

  // Phase contribution of multiplying single-qubit Paulis (x1,z1)*(x2,z2);
  // returns the exponent of i in {-1,0,1}.
  static int phase_g(bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return (z2 ? 1 : 0) - (x2 ? 1 : 0);
    if (x1) return z2 ? (x2 ? 1 : -1) : 0;
    return x2 ? (z2 ? -1 : 1) : 0;
  }

  static int row_phase(uint64_t hx, uint64_t hz, uint64_t ix, uint64_t iz, int n) {
    int total = 0;
    for (int q = 0; q < n; ++q) {
      const uint64_t m = uint64_t{1} << q;
      total += phase_g(ix & m, iz & m, hx & m, hz & m);
    }
    return total;
  }

  // row h <- row i * row h
  void rowsum(std::size_t h, std::size_t i) {
    int total = 2 * (r_[h] + r_[i]) + row_phase(x_[h], z_[h], x_[i], z_[i], n_);
    total %= 4;
    if (total < 0) total += 4;
    r_[h] = static_cast<uint8_t>(total / 2);
    x_[h] ^= x_[i];
    z_[h] ^= z_[i];
  }

  void rowsum_scratch(std::size_t i) {
    int total = 2 * (scratch_r_ + r_[i]) + row_phase(scratch_x_, scratch_z_, x_[i], z_[i], n_);
    total %= 4;
    if (total < 0) total += 4;
    scratch_r_ = static_cast<uint8_t>(total / 2);
    scratch_x_ ^= x_[i];
    scratch_z_ ^= z_[i];
  }

  int n_;
  std::vector<uint64_t> x_, z_;
  std::vector<uint8_t> r_;
  uint64_t scratch_x_ = 0, scratch_z_ = 0;
  uint8_t scratch_r_ = 0;
};

// Full stabilizer-tableau execution of a circuit with an explicit error
// assignment. Noise sites, erasure checks and measure-flips are inert; the
// injected Paulis (applied just before their instruction index) are the only
// faults. Returns exact detector and observable bits.
inline ShotRecord tableau_reference_sim(const Circuit& circuit,
                                        const std::vector<FrameSampler::Injection>& faults,
                                        const std::vector<FrameSampler::MeasInjection>&
                                            meas_faults = {}) {
  TableauSim sim(circuit.num_qubits);
  ShotRecord shot;
  shot.detectors = BitVec(static_cast<std::size_t>(circuit.num_detectors));
  shot.observables = BitVec(static_cast<std::size_t>(circuit.num_observables));
  std::vector<uint8_t> record(static_cast<std::size_t>(circuit.num_measurements), 0);

  std::size_t next_fault = 0;
  std::size_t next_meas_fault = 0;
  int meas_cursor = 0, det_cursor = 0, obs_cursor = 0;
  for (int idx = 0; idx < static_cast<int>(circuit.instructions.size()); ++idx) {
    while (next_fault < faults.size() && faults[next_fault].instr_index == idx) {
      sim.apply_pauli(faults[next_fault].qubit, faults[next_fault].pauli);
      ++next_fault;
    }
    const Instruction& in = circuit.instructions[idx];
    switch (in.kind) {
      case OpKind::H: sim.h(in.a); break;
      case OpKind::CX: sim.cx(in.a, in.b); break;
      case OpKind::Reset: sim.reset(in.a); break;
      case OpKind::MeasureZ: {
        uint8_t bit = static_cast<uint8_t>(sim.measure_z(in.a));
        while (next_meas_fault < meas_faults.size() &&
               meas_faults[next_meas_fault].instr_index < idx)
          ++next_meas_fault;
        if (next_meas_fault < meas_faults.size() &&
            meas_faults[next_meas_fault].instr_index == idx) {
          bit ^= 1;
          ++next_meas_fault;
        }
        record[static_cast<std::size_t>(meas_cursor++)] = bit;
        break;
      }
      case OpKind::NoiseSite:
      case OpKind::ErasureCheck:
      case OpKind::MeasureFlip: break;
      case OpKind::Detector: {
        uint8_t bit = 0;
        for (int m : in.meas) bit ^= record[static_cast<std::size_t>(m)];
        if (bit) shot.detectors.set(static_cast<std::size_t>(det_cursor), true);
        ++det_cursor;
        break;
      }
      case OpKind::Observable: {
        uint8_t bit = 0;
        for (int m : in.meas) bit ^= record[static_cast<std::size_t>(m)];
        if (bit) shot.observables.set(static_cast<std::size_t>(obs_cursor), true);
        ++obs_cursor;
        break;
      }
    }
  }
  return shot;
}

}  // namespace erasim
