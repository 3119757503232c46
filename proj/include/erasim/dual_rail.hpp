#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "erasim/channel.hpp"

namespace erasim {

// What the reset after a heralded erasure leaves behind. Mixed reinitializes
// into the maximally mixed in-subspace state (uniform Pauli); Biased restores
// the basis state the qubit decayed from (pure dephasing residual).
enum class ConversionMode { Mixed, Biased };

// One-way pulses send any state into the computational subspace; unitary
// pulses swap the subspaces and so kick falsely flagged qubits out.
enum class ResetMode { OneWay, Unitary };

inline const char* to_string(ConversionMode m) {
  return m == ConversionMode::Mixed ? "mixed" : "biased";
}
inline const char* to_string(ResetMode m) {
  return m == ResetMode::OneWay ? "oneway" : "unitary";
}

struct DualRailParams {
  double gamma = 0.0;  // per-step excitation-decay probability
  double phi = 0.0;    // per-step relative dephasing probability
  double f_pos = 0.0;  // erasure-check false-positive probability
  double f_neg = 0.0;  // erasure-check false-negative probability
  ConversionMode conversion = ConversionMode::Mixed;
  ResetMode reset = ResetMode::OneWay;

  void validate() const {
    for (double p : {gamma, phi, f_pos, f_neg})
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("DualRailParams: probabilities must be in [0,1]");
  }

  // gamma from hardware units; the step duration is a configuration choice.
  static double gamma_from_t1(double t1, double dt) {
    if (t1 <= 0.0 || dt < 0.0)
      throw std::invalid_argument("gamma_from_t1: need t1 > 0 and dt >= 0");
    return 1.0 - std::exp(-dt / t1);
  }
};

// Per-step effective noise handed to the outer code.
struct EffectiveChannel {
  double e = 0.0;       // heralded-erasure probability
  PauliChannel pauli;   // residual channel conditional on no herald
  double leak = 0.0;    // unheralded out-of-subspace probability
};

inline PauliChannel conversion_channel(ConversionMode mode) {
  if (mode == ConversionMode::Mixed) return {0.25, 0.25, 0.25, 0.25};
  return {0.5, 0.0, 0.0, 0.5};
}

// One dual-rail time step: per-rail damping confined to the single-excitation
// subspace (decay to |00> with probability gamma, independent of the logical
// state), relative dephasing, then an erasure check.
//
// Herald accounting: a true erasure is flagged with probability 1-f_neg; a
// clean qubit is falsely flagged with probability f_pos. Under one-way reset
// the false positive is converted on the spot; under unitary reset it is
// swapped out of the subspace and stays leaked until a later check, but the
// flag is raised either way, so both reset modes share the same herald rate.
// Only misses (gamma * f_neg) count as leak.
inline EffectiveChannel dual_rail_step(const DualRailParams& params) {
  params.validate();
  EffectiveChannel out;
  out.e = params.gamma * (1.0 - params.f_neg) + (1.0 - params.gamma) * params.f_pos;
  out.leak = params.gamma * params.f_neg;
  out.pauli = {1.0 - params.phi, 0.0, 0.0, params.phi};
  return out;
}

}  // namespace erasim
