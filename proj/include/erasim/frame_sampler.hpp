#pragma once

#include <cstdint>
#include <vector>

#include "erasim/circuit.hpp"
#include "erasim/pauli.hpp"
#include "erasim/rng.hpp"

namespace erasim {

// Pauli-frame simulation: track the X/Z frame relative to a noiseless
// reference execution. Erased qubits carry a mark; conversion happens at
// erasure checks (flagged with probability 1-f_neg, converted either way so a
// leaked qubit is re-randomized at every check it survives). A marked qubit
// reads out garbage: its measurement outcome is a fair coin.
//
// Reset semantics on a flagged-but-clean qubit: one-way pulses convert on the
// spot; unitary pulses swap the qubit out of the computational subspace, so
// the mark is set and conversion happens at a later check.
//
// One sampler instance owns its scratch buffers; use one instance per worker.
class FrameSampler {
 public:
  // Explicit fault, applied just before the instruction at `instr_index`.
  struct Injection {
    int instr_index = 0;
    int qubit = 0;
    Pauli pauli = Pauli::I;
  };
  // Classical flip of the measurement performed at `instr_index`.
  struct MeasInjection {
    int instr_index = 0;
  };

  explicit FrameSampler(Circuit&&) = delete;  // sampler only borrows the circuit

  explicit FrameSampler(const Circuit& circuit) : circuit_(&circuit) {
    xf_.resize(static_cast<std::size_t>(circuit.num_qubits));
    zf_.resize(static_cast<std::size_t>(circuit.num_qubits));
    marked_.resize(static_cast<std::size_t>(circuit.num_qubits));
    pending_flip_.resize(static_cast<std::size_t>(circuit.num_qubits));
    record_.resize(static_cast<std::size_t>(circuit.num_measurements));
    forced_.assign(static_cast<std::size_t>(circuit.num_checks), 0);
    for (int id : circuit.forced_checks)
      if (id >= 0 && id < circuit.num_checks) forced_[static_cast<std::size_t>(id)] = 1;
  }

  ShotRecord sample(uint64_t seed, uint64_t shot_index) {
    ShotRng rng(seed, shot_index);
    return run(&rng, nullptr, nullptr);
  }

  // Deterministic propagation of explicit faults (noise sites and checks are
  // inert). Injections must be sorted by instr_index.
  ShotRecord propagate(const std::vector<Injection>& faults,
                       const std::vector<MeasInjection>& meas_faults = {}) {
    return run(nullptr, &faults, &meas_faults);
  }

 private:
  void convert(int q, ConversionMode mode, ShotRng& rng) {
    if (mode == ConversionMode::Mixed) {
      xf_[static_cast<std::size_t>(q)] ^= rng.bit() ? 1 : 0;
      zf_[static_cast<std::size_t>(q)] ^= rng.bit() ? 1 : 0;
    } else {
      zf_[static_cast<std::size_t>(q)] ^= rng.bit() ? 1 : 0;
    }
  }

  ShotRecord run(ShotRng* rng, const std::vector<Injection>* faults,
                 const std::vector<MeasInjection>* meas_faults) {
    const Circuit& c = *circuit_;
    std::fill(xf_.begin(), xf_.end(), 0);
    std::fill(zf_.begin(), zf_.end(), 0);
    std::fill(marked_.begin(), marked_.end(), 0);
    std::fill(pending_flip_.begin(), pending_flip_.end(), 0);

    ShotRecord shot;
    shot.detectors = BitVec(static_cast<std::size_t>(c.num_detectors));
    shot.observables = BitVec(static_cast<std::size_t>(c.num_observables));

    std::size_t next_fault = 0;
    std::size_t next_meas_fault = 0;
    int meas_cursor = 0;
    int det_cursor = 0;
    int obs_cursor = 0;

    const int num_instr = static_cast<int>(c.instructions.size());
    for (int idx = 0; idx < num_instr; ++idx) {
      if (faults) {
        while (next_fault < faults->size() && (*faults)[next_fault].instr_index == idx) {
          const Injection& f = (*faults)[next_fault];
          const auto q = static_cast<std::size_t>(f.qubit);
          if (f.pauli == Pauli::X || f.pauli == Pauli::Y) xf_[q] ^= 1;
          if (f.pauli == Pauli::Z || f.pauli == Pauli::Y) zf_[q] ^= 1;
          ++next_fault;
        }
      }
      const Instruction& in = c.instructions[idx];
      switch (in.kind) {
        case OpKind::H: {
          const auto q = static_cast<std::size_t>(in.a);
          std::swap(xf_[q], zf_[q]);
          break;
        }
        case OpKind::CX: {
          const auto ctrl = static_cast<std::size_t>(in.a);
          const auto tgt = static_cast<std::size_t>(in.b);
          if (rng && c.cx_leak_corruption && (marked_[ctrl] ^ marked_[tgt])) {
            const int clean = marked_[ctrl] ? in.b : in.a;
            const PauliChannel conv = conversion_channel(c.leak_conversion);
            const double u = rng->uniform();
            if (u < conv.p_x)
              xf_[static_cast<std::size_t>(clean)] ^= 1;
            else if (u < conv.p_x + conv.p_y) {
              xf_[static_cast<std::size_t>(clean)] ^= 1;
              zf_[static_cast<std::size_t>(clean)] ^= 1;
            } else if (u < conv.p_x + conv.p_y + conv.p_z)
              zf_[static_cast<std::size_t>(clean)] ^= 1;
          }
          xf_[tgt] ^= xf_[ctrl];
          zf_[ctrl] ^= zf_[tgt];
          break;
        }
        case OpKind::Reset: {
          const auto q = static_cast<std::size_t>(in.a);
          xf_[q] = 0;
          zf_[q] = 0;
          marked_[q] = 0;
          pending_flip_[q] = 0;
          break;
        }
        case OpKind::MeasureZ: {
          const auto q = static_cast<std::size_t>(in.a);
          uint8_t bit = xf_[q] ^ pending_flip_[q];
          pending_flip_[q] = 0;
          if (rng && marked_[q]) bit ^= rng->bit() ? 1 : 0;
          if (meas_faults) {
            while (next_meas_fault < meas_faults->size() &&
                   (*meas_faults)[next_meas_fault].instr_index < idx)
              ++next_meas_fault;
            if (next_meas_fault < meas_faults->size() &&
                (*meas_faults)[next_meas_fault].instr_index == idx) {
              bit ^= 1;
              ++next_meas_fault;
            }
          }
          record_[static_cast<std::size_t>(meas_cursor++)] = bit;
          break;
        }
        case OpKind::NoiseSite: {
          if (!rng) break;
          const auto q = static_cast<std::size_t>(in.a);
          const double u = rng->uniform();
          if (u < in.e) {
            marked_[q] = 1;
          } else if (u < in.e + in.px) {
            xf_[q] ^= 1;
          } else if (u < in.e + in.px + in.py) {
            xf_[q] ^= 1;
            zf_[q] ^= 1;
          } else if (u < in.e + in.px + in.py + in.pz) {
            zf_[q] ^= 1;
          }
          break;
        }
        case OpKind::ErasureCheck: {
          if (!rng) break;
          const auto q = static_cast<std::size_t>(in.a);
          if (forced_[static_cast<std::size_t>(in.check_id)]) marked_[q] = 1;
          if (marked_[q]) {
            const bool heralded = rng->uniform() < 1.0 - in.f_neg;
            convert(in.a, in.conversion, *rng);
            if (heralded) {
              shot.flags.push_back(in.check_id);
              marked_[q] = 0;
            }
          } else if (in.f_pos > 0.0 && rng->uniform() < in.f_pos) {
            shot.flags.push_back(in.check_id);
            if (in.reset == ResetMode::OneWay)
              convert(in.a, in.conversion, *rng);
            else
              marked_[q] = 1;
          }
          break;
        }
        case OpKind::MeasureFlip: {
          if (!rng) break;
          if (rng->bernoulli(in.flip_prob)) pending_flip_[static_cast<std::size_t>(in.a)] ^= 1;
          break;
        }
        case OpKind::Detector: {
          uint8_t bit = 0;
          for (int m : in.meas) bit ^= record_[static_cast<std::size_t>(m)];
          if (bit) shot.detectors.set(static_cast<std::size_t>(det_cursor), true);
          ++det_cursor;
          break;
        }
        case OpKind::Observable: {
          uint8_t bit = 0;
          for (int m : in.meas) bit ^= record_[static_cast<std::size_t>(m)];
          if (bit) shot.observables.set(static_cast<std::size_t>(obs_cursor), true);
          ++obs_cursor;
          break;
        }
      }
    }
    return shot;
  }

  const Circuit* circuit_;
  std::vector<uint8_t> xf_, zf_, marked_, pending_flip_, record_, forced_;
};

// Convenience wrapper matching the sampling contract: deterministic for a
// fixed (circuit, seed), independent of how shots are batched.
inline std::vector<ShotRecord> sample_shots(const Circuit& circuit, int n_shots, uint64_t seed) {
  if (n_shots < 1) throw std::invalid_argument("sample_shots: n_shots >= 1");
  FrameSampler sampler(circuit);
  std::vector<ShotRecord> shots;
  shots.reserve(static_cast<std::size_t>(n_shots));
  for (int i = 0; i < n_shots; ++i)
    shots.push_back(sampler.sample(seed, static_cast<uint64_t>(i)));
  return shots;
}

}  // namespace erasim
