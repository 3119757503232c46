#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "erasim/dual_rail.hpp"
#include "erasim/pauli.hpp"
#include "erasim/stabilizer_code.hpp"

namespace erasim {

// Coset probabilities in tie-break order I, X, Z, Y.
struct MlResult {
  LogicalClass predicted = LogicalClass::I;
  std::array<double, 4> coset_prob{0.0, 0.0, 0.0, 0.0};
};

namespace detail {

// Any Pauli with the requested syndrome, found by GF(2) elimination over the
// symplectic system; n <= 16 keeps rows in single words (x bits low, z high).
inline PauliOp syndrome_representative(const StabilizerCode& code, const BitVec& syndrome) {
  const int n = static_cast<int>(code.n);
  const int cols = 2 * n;
  const int rows = static_cast<int>(code.num_stabilizers());
  std::vector<uint64_t> row(static_cast<std::size_t>(rows), 0);
  std::vector<uint8_t> rhs(static_cast<std::size_t>(rows), 0);
  for (int i = 0; i < rows; ++i) {
    const PauliOp& s = code.stabilizers[static_cast<std::size_t>(i)].op;
    for (int q = 0; q < n; ++q) {
      // err.x[q] anticommutes with the stabilizer's Z part and vice versa.
      if (s.z.get(static_cast<std::size_t>(q))) row[static_cast<std::size_t>(i)] |= uint64_t{1} << q;
      if (s.x.get(static_cast<std::size_t>(q)))
        row[static_cast<std::size_t>(i)] |= uint64_t{1} << (n + q);
    }
    rhs[static_cast<std::size_t>(i)] = syndrome.get(static_cast<std::size_t>(i)) ? 1 : 0;
  }

  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i)
      if ((row[static_cast<std::size_t>(i)] >> c) & 1) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(row[static_cast<std::size_t>(r)], row[static_cast<std::size_t>(pivot)]);
    std::swap(rhs[static_cast<std::size_t>(r)], rhs[static_cast<std::size_t>(pivot)]);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      if ((row[static_cast<std::size_t>(i)] >> c) & 1) {
        row[static_cast<std::size_t>(i)] ^= row[static_cast<std::size_t>(r)];
        rhs[static_cast<std::size_t>(i)] ^= rhs[static_cast<std::size_t>(r)];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (rhs[static_cast<std::size_t>(i)])
      throw std::invalid_argument("ml_decode_bruteforce: inconsistent syndrome");

  uint64_t solution = 0;
  for (int i = 0; i < r; ++i)
    if (rhs[static_cast<std::size_t>(i)]) solution |= uint64_t{1} << pivot_col[static_cast<std::size_t>(i)];

  PauliOp rep(code.n);
  for (int q = 0; q < n; ++q) {
    const bool x = (solution >> q) & 1;
    const bool z = (solution >> (n + q)) & 1;
    if (x && z)
      rep.set(static_cast<std::size_t>(q), Pauli::Y);
    else if (x)
      rep.set(static_cast<std::size_t>(q), Pauli::X);
    else if (z)
      rep.set(static_cast<std::size_t>(q), Pauli::Z);
  }
  return rep;
}

}  // namespace detail

// Brute-force maximum-likelihood oracle: sums the prior probability of every
// error consistent with the syndrome over each logical coset (stabilizer
// group times coset representative) and returns the argmax coset, ties broken
// I, then X, then Z, then Y. The prior conditions on the heralded erasure
// set: erased qubits carry the conversion channel, clean qubits an isotropic
// Pauli rate.
inline MlResult ml_decode_bruteforce(const StabilizerCode& code,
                                     const std::vector<double>& pauli_rate,
                                     const std::vector<bool>& erased, const BitVec& syndrome,
                                     ConversionMode conversion = ConversionMode::Mixed) {
  if (code.n > 16) throw std::invalid_argument("ml_decode_bruteforce: n <= 16 only");
  if (pauli_rate.size() != code.n || erased.size() != code.n)
    throw std::invalid_argument("ml_decode_bruteforce: per-qubit prior size mismatch");
  if (syndrome.size() != code.num_stabilizers())
    throw std::invalid_argument("ml_decode_bruteforce: syndrome length mismatch");

  // Per-qubit probability table indexed by Pauli enum (I, X, Z, Y).
  const PauliChannel conv = conversion_channel(conversion);
  std::vector<std::array<double, 4>> table(code.n);
  for (std::size_t q = 0; q < code.n; ++q) {
    if (erased[q]) {
      table[q] = {conv.p_i, conv.p_x, conv.p_z, conv.p_y};
    } else {
      const double p = pauli_rate[q];
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("ml_decode_bruteforce: pauli rate outside [0,1]");
      table[q] = {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
    }
  }

  const PauliOp rep = detail::syndrome_representative(code, syndrome);
  const std::array<PauliOp, 4> coset_shift = {PauliOp(code.n), code.logical_x, code.logical_z,
                                              code.logical_x * code.logical_z};

  const int k = static_cast<int>(code.num_stabilizers());
  if (k > 20) throw std::invalid_argument("ml_decode_bruteforce: stabilizer group too large");

  MlResult result;
  for (int c = 0; c < 4; ++c) {
    PauliOp base = rep * coset_shift[static_cast<std::size_t>(c)];
    double total = 0.0;
    // Gray-code walk over the stabilizer group: one generator flip per step.
    PauliOp current = base;
    uint32_t prev_gray = 0;
    for (uint32_t m = 0;; ++m) {
      double prob = 1.0;
      for (std::size_t q = 0; q < code.n; ++q)
        prob *= table[q][static_cast<std::size_t>(current.at(q))];
      total += prob;
      if (m + 1 >= (uint32_t{1} << k)) break;
      const uint32_t gray = (m + 1) ^ ((m + 1) >> 1);
      const uint32_t changed = gray ^ prev_gray;
      int bit = 0;
      while (!((changed >> bit) & 1)) ++bit;
      current *= code.stabilizers[static_cast<std::size_t>(bit)].op;
      prev_gray = gray;
    }
    result.coset_prob[static_cast<std::size_t>(c)] = total;
  }

  static const LogicalClass order[4] = {LogicalClass::I, LogicalClass::X, LogicalClass::Z,
                                        LogicalClass::Y};
  int best = 0;
  for (int c = 1; c < 4; ++c)
    if (result.coset_prob[static_cast<std::size_t>(c)] >
        result.coset_prob[static_cast<std::size_t>(best)])
      best = c;
  result.predicted = order[best];
  return result;
}

}  // namespace erasim
