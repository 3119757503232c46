#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

#include "erasim/bitvec.hpp"

namespace erasim {

// One-letter Pauli on a single qubit. Ordering matters: it is the tie-break
// order used by the maximum-likelihood oracle (I before X before Z before Y).
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Z: return 'Z';
    case Pauli::Y: return 'Y';
  }
  return '?';
}

// n-qubit Pauli operator in symplectic form: x bit and z bit per qubit,
// overall phase dropped. Y is the position where both bits are set.
struct PauliOp {
  std::size_t n = 0;
  BitVec x;
  BitVec z;

  PauliOp() = default;
  explicit PauliOp(std::size_t num_qubits) : n(num_qubits), x(num_qubits), z(num_qubits) {}

  static PauliOp single(std::size_t n, std::size_t qubit, Pauli p) {
    PauliOp op(n);
    op.set(qubit, p);
    return op;
  }

  Pauli at(std::size_t qubit) const {
    const int code = (x.get(qubit) ? 1 : 0) | (z.get(qubit) ? 2 : 0);
    switch (code) {
      case 0: return Pauli::I;
      case 1: return Pauli::X;
      case 2: return Pauli::Z;
      default: return Pauli::Y;
    }
  }

  void set(std::size_t qubit, Pauli p) {
    x.set(qubit, p == Pauli::X || p == Pauli::Y);
    z.set(qubit, p == Pauli::Z || p == Pauli::Y);
  }

  // Number of qubits acted on non-trivially.
  std::size_t weight() const { return BitVec::or_popcount(x, z); }

  bool is_identity() const { return !x.any() && !z.any(); }

  bool operator==(const PauliOp& other) const {
    return n == other.n && x == other.x && z == other.z;
  }

  // Phase-free product: symplectic XOR.
  PauliOp& operator*=(const PauliOp& other) {
    if (n != other.n) throw std::invalid_argument("PauliOp product: size mismatch");
    x ^= other.x;
    z ^= other.z;
    return *this;
  }

  friend PauliOp operator*(PauliOp a, const PauliOp& b) {
    a *= b;
    return a;
  }

  // e.g. "X1 X3" (1-based qubit indices, identity positions omitted);
  // identity renders as "I".
  std::string to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t q = 0; q < n; ++q) {
      const Pauli p = at(q);
      if (p == Pauli::I) continue;
      if (!first) out << ' ';
      out << pauli_char(p) << (q + 1);
      first = false;
    }
    if (first) out << 'I';
    return out.str();
  }
};

// True iff the symplectic inner product vanishes.
inline bool pauli_commutes(const PauliOp& a, const PauliOp& b) {
  if (a.n != b.n) throw std::invalid_argument("pauli_commutes: size mismatch");
  return !(BitVec::and_parity(a.x, b.z) ^ BitVec::and_parity(a.z, b.x));
}

}  // namespace erasim
