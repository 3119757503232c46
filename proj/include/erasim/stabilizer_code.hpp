#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "erasim/bitvec.hpp"
#include "erasim/pauli.hpp"

namespace erasim {

enum class CodeKind { D2Example, Rotated };

// One stabilizer generator plus the metadata circuit builders need: its CSS
// type and the data qubit touched at each CX step of the extraction ladder
// (-1 marks an idle step; weight-2 boundary checks keep their bulk step slots).
struct StabilizerInfo {
  PauliOp op;
  bool x_type = false;
  std::vector<int> ladder;
};

enum class LogicalClass : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char logical_class_char(LogicalClass c) {
  switch (c) {
    case LogicalClass::I: return 'I';
    case LogicalClass::X: return 'X';
    case LogicalClass::Z: return 'Z';
    case LogicalClass::Y: return 'Y';
  }
  return '?';
}

struct StabilizerCode {
  CodeKind kind = CodeKind::Rotated;
  std::size_t n = 0;           // data qubits
  int distance = 0;
  std::vector<StabilizerInfo> stabilizers;
  PauliOp logical_x;
  PauliOp logical_z;

  std::size_t num_stabilizers() const { return stabilizers.size(); }

  // One line per stabilizer ("X1 X3", 1-based), then the logicals.
  std::string to_text() const {
    std::ostringstream out;
    out << "# stabilizers\n";
    for (const auto& s : stabilizers) out << s.op.to_string() << '\n';
    out << "# logical_x\n" << logical_x.to_string() << '\n';
    out << "# logical_z\n" << logical_z.to_string() << '\n';
    return out.str();
  }
};

// Bit i set iff `error` anticommutes with stabilizer i.
inline BitVec syndrome_of(const StabilizerCode& code, const PauliOp& error) {
  if (error.n != code.n) throw std::invalid_argument("syndrome_of: size mismatch");
  BitVec syndrome(code.stabilizers.size());
  for (std::size_t i = 0; i < code.stabilizers.size(); ++i)
    if (!pauli_commutes(code.stabilizers[i].op, error)) syndrome.set(i, true);
  return syndrome;
}

// Coset of a zero-syndrome Pauli: anticommuting with logical_z signals an X
// component, anticommuting with logical_x signals a Z component.
inline LogicalClass logical_class(const StabilizerCode& code, const PauliOp& pauli) {
  if (syndrome_of(code, pauli).any())
    throw std::invalid_argument("logical_class: operator has nonzero syndrome");
  const bool has_x = !pauli_commutes(pauli, code.logical_z);
  const bool has_z = !pauli_commutes(pauli, code.logical_x);
  if (has_x && has_z) return LogicalClass::Y;
  if (has_x) return LogicalClass::X;
  if (has_z) return LogicalClass::Z;
  return LogicalClass::I;
}

// The four-data-qubit surface code of the worked example: a1 = X1X3,
// a2 = Z1Z2Z3Z4, a3 = X2X4, one logical qubit, distance 2. Stabilizer order
// follows the ancilla labels so syndromes read (a1 a2 a3).
inline StabilizerCode build_d2_surface_code() {
  StabilizerCode code;
  code.kind = CodeKind::D2Example;
  code.n = 4;
  code.distance = 2;

  auto make = [&](std::initializer_list<int> qubits, Pauli p, bool x_type) {
    StabilizerInfo info;
    info.op = PauliOp(4);
    for (int q : qubits) {
      info.op.set(static_cast<std::size_t>(q), p);
      info.ladder.push_back(q);
    }
    info.x_type = x_type;
    return info;
  };

  code.stabilizers.push_back(make({0, 2}, Pauli::X, true));
  code.stabilizers.push_back(make({0, 1, 2, 3}, Pauli::Z, false));
  code.stabilizers.push_back(make({1, 3}, Pauli::X, true));

  code.logical_x = PauliOp(4);
  code.logical_x.set(0, Pauli::X);
  code.logical_x.set(1, Pauli::X);
  code.logical_z = PauliOp(4);
  code.logical_z.set(0, Pauli::Z);
  code.logical_z.set(2, Pauli::Z);
  return code;
}

// Rotated surface code of odd distance d on a d x d data grid (row-major
// indexing). Plaquette centers live at (pr, pc) with -1 <= pr, pc <= d-1;
// a center is X-type iff pr+pc is even. Weight-2 checks sit on the top and
// bottom rows (X-type) and the left and right columns (Z-type). Stabilizers
// are ordered X-type first, then Z-type, each row-major over centers.
inline StabilizerCode build_rotated_surface_code(int d) {
  if (d < 3 || d % 2 == 0)
    throw std::invalid_argument("build_rotated_surface_code: d must be odd and >= 3");

  const int n = d * d;
  StabilizerCode code;
  code.kind = CodeKind::Rotated;
  code.n = static_cast<std::size_t>(n);
  code.distance = d;

  auto data_index = [d](int r, int c) -> int {
    if (r < 0 || r >= d || c < 0 || c >= d) return -1;
    return r * d + c;
  };

  std::vector<StabilizerInfo> x_checks;
  std::vector<StabilizerInfo> z_checks;

  for (int pr = -1; pr < d; ++pr) {
    for (int pc = -1; pc < d; ++pc) {
      const bool x_type = ((pr + pc) % 2 + 2) % 2 == 0;
      const bool interior = pr >= 0 && pr <= d - 2 && pc >= 0 && pc <= d - 2;
      bool active = interior;
      if (!interior) {
        const bool top = pr == -1 && pc >= 0 && pc <= d - 2;
        const bool bottom = pr == d - 1 && pc >= 0 && pc <= d - 2;
        const bool left = pc == -1 && pr >= 0 && pr <= d - 2;
        const bool right = pc == d - 1 && pr >= 0 && pr <= d - 2;
        active = ((top || bottom) && x_type) || ((left || right) && !x_type);
      }
      if (!active) continue;

      // Corners NW, NE, SW, SE; X-plaquettes run NW,SW,NE,SE so that every
      // data qubit gets a distinct step among its four neighboring checks.
      const int nw = data_index(pr, pc);
      const int ne = data_index(pr, pc + 1);
      const int sw = data_index(pr + 1, pc);
      const int se = data_index(pr + 1, pc + 1);
      StabilizerInfo info;
      info.x_type = x_type;
      info.ladder = x_type ? std::vector<int>{nw, sw, ne, se}
                           : std::vector<int>{nw, ne, sw, se};
      info.op = PauliOp(static_cast<std::size_t>(n));
      for (int q : info.ladder)
        if (q >= 0) info.op.set(static_cast<std::size_t>(q), x_type ? Pauli::X : Pauli::Z);
      (x_type ? x_checks : z_checks).push_back(std::move(info));
    }
  }

  code.stabilizers = std::move(x_checks);
  for (auto& z : z_checks) code.stabilizers.push_back(std::move(z));

  // Logical Z along the top row, logical X down the left column.
  code.logical_z = PauliOp(static_cast<std::size_t>(n));
  for (int c = 0; c < d; ++c) code.logical_z.set(static_cast<std::size_t>(c), Pauli::Z);
  code.logical_x = PauliOp(static_cast<std::size_t>(n));
  for (int r = 0; r < d; ++r)
    code.logical_x.set(static_cast<std::size_t>(r * d), Pauli::X);
  return code;
}

}  // namespace erasim
