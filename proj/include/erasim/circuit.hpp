#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "erasim/bitvec.hpp"
#include "erasim/dual_rail.hpp"

namespace erasim {

// Line-oriented circuit format and IR errors.
struct CircuitFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OpKind : uint8_t {
  H,
  CX,
  Reset,
  MeasureZ,
  NoiseSite,      // erasure rate e plus Pauli rates on one qubit
  ErasureCheck,   // heralds the erased subspace, converts per mode
  MeasureFlip,    // classical flip of the target's next measurement
  Detector,       // parity of prior measurement indices
  Observable,     // logical readout parity
};

struct Instruction {
  OpKind kind = OpKind::H;
  int a = -1;  // primary qubit (H/Reset/MeasureZ/noise/check/flip target, CX control)
  int b = -1;  // CX target
  double e = 0.0, px = 0.0, py = 0.0, pz = 0.0;  // NoiseSite
  double f_pos = 0.0, f_neg = 0.0;               // ErasureCheck
  ConversionMode conversion = ConversionMode::Mixed;
  ResetMode reset = ResetMode::OneWay;
  int check_id = -1;
  double flip_prob = 0.0;  // MeasureFlip
  std::vector<int> meas;   // Detector/Observable operands
};

// When/what kind of syndrome-extraction rounds erasure checks run in.
struct Schedule {
  enum class Kind { EveryGate, EveryRound, EveryN, EndOnly };
  Kind kind = Kind::EveryRound;
  int n = 1;  // EveryN period

  static Schedule every_gate() { return {Kind::EveryGate, 1}; }
  static Schedule every_round() { return {Kind::EveryRound, 1}; }
  static Schedule every_n(int n) {
    if (n < 1) throw std::invalid_argument("Schedule: EveryN requires n >= 1");
    return {Kind::EveryN, n};
  }
  static Schedule end_only() { return {Kind::EndOnly, 1}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::EveryGate: return "everygate";
      case Kind::EveryRound: return "everyround";
      case Kind::EveryN: return "every:" + std::to_string(n);
      case Kind::EndOnly: return "endonly";
    }
    return "?";
  }
};

struct DetectorMeta {
  int stab_index = -1;  // index into the code's stabilizer list
  bool x_type = false;  // CSS type of the measured stabilizer
  int round = 0;        // 1-based noisy rounds; rounds+1 marks the final round
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Instruction> instructions;
  int num_measurements = 0;
  int num_detectors = 0;
  int num_observables = 0;
  int num_checks = 0;

  std::vector<DetectorMeta> detector_meta;

  // Debug hook: these checks herald on every shot.
  std::vector<int> forced_checks;

  // Model knob: when set, a CX with exactly one erased participant applies a
  // conversion-channel Pauli to the clean partner at the gate.
  bool cx_leak_corruption = false;
  ConversionMode leak_conversion = ConversionMode::Mixed;

  void require_qubit(int q) const {
    if (q < 0 || q >= num_qubits) throw std::invalid_argument("Circuit: qubit out of range");
  }

  void append_h(int q) {
    require_qubit(q);
    Instruction in;
    in.kind = OpKind::H;
    in.a = q;
    instructions.push_back(in);
  }

  void append_cx(int control, int target) {
    require_qubit(control);
    require_qubit(target);
    if (control == target) throw std::invalid_argument("Circuit: CX needs distinct qubits");
    Instruction in;
    in.kind = OpKind::CX;
    in.a = control;
    in.b = target;
    instructions.push_back(in);
  }

  void append_reset(int q) {
    require_qubit(q);
    Instruction in;
    in.kind = OpKind::Reset;
    in.a = q;
    instructions.push_back(in);
  }

  // Returns the measurement record index.
  int append_measure_z(int q) {
    require_qubit(q);
    Instruction in;
    in.kind = OpKind::MeasureZ;
    in.a = q;
    instructions.push_back(in);
    return num_measurements++;
  }

  void append_noise(int q, double e, double px, double py, double pz) {
    require_qubit(q);
    for (double p : {e, px, py, pz})
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Circuit: noise rate outside [0,1]");
    if (e + px + py + pz > 1.0 + 1e-12)
      throw std::invalid_argument("Circuit: noise rates sum above 1");
    Instruction in;
    in.kind = OpKind::NoiseSite;
    in.a = q;
    in.e = e;
    in.px = px;
    in.py = py;
    in.pz = pz;
    instructions.push_back(in);
  }

  // Returns the check id.
  int append_check(int q, double f_pos, double f_neg, ConversionMode conv, ResetMode reset) {
    require_qubit(q);
    for (double p : {f_pos, f_neg})
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Circuit: check probability outside [0,1]");
    Instruction in;
    in.kind = OpKind::ErasureCheck;
    in.a = q;
    in.f_pos = f_pos;
    in.f_neg = f_neg;
    in.conversion = conv;
    in.reset = reset;
    in.check_id = num_checks;
    instructions.push_back(in);
    return num_checks++;
  }

  void append_measure_flip(int q, double p) {
    require_qubit(q);
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("Circuit: flip probability outside [0,1]");
    Instruction in;
    in.kind = OpKind::MeasureFlip;
    in.a = q;
    in.flip_prob = p;
    instructions.push_back(in);
  }

  int append_detector(std::vector<int> meas_indices, DetectorMeta meta = {}) {
    check_measurement_refs(meas_indices);
    Instruction in;
    in.kind = OpKind::Detector;
    in.meas = std::move(meas_indices);
    instructions.push_back(in);
    detector_meta.push_back(meta);
    return num_detectors++;
  }

  int append_observable(std::vector<int> meas_indices) {
    check_measurement_refs(meas_indices);
    Instruction in;
    in.kind = OpKind::Observable;
    in.meas = std::move(meas_indices);
    instructions.push_back(in);
    return num_observables++;
  }

  std::string to_text() const;

 private:
  void check_measurement_refs(const std::vector<int>& refs) const {
    for (int m : refs)
      if (m < 0 || m >= num_measurements)
        throw std::invalid_argument("Circuit: detector/observable references a future measurement");
  }
};

// One sampled shot: detector bits, heralded check ids, observable bits.
struct ShotRecord {
  BitVec detectors;
  std::vector<int> flags;
  BitVec observables;
};

inline std::string Circuit::to_text() const {
  std::ostringstream out;
  out << "NQUBITS " << num_qubits << '\n';
  for (const auto& in : instructions) {
    switch (in.kind) {
      case OpKind::H: out << "H " << in.a << '\n'; break;
      case OpKind::CX: out << "CX " << in.a << ' ' << in.b << '\n'; break;
      case OpKind::Reset: out << "RESET " << in.a << '\n'; break;
      case OpKind::MeasureZ: out << "MZ " << in.a << '\n'; break;
      case OpKind::NoiseSite:
        out << "NOISE " << in.a << ' ' << in.e << ' ' << in.px << ' ' << in.py << ' '
            << in.pz << '\n';
        break;
      case OpKind::ErasureCheck:
        out << "CHECK " << in.a << ' ' << in.f_pos << ' ' << in.f_neg << ' '
            << (in.conversion == ConversionMode::Mixed ? "MIXED" : "BIASED") << ' '
            << (in.reset == ResetMode::OneWay ? "ONEWAY" : "UNITARY") << ' ' << in.check_id
            << '\n';
        break;
      case OpKind::MeasureFlip:
        out << "MFLIP " << in.a << ' ' << in.flip_prob << '\n';
        break;
      case OpKind::Detector: {
        out << "DETECTOR";
        for (int m : in.meas) out << ' ' << m;
        out << '\n';
        break;
      }
      case OpKind::Observable: {
        out << "OBSERVABLE";
        for (int m : in.meas) out << ' ' << m;
        out << '\n';
        break;
      }
    }
  }
  return out.str();
}

// Parses the line-oriented circuit format emitted by to_text. Unknown
// instruction names (non-Clifford gates included) are rejected.
inline Circuit circuit_from_text(const std::string& text) {
  Circuit circuit;
  std::istringstream lines(text);
  std::string line;
  bool have_header = false;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream tok(line);
    std::string name;
    tok >> name;
    auto need_int = [&]() {
      int v;
      if (!(tok >> v)) throw CircuitFormatError("circuit parse: missing integer in: " + line);
      return v;
    };
    auto need_double = [&]() {
      double v;
      if (!(tok >> v)) throw CircuitFormatError("circuit parse: missing number in: " + line);
      return v;
    };
    if (name == "NQUBITS") {
      circuit.num_qubits = need_int();
      have_header = true;
      continue;
    }
    if (!have_header) throw CircuitFormatError("circuit parse: NQUBITS must come first");
    if (name == "H") {
      circuit.append_h(need_int());
    } else if (name == "CX") {
      const int c = need_int();
      circuit.append_cx(c, need_int());
    } else if (name == "RESET") {
      circuit.append_reset(need_int());
    } else if (name == "MZ") {
      circuit.append_measure_z(need_int());
    } else if (name == "NOISE") {
      const int q = need_int();
      const double e = need_double(), px = need_double(), py = need_double(),
                   pz = need_double();
      circuit.append_noise(q, e, px, py, pz);
    } else if (name == "CHECK") {
      const int q = need_int();
      const double fp = need_double(), fn = need_double();
      std::string conv, reset;
      int id;
      if (!(tok >> conv >> reset >> id))
        throw CircuitFormatError("circuit parse: malformed CHECK: " + line);
      ConversionMode cm;
      if (conv == "MIXED")
        cm = ConversionMode::Mixed;
      else if (conv == "BIASED")
        cm = ConversionMode::Biased;
      else
        throw CircuitFormatError("circuit parse: unknown conversion mode: " + conv);
      ResetMode rm;
      if (reset == "ONEWAY")
        rm = ResetMode::OneWay;
      else if (reset == "UNITARY")
        rm = ResetMode::Unitary;
      else
        throw CircuitFormatError("circuit parse: unknown reset mode: " + reset);
      const int got = circuit.append_check(q, fp, fn, cm, rm);
      if (got != id)
        throw CircuitFormatError("circuit parse: CHECK ids must be sequential from 0");
    } else if (name == "MFLIP") {
      const int q = need_int();
      circuit.append_measure_flip(q, need_double());
    } else if (name == "DETECTOR" || name == "OBSERVABLE") {
      std::vector<int> refs;
      int m;
      while (tok >> m) refs.push_back(m);
      if (name == "DETECTOR")
        circuit.append_detector(std::move(refs));
      else
        circuit.append_observable(std::move(refs));
    } else {
      throw CircuitFormatError("circuit parse: unsupported instruction: " + name);
    }
  }
  return circuit;
}

}  // namespace erasim
