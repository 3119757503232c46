#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace erasim {

inline constexpr double kCptpTolerance = 1e-10;
inline constexpr double kProbTolerance = 1e-12;

// Single-qubit Pauli error channel: apply I/X/Y/Z with the given probabilities.
struct PauliChannel {
  double p_i = 1.0;
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;

  double sum() const { return p_i + p_x + p_y + p_z; }

  bool valid() const {
    for (double p : {p_i, p_x, p_y, p_z})
      if (p < -kProbTolerance || p > 1.0 + kProbTolerance) return false;
    return std::abs(sum() - 1.0) <= kProbTolerance;
  }
};

// Sequential application: first `a`, then `b` (Pauli probabilities convolve
// under the group structure, phases irrelevant).
inline PauliChannel compose(const PauliChannel& a, const PauliChannel& b) {
  PauliChannel out;
  out.p_i = a.p_i * b.p_i + a.p_x * b.p_x + a.p_y * b.p_y + a.p_z * b.p_z;
  out.p_x = a.p_i * b.p_x + a.p_x * b.p_i + a.p_y * b.p_z + a.p_z * b.p_y;
  out.p_y = a.p_i * b.p_y + a.p_y * b.p_i + a.p_x * b.p_z + a.p_z * b.p_x;
  out.p_z = a.p_i * b.p_z + a.p_z * b.p_i + a.p_x * b.p_y + a.p_y * b.p_x;
  return out;
}

// General channel in Kraus form on a dim-dimensional system (2 or 4 here).
struct DenseChannel {
  int dim = 2;
  std::vector<Eigen::MatrixXcd> kraus;
};

inline bool validate_cptp(const DenseChannel& ch) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(ch.dim, ch.dim);
  for (const auto& k : ch.kraus) {
    if (k.rows() != ch.dim || k.cols() != ch.dim) return false;
    acc += k.adjoint() * k;
  }
  return (acc - Eigen::MatrixXcd::Identity(ch.dim, ch.dim)).cwiseAbs().maxCoeff() <=
         kCptpTolerance;
}

inline Eigen::MatrixXcd apply_channel(const DenseChannel& ch, const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ch.dim, ch.dim);
  for (const auto& k : ch.kraus) out += k * rho * k.adjoint();
  return out;
}

inline DenseChannel identity_channel(int dim) {
  return {dim, {Eigen::MatrixXcd::Identity(dim, dim)}};
}

// Standard two-Kraus amplitude damping on one qubit.
inline DenseChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("amplitude_damping_channel: gamma outside [0,1]");
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return {2, {k0, k1}};
}

// Phase flip with probability phi.
inline DenseChannel dephasing_channel(double phi) {
  if (phi < 0.0 || phi > 1.0)
    throw std::invalid_argument("dephasing_channel: phi outside [0,1]");
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(2, 2);
  z(1, 1) = -1.0;
  return {2, {std::sqrt(1.0 - phi) * Eigen::MatrixXcd::Identity(2, 2),
              std::sqrt(phi) * z}};
}

// second-after-first composition; Kraus products.
inline DenseChannel compose(const DenseChannel& first, const DenseChannel& second) {
  if (first.dim != second.dim)
    throw std::invalid_argument("compose: channel dimension mismatch");
  DenseChannel out;
  out.dim = first.dim;
  out.kraus.reserve(first.kraus.size() * second.kraus.size());
  for (const auto& k2 : second.kraus)
    for (const auto& k1 : first.kraus) out.kraus.push_back(k2 * k1);
  return out;
}

// Choi matrix sum_i vec(K_i) vec(K_i)^dag; process equality test surface.
inline Eigen::MatrixXcd choi_matrix(const DenseChannel& ch) {
  const int d = ch.dim;
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& k : ch.kraus) {
    Eigen::VectorXcd v(d * d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) v(c * d + r) = k(r, c);
    choi += v * v.adjoint();
  }
  return choi;
}

inline double process_distance(const DenseChannel& a, const DenseChannel& b) {
  return (choi_matrix(a) - choi_matrix(b)).cwiseAbs().maxCoeff();
}

namespace detail {
inline const Eigen::MatrixXcd& pauli_matrix_1q(int index) {
  static const std::vector<Eigen::MatrixXcd> mats = [] {
    std::vector<Eigen::MatrixXcd> m(4, Eigen::MatrixXcd::Zero(2, 2));
    const std::complex<double> i(0.0, 1.0);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return mats[static_cast<std::size_t>(index)];
}
}  // namespace detail

// Pauli transfer matrix of a single-qubit channel: R_ab = Tr(P_a E(P_b)) / 2,
// Pauli order I, X, Y, Z.
inline Eigen::Matrix4d pauli_transfer_matrix(const DenseChannel& ch) {
  if (ch.dim != 2) throw std::invalid_argument("pauli_transfer_matrix: dim != 2");
  Eigen::Matrix4d r;
  for (int b = 0; b < 4; ++b) {
    const Eigen::MatrixXcd image = apply_channel(ch, detail::pauli_matrix_1q(b));
    for (int a = 0; a < 4; ++a)
      r(a, b) = 0.5 * (detail::pauli_matrix_1q(a) * image).trace().real();
  }
  return r;
}

// Pauli twirl of a single-qubit CPTP channel: the probabilities are the chi
// matrix diagonal, p_P = sum_i |Tr(P K_i)|^2 / 4.
inline PauliChannel pauli_twirl(const DenseChannel& ch) {
  if (ch.dim != 2) throw std::invalid_argument("pauli_twirl: single-qubit channels only");
  if (!validate_cptp(ch)) throw std::invalid_argument("pauli_twirl: channel is not CPTP");
  double p[4] = {0, 0, 0, 0};
  for (const auto& k : ch.kraus)
    for (int a = 0; a < 4; ++a) {
      const std::complex<double> overlap = (detail::pauli_matrix_1q(a) * k).trace() * 0.5;
      p[a] += std::norm(overlap);
    }
  return {p[0], p[1], p[2], p[3]};
}

}  // namespace erasim
