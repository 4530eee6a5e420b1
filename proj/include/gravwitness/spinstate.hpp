/**
 * @file spinstate.hpp
 * @brief Two-spin states after the interferometers, the spin-correlation
 *        witness, negativity and local dephasing.
 *
 * Basis order is {uu, ud, du, dd} with sigma_z |u> = +|u>; index = 2*q1 + q2
 * where q = 0 for up.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "core.hpp"

namespace gravwitness {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;

/// 4x4 density matrix of the two spins (or orbital qubits).
class TwoQubitState {
public:
  static constexpr double hermitianTol = 1e-12;
  static constexpr double traceTol = 1e-12;
  static constexpr double eigenTol = 1e-10;

  TwoQubitState() : rho_(Matrix4c::Identity() * 0.25) {}

  /// Unchecked; use fromDensity() for untrusted input.
  explicit TwoQubitState(const Matrix4c &rho) : rho_(rho) {}

  static TwoQubitState fromDensity(const Matrix4c &rho) {
    TwoQubitState s(rho);
    if (!s.isValid()) throw std::invalid_argument("matrix is not a valid two-qubit density matrix");
    return s;
  }

  static TwoQubitState fromPure(const Vector4c &psi) {
    const Vector4c n = psi / psi.norm();
    return TwoQubitState(n * n.adjoint());
  }

  static TwoQubitState maximallyMixed() { return TwoQubitState(); }

  const Matrix4c &rho() const { return rho_; }
  cplx operator()(int a, int b) const { return rho_(a, b); }

  double purity() const { return (rho_ * rho_).trace().real(); }

  bool isValid() const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > hermitianTol) return false;
    if (std::abs(rho_.trace() - cplx(1.0, 0.0)) > traceTol) return false;
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eigenTol;
  }

private:
  Matrix4c rho_;
};

enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };

/// Local z-rotation angles applied to qubits 1 and 2 before measurement.
struct WitnessSettings {
  double thetaZ1 = 0.0;
  double thetaZ2 = 0.0;
};

struct WitnessResult {
  double w = 0.0;
  double expXZ = 0.0;
  double expYZ = 0.0;
  double negativity = 0.0;
  bool entangledByNegativity = false;
};

namespace spinstate {

/// Threshold above which negativity certifies entanglement.
inline constexpr double negativityThreshold = 1e-9;

namespace detail {

// A Pauli matrix has one non-zero per column: P |b> = phase[b] |perm[b]>.
struct SparsePauli {
  std::array<int, 2> perm;
  std::array<cplx, 2> phase;
};

inline SparsePauli sparse(Pauli p) {
  const cplx i(0.0, 1.0);
  switch (p) {
  case Pauli::I: return {{0, 1}, {1.0, 1.0}};
  case Pauli::X: return {{1, 0}, {1.0, 1.0}};
  case Pauli::Y: return {{1, 0}, {i, -i}};
  case Pauli::Z: return {{0, 1}, {1.0, -1.0}};
  }
  throw std::invalid_argument("invalid Pauli index");
}

inline Matrix4c diagonalRotation(const WitnessSettings &s) {
  const std::array<double, 4> phase = {0.0, s.thetaZ2, s.thetaZ1, s.thetaZ1 + s.thetaZ2};
  Matrix4c u = Matrix4c::Zero();
  for (int a = 0; a < 4; ++a) u(a, a) = std::polar(1.0, phase[a]);
  return u;
}

} // namespace detail

inline Pauli pauliFromIndex(int idx) {
  if (idx < 0 || idx > 3) throw std::invalid_argument("Pauli index must be in 0..3");
  return static_cast<Pauli>(idx);
}

/// Amplitudes (1, e^{i dPhiLR}, e^{i dPhiRL}, 1) / 2, global phase dropped.
inline TwoQubitState entangledState(double dPhiLR, double dPhiRL) {
  Vector4c psi;
  psi << 0.5, 0.5 * std::polar(1.0, dPhiLR), 0.5 * std::polar(1.0, dPhiRL), 0.5;
  return TwoQubitState(psi * psi.adjoint());
}

/// Tr(rho (P1 x P2)); the imaginary part is round-off for Hermitian rho and is dropped.
inline double expectation(const TwoQubitState &state, Pauli p1, Pauli p2) {
  const auto a = detail::sparse(p1);
  const auto b = detail::sparse(p2);
  cplx tr = 0.0;
  // Tr(rho P) = sum_col rho(row(col), col) * P(row(col), col)
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2) {
      const int col = 2 * q1 + q2;
      const int row = 2 * a.perm[q1] + b.perm[q2];
      tr += state(col, row) * a.phase[q1] * b.phase[q2];
    }
  return tr.real();
}

inline double expectation(const TwoQubitState &state, int p1, int p2) {
  return expectation(state, pauliFromIndex(p1), pauliFromIndex(p2));
}

/// rho -> U rho U^dagger with U = Rz(theta1) x Rz(theta2), Rz(t) = diag(1, e^{it}).
inline TwoQubitState rotateZ(const TwoQubitState &state, const WitnessSettings &s) {
  const Matrix4c u = detail::diagonalRotation(s);
  return TwoQubitState(u * state.rho() * u.adjoint());
}

/// Partial transpose over qubit 2.
inline Matrix4c partialTranspose(const Matrix4c &rho) {
  Matrix4c pt;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) pt(2 * i + j, 2 * k + l) = rho(2 * i + l, 2 * k + j);
  return pt;
}

/// Sum of |negative eigenvalues| of the partial transpose. In [0, 0.5].
inline double negativity(const TwoQubitState &state) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(partialTranspose(state.rho()), Eigen::EigenvaluesOnly);
  double n = 0.0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()(i) < 0.0) n -= es.eigenvalues()(i);
  return n;
}

/// Correlators after local z-rotations; w = |<XZ> - <YZ>|.
inline WitnessResult witnessCorrelators(const TwoQubitState &state, const WitnessSettings &s) {
  const TwoQubitState rotated = rotateZ(state, s);
  WitnessResult r;
  r.expXZ = expectation(rotated, Pauli::X, Pauli::Z);
  r.expYZ = expectation(rotated, Pauli::Y, Pauli::Z);
  r.w = std::abs(r.expXZ - r.expYZ);
  return r;
}

inline WitnessResult witness(const TwoQubitState &state, const WitnessSettings &s = {}) {
  WitnessResult r = witnessCorrelators(state, s);
  r.negativity = negativity(state);
  r.entangledByNegativity = r.negativity > negativityThreshold;
  return r;
}

struct OptimizedWitness {
  WitnessSettings settings;
  WitnessResult result;
};

/// Points per axis of the coarse angle grid over [-pi, pi].
inline constexpr int witnessGridPoints = 721;

/**
 * Maximises w over both z-rotation angles: exhaustive grid, then a compass
 * search started from the best grid node. Ties keep the first node in
 * row-major order, so the result is deterministic.
 */
inline OptimizedWitness optimizeWitness(const TwoQubitState &state) {
  // w only needs the elements rho(col,row) touched by XZ and YZ, and the
  // rotation multiplies rho(a,b) by e^{i(phase_a - phase_b)}.
  const Matrix4c &rho = state.rho();
  auto evaluate = [&](double t1, double t2) {
    const std::array<double, 4> ph = {0.0, t2, t1, t1 + t2};
    cplx xz = 0.0, yz = 0.0;
    const cplx i(0.0, 1.0);
    for (int q1 = 0; q1 < 2; ++q1)
      for (int q2 = 0; q2 < 2; ++q2) {
        const int col = 2 * q1 + q2;
        const int row = 2 * (1 - q1) + q2;
        const cplx el = rho(col, row) * std::polar(1.0, ph[col] - ph[row]);
        const double z = q2 == 0 ? 1.0 : -1.0;
        xz += el * z;
        yz += el * z * (q1 == 0 ? i : -i);
      }
    return std::abs(xz.real() - yz.real());
  };

  const int n = witnessGridPoints;
  const double step = 2.0 * pi / (n - 1);
  double best = -1.0, b1 = 0.0, b2 = 0.0;
  for (int a = 0; a < n; ++a) {
    const double t1 = -pi + a * step;
    for (int b = 0; b < n; ++b) {
      const double t2 = -pi + b * step;
      const double w = evaluate(t1, t2);
      if (w > best) {
        best = w;
        b1 = t1;
        b2 = t2;
      }
    }
  }

  double h = step;
  while (h > 1e-12) {
    bool moved = false;
    const std::array<std::array<double, 2>, 4> dirs = {{{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}};
    for (const auto &dir : dirs) {
      const double w = evaluate(b1 + dir[0], b2 + dir[1]);
      if (w > best) {
        best = w;
        b1 += dir[0];
        b2 += dir[1];
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }

  OptimizedWitness out;
  out.settings = {b1, b2};
  out.result = witness(state, out.settings);
  return out;
}

/// Independent phase-flip channels: rho -> (1-p) rho + p Z rho Z on each qubit.
inline TwoQubitState applyDephasing(const TwoQubitState &state, double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0))
    throw std::invalid_argument("dephasing probabilities must lie in [0, 1]");
  const Matrix4c z1 = Eigen::Vector4d(1, 1, -1, -1).cast<cplx>().asDiagonal();
  const Matrix4c z2 = Eigen::Vector4d(1, -1, 1, -1).cast<cplx>().asDiagonal();
  Matrix4c rho = state.rho();
  rho = (1.0 - p1) * rho + p1 * z1 * rho * z1;
  rho = (1.0 - p2) * rho + p2 * z2 * rho * z2;
  return TwoQubitState(rho);
}

} // namespace spinstate
} // namespace gravwitness
