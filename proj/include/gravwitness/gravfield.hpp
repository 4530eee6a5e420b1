/**
 * @file gravfield.hpp
 * @brief Mode-discretised linearised gravitational field coupled to two
 *        dichotomic masses.
 *
 * The field is represented by radial shells of wavenumber k. Every mode in a
 * shell is displaced into a coherent state whose amplitude depends on the
 * branch positions; the angular dependence e^{i k.r} is integrated
 * analytically (the average of e^{i k.(p - q)} over directions is
 * sinc(k |p - q|)), so only a one-dimensional radial grid is needed.
 *
 * Per-mode coupling g_k = m c^2 sqrt(2 pi G / (hbar c^3 k V)) with
 * omega_k = c k. A shell of width dk holds V k^2 dk / (2 pi^2) modes, so the
 * volume cancels: the cross term 2 g1 g2 cos(k.r) / omega summed over a shell
 * is (2 / pi) (G m1 m2 / hbar) sinc(k r) dk, and the summed per-mass
 * displacement scale is m^2 G dk / (pi hbar c k).
 */
#pragma once

#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "gravphase.hpp"
#include "spinstate.hpp"

namespace gravwitness {

/// Radial wavenumber grid with quadrature weights and shell boundaries.
struct FieldModeSet {
  std::vector<double> k;       // m^-1, strictly increasing
  std::vector<double> weight;  // m^-1, trapezoidal weights
  std::vector<double> shellLo; // shell [lo, hi] represented by each node
  std::vector<double> shellHi;
  double kCut = 0.0;           // exponential damping scale, m^-1
  double couplingScale = 1.0;

  std::size_t size() const { return k.size(); }
};

/**
 * Coherent displacement of every shell for one branch. The amplitude of a
 * mode with direction n is c1 e^{i k n.x1} + c2 e^{i k n.x2}.
 */
struct BranchDisplacements {
  Branch branch = Branch::LL;
  double x1 = 0.0, x2 = 0.0; // positions along the split axis, m
  double t = 0.0;
  std::vector<double> k;
  std::vector<cplx> c1, c2;
  double branchPhase = 0.0;

  /// Amplitude of the mode in the shell travelling along +x.
  cplx alongAxis(std::size_t i) const {
    return c1[i] * std::polar(1.0, k[i] * x1) + c2[i] * std::polar(1.0, k[i] * x2);
  }

  /// Root of the direction-averaged |alpha|^2 in shell i.
  double rmsAmplitude(std::size_t i) const {
    const double s = k[i] * std::abs(x1 - x2);
    const double sinc = s == 0.0 ? 1.0 : std::sin(s) / s;
    const double v = std::norm(c1[i]) + std::norm(c2[i]) + 2.0 * (c1[i] * std::conj(c2[i])).real() * sinc;
    return std::sqrt(std::max(v, 0.0));
  }

  double maxAmplitude() const {
    double m = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) m = std::max(m, rmsAmplitude(i));
    return m;
  }
};

namespace gravfield {

/// How a shell's share of the radial integral is evaluated.
enum class Quadrature {
  /// sinc integrated exactly over the shell, damping sampled at the node.
  ShellIntegrated,
  /// Plain nodal sampling with trapezoidal weights.
  Trapezoid,
};

/**
 * Single effective polarisation channel: with the mode counting above the
 * continuum limit of the cross term is exactly G m1 m2 t / (hbar r), so the
 * calibration constant is one. Two polarisations with the same coupling would
 * need 1/2.
 */
inline constexpr double continuumCouplingScale = 1.0;

/// Log-spaced grid on [kMin, kMax] with trapezoidal weights.
inline FieldModeSet buildModes(double kMin, double kMax, int nModes, double kCut) {
  if (!(kMin > 0.0) || !(kMax > kMin) || !std::isfinite(kMax))
    throw std::invalid_argument("buildModes needs 0 < kMin < kMax");
  if (nModes < 2) throw std::invalid_argument("buildModes needs nModes >= 2");
  if (!(kCut > 0.0)) throw std::invalid_argument("buildModes needs kCut > 0");

  FieldModeSet m;
  m.kCut = kCut;
  m.couplingScale = continuumCouplingScale;
  m.k.resize(nModes);
  const double logRatio = std::log(kMax / kMin);
  for (int i = 0; i < nModes; ++i)
    m.k[i] = kMin * std::exp(logRatio * i / (nModes - 1));
  m.k.front() = kMin;
  m.k.back() = kMax;

  m.weight.resize(nModes);
  m.shellLo.resize(nModes);
  m.shellHi.resize(nModes);
  for (int i = 0; i < nModes; ++i) {
    m.shellLo[i] = i == 0 ? m.k[0] : 0.5 * (m.k[i - 1] + m.k[i]);
    m.shellHi[i] = i == nModes - 1 ? m.k[i] : 0.5 * (m.k[i] + m.k[i + 1]);
    m.weight[i] = m.shellHi[i] - m.shellLo[i];
  }
  return m;
}

/// Arbitrary nodes; each node represents the shell [k - w/2, k + w/2].
inline FieldModeSet modesFromNodes(std::vector<double> k, std::vector<double> weight, double kCut) {
  if (k.empty() || k.size() != weight.size()) throw std::invalid_argument("node and weight counts differ");
  FieldModeSet m;
  m.kCut = kCut;
  m.couplingScale = continuumCouplingScale;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(k[i] > 0.0) || !(weight[i] > 0.0) || (i > 0 && !(k[i] > k[i - 1])))
      throw std::invalid_argument("nodes must be positive and strictly increasing with positive weights");
    m.shellLo.push_back(std::max(0.0, k[i] - 0.5 * weight[i]));
    m.shellHi.push_back(k[i] + 0.5 * weight[i]);
  }
  m.k = std::move(k);
  m.weight = std::move(weight);
  return m;
}

/// Closed form of the damped radial integral: int_0^inf sinc(k r) e^{-k/kCut} dk.
inline double dampedSincIntegral(double r, double kCut) { return std::atan(kCut * r) / r; }

/// Discrete approximation of int sinc(k r) e^{-k/kCut} dk over the grid.
inline double radialSum(const FieldModeSet &modes, double r, Quadrature rule = Quadrature::ShellIntegrated) {
  if (!(r > 0.0)) throw std::invalid_argument("separation must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double damp = std::exp(-modes.k[i] / modes.kCut);
    double shell;
    if (rule == Quadrature::Trapezoid) {
      const double x = modes.k[i] * r;
      shell = modes.weight[i] * std::sin(x) / x;
    } else {
      shell = (gsl_sf_Si(modes.shellHi[i] * r) - gsl_sf_Si(modes.shellLo[i] * r)) / r;
    }
    acc += damp * shell;
  }
  return acc;
}

/// Secular cross-term phase of a branch with the masses a distance `separation` apart.
inline double branchPhase(const FieldModeSet &modes, const ExperimentConfig &cfg, double separation, double t,
                          Quadrature rule = Quadrature::ShellIntegrated) {
  if (!(separation > 0.0)) throw std::invalid_argument("separation must be positive");
  if (t == 0.0) return 0.0;
  return gravphase::couplingRate(cfg) * t * modes.couplingScale * (2.0 / pi) * radialSum(modes, separation, rule);
}

/// Coherent amplitudes (vacuum initial field) for masses at x1, x2 after time t.
inline BranchDisplacements displacements(const FieldModeSet &modes, const ExperimentConfig &cfg, Branch branch,
                                         double x1, double x2, double t) {
  BranchDisplacements out;
  out.branch = branch;
  out.x1 = x1;
  out.x2 = x2;
  out.t = t;
  out.k = modes.k;
  out.c1.resize(modes.size());
  out.c2.resize(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double k = modes.k[i];
    const double omega = constants::c * k;
    const double scale =
        std::sqrt(modes.couplingScale * constants::G * modes.weight[i] / (pi * constants::hbar * constants::c * k));
    const cplx ring = t == 0.0 ? cplx(0.0) : std::polar(1.0, omega * t) - 1.0;
    out.c1[i] = cfg.m1 * scale * ring;
    out.c2[i] = cfg.m2 * scale * ring;
  }
  out.branchPhase = branchPhase(modes, cfg, std::abs(x2 - x1), t);
  return out;
}

inline BranchDisplacements displacements(const FieldModeSet &modes, const ExperimentConfig &cfg, Branch branch,
                                         double t) {
  const auto p = gravphase::branchPositions(cfg, branch);
  return displacements(modes, cfg, branch, p.x1, p.x2, t);
}

using BranchSet = std::array<BranchDisplacements, 4>;

inline BranchSet allDisplacements(const FieldModeSet &modes, const ExperimentConfig &cfg, double t) {
  BranchSet out;
  for (Branch b : allBranches) out[static_cast<int>(b)] = displacements(modes, cfg, b, t);
  return out;
}

/**
 * Product over all modes of <alpha_A | alpha_B>, with each shell's exponent
 * averaged over mode directions. |result| = exp(-<|alpha_A - alpha_B|^2> / 2).
 */
inline cplx branchOverlap(const BranchDisplacements &a, const BranchDisplacements &b) {
  if (a.k != b.k) throw std::invalid_argument("branch displacements are on different mode grids");
  const std::array<double, 2> pa = {a.x1, a.x2};
  const std::array<double, 2> pb = {b.x1, b.x2};
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };

  cplx exponent = 0.0;
  for (std::size_t i = 0; i < a.k.size(); ++i) {
    const double k = a.k[i];
    const std::array<cplx, 2> ca = {a.c1[i], a.c2[i]};
    const std::array<cplx, 2> cb = {b.c1[i], b.c2[i]};
    // <conj(u) v> over directions for u = sum cu e^{ik n.pu}, v = sum cv e^{ik n.pv}
    auto cross = [&](const std::array<cplx, 2> &cu, const std::array<double, 2> &pu, const std::array<cplx, 2> &cv,
                     const std::array<double, 2> &pv) {
      cplx s = 0.0;
      for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m) s += std::conj(cu[n]) * cv[m] * sinc(k * std::abs(pu[n] - pv[m]));
      return s;
    };
    const double na = cross(ca, pa, ca, pa).real();
    const double nb = cross(cb, pb, cb, pb).real();
    exponent += -0.5 * na - 0.5 * nb + cross(ca, pa, cb, pb);
  }
  return std::exp(exponent);
}

/**
 * Orbital two-qubit state after tracing out the field:
 * rho(b, b') = psi_b conj(psi_b') <field_b' | field_b>, psi_b = e^{i(phi_b - phi_LL)} / 2.
 * With includeOverlaps = false the field is treated as exactly factorised.
 */
inline TwoQubitState reducedMassState(const BranchSet &branches, bool includeOverlaps = true) {
  Vector4c psi;
  const double ref = branches[0].branchPhase;
  for (int b = 0; b < 4; ++b) psi(b) = 0.5 * std::polar(1.0, branches[b].branchPhase - ref);
  Matrix4c rho = psi * psi.adjoint();
  if (includeOverlaps)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != b) rho(a, b) *= branchOverlap(branches[b], branches[a]);
  return TwoQubitState(rho);
}

/// Drops every coherence between distinct branches (field made classical).
inline TwoQubitState classicalize(const TwoQubitState &state) {
  Matrix4c rho = Matrix4c::Zero();
  for (int a = 0; a < 4; ++a) rho(a, a) = state(a, a);
  return TwoQubitState(rho);
}

inline TwoQubitState classicalize(const BranchSet &branches) { return classicalize(reducedMassState(branches)); }

} // namespace gravfield
} // namespace gravwitness
