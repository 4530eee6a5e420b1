/**
 * @file gravphase.hpp
 * @brief Gravitational phases of the four joint branches of two adjacent interferometers.
 *
 * Geometry: mass 1 is centred at x = 0 and mass 2 at x = d, each split along x
 * into L (spin up, -dx/2) and R (spin down, +dx/2). Branch separations are
 * LL = RR = d, LR = d + dx, RL = d - dx.
 */
#pragma once

#include "core.hpp"

#include <array>
#include <stdexcept>

namespace gravwitness {

/// Joint branch label; the order matches the spin basis {uu, ud, du, dd}.
enum class Branch { LL = 0, LR = 1, RL = 2, RR = 3 };

inline constexpr std::array<Branch, 4> allBranches = {Branch::LL, Branch::LR, Branch::RL, Branch::RR};

inline constexpr const char *branchName(Branch b) {
  switch (b) {
  case Branch::LL: return "LL";
  case Branch::LR: return "LR";
  case Branch::RL: return "RL";
  case Branch::RR: return "RR";
  }
  return "?";
}

struct BranchSeparations {
  double LL, LR, RL, RR;

  double operator[](Branch b) const {
    switch (b) {
    case Branch::LL: return LL;
    case Branch::LR: return LR;
    case Branch::RL: return RL;
    case Branch::RR: return RR;
    }
    return LL;
  }
};

struct PhaseSet {
  double phiLL = 0.0, phiRR = 0.0, phiLR = 0.0, phiRL = 0.0;
  double phiRef = 0.0;
  double dPhiLR = 0.0, dPhiRL = 0.0;

  double sum() const { return dPhiLR + dPhiRL; }

  double operator[](Branch b) const {
    switch (b) {
    case Branch::LL: return phiLL;
    case Branch::LR: return phiLR;
    case Branch::RL: return phiRL;
    case Branch::RR: return phiRR;
    }
    return phiLL;
  }
};

namespace gravphase {

/// Positions (x1, x2) of both masses in a branch, for a split dx.
struct BranchPositions {
  double x1, x2;
};

inline BranchPositions branchPositions(const ExperimentConfig &cfg, Branch b) {
  const double half = 0.5 * cfg.split();
  const bool l1 = b == Branch::LL || b == Branch::LR;
  const bool l2 = b == Branch::LL || b == Branch::RL;
  return {l1 ? -half : half, cfg.d + (l2 ? -half : half)};
}

inline BranchSeparations pairwiseSeparations(const ExperimentConfig &cfg) {
  const double d = cfg.d, dx = cfg.split();
  return {d, d + dx, d - dx, d};
}

/// G m1 m2 / hbar, the phase rate per unit inverse distance (rad m s^-1).
inline double couplingRate(const ExperimentConfig &cfg) {
  return constants::G * cfg.m1 * cfg.m2 / constants::hbar;
}

inline PhaseSet makePhaseSet(double phiLL, double phiLR, double phiRL, double phiRR) {
  PhaseSet p;
  p.phiLL = phiLL;
  p.phiLR = phiLR;
  p.phiRL = phiRL;
  p.phiRR = phiRR;
  p.phiRef = phiLL;
  p.dPhiLR = phiLR - p.phiRef;
  p.dPhiRL = phiRL - p.phiRef;
  return p;
}

/// Phases accumulated during the hold time only, at the fixed branch separations.
inline PhaseSet staticPhases(const ExperimentConfig &cfg) {
  const double k = couplingRate(cfg) * cfg.tau;
  const auto sep = pairwiseSeparations(cfg);
  return makePhaseSet(k / sep.LL, k / sep.LR, k / sep.RL, k / sep.RR);
}

/// Largest dx/d accepted by smallSplitPhase.
inline constexpr double smallSplitMaxRatio = 0.1;

/**
 * Leading order in dx/d of dPhiLR + dPhiRL, i.e. 2 (G m1 m2 tau / hbar d) (dx/d)^2.
 * Throws RegimeError when dx/d >= 0.1.
 */
inline double smallSplitPhase(const ExperimentConfig &cfg) {
  const double ratio = cfg.split() / cfg.d;
  if (!(ratio < smallSplitMaxRatio))
    throw RegimeError("small-split expansion needs dx/d < 0.1");
  const double phi0 = couplingRate(cfg) * cfg.tau / cfg.d;
  return 2.0 * phi0 * ratio * ratio;
}

inline double superpositionSize(double dBdx, double tauAcc, double m) {
  return gravwitness::superpositionSize(dBdx, tauAcc, m);
}

/// Acceleration of mass 1 toward mass 2 at the closest branch separation.
inline double mutualAcceleration(const ExperimentConfig &cfg) {
  const double r = cfg.d - cfg.split();
  return constants::G * cfg.m2 / (r * r);
}

/**
 * Normalised branch offset during the split: constant acceleration over the
 * first half, constant deceleration over the second. s in [0, 1], returns [0, 1].
 */
inline double splitProfile(double s) {
  if (s <= 0.5) return 2.0 * s * s;
  const double q = 1.0 - s;
  return 1.0 - 2.0 * q * q;
}

/**
 * Phases over split (tauAcc), hold (tau) and recombination (tauAcc). During
 * the split each branch offset follows dx/2 * splitProfile(t / tauAcc), and the
 * recombination retraces it. Each moving stage uses the composite trapezoidal
 * rule with nSteps panels.
 */
inline PhaseSet dynamicPhases(const ExperimentConfig &cfg, int nSteps) {
  if (nSteps < 2) throw std::invalid_argument("dynamicPhases needs nSteps >= 2");
  if (cfg.tauAcc <= 0.0) return staticPhases(cfg);
  const double rate = couplingRate(cfg);
  const double d = cfg.d, dx = cfg.split();

  // Integral of 1/r over one moving stage for a branch whose separation is
  // d + sign * dx * profile(t).
  auto stageIntegral = [&](double sign) {
    const double h = cfg.tauAcc / nSteps;
    double acc = 0.5 * (1.0 / d + 1.0 / (d + sign * dx));
    for (int i = 1; i < nSteps; ++i) {
      const double s = static_cast<double>(i) / nSteps;
      acc += 1.0 / (d + sign * dx * splitProfile(s));
    }
    return acc * h;
  };

  const auto sep = pairwiseSeparations(cfg);
  const double parallel = 2.0 * stageIntegral(0.0);
  // Recombination retraces the split, so both moving stages contribute equally.
  const double wide = 2.0 * stageIntegral(+1.0);
  const double close = 2.0 * stageIntegral(-1.0);

  return makePhaseSet(rate * (parallel + cfg.tau / sep.LL), rate * (wide + cfg.tau / sep.LR),
                      rate * (close + cfg.tau / sep.RL), rate * (parallel + cfg.tau / sep.RR));
}

} // namespace gravphase
} // namespace gravwitness
