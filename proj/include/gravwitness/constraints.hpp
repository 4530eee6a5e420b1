/**
 * @file constraints.hpp
 * @brief Non-gravitational backgrounds (Casimir-Polder, induced magnetic
 *        dipoles) relative to gravity, and the aggregate feasibility verdict.
 */
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "decoherence.hpp"

namespace gravwitness {

struct ConstraintReport {
  double vCP = 0.0;
  double vGrav = 0.0;
  double cpRatio = 0.0;
  double magRatio = 0.0;
  double minSeparation = std::numeric_limits<double>::quiet_NaN();
  double tauColl = std::numeric_limits<double>::quiet_NaN();
  double experimentTime = 0.0;
  bool feasible = true;
  std::vector<std::string> reasons;
};

/// Thrown by minSeparation when the target ratio is not bracketed.
class BracketError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace constraints {

/// Default bound on background / gravity ratios ("a tenth").
inline constexpr double defaultTargetRatio = 0.1;
/// Upper end of the separation bracket for minSeparation, m.
inline constexpr double separationBracketMax = 1.0;

inline double clausiusMossotti(double epsRel) { return (epsRel - 1.0) / (epsRel + 2.0); }

/**
 * Retarded Casimir-Polder energy between two dielectric spheres,
 * 23 hbar c R^6 / (4 pi r^7) ((eps-1)/(eps+2))^2, with the SI polarisabilities
 * 4 pi eps0 R^3 (eps-1)/(eps+2) absorbing the 1/(4 pi eps0)^2 prefactor. Magnitude.
 */
inline double casimirPolderPotential(const ExperimentConfig &cfg, double r) {
  if (!(r > 2.0 * cfg.radius)) throw std::invalid_argument("spheres overlap: r must exceed 2*radius");
  const double f = clausiusMossotti(cfg.epsRel);
  const double R3 = cfg.radius * cfg.radius * cfg.radius;
  return 23.0 * constants::hbar * constants::c * R3 * R3 / (4.0 * pi * std::pow(r, 7)) * f * f;
}

/// G m1 m2 / r, magnitude.
inline double gravitationalPotential(const ExperimentConfig &cfg, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("separation must be positive");
  return constants::G * cfg.m1 * cfg.m2 / r;
}

inline double cpRatioAt(const ExperimentConfig &cfg, double r) {
  return casimirPolderPotential(cfg, r) / gravitationalPotential(cfg, r);
}

/// Casimir-Polder over gravity at the closest branch separation d - dx.
inline double cpRatio(const ExperimentConfig &cfg) { return cpRatioAt(cfg, cfg.d - cfg.split()); }

/**
 * Separation at which cpRatioAt equals targetRatio, by bisection on
 * (2 radius, 1 m]. The ratio falls as r^-6, so the root is unique; the
 * bracket is halved until it stops shrinking in floating point.
 */
inline double minSeparation(const ExperimentConfig &cfg, double targetRatio) {
  if (!(targetRatio > 0.0)) throw std::invalid_argument("targetRatio must be positive");
  double lo = 2.0 * cfg.radius * (1.0 + 1e-12);
  double hi = separationBracketMax;
  if (!(hi > lo)) throw BracketError("radius too large for the separation bracket");
  const double fLo = cpRatioAt(cfg, lo) - targetRatio;
  const double fHi = cpRatioAt(cfg, hi) - targetRatio;
  if (fLo < 0.0 || fHi > 0.0) throw BracketError("cpRatio does not cross targetRatio in (2 radius, 1 m]");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cpRatioAt(cfg, mid) > targetRatio)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/**
 * Induced-dipole model: each sphere acquires mu = chiM (4/3) pi R^3 B / mu0 in
 * the residual field B; the coaxial dipole-dipole energy at r = d - dx is
 * mu0 mu^2 / (4 pi r^3). Returns that energy over gravity; scales as chiM^2.
 */
inline double magneticInteractionRatio(const ExperimentConfig &cfg, double bResidual) {
  if (!(bResidual >= 0.0)) throw std::invalid_argument("bResidual must be >= 0");
  const double r = cfg.d - cfg.split();
  const double volume = 4.0 / 3.0 * pi * cfg.radius * cfg.radius * cfg.radius;
  const double moment = cfg.chiM * volume * bResidual / constants::mu0;
  const double energy = constants::mu0 * moment * moment / (4.0 * pi * r * r * r);
  return energy / gravitationalPotential(cfg, r);
}

/**
 * Evaluates every background and decoherence check on a validated config.
 * The collisional time must exceed tauCollFactor times the experiment time.
 */
inline ConstraintReport feasibilityReport(const ExperimentConfig &cfg, double targetRatio = defaultTargetRatio,
                                          double bResidual = 0.0, double tauCollFactor = 1.0) {
  ConstraintReport rep;
  const double r = cfg.d - cfg.split();
  rep.vCP = casimirPolderPotential(cfg, r);
  rep.vGrav = gravitationalPotential(cfg, r);
  rep.cpRatio = rep.vCP / rep.vGrav;
  rep.magRatio = magneticInteractionRatio(cfg, bResidual);
  try {
    rep.minSeparation = minSeparation(cfg, targetRatio);
  } catch (const BracketError &) {
  }
  rep.experimentTime = cfg.experimentTime();

  if (rep.cpRatio > targetRatio) rep.reasons.emplace_back("cpRatio > targetRatio");
  if (rep.magRatio > targetRatio) rep.reasons.emplace_back("magRatio > targetRatio");
  try {
    const DecoherenceRates dec = decoherence::dephasingBudget(cfg);
    rep.tauColl = dec.tauColl;
    if (rep.tauColl < tauCollFactor * rep.experimentTime) rep.reasons.emplace_back("tauColl < required coherence time");
    const double thermal = (dec.gammaSc + dec.gammaEm + dec.gammaAbs) * rep.experimentTime;
    if (thermal > 1.0) rep.reasons.emplace_back("thermal decoherence exceeds experiment time");
  } catch (const RegimeError &e) {
    rep.reasons.emplace_back(std::string("decoherence model out of regime: ") + e.what());
  }
  rep.feasible = rep.reasons.empty();
  return rep;
}

} // namespace constraints
} // namespace gravwitness
