/**
 * @file decoherence.hpp
 * @brief Environmental decoherence budget of the spatial superposition.
 *
 * Collisions with residual gas are taken in the saturated regime (every
 * collision resolves the path), thermal photons in the long-wavelength
 * regime where the localisation rate grows as dx^2.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "core.hpp"

namespace gravwitness {

struct ThermalRates {
  double gammaSc = 0.0;
  double gammaEm = 0.0;
  double gammaAbs = 0.0;

  double total() const { return gammaSc + gammaEm + gammaAbs; }
};

struct DecoherenceRates {
  double gammaColl = 0.0;
  double gammaSc = 0.0;
  double gammaEm = 0.0;
  double gammaAbs = 0.0;
  double tauColl = std::numeric_limits<double>::infinity();
  double experimentTime = 0.0;
  /// 1 - exp(-Gamma_total T), optionally compounded with a spin-bath loss.
  double totalDephasing = 0.0;
  /// Phase-flip probability per mass whose coherence factor 1 - 2p matches totalDephasing.
  double perMassDephasing = 0.0;

  double gammaTotal() const { return gammaColl + gammaSc + gammaEm + gammaAbs; }
};

namespace decoherence {

/// Minimum dx / lambda_dB for the saturated collisional model.
inline constexpr double saturatedRegimeFactor = 10.0;
/// Maximum dx / lambda_photon for the long-wavelength thermal model.
inline constexpr double longWavelengthFactor = 0.1;
inline constexpr double zeta9 = 1.0020083928260822;

/// Ideal-gas number density P / (kB T).
inline double gasDensity(double pressure, double tEnv) {
  if (!(pressure > 0.0) || !(tEnv > 0.0)) throw std::invalid_argument("gasDensity needs P > 0 and T > 0");
  return pressure / (constants::kB * tEnv);
}

/// Thermal de Broglie wavelength h / sqrt(2 pi m kB T) of a gas particle.
inline double gasThermalWavelength(double mGas, double tEnv) {
  return constants::h / std::sqrt(2.0 * pi * mGas * constants::kB * tEnv);
}

/// Mean thermal speed sqrt(8 kB T / (pi m)).
inline double meanSpeed(double mGas, double tEnv) { return std::sqrt(8.0 * constants::kB * tEnv / (pi * mGas)); }

/// Saturated-regime collision rate n v sigma with the geometric cross-section pi R^2.
inline double collisionalRate(const ExperimentConfig &cfg) {
  if (cfg.pressure < 0.0) throw std::invalid_argument("pressure must be >= 0");
  if (cfg.pressure == 0.0) return 0.0;
  if (!(cfg.tEnv > 0.0) || !(cfg.mGas > 0.0))
    throw std::invalid_argument("collisional model needs tEnv > 0 and mGas > 0");
  const double lambda = gasThermalWavelength(cfg.mGas, cfg.tEnv);
  if (!(cfg.split() >= saturatedRegimeFactor * lambda))
    throw RegimeError("collisional decoherence: dx is not much larger than the gas de Broglie wavelength");
  const double sigma = pi * cfg.radius * cfg.radius;
  return gasDensity(cfg.pressure, cfg.tEnv) * meanSpeed(cfg.mGas, cfg.tEnv) * sigma;
}

inline double collisionalTime(const ExperimentConfig &cfg) {
  const double g = collisionalRate(cfg);
  return g > 0.0 ? 1.0 / g : std::numeric_limits<double>::infinity();
}

/// Dominant thermal photon wavelength 2 pi hbar c / (kB T).
inline double thermalPhotonWavelength(double temperature) {
  return 2.0 * pi * constants::hbar * constants::c / (constants::kB * temperature);
}

/**
 * Long-wavelength localisation rates Lambda * dx^2 for blackbody scattering,
 * emission and absorption by a dielectric sphere:
 *   Lambda_sc    = 8! 8 zeta(9) c R^6 / (9 pi) (kB T_env / hbar c)^9 Re[(e-1)/(e+2)]^2
 *   Lambda_e(a)  = 16 pi^5 c R^3 / 189 (kB T / hbar c)^6 Im[(e-1)/(e+2)]
 * (O. Romero-Isart, Phys. Rev. A 84, 052121 (2011); M. Schlosshauer,
 * Decoherence and the Quantum-to-Classical Transition, ch. 3).
 * Only the real permittivity is configurable, so Im[(e-1)/(e+2)] is bounded
 * by (e-1)/(e+2); emission and absorption rates are therefore upper bounds.
 */
inline ThermalRates thermalRates(const ExperimentConfig &cfg) {
  if (cfg.tEnv < 0.0 || cfg.tInt < 0.0) throw std::invalid_argument("temperatures must be >= 0");
  const double tMax = std::max(cfg.tEnv, cfg.tInt);
  if (tMax == 0.0) return {};
  const double dx = cfg.split();
  if (!(dx <= longWavelengthFactor * thermalPhotonWavelength(tMax)))
    throw RegimeError("thermal decoherence: dx is not much smaller than the thermal photon wavelength");

  const double f = (cfg.epsRel - 1.0) / (cfg.epsRel + 2.0);
  const double R = cfg.radius;
  const double c = constants::c;
  const double invLen = constants::kB / (constants::hbar * c);
  const double fact8 = 40320.0;

  const double xEnv = invLen * cfg.tEnv;
  const double xInt = invLen * cfg.tInt;
  const double lambdaSc = fact8 * 8.0 * zeta9 * c * std::pow(R, 6) / (9.0 * pi) * std::pow(xEnv, 9) * f * f;
  const double pre = 16.0 * std::pow(pi, 5) * c * R * R * R / 189.0;
  const double lambdaEm = pre * std::pow(xInt, 6) * f;
  const double lambdaAbs = pre * std::pow(xEnv, 6) * f;

  const double dx2 = dx * dx;
  return {lambdaSc * dx2, lambdaEm * dx2, lambdaAbs * dx2};
}

/**
 * Aggregates all channels over tau + 2 tauAcc. spinBathDephasing is an
 * additional probability of losing coherence (e.g. residual electron-spin
 * dephasing) compounded with the environmental one.
 */
inline DecoherenceRates dephasingBudget(const ExperimentConfig &cfg, double spinBathDephasing = 0.0) {
  if (!(spinBathDephasing >= 0.0 && spinBathDephasing <= 1.0))
    throw std::invalid_argument("spinBathDephasing must lie in [0, 1]");
  DecoherenceRates r;
  r.gammaColl = collisionalRate(cfg);
  r.tauColl = r.gammaColl > 0.0 ? 1.0 / r.gammaColl : std::numeric_limits<double>::infinity();
  const ThermalRates th = thermalRates(cfg);
  r.gammaSc = th.gammaSc;
  r.gammaEm = th.gammaEm;
  r.gammaAbs = th.gammaAbs;
  r.experimentTime = cfg.experimentTime();
  const double coherence = std::exp(-r.gammaTotal() * r.experimentTime) * (1.0 - spinBathDephasing);
  r.totalDephasing = 1.0 - coherence;
  r.perMassDephasing = 0.5 * r.totalDephasing;
  return r;
}

} // namespace decoherence
} // namespace gravwitness
