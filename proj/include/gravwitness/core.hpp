/**
 * @file core.hpp
 * @brief Physical constants, experiment configuration and validation.
 *
 * Every quantity is SI. Constants are the CODATA-2018 recommended values.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gravwitness {

inline constexpr double pi = std::numbers::pi;

/// CODATA-2018 values.
namespace constants {
inline constexpr double G = 6.67430e-11;           // m^3 kg^-1 s^-2
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double h = 6.62607015e-34;        // J s
inline constexpr double c = 299792458.0;           // m s^-1
inline constexpr double kB = 1.380649e-23;         // J K^-1
inline constexpr double muB = 9.2740100783e-24;    // J T^-1
inline constexpr double gE = 2.00231930436256;     // |g_e|
inline constexpr double eps0 = 8.8541878128e-12;   // F m^-1
inline constexpr double mu0 = 1.25663706212e-6;    // H m^-1
inline constexpr double massHelium4 = 6.6446573357e-27; // kg
} // namespace constants

/// Aggregate view of the constants, for callers that want them as a value.
struct PhysicalConstants {
  double G = constants::G;
  double hbar = constants::hbar;
  double c = constants::c;
  double kB = constants::kB;
  double muB = constants::muB;
  double gE = constants::gE;
  double eps0 = constants::eps0;
  double mu0 = constants::mu0;
};

/**
 * All experimental parameters. dx is optional: when absent it is derived from
 * the Stern-Gerlach kinematics (dBdx, tauAcc, m1) by validate().
 */
struct ExperimentConfig {
  double m1 = 0.0;
  double m2 = 0.0;
  double d = 0.0;
  std::optional<double> dx;
  double tau = 0.0;
  double tauAcc = 0.0;
  double dBdx = 0.0;
  double radius = 0.0;
  double epsRel = 1.0;
  double pressure = 0.0;
  double tEnv = 0.0;
  double tInt = 0.0;
  double chiM = 0.0;
  double mGas = constants::massHelium4;

  /// Split size; only meaningful on a validated config.
  double split() const { return dx.value_or(0.0); }
  /// Total duration of split, hold and recombination.
  double experimentTime() const { return tau + 2.0 * tauAcc; }

  bool operator==(const ExperimentConfig &) const = default;
};

/// Field names in serialization order.
inline constexpr std::string_view configFieldNames[] = {
    "m1",       "m2",     "d",    "dx",   "tau",  "tauAcc", "dBdx",
    "radius",   "epsRel", "pressure", "tEnv", "tInt", "chiM",  "mGas"};

inline bool isConfigField(std::string_view name) {
  for (auto f : configFieldNames)
    if (f == name) return true;
  return false;
}

/// Mutable access by field name; nullptr for dx (optional) and unknown names.
inline double *configField(ExperimentConfig &cfg, std::string_view name) {
  if (name == "m1") return &cfg.m1;
  if (name == "m2") return &cfg.m2;
  if (name == "d") return &cfg.d;
  if (name == "tau") return &cfg.tau;
  if (name == "tauAcc") return &cfg.tauAcc;
  if (name == "dBdx") return &cfg.dBdx;
  if (name == "radius") return &cfg.radius;
  if (name == "epsRel") return &cfg.epsRel;
  if (name == "pressure") return &cfg.pressure;
  if (name == "tEnv") return &cfg.tEnv;
  if (name == "tInt") return &cfg.tInt;
  if (name == "chiM") return &cfg.chiM;
  if (name == "mGas") return &cfg.mGas;
  return nullptr;
}

/// Sets any field (including dx) by name. Throws std::invalid_argument for unknown names.
inline void setConfigField(ExperimentConfig &cfg, std::string_view name, double value) {
  if (name == "dx") {
    cfg.dx = value;
    return;
  }
  double *slot = configField(cfg, name);
  if (!slot) throw std::invalid_argument("unknown config field '" + std::string(name) + "'");
  *slot = value;
}

inline std::optional<double> getConfigField(const ExperimentConfig &cfg, std::string_view name) {
  if (name == "dx") return cfg.dx;
  double *slot = configField(const_cast<ExperimentConfig &>(cfg), name);
  if (!slot) throw std::invalid_argument("unknown config field '" + std::string(name) + "'");
  return *slot;
}

/// Thrown by validate(); carries one message per violated invariant.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string> &violations() const noexcept { return violations_; }

private:
  static std::string join(const std::vector<std::string> &v) {
    std::string out = "invalid config:";
    for (const auto &s : v) out += " [" + s + "]";
    return out;
  }
  std::vector<std::string> violations_;
};

/// Thrown when a model is asked to run outside the regime it is valid in.
class RegimeError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Stern-Gerlach split after accelerating for tauAcc/2 and decelerating for tauAcc/2.
inline double superpositionSize(double dBdx, double tauAcc, double m) {
  return 0.5 * (constants::gE * constants::muB * dBdx / m) * tauAcc * tauAcc;
}

struct ValidatedConfig {
  ExperimentConfig config;
  std::vector<std::string> warnings;

  bool operator==(const ValidatedConfig &) const = default;
};

/// Relative mismatch above which an explicit dx is flagged against the kinematic one.
inline constexpr double dxConsistencyTolerance = 0.01;

/**
 * Checks every invariant and fills in dx when absent. Throws ConfigError
 * listing all violations at once.
 */
inline ValidatedConfig validate(const ExperimentConfig &in) {
  ValidatedConfig out{in, {}};
  ExperimentConfig &cfg = out.config;
  std::vector<std::string> bad;

  for (auto name : configFieldNames) {
    auto v = getConfigField(cfg, name);
    if (v && !std::isfinite(*v)) bad.push_back(std::string(name) + " must be finite");
  }

  auto positive = [&](double v, const char *name) {
    if (!(v > 0.0)) bad.push_back(std::string(name) + " > 0 violated");
  };
  positive(cfg.m1, "m1");
  positive(cfg.m2, "m2");
  positive(cfg.d, "d");
  positive(cfg.tau, "tau");
  positive(cfg.tauAcc, "tauAcc");
  positive(cfg.radius, "radius");
  positive(cfg.pressure, "pressure");
  positive(cfg.tEnv, "tEnv");
  positive(cfg.mGas, "mGas");
  if (!(cfg.epsRel > 1.0)) bad.push_back("epsRel > 1 violated");
  if (!(cfg.dBdx >= 0.0)) bad.push_back("dBdx >= 0 violated");
  if (!(cfg.tInt >= 0.0)) bad.push_back("tInt >= 0 violated");

  std::optional<double> derived;
  if (cfg.dBdx > 0.0 && cfg.tauAcc > 0.0 && cfg.m1 > 0.0)
    derived = superpositionSize(cfg.dBdx, cfg.tauAcc, cfg.m1);

  if (!cfg.dx) {
    if (derived)
      cfg.dx = derived;
    else
      bad.push_back("dx absent and not derivable (needs dBdx, tauAcc, m1 > 0)");
  } else if (derived && std::isfinite(*cfg.dx) && *cfg.dx > 0.0) {
    double rel = std::abs(*cfg.dx - *derived) / *derived;
    if (rel > dxConsistencyTolerance) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "explicit dx=%.6g m differs from kinematic dx=%.6g m by %.1f%%; using explicit",
                    *cfg.dx, *derived, 100.0 * rel);
      out.warnings.emplace_back(buf);
    }
  }

  if (cfg.dx) {
    double dx = *cfg.dx;
    if (!(dx > 0.0)) bad.push_back("dx > 0 violated");
    if (!(dx < cfg.d)) bad.push_back("dx < d violated");
    if (!(cfg.d - dx > 2.0 * cfg.radius)) bad.push_back("d - dx > 2*radius violated");
  }

  if (!bad.empty()) throw ConfigError(std::move(bad));
  return out;
}

/// The explicit scenario: 1e-14 kg diamonds, 450 um apart, 250 um split, 2.5 s hold.
inline ExperimentConfig paperDefaults() {
  ExperimentConfig cfg;
  cfg.m1 = 1e-14;
  cfg.m2 = 1e-14;
  cfg.d = 450e-6;
  cfg.dx = 250e-6;
  cfg.tau = 2.5;
  cfg.tauAcc = 0.5;
  cfg.dBdx = 1e6;
  cfg.radius = 1e-6;
  cfg.epsRel = 5.7;
  cfg.pressure = 1e-15;
  cfg.tEnv = 0.15;
  cfg.tInt = 0.15;
  cfg.chiM = 1e-5;
  cfg.mGas = constants::massHelium4;
  return cfg;
}

} // namespace gravwitness
