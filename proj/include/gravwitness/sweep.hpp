/**
 * @file sweep.hpp
 * @brief Grid sweeps over experiment parameters and constrained maximisation
 *        of the entanglement objective.
 *
 * Grid points are evaluated concurrently but every row is written to its own
 * slot, so the output is independent of the thread count.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "constraints.hpp"
#include "core.hpp"
#include "decoherence.hpp"
#include "gravphase.hpp"
#include "spinstate.hpp"

namespace gravwitness {

enum class Spacing { Linear, Log };
enum class Objective { Negativity, Witness, WitnessOptimized };

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  Spacing spacing = Spacing::Linear;

  bool degenerate() const { return count == 1; }
};

struct SweepConstraints {
  double cpRatioMax = constraints::defaultTargetRatio;
  double requireTauCollOver = 1.0;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  Objective objective = Objective::Negativity;
  SweepConstraints constraints;
  /// Apply the per-mass decoherence budget to the spin state before scoring.
  bool applyDephasing = true;
};

struct SweepRow {
  std::vector<double> values;
  double dPhiLR = std::numeric_limits<double>::quiet_NaN();
  double dPhiRL = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  double cpRatio = std::numeric_limits<double>::quiet_NaN();
  double tauColl = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
  std::string reason;
};

struct SweepResult {
  std::vector<std::string> axisNames;
  std::vector<SweepRow> rows;
};

/// Invalid sweep specification (usage error).
class SweepSpecError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// maximize() found no feasible grid point.
class NoFeasiblePoint : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace sweep {

inline const char *objectiveName(Objective o) {
  switch (o) {
  case Objective::Negativity: return "negativity";
  case Objective::Witness: return "witness";
  case Objective::WitnessOptimized: return "witnessOptimized";
  }
  return "?";
}

inline Objective parseObjective(const std::string &s) {
  if (s == "negativity") return Objective::Negativity;
  if (s == "witness") return Objective::Witness;
  if (s == "witnessOptimized") return Objective::WitnessOptimized;
  throw SweepSpecError("unknown objective '" + s + "'");
}

inline void checkSpec(const SweepSpec &spec) {
  if (spec.axes.empty() || spec.axes.size() > 4) throw SweepSpecError("a sweep needs between 1 and 4 axes");
  for (const auto &a : spec.axes) {
    if (!isConfigField(a.name)) throw SweepSpecError("unknown parameter '" + a.name + "'");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw SweepSpecError("axis '" + a.name + "' bounds must be finite");
    if (a.count == 1) {
      if (a.min != a.max) throw SweepSpecError("single-point axis '" + a.name + "' needs min == max");
    } else {
      if (a.count < 2) throw SweepSpecError("axis '" + a.name + "' needs count >= 2");
      if (!(a.min < a.max)) throw SweepSpecError("axis '" + a.name + "' needs min < max");
    }
    if (a.spacing == Spacing::Log && !(a.min > 0.0)) throw SweepSpecError("log axis '" + a.name + "' needs min > 0");
  }
  for (std::size_t i = 0; i < spec.axes.size(); ++i)
    for (std::size_t j = i + 1; j < spec.axes.size(); ++j)
      if (spec.axes[i].name == spec.axes[j].name) throw SweepSpecError("duplicate axis '" + spec.axes[i].name + "'");
  if (!(spec.constraints.cpRatioMax > 0.0)) throw SweepSpecError("cpRatioMax must be positive");
  if (!(spec.constraints.requireTauCollOver >= 1.0)) throw SweepSpecError("requireTauCollOver must be >= 1");
}

inline double axisValue(const SweepAxis &a, int i) {
  if (a.count == 1) return a.min;
  if (i == a.count - 1) return a.max;
  const double f = static_cast<double>(i) / (a.count - 1);
  if (a.spacing == Spacing::Log) return std::exp(std::log(a.min) + f * (std::log(a.max) - std::log(a.min)));
  return a.min + f * (a.max - a.min);
}

inline std::size_t gridSize(const SweepSpec &spec) {
  std::size_t n = 1;
  for (const auto &a : spec.axes) n *= static_cast<std::size_t>(a.count);
  return n;
}

/// Row-major: the last axis varies fastest.
inline std::vector<double> gridPoint(const SweepSpec &spec, std::size_t index) {
  std::vector<double> v(spec.axes.size());
  for (std::size_t k = spec.axes.size(); k-- > 0;) {
    const auto n = static_cast<std::size_t>(spec.axes[k].count);
    v[k] = axisValue(spec.axes[k], static_cast<int>(index % n));
    index /= n;
  }
  return v;
}

inline std::string joinReasons(const std::vector<std::string> &r) {
  std::string out;
  for (const auto &s : r) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

inline double scoreState(const TwoQubitState &state, Objective o) {
  switch (o) {
  case Objective::Negativity: return spinstate::negativity(state);
  case Objective::Witness: return spinstate::witnessCorrelators(state, {}).w;
  case Objective::WitnessOptimized: return spinstate::optimizeWitness(state).result.w;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct PointEvaluation {
  SweepRow row;
  std::optional<ExperimentConfig> config; // validated config, when valid
};

inline PointEvaluation evaluatePoint(const SweepSpec &spec, const ExperimentConfig &base,
                                     const std::vector<double> &values) {
  PointEvaluation ev;
  ev.row.values = values;
  ExperimentConfig cfg = base;
  for (std::size_t k = 0; k < spec.axes.size(); ++k) setConfigField(cfg, spec.axes[k].name, values[k]);

  try {
    cfg = validate(cfg).config;
  } catch (const ConfigError &e) {
    ev.row.reason = "invalid config: " + joinReasons(e.violations());
    return ev;
  }
  ev.config = cfg;

  const PhaseSet ph = gravphase::staticPhases(cfg);
  ev.row.dPhiLR = ph.dPhiLR;
  ev.row.dPhiRL = ph.dPhiRL;

  const ConstraintReport rep =
      constraints::feasibilityReport(cfg, spec.constraints.cpRatioMax, 0.0, spec.constraints.requireTauCollOver);
  ev.row.cpRatio = rep.cpRatio;
  ev.row.tauColl = rep.tauColl;
  ev.row.feasible = rep.feasible;
  ev.row.reason = joinReasons(rep.reasons);

  TwoQubitState state = spinstate::entangledState(ph.dPhiLR, ph.dPhiRL);
  if (spec.applyDephasing) {
    try {
      const double p = decoherence::dephasingBudget(cfg).perMassDephasing;
      state = spinstate::applyDephasing(state, p, p);
    } catch (const RegimeError &) {
      // Without a valid budget the point is already infeasible; leave objective NaN.
      return ev;
    }
  }
  ev.row.objective = scoreState(state, spec.objective);
  return ev;
}

/// Worker count: explicit value, else hardware concurrency, at least 1.
inline unsigned resolveThreads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline SweepResult runSweep(const SweepSpec &spec, const ExperimentConfig &base, unsigned threads = 0) {
  checkSpec(spec);
  SweepResult result;
  for (const auto &a : spec.axes) result.axisNames.push_back(a.name);
  const std::size_t n = gridSize(spec);
  if (n == 0) throw SweepSpecError("empty grid");
  result.rows.resize(n);

  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(resolveThreads(threads), n));
  auto work = [&](unsigned tid) {
    for (std::size_t i = tid; i < n; i += nt) result.rows[i] = evaluatePoint(spec, base, gridPoint(spec, i)).row;
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto &th : pool) th.join();
  }
  return result;
}

inline std::string formatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csvField(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string toCsv(const SweepResult &r) {
  std::string out;
  for (const auto &name : r.axisNames) out += name + ",";
  out += "dPhiLR,dPhiRL,objective,cpRatio,tauColl,feasible,reason\n";
  for (const auto &row : r.rows) {
    for (double v : row.values) out += formatNumber(v) + ",";
    out += formatNumber(row.dPhiLR) + "," + formatNumber(row.dPhiRL) + "," + formatNumber(row.objective) + "," +
           formatNumber(row.cpRatio) + "," + formatNumber(row.tauColl) + "," + (row.feasible ? "true" : "false") +
           "," + csvField(row.reason) + "\n";
  }
  return out;
}

struct MaximizeResult {
  ExperimentConfig bestConfig;
  SweepRow bestRow;
  SweepResult grid;
};

struct MaximizeOptions {
  int rounds = 6;
  int boundaryIterations = 60;
  int goldenIterations = 80;
  unsigned threads = 0;
};

/**
 * Best feasible grid point, refined by coordinate descent. Along each axis the
 * feasible interval around the incumbent is located by bisection (feasibility
 * is interval-like in every parameter), then searched by golden section.
 * Candidates replace the incumbent only when feasible and strictly better.
 */
inline MaximizeResult maximize(const SweepSpec &spec, const ExperimentConfig &base, const MaximizeOptions &opt = {}) {
  MaximizeResult out;
  out.grid = runSweep(spec, base, opt.threads);

  std::optional<std::size_t> bestIdx;
  for (std::size_t i = 0; i < out.grid.rows.size(); ++i) {
    const auto &row = out.grid.rows[i];
    if (!row.feasible || std::isnan(row.objective)) continue;
    if (!bestIdx || row.objective > out.grid.rows[*bestIdx].objective) bestIdx = i;
  }
  if (!bestIdx) throw NoFeasiblePoint("no feasible grid point");

  std::vector<double> x = out.grid.rows[*bestIdx].values;
  PointEvaluation best = evaluatePoint(spec, base, x);

  auto usable = [](const PointEvaluation &e) { return e.row.feasible && !std::isnan(e.row.objective); };

  for (int round = 0; round < opt.rounds; ++round) {
    bool improved = false;
    for (std::size_t k = 0; k < spec.axes.size(); ++k) {
      const SweepAxis &axis = spec.axes[k];
      if (axis.degenerate()) continue;
      const bool logAxis = axis.spacing == Spacing::Log;
      auto toU = [&](double v) { return logAxis ? std::log(v) : v; };
      auto fromU = [&](double u) { return logAxis ? std::exp(u) : u; };
      auto evalAt = [&](double u) {
        std::vector<double> y = x;
        y[k] = std::clamp(fromU(u), axis.min, axis.max);
        return evaluatePoint(spec, base, y);
      };

      const double uMin = toU(axis.min), uMax = toU(axis.max), u0 = toU(x[k]);
      auto boundary = [&](double uFar) {
        if (usable(evalAt(uFar))) return uFar;
        double inside = u0, outside = uFar;
        for (int it = 0; it < opt.boundaryIterations; ++it) {
          const double mid = 0.5 * (inside + outside);
          (usable(evalAt(mid)) ? inside : outside) = mid;
        }
        return inside;
      };
      const double lo = boundary(uMin);
      const double hi = boundary(uMax);

      const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = lo, b = hi;
      double c = b - invPhi * (b - a), d = a + invPhi * (b - a);
      auto score = [&](double u) {
        const auto e = evalAt(u);
        return usable(e) ? e.row.objective : -std::numeric_limits<double>::infinity();
      };
      double fc = score(c), fd = score(d);
      for (int it = 0; it < opt.goldenIterations; ++it) {
        if (fc >= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - invPhi * (b - a);
          fc = score(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + invPhi * (b - a);
          fd = score(d);
        }
      }

      for (double u : {0.5 * (a + b), lo, hi}) {
        PointEvaluation cand = evalAt(u);
        if (usable(cand) && cand.row.objective > best.row.objective) {
          best = std::move(cand);
          x = best.row.values;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }

  out.bestConfig = *best.config;
  out.bestRow = best.row;
  return out;
}

} // namespace sweep
} // namespace gravwitness
