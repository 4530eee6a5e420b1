// Command-line front end: phases, states, witnesses, constraints, decoherence,
// the field-model demonstration and parameter sweeps.
//
// Exit codes: 0 success, 1 computation or infeasibility error, 2 usage or config error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gravwitness/gravwitness.hpp"

namespace gw = gravwitness;
using gw::io::Record;
using gw::io::Report;
using gw::io::Table;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string configPath;
  bool paperDefaults = false;
  std::string format = "json";
  std::vector<std::string> overrides;
  std::string outPath;

  // phases
  int steps = 10000;
  // state / witness
  bool dephase = false;
  // constraints
  double targetRatio = gw::constraints::defaultTargetRatio;
  double bResidual = 0.0;
  double tauCollFactor = 1.0;
  // decoherence
  double spinBath = 0.0;
  // field
  std::vector<int> modeCounts = {250, 500, 1000, 2000, 4000};
  double kCutTimesR = 1e3;
  double kMin = 1.0;
  double kMaxOverKCut = 50.0;
  // sweep
  std::vector<std::string> axes;
  std::string objective = "negativity";
  double cpRatioMax = gw::constraints::defaultTargetRatio;
  bool noDephasing = false;
  bool maximize = false;
};

gw::ValidatedConfig loadConfig(const Options &o) {
  if (o.paperDefaults == !o.configPath.empty())
    throw UsageError("give exactly one of --config <path> or --paper-defaults");
  gw::ExperimentConfig cfg = o.paperDefaults ? gw::paperDefaults() : gw::io::loadConfig(o.configPath);
  for (const auto &s : o.overrides) gw::io::applyOverride(cfg, s);
  gw::ValidatedConfig v = gw::validate(cfg);
  for (const auto &w : v.warnings) std::cerr << "warning: " << w << "\n";
  return v;
}

Record phaseRecord(const gw::PhaseSet &p, const std::string &prefix) {
  Record r;
  r.add(prefix + "phiLL", p.phiLL)
      .add(prefix + "phiLR", p.phiLR)
      .add(prefix + "phiRL", p.phiRL)
      .add(prefix + "phiRR", p.phiRR)
      .add(prefix + "dPhiLR", p.dPhiLR)
      .add(prefix + "dPhiRL", p.dPhiRL)
      .add(prefix + "dPhiSum", p.sum());
  return r;
}

Report cmdPhases(const Options &o) {
  const auto cfg = loadConfig(o).config;
  const auto sep = gw::gravphase::pairwiseSeparations(cfg);
  Record geom;
  geom.add("sepLL", sep.LL).add("sepLR", sep.LR).add("sepRL", sep.RL).add("sepRR", sep.RR);
  geom.add("dx", cfg.split());
  geom.add("dxKinematic", cfg.dBdx > 0 ? gw::superpositionSize(cfg.dBdx, cfg.tauAcc, cfg.m1)
                                        : std::numeric_limits<double>::quiet_NaN());
  geom.add("mutualAcceleration", gw::gravphase::mutualAcceleration(cfg));
  double small = std::numeric_limits<double>::quiet_NaN();
  try {
    small = gw::gravphase::smallSplitPhase(cfg);
  } catch (const gw::RegimeError &) {
  }
  geom.add("smallSplitPhase", small);

  Report rep;
  rep.add("geometry", geom);
  rep.add("static", phaseRecord(gw::gravphase::staticPhases(cfg), ""));
  Record dyn = phaseRecord(gw::gravphase::dynamicPhases(cfg, o.steps), "");
  dyn.add("steps", static_cast<long long>(o.steps));
  rep.add("dynamic", dyn);
  return rep;
}

gw::TwoQubitState spinState(const gw::ExperimentConfig &cfg, bool dephase, gw::PhaseSet &ph) {
  ph = gw::gravphase::staticPhases(cfg);
  auto state = gw::spinstate::entangledState(ph.dPhiLR, ph.dPhiRL);
  if (dephase) {
    const double p = gw::decoherence::dephasingBudget(cfg).perMassDephasing;
    state = gw::spinstate::applyDephasing(state, p, p);
  }
  return state;
}

Report cmdState(const Options &o) {
  const auto cfg = loadConfig(o).config;
  gw::PhaseSet ph;
  const auto state = spinState(cfg, o.dephase, ph);
  Record summary;
  summary.add("dPhiLR", ph.dPhiLR)
      .add("dPhiRL", ph.dPhiRL)
      .add("dephased", o.dephase)
      .add("purity", state.purity())
      .add("negativity", gw::spinstate::negativity(state));
  Table rho;
  rho.columns = {"row", "col", "re", "im"};
  const char *labels[] = {"uu", "ud", "du", "dd"};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      rho.rows.push_back({std::string(labels[a]), std::string(labels[b]), state(a, b).real(), state(a, b).imag()});
  Report rep;
  rep.add("summary", summary).add("rho", rho);
  return rep;
}

Report cmdWitness(const Options &o) {
  const auto cfg = loadConfig(o).config;
  gw::PhaseSet ph;
  const auto state = spinState(cfg, o.dephase, ph);
  const auto w = gw::spinstate::witness(state);
  const auto opt = gw::spinstate::optimizeWitness(state);
  const auto feas = gw::constraints::feasibilityReport(cfg);
  Record r;
  r.add("dPhiLR", ph.dPhiLR)
      .add("dPhiRL", ph.dPhiRL)
      .add("dephased", o.dephase)
      .add("expXZ", w.expXZ)
      .add("expYZ", w.expYZ)
      .add("w", w.w)
      .add("wOptimized", opt.result.w)
      .add("thetaZ1", opt.settings.thetaZ1)
      .add("thetaZ2", opt.settings.thetaZ2)
      .add("negativity", w.negativity)
      .add("entangledByNegativity", w.entangledByNegativity)
      .add("feasible", feas.feasible)
      .add("cpRatio", feas.cpRatio)
      .add("tauColl", feas.tauColl)
      .add("reasons", gw::sweep::joinReasons(feas.reasons));
  Report rep;
  rep.add("", r);
  return rep;
}

Report cmdConstraints(const Options &o, int &exitCode) {
  const auto cfg = loadConfig(o).config;
  const auto c = gw::constraints::feasibilityReport(cfg, o.targetRatio, o.bResidual, o.tauCollFactor);
  Record r;
  r.add("vCP", c.vCP)
      .add("vGrav", c.vGrav)
      .add("cpRatio", c.cpRatio)
      .add("magRatio", c.magRatio)
      .add("minSeparation", c.minSeparation)
      .add("tauColl", c.tauColl)
      .add("experimentTime", c.experimentTime)
      .add("feasible", c.feasible)
      .add("reasons", gw::sweep::joinReasons(c.reasons));
  exitCode = c.feasible ? 0 : 1;
  Report rep;
  rep.add("", r);
  return rep;
}

Report cmdDecoherence(const Options &o) {
  const auto cfg = loadConfig(o).config;
  const auto d = gw::decoherence::dephasingBudget(cfg, o.spinBath);
  Record r;
  r.add("gasDensity", gw::decoherence::gasDensity(cfg.pressure, cfg.tEnv))
      .add("gammaColl", d.gammaColl)
      .add("tauColl", d.tauColl)
      .add("gammaSc", d.gammaSc)
      .add("gammaEm", d.gammaEm)
      .add("gammaAbs", d.gammaAbs)
      .add("experimentTime", d.experimentTime)
      .add("thermalDephasing", 1.0 - std::exp(-(d.gammaSc + d.gammaEm + d.gammaAbs) * d.experimentTime))
      .add("totalDephasing", d.totalDephasing)
      .add("perMassDephasing", d.perMassDephasing);
  Report rep;
  rep.add("", r);
  return rep;
}

Report cmdField(const Options &o) {
  const auto cfg = loadConfig(o).config;
  const auto sep = gw::gravphase::pairwiseSeparations(cfg);
  const double rMin = sep.RL;
  const double kCut = o.kCutTimesR / rMin;
  const double t = cfg.tau;

  Table conv;
  conv.columns = {"nModes", "branch", "separation", "phase", "newtonian", "ratio", "dampedClosedForm"};
  for (int n : o.modeCounts) {
    const auto modes = gw::gravfield::buildModes(o.kMin, o.kMaxOverKCut * kCut, n, kCut);
    for (gw::Branch b : {gw::Branch::LL, gw::Branch::LR, gw::Branch::RL}) {
      const double r = sep[b];
      const double phase = gw::gravfield::branchPhase(modes, cfg, r, t);
      const double newton = gw::gravphase::couplingRate(cfg) * t / r;
      const double closed =
          gw::gravphase::couplingRate(cfg) * t * (2.0 / gw::pi) * gw::gravfield::dampedSincIntegral(r, kCut);
      conv.rows.push_back({static_cast<long long>(n), std::string(gw::branchName(b)), r, phase, newton,
                           phase / newton, closed});
    }
  }

  const int nFinal = o.modeCounts.empty() ? 2000 : o.modeCounts.back();
  const auto modes = gw::gravfield::buildModes(o.kMin, o.kMaxOverKCut * kCut, nFinal, kCut);
  const auto branches = gw::gravfield::allDisplacements(modes, cfg, t);
  const auto reduced = gw::gravfield::reducedMassState(branches);
  const auto classical = gw::gravfield::classicalize(reduced);
  const auto ph = gw::gravphase::staticPhases(cfg);
  const auto spin = gw::spinstate::entangledState(ph.dPhiLR, ph.dPhiRL);

  double minOverlap = 1.0, maxAlpha = 0.0;
  for (int a = 0; a < 4; ++a) {
    maxAlpha = std::max(maxAlpha, branches[a].maxAmplitude());
    for (int b = 0; b < 4; ++b)
      minOverlap = std::min(minOverlap, std::abs(gw::gravfield::branchOverlap(branches[a], branches[b])));
  }

  Record cls;
  cls.add("nModes", static_cast<long long>(nFinal))
      .add("kCut", kCut)
      .add("negativitySpinModel", gw::spinstate::negativity(spin))
      .add("negativityFieldModel", gw::spinstate::negativity(reduced))
      .add("negativityClassicalized", gw::spinstate::negativity(classical))
      .add("wClassicalizedOptimized", gw::spinstate::optimizeWitness(classical).result.w)
      .add("minBranchOverlap", minOverlap)
      .add("oneMinusMinOverlap", 1.0 - minOverlap)
      .add("maxModeAmplitude", maxAlpha);

  Report rep;
  rep.add("convergence", conv).add("classicalization", cls);
  return rep;
}

gw::SweepAxis parseAxis(const std::string &text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4 && parts.size() != 5) throw UsageError("axis must be name:min:max:count[:lin|log], got '" + text + "'");
  gw::SweepAxis a;
  a.name = parts[0];
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    a.min = std::stod(parts[1], &u1);
    a.max = std::stod(parts[2], &u2);
    a.count = std::stoi(parts[3], &u3);
    if (u1 != parts[1].size() || u2 != parts[2].size() || u3 != parts[3].size()) throw std::invalid_argument("");
  } catch (const std::exception &) {
    throw UsageError("axis '" + text + "' has non-numeric bounds or count");
  }
  if (parts.size() == 5) {
    if (parts[4] == "log")
      a.spacing = gw::Spacing::Log;
    else if (parts[4] == "lin")
      a.spacing = gw::Spacing::Linear;
    else
      throw UsageError("axis spacing must be lin or log");
  }
  return a;
}

unsigned envThreads() {
  const char *s = std::getenv("GRAVWITNESS_THREADS");
  if (!s || !*s) return 0;
  char *end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError("GRAVWITNESS_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

Report cmdSweep(const Options &o) {
  gw::SweepSpec spec;
  for (const auto &a : o.axes) spec.axes.push_back(parseAxis(a));
  spec.objective = gw::sweep::parseObjective(o.objective);
  spec.constraints.cpRatioMax = o.cpRatioMax;
  spec.constraints.requireTauCollOver = o.tauCollFactor;
  spec.applyDephasing = !o.noDephasing;
  gw::sweep::checkSpec(spec);

  if (o.paperDefaults == !o.configPath.empty())
    throw UsageError("give exactly one of --config <path> or --paper-defaults");
  gw::ExperimentConfig base = o.paperDefaults ? gw::paperDefaults() : gw::io::loadConfig(o.configPath);
  for (const auto &s : o.overrides) gw::io::applyOverride(base, s);

  const unsigned threads = envThreads();
  Report rep;
  if (o.maximize) {
    gw::sweep::MaximizeOptions mo;
    mo.threads = threads;
    const auto m = gw::sweep::maximize(spec, base, mo);
    gw::SweepResult best;
    best.axisNames = m.grid.axisNames;
    best.rows = {m.bestRow};
    rep.add("grid", gw::io::sweepTable(m.grid)).add("best", gw::io::sweepTable(best));
  } else {
    rep.add("", gw::io::sweepTable(gw::sweep::runSweep(spec, base, threads)));
  }
  return rep;
}

void addCommon(CLI::App *sub, Options &o) {
  sub->add_option("--config", o.configPath, "Config JSON file");
  sub->add_flag("--paper-defaults", o.paperDefaults, "Use the built-in reference scenario");
  sub->add_option("--format", o.format, "json | csv | table")->check(CLI::IsMember({"json", "csv", "table"}));
  sub->add_option("--set", o.overrides, "Override a config field, key=value (repeatable)");
  sub->add_option("--out", o.outPath, "Write output to a file instead of stdout");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Gravitationally induced spin entanglement: simulator and feasibility toolkit"};
  app.require_subcommand(1, 1);
  Options o;

  auto *phases = app.add_subcommand("phases", "Branch phases, split size and kinematics");
  addCommon(phases, o);
  phases->add_option("--steps", o.steps, "Trapezoid panels per moving stage")->check(CLI::Range(2, 100000000));

  auto *state = app.add_subcommand("state", "Final two-spin density matrix");
  addCommon(state, o);
  state->add_flag("--dephase", o.dephase, "Apply the decoherence budget");

  auto *witness = app.add_subcommand("witness", "Spin-correlation witness and negativity");
  addCommon(witness, o);
  witness->add_flag("--dephase", o.dephase, "Apply the decoherence budget");

  auto *cons = app.add_subcommand("constraints", "Casimir-Polder, magnetic and decoherence feasibility");
  addCommon(cons, o);
  cons->add_option("--target-ratio", o.targetRatio, "Allowed background / gravity ratio");
  cons->add_option("--b-residual", o.bResidual, "Residual field after cancellation, T");
  cons->add_option("--tau-coll-factor", o.tauCollFactor, "Required tauColl / experiment time");

  auto *dec = app.add_subcommand("decoherence", "Collisional and thermal decoherence budget");
  addCommon(dec, o);
  dec->add_option("--spin-bath", o.spinBath, "Extra spin dephasing probability")->check(CLI::Range(0.0, 1.0));

  auto *field = app.add_subcommand("field", "Quantised-field model: convergence and classicalization");
  addCommon(field, o);
  field->add_option("--modes", o.modeCounts, "Mode counts for the convergence table");
  field->add_option("--kcut-r", o.kCutTimesR, "kCut times the closest separation");
  field->add_option("--kmin", o.kMin, "Smallest wavenumber, 1/m");
  field->add_option("--kmax-factor", o.kMaxOverKCut, "kMax / kCut");

  auto *sweepCmd = app.add_subcommand("sweep", "Grid sweep and constrained maximisation");
  addCommon(sweepCmd, o);
  sweepCmd->add_option("--axis", o.axes, "name:min:max:count[:lin|log] (repeatable)")->required();
  sweepCmd->add_option("--objective", o.objective, "negativity | witness | witnessOptimized");
  sweepCmd->add_option("--cp-ratio-max", o.cpRatioMax, "Allowed Casimir-Polder / gravity ratio");
  sweepCmd->add_option("--tau-coll-factor", o.tauCollFactor, "Required tauColl / experiment time");
  sweepCmd->add_flag("--no-dephasing", o.noDephasing, "Score the undephased state");
  sweepCmd->add_flag("--maximize", o.maximize, "Refine the best feasible grid point");

  auto *defaults = app.add_subcommand("defaults", "Print the reference scenario config");
  addCommon(defaults, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  int exitCode = 0;
  std::string text;
  try {
    const auto fmt = gw::io::parseFormat(o.format);
    Report rep;
    if (*phases)
      rep = cmdPhases(o);
    else if (*state)
      rep = cmdState(o);
    else if (*witness)
      rep = cmdWitness(o);
    else if (*cons)
      rep = cmdConstraints(o, exitCode);
    else if (*dec)
      rep = cmdDecoherence(o);
    else if (*field)
      rep = cmdField(o);
    else if (*sweepCmd)
      rep = cmdSweep(o);
    else if (*defaults) {
      gw::ExperimentConfig cfg = gw::paperDefaults();
      for (const auto &s : o.overrides) gw::io::applyOverride(cfg, s);
      if (fmt == gw::io::Format::Json) {
        text = gw::io::configToJson(cfg).dump(2) + "\n";
      } else {
        Record r;
        for (auto name : gw::configFieldNames) {
          auto v = gw::getConfigField(cfg, name);
          if (v)
            r.add(std::string(name), *v);
          else
            r.add(std::string(name), std::string("null"));
        }
        rep.add("", r);
      }
    }
    if (text.empty()) text = gw::io::render(rep, fmt);
  } catch (const gw::ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gw::SweepSpecError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gw::RegimeError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (o.outPath.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.outPath, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << o.outPath << "'\n";
      return 1;
    }
    out << text;
  }
  return exitCode;
}
