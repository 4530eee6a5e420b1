#include <catch_amalgamated.hpp>

#include <gravwitness/gravfield.hpp>

#include "oracles.hpp"

using namespace gravwitness;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ExperimentConfig defaults() { return validate(paperDefaults()).config; }

FieldModeSet standardModes(int n = 1000, double kCut = 1e7) { return gravfield::buildModes(1.0, 50.0 * kCut, n, kCut); }

double newtonPhase(const ExperimentConfig &cfg, double r, double t) { return gravphase::couplingRate(cfg) * t / r; }

} // namespace

TEST_CASE("mode grid layout", "[gravfield]") {
  const auto m = gravfield::buildModes(1.0, 1e6, 50, 1e5);
  REQUIRE(m.size() == 50);
  CHECK(m.k.front() == 1.0);
  CHECK(m.k.back() == 1e6);
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) CHECK(m.k[i] > m.k[i - 1]);
    CHECK(m.shellLo[i] <= m.k[i]);
    CHECK(m.shellHi[i] >= m.k[i]);
    total += m.weight[i];
  }
  CHECK_THAT(total, WithinRel(1e6 - 1.0, 1e-12));
  CHECK_THROWS(gravfield::buildModes(0.0, 1.0, 10, 1.0));
  CHECK_THROWS(gravfield::buildModes(1.0, 10.0, 1, 1.0));
  CHECK_THROWS(gravfield::modesFromNodes({2.0, 1.0}, {1.0, 1.0}, 1.0));
}

TEST_CASE("radial sum reproduces the damped closed form", "[gravfield]") {
  const auto m = standardModes();
  for (double r : {100e-6, 200e-6, 450e-6, 700e-6}) {
    const double exact = gravfield::dampedSincIntegral(r, m.kCut);
    CHECK_THAT(gravfield::radialSum(m, r), WithinRel(exact, 2e-3));
  }
}

TEST_CASE("damped closed form agrees with a direct integral", "[gravfield]") {
  // Plain trapezoid on a grid fine enough to resolve every oscillation.
  const double r = 1e-3, kCut = 1e4;
  const int n = 400000;
  const double kMax = 40.0 * kCut, h = kMax / n;
  double acc = 0.5 * 1.0;
  for (int i = 1; i < n; ++i) {
    const double k = i * h;
    acc += std::sin(k * r) / (k * r) * std::exp(-k / kCut);
  }
  CHECK_THAT(acc * h, WithinRel(gravfield::dampedSincIntegral(r, kCut), 1e-6));
}

TEST_CASE("branch phase approaches the Newtonian value", "[gravfield]") {
  const auto cfg = defaults();
  const auto m = standardModes();
  for (double r : {100e-6, 200e-6, 450e-6, 700e-6}) {
    const double phi = gravfield::branchPhase(m, cfg, r, cfg.tau);
    const double newton = newtonPhase(cfg, r, cfg.tau);
    CHECK(std::abs(phi - newton) / newton < 0.05);
    const double damped = newton * 2.0 / pi * std::atan(m.kCut * r);
    CHECK_THAT(phi, WithinRel(damped, 2e-3));
  }
  CHECK_THAT(2.0 / pi * std::atan(1e7 * 100e-6), WithinRel(0.99936338, 1e-7));
  CHECK_THAT(2.0 / pi * std::atan(1e7 * 700e-6), WithinRel(0.99990905, 1e-7));
}

TEST_CASE("branch phase is converged in the mode count", "[gravfield]") {
  const auto cfg = defaults();
  const double a = gravfield::branchPhase(standardModes(1000), cfg, 200e-6, cfg.tau);
  const double b = gravfield::branchPhase(standardModes(10000), cfg, 200e-6, cfg.tau);
  CHECK(std::abs(a - b) / b < 5e-3);
}

TEST_CASE("trapezoid rule converges where the grid resolves the integrand", "[gravfield]") {
  const double r = 1e-3, kCut = 1e4;
  std::vector<double> k, w;
  const int n = 200000;
  const double kMax = 40.0 * kCut, h = kMax / n;
  for (int i = 1; i <= n; ++i) {
    k.push_back(i * h);
    w.push_back(h);
  }
  const auto m = gravfield::modesFromNodes(k, w, kCut);
  const double exact = gravfield::dampedSincIntegral(r, kCut);
  CHECK_THAT(gravfield::radialSum(m, r, gravfield::Quadrature::Trapezoid), WithinRel(exact, 1e-3));
  CHECK_THAT(gravfield::radialSum(m, r, gravfield::Quadrature::ShellIntegrated), WithinRel(exact, 1e-3));
}

TEST_CASE("no displacement and no phase at t = 0", "[gravfield]") {
  const auto cfg = defaults();
  const auto m = standardModes(200);
  const auto set = gravfield::allDisplacements(m, cfg, 0.0);
  for (const auto &b : set) {
    CHECK(b.branchPhase == 0.0);
    CHECK(b.maxAmplitude() == 0.0);
  }
  CHECK(std::abs(gravfield::branchOverlap(set[0], set[3]) - cplx(1.0)) < 1e-15);
}

TEST_CASE("a mode returns to vacuum after a full period", "[gravfield]") {
  const auto cfg = defaults();
  const double k = 1e3;
  const auto m = gravfield::modesFromNodes({k}, {10.0}, 1e7);
  const double period = 2.0 * pi / (constants::c * k);
  const auto b = gravfield::displacements(m, cfg, Branch::LR, 0.0, 700e-6, period);
  CHECK(std::abs(b.c1[0]) < 1e-12 * std::abs(gravfield::displacements(m, cfg, Branch::LR, 0.0, 700e-6, 0.5 * period).c1[0]));
}

TEST_CASE("overlap of opposite single-mode coherent states", "[gravfield]") {
  BranchDisplacements a, b;
  a.k = b.k = {1.0};
  a.c1 = {cplx(1.0)};
  a.c2 = {cplx(0.0)};
  b.c1 = {cplx(-1.0)};
  b.c2 = {cplx(0.0)};
  CHECK_THAT(std::abs(gravfield::branchOverlap(a, b)), WithinRel(std::exp(-2.0), 1e-14));
  CHECK_THAT(std::abs(gravfield::branchOverlap(a, a)), WithinRel(1.0, 1e-14));
  BranchDisplacements other = b;
  other.k = {2.0};
  CHECK_THROWS(gravfield::branchOverlap(a, other));
}

TEST_CASE("branches stay nearly orthogonal-free at the default parameters", "[gravfield]") {
  const auto cfg = defaults();
  const auto set = gravfield::allDisplacements(standardModes(), cfg, cfg.tau);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(std::abs(gravfield::branchOverlap(set[a], set[b])) >= 1.0 - 1e-6);
}

TEST_CASE("reduced mass state reproduces the spin entanglement", "[gravfield]") {
  const auto cfg = defaults();
  const auto set = gravfield::allDisplacements(standardModes(), cfg, cfg.tau);
  const auto rho = gravfield::reducedMassState(set);
  CHECK(rho.isValid());
  const auto p = gravphase::staticPhases(cfg);
  const double target = spinstate::negativity(spinstate::entangledState(p.dPhiLR, p.dPhiRL));
  const double n = spinstate::negativity(rho);
  CHECK(std::abs(n - target) / target < 0.05);
  const auto pure = gravfield::reducedMassState(set, false);
  CHECK(n <= spinstate::negativity(pure) + 1e-12);
  CHECK_THAT(pure.purity(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("field-free state matches the oracle exactly", "[gravfield]") {
  const auto cfg = defaults();
  const auto set = gravfield::allDisplacements(standardModes(300), cfg, cfg.tau);
  const auto pure = gravfield::reducedMassState(set, false);
  const double a = set[1].branchPhase - set[0].branchPhase;
  const double b = set[2].branchPhase - set[0].branchPhase;
  CHECK_THAT(spinstate::negativity(pure), WithinAbs(oracle::negativityClosed(a, b), 1e-12));
}

TEST_CASE("classicalized field carries no entanglement", "[gravfield]") {
  const auto cfg = defaults();
  const auto set = gravfield::allDisplacements(standardModes(300), cfg, cfg.tau);
  const auto c = gravfield::classicalize(set);
  CHECK(spinstate::negativity(c) == 0.0);
  CHECK(spinstate::witness(c).w == 0.0);
  const auto cc = gravfield::classicalize(c);
  CHECK(cc.rho() == c.rho());
  CHECK(c.isValid());
}
