#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "npns/initial.hpp"
#include "npns/integrator.hpp"

namespace npns {
namespace {

double maxAbs(const SpectralScalar& f) { return f.coeffs.abs().maxCoeff(); }
double maxAbs(const SpectralVector& v) { return std::max(maxAbs(v.x), maxAbs(v.y)); }

SpectralScalar constant(const Grid& g, double value) {
  SpectralScalar f(g);
  f.coeffs(0, 0) = value;
  return f;
}

State smallState(const Grid& g, std::uint64_t seed, double eps = 0.03, double uAmp = 0.01) {
  State s(g);
  s.c1 = constant(g, 1.0) + eps * randomBandScalar(g, 4, seed, 1);
  s.c2 = constant(g, 1.0) + eps * randomBandScalar(g, 4, seed, 2);
  s.u = uAmp * taylorGreen(g) + uAmp * randomBandVelocity(g, 4, seed, 3);
  refreshCoupling(s);
  return s;
}

State cosineState(const Grid& g, int k1, int k2, double cbar, double eps, int sign) {
  State s(g);
  s.c1 = constant(g, cbar);
  s.c2 = constant(g, cbar);
  s.c1.at(k1, k2) += 0.5 * eps;
  s.c1.at(-k1, -k2) += 0.5 * eps;
  s.c2.at(k1, k2) += 0.5 * sign * eps;
  s.c2.at(-k1, -k2) += 0.5 * sign * eps;
  refreshCoupling(s);
  return s;
}

double stateDistance(const State& a, const State& b) {
  return std::sqrt(l2NormSquared(a.u - b.u) + l2NormSquared(a.c1 - b.c1) +
                   l2NormSquared(a.c2 - b.c2));
}

TEST(Scheme, NamesRoundTrip) {
  for (Scheme s : {Scheme::kExponentialEuler, Scheme::kSemiImplicitEuler,
                   Scheme::kTransportSplitting}) {
    EXPECT_EQ(parseScheme(schemeName(s)), s);
  }
  EXPECT_THROW(parseScheme("rk4"), ConfigError);
}

TEST(Semigroups, Multipliers) {
  const Grid g(16);
  const Semigroups sg(g, 0.5, 0.25, 0.1);
  EXPECT_DOUBLE_EQ(sg.concentration(0, 0), 1.0);
  EXPECT_NEAR(sg.concentration(g.index(1), g.index(2)), std::exp(-0.5 * 5 * 0.1), 1e-15);
  EXPECT_NEAR(sg.velocity(g.index(-3), g.index(0)), std::exp(-0.25 * 9 * 0.1), 1e-15);
}

TEST(Step, EquilibriumIsFixedPoint) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {1.0, 2, 1.0}});
  const State s = cosineState(g, 1, 0, 1.0, 0.0, 1);
  for (auto step : {&stepSemiImplicit, &stepTransportSplitting}) {
    const State next = step(s, model, 0.01, nullptr);
    EXPECT_EQ(stateDistance(next, s), 0.0);
  }
  const State next = stepExponentialEuler(s, model, 0.01, nullptr);
  EXPECT_EQ(stateDistance(next, s), 0.0);
}

TEST(Step, NeutralModeDecaysByHeatSemigroup) {
  // c1 = c2 carries no charge, so only diffusion (molecular plus corrector) acts.
  const Grid g(32);
  const double D = 0.5;
  const double kappa = 0.3;
  const double dt = 0.02;
  const Model model(g, {1.0, D, {kappa, 1, 1.0}});
  const State s = cosineState(g, 2, 1, 1.0, 0.1, +1);
  const State next = stepExponentialEuler(s, model, dt, nullptr);
  const double expected = 0.05 * std::exp(-(D + kappa) * 5 * dt);
  EXPECT_NEAR(next.c1.at(2, 1).real(), expected, 1e-15);
  EXPECT_NEAR(next.c2.at(-2, -1).real(), expected, 1e-15);
}

TEST(Step, DebyeRelaxation) {
  // Charge mode: c' = Q[c - 2 D cbar dt c] to first order in the amplitude.
  const Grid g(32);
  const double D = 0.5;
  const double cbar = 2.0;
  const double dt = 0.01;
  const double eps = 1e-7;
  const Model model(g, {1.0, D, {0.0, 1, 1.0}});
  const State s = cosineState(g, 1, 1, cbar, eps, -1);
  const State next = stepExponentialEuler(s, model, dt, nullptr);
  const double expected = 0.5 * eps * std::exp(-D * 2 * dt) * (1.0 - 2.0 * D * cbar * dt);
  EXPECT_NEAR(next.c1.at(1, 1).real(), expected, 1e-6 * expected);
  EXPECT_NEAR(next.c2.at(1, 1).real(), -expected, 1e-6 * expected);
}

TEST(Step, SemiImplicitAgreesWithExponentialToSecondOrder) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {0.0, 1, 1.0}});
  const State s = smallState(g, 1, 0.2, 0.2);
  std::vector<double> gaps;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    gaps.push_back(stateDistance(stepSemiImplicit(s, model, dt, nullptr),
                                 stepExponentialEuler(s, model, dt, nullptr)));
  }
  EXPECT_NEAR(gaps[0] / gaps[1], 4.0, 0.2);
  EXPECT_NEAR(gaps[1] / gaps[2], 4.0, 0.2);
}

TEST(Step, SemiImplicitDiffusionIsUnconditionallyStable) {
  const Grid g(32);
  const Model model(g, {1.0, 1.0, {0.0, 1, 1.0}});
  const State s = cosineState(g, 10, 0, 1.0, 0.1, +1);
  const State next = stepSemiImplicit(s, model, 10.0, nullptr);
  EXPECT_NEAR(next.c1.at(10, 0).real(), 0.05 / (1.0 + 100.0 * 10.0), 1e-15);
}

TEST(Step, ExponentialEulerIsFirstOrder) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {0.0, 1, 1.0}});
  const State s0 = smallState(g, 2, 0.3, 0.3);
  const double tEnd = 0.2;
  const auto run = [&](int steps) {
    State s = s0;
    const Semigroups sg(g, 0.5, 1.0, tEnd / steps);
    for (int i = 0; i < steps; ++i) s = stepExponentialEuler(s, model, sg, tEnd / steps, nullptr);
    return s;
  };
  const State reference = run(1280);
  const double e1 = stateDistance(run(20), reference);
  const double e2 = stateDistance(run(40), reference);
  const double e3 = stateDistance(run(80), reference);
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
  EXPECT_NEAR(e2 / e3, 2.0, 0.2);
}

TEST(TransportFlow, PreservesNorm) {
  const Grid g(32);
  const SpectralScalar f = randomBandScalar(g, 8, 3, 0);
  const SpectralVector dv = 3.0 * randomBandVelocity(g, 4, 4, 0);
  const SpectralScalar out = transportFlow(f, dv);
  EXPECT_NEAR(l2NormSquared(out), l2NormSquared(f), 1e-12 * l2NormSquared(f));
  EXPECT_GT(maxAbs(out - f), 0.01);
  const SpectralVector u = randomBandVelocity(g, 8, 5, 0);
  const SpectralVector v = transportFlow(u, dv);
  EXPECT_NEAR(l2NormSquared(v), l2NormSquared(u), 1e-12 * l2NormSquared(u));
  EXPECT_LE(maxAbs(divergence(v)), 1e-12);
}

TEST(TransportFlow, MatchesTaylorSeries) {
  const Grid g(32);
  const SpectralScalar f = randomBandScalar(g, 6, 6, 0);
  const SpectralVector dv = 0.1 * randomBandVelocity(g, 3, 7, 0);
  SpectralScalar term = f;
  SpectralScalar sum = f;
  for (int n = 1; n <= 12; ++n) {
    term = (1.0 / n) * advect(dv, term);
    sum = sum + term;
  }
  EXPECT_LE(maxAbs(transportFlow(f, dv) - sum), 1e-12);

  const SpectralVector u = randomBandVelocity(g, 6, 8, 0);
  SpectralVector vterm = u;
  SpectralVector vsum = u;
  for (int n = 1; n <= 12; ++n) {
    vterm = (1.0 / n) * advectVector(dv, vterm);
    vsum = vsum + vterm;
  }
  EXPECT_LE(maxAbs(transportFlow(u, dv) - vsum), 1e-12);
}

StepperConfig shortRun(double tEnd, std::uint64_t seed, Scheme scheme = Scheme::kExponentialEuler) {
  StepperConfig c;
  c.dt = 1e-3;
  c.tEnd = tEnd;
  c.seed = seed;
  c.recordStride = 10;
  c.scheme = scheme;
  return c;
}

TEST(Integrate, ZeroHorizonGivesInitialRecord) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {1.0, 2, 1.0}});
  const State s = smallState(g, 9);
  const TrajectoryResult r = integrate(s, model, shortRun(0.0, 1));
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].t, 0.0);
  EXPECT_EQ(stateDistance(r.final, s), 0.0);
}

TEST(Integrate, RecordsAtStrideAndEnd) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {0.0, 1, 1.0}});
  const TrajectoryResult r = integrate(smallState(g, 10), model, shortRun(0.025, 1));
  ASSERT_EQ(r.records.size(), 4u);  // 0, 0.01, 0.02, 0.025
  EXPECT_NEAR(r.records[1].t, 0.01, 1e-15);
  EXPECT_NEAR(r.records.back().t, 0.025, 1e-15);
}

TEST(Integrate, ReproducibleForSeed) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {1.0, 2, 1.0}});
  const State s = smallState(g, 11);
  for (Scheme scheme : {Scheme::kExponentialEuler, Scheme::kTransportSplitting}) {
    const TrajectoryResult a = integrate(s, model, shortRun(0.05, 42, scheme));
    const TrajectoryResult b = integrate(s, model, shortRun(0.05, 42, scheme));
    const TrajectoryResult c = integrate(s, model, shortRun(0.05, 43, scheme));
    EXPECT_EQ(stateDistance(a.final, b.final), 0.0);
    EXPECT_GT(stateDistance(a.final, c.final), 1e-6);
  }
}

TEST(Integrate, RejectsStepAboveBudget) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {0.0, 1, 1.0}});
  const State s = smallState(g, 12, 0.03, 10.0);
  StepperConfig c = shortRun(1.0, 1);
  c.dt = 1.5 * stabilityBudget(s, model);
  EXPECT_THROW(integrate(s, model, c), ConfigError);
  c.dt = 0.5 * stabilityBudget(s, model);
  c.tEnd = 2 * c.dt;
  EXPECT_NO_THROW(integrate(s, model, c));
}

TEST(Integrate, NonFiniteStateReportsBlowUp) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {0.0, 1, 1.0}});
  State s = smallState(g, 13);
  s.u.x.at(1, 0) = std::numeric_limits<double>::quiet_NaN();
  s.u.x.at(-1, 0) = std::numeric_limits<double>::quiet_NaN();
  const TrajectoryResult r = integrate(s, model, shortRun(0.05, 1));
  ASSERT_TRUE(r.blowUp.has_value());
  EXPECT_GT(r.blowUp->time(), 0.0);
}

TEST(Integrate, MeansConservedUnderNoise) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {2.0, 2, 1.0}});
  const State s = smallState(g, 14, 0.2, 0.2);
  const TrajectoryResult r = integrate(s, model, shortRun(0.2, 7));
  for (const auto& rec : r.records) {
    EXPECT_NEAR(rec.c1bar, 1.0, 1e-14);
    EXPECT_NEAR(rec.c2bar, 1.0, 1e-14);
  }
}

TEST(Integrate, EnergyDecaysForSmallData) {
  const Grid g(32);
  const Model model(g, {1.0, 0.5, {0.0, 1, 1.0}});
  const TrajectoryResult r = integrate(smallState(g, 15), model, shortRun(1.0, 1));
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    EXPECT_LT(r.records[i].U2, r.records[i - 1].U2);
  }
}

TEST(Integrate, SplittingConservesScalarEnergyWithoutDiffusionLoss) {
  // Transport alone is an isometry, so a passive scalar's variance under the
  // splitting scheme changes only through molecular diffusion: it can never
  // exceed the noiseless value by more than rounding.
  const Grid g(32);
  State s = smallState(g, 16, 0.2, 0.0);
  s.c2 = s.c1;
  refreshCoupling(s);
  const Model noisy(g, {1.0, 0.5, {1.0, 2, 1.0}});
  const TrajectoryResult r = integrate(s, noisy, shortRun(0.1, 3, Scheme::kTransportSplitting));
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    EXPECT_LE(r.records[i].c1dev2, r.records[i - 1].c1dev2 * (1.0 + 1e-12));
  }
}

std::vector<SpectralScalar> constantSamples(const SpectralScalar& f, int n) {
  return std::vector<SpectralScalar>(n, f);
}

TEST(HeatSmoothing, ZeroInput) {
  const Grid g(16);
  EXPECT_EQ(heatSmoothingCheck(constantSamples(SpectralScalar(g), 5), 1.0, 0.0, 1.0, 0.0), 0.0);
}

TEST(HeatSmoothing, SingleModeClosedForm) {
  // f_s = cos x1 on [0, 1], delta = 1, alpha = 0:
  // ratio = delta (1 + |k|^2) (1 - e^{-delta |k|^2 T})^2 / (delta^2 |k|^4 T).
  const Grid g(16);
  SpectralScalar f(g);
  f.at(1, 0) = 0.5;
  f.at(-1, 0) = 0.5;
  const double expected = 2.0 * std::pow(1.0 - std::exp(-1.0), 2);
  EXPECT_NEAR(heatSmoothingCheck(constantSamples(f, 3), 1.0, 0.0, 1.0, 0.0), expected, 1e-12);
  EXPECT_NEAR(expected, 0.7992, 1e-4);
}

TEST(HeatSmoothing, BoundedByOneForZeroMeanData) {
  const Grid g(32);
  std::vector<SpectralScalar> samples;
  for (int i = 0; i < 21; ++i) samples.push_back(randomBandScalar(g, 8, 17, i));
  for (double delta : {0.1, 1.0, 10.0}) {
    for (double alpha : {0.0, 1.0}) {
      const double q = heatSmoothingCheck(samples, delta, 0.0, 2.0, alpha);
      EXPECT_GT(q, 0.0);
      EXPECT_LE(q, 1.0);
    }
  }
}

TEST(HeatSmoothing, MatchesFineQuadrature) {
  const Grid g(16);
  const double delta = 0.7;
  const double a = 0.5;
  const double b = 2.0;
  const std::vector<double> amp = {1.0, -0.4, 2.0, 0.3};
  std::vector<SpectralScalar> samples;
  for (double v : amp) {
    SpectralScalar f(g);
    f.at(1, 2) = 0.5 * v;
    f.at(-1, -2) = 0.5 * v;
    f.at(3, 0) = Complex(0.0, 0.25 * v * v);
    f.at(-3, 0) = Complex(0.0, -0.25 * v * v);
    samples.push_back(f);
  }
  const int n = 200000;
  const double h = (b - a) / n;
  const double seg = (b - a) / (amp.size() - 1);
  const auto interp = [&](const std::vector<double>& vals, double s) {
    const double x = (s - a) / seg;
    const int i = std::min(static_cast<int>(x), static_cast<int>(vals.size()) - 2);
    return vals[i] + (x - i) * (vals[i + 1] - vals[i]);
  };
  std::vector<double> amp2;
  for (double v : amp) amp2.push_back(v * v);
  // Per mode: I_k = int e^{-delta (b-s) |k|^2} f_k(s) ds (midpoint rule).
  double i1 = 0.0, i3 = 0.0, d1 = 0.0, d3 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = a + (j + 0.5) * h;
    const double f1 = 0.5 * interp(amp, s);
    const double f3 = 0.25 * interp(amp2, s);
    i1 += h * std::exp(-delta * (b - s) * 5.0) * f1;
    i3 += h * std::exp(-delta * (b - s) * 9.0) * f3;
    d1 += h * f1 * f1;
    d3 += h * f3 * f3;
  }
  const double alpha = 0.5;
  const double num = 2.0 * (std::pow(6.0, alpha + 1) * i1 * i1 + std::pow(10.0, alpha + 1) * i3 * i3);
  const double den = 2.0 * (std::pow(6.0, alpha) * d1 + std::pow(10.0, alpha) * d3);
  const double oracle = delta * num / den;
  EXPECT_NEAR(heatSmoothingCheck(samples, delta, a, b, alpha), oracle, 1e-8 * oracle);
}

}  // namespace
}  // namespace npns
