#include "npns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "transforms.hpp"

namespace npns {

namespace {

double gradientNormSquared(const SpectralScalar& f) {
  const SpectralVector g = gradient(f);
  return l2NormSquared(g);
}

double deviationNormSquared(const SpectralScalar& f) {
  Eigen::ArrayXXd power = f.coeffs.abs2();
  power(0, 0) = 0.0;
  return kTwoPi * kTwoPi * power.sum();
}

}  // namespace

EnergyRecord record(const State& state, double t) {
  EnergyRecord r;
  r.t = t;
  r.u2 = l2NormSquared(state.u);
  r.c1dev2 = deviationNormSquared(state.c1);
  r.c2dev2 = deviationNormSquared(state.c2);
  r.U2 = r.u2 + r.c1dev2 + r.c2dev2;
  r.gradc1 = gradientNormSquared(state.c1);
  r.gradc2 = gradientNormSquared(state.c2);
  r.gradu = gradientNormSquared(state.u.x) + gradientNormSquared(state.u.y);
  auto [c1, c2] = detail::physicalPair(state.c1, state.c2);
  r.minc1 = c1.minCoeff();
  r.minc2 = c2.minCoeff();
  const double cell = std::pow(state.grid().spacing(), 2);
  r.rho3 = cell * (c1 - c2).abs().cube().sum();
  r.c1bar = state.c1.mean().real();
  r.c2bar = state.c2.mean().real();
  return r;
}

double sobolevConstant() {
  // sum_{n in Z} (b^2 + n^2)^-2 = pi coth(pi b) / (2 b^3)
  //                             + pi^2 csch^2(pi b) / (2 b^2),
  // applied with b^2 = 1 + k1^2, then summed over k1 with an
  // Euler-Maclaurin tail for the pi / (2 b^3) part.
  static const double value = [] {
    constexpr double pi = std::numbers::pi;
    const auto column = [&](double k1) {
      const double b = std::sqrt(1.0 + k1 * k1);
      const double x = pi * b;
      const double coth = 1.0 / std::tanh(x);
      const double csch = x > 700.0 ? 0.0 : 1.0 / std::sinh(x);
      return pi * coth / (2.0 * b * b * b) + pi * pi * csch * csch / (2.0 * b * b);
    };
    constexpr int cutoff = 200000;
    double sum = column(0.0);
    for (int k = 1; k <= cutoff; ++k) sum += 2.0 * column(k);
    // tail of 2 * sum_{k > K} pi / (2 (1 + k^2)^{3/2})
    const auto tailTerm = [&](double k) { return pi / std::pow(1.0 + k * k, 1.5); };
    const double a = cutoff;
    const double integral = pi * (1.0 - a / std::sqrt(1.0 + a * a));
    sum += integral - 0.5 * tailTerm(a);
    return std::sqrt(sum);
  }();
  return value;
}

Smallness smallnessCheck(const EnergyRecord& initial, const SystemParams& params,
                         double gamma0) {
  Smallness s;
  s.deviation = initial.c1dev2 + initial.c2dev2;
  s.threshold = params.nu * params.D / (2.0 * gamma0 * gamma0);
  s.margin = s.threshold - s.deviation;
  s.holds = s.deviation < s.threshold;
  return s;
}

double deterministicRate(const SystemParams& params, double deviation0,
                         double gamma0) {
  const double g2 = gamma0 * gamma0;
  if (!(params.nu * params.D - 2.0 * g2 * deviation0 > 0.0)) {
    throw ConditionFailedError(
        "nu D - 2 gamma0^2 cbar0 <= 0: energy decay rate is not available");
  }
  return std::min(params.nu, 2.0 * params.D - 4.0 * g2 * deviation0 / params.nu);
}

double deltaBound(double kappa, double N, double alpha, double beta,
                  double constant) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 1.0 && beta <= 3.0)) {
    throw ConfigError("deltaBound requires 0 < alpha < 1 < beta <= 3");
  }
  if (!(kappa > 0.0 && N > 0.0)) throw ConfigError("deltaBound requires kappa, N > 0");
  const double kappaExp = (2.0 * beta - alpha * (beta + 1.0)) / (2.0 * (alpha + beta));
  const double nExp = -2.0 * alpha / (alpha + beta);
  return constant * (1.0 / kappa + 1.0 / (kappa * kappa) + 1.0 / (N * N) +
                     std::pow(kappa, kappaExp) * std::pow(N, nExp));
}

DecayFit fitDecayRate(const std::vector<double>& t, const std::vector<double>& value,
                      double t0, double t1) {
  if (t.size() != value.size()) throw FitDomainError("time and value series differ in length");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(value[i] > 0.0)) {
      throw FitDomainError("nonpositive value at t = " + std::to_string(t[i]));
    }
    const double y = std::log(value[i]);
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++n;
  }
  if (n < 2) throw FitDomainError("fewer than two samples in the fit window");
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw FitDomainError("degenerate fit window");
  const double slope = (n * sxy - sx * sy) / denom;
  DecayFit fit;
  fit.rate = -slope;
  fit.intercept = (sy - slope * sx) / n;
  fit.t0 = t0;
  fit.t1 = t1;
  fit.points = n;
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    const double r = std::log(value[i]) - (fit.intercept + slope * t[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

DecayFit fitDecayRate(const std::vector<double>& t, const std::vector<double>& value) {
  if (t.empty()) throw FitDomainError("empty series");
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  return fitDecayRate(t, value, *lo + 0.5 * (*hi - *lo), *hi);
}

bool pathwiseDecayCheck(const std::vector<EnergyRecord>& records, double D,
                        double dt) {
  if (records.empty()) return true;
  const double initial = records.front().c1dev2 + records.front().c2dev2;
  const double t0 = records.front().t;
  for (const auto& r : records) {
    const double steps = (r.t - t0) / dt;
    const double bound = std::exp(-2.0 * D * (r.t - t0)) * initial * (1.0 + 1e-6 * steps);
    if (r.c1dev2 + r.c2dev2 > bound) return false;
  }
  return true;
}

EnsembleStats aggregate(const std::vector<std::vector<EnergyRecord>>& paths) {
  EnsembleStats stats;
  stats.count = static_cast<int>(paths.size());
  if (paths.empty()) return stats;
  const std::size_t len = paths.front().size();
  for (const auto& p : paths) {
    if (p.size() != len) throw ConfigError("ensemble paths have different record counts");
  }
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& p : paths) sum += p[i].U2;
    const double n = static_cast<double>(paths.size());
    const double mean = sum / n;
    double sq = 0.0;  // two-pass: no cancellation when paths agree
    for (const auto& p : paths) sq += (p[i].U2 - mean) * (p[i].U2 - mean);
    const double var = n > 1 ? sq / (n - 1.0) : 0.0;
    stats.t.push_back(paths.front()[i].t);
    stats.meanU2.push_back(mean);
    stats.stderrU2.push_back(std::sqrt(var / n));
  }
  return stats;
}

double pathPrefactor(const std::vector<EnergyRecord>& path, double lambda) {
  if (path.empty() || path.front().U2 <= 0.0) return 0.0;
  const double u0 = std::sqrt(path.front().U2);
  double best = 0.0;
  for (const auto& r : path) {
    best = std::max(best, std::exp(lambda * (r.t - path.front().t)) * std::sqrt(r.U2) / u0);
  }
  return best;
}

std::vector<double> unitStepRatios(const EnsembleStats& stats) {
  std::vector<double> ratios;
  if (stats.t.empty()) return ratios;
  const double t0 = stats.t.front();
  const auto valueAt = [&](double t, double& out) {
    for (std::size_t i = 0; i < stats.t.size(); ++i) {
      if (std::abs(stats.t[i] - t) < 1e-9) {
        out = stats.meanU2[i];
        return true;
      }
    }
    return false;
  };
  for (int n = 0;; ++n) {
    double a = 0.0, b = 0.0;
    if (!valueAt(t0 + n, a) || !valueAt(t0 + n + 1, b)) break;
    ratios.push_back(a > 0.0 ? b / a : 0.0);
  }
  return ratios;
}

}  // namespace npns
