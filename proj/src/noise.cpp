#include "npns/noise.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace npns {
namespace {

bool inPositiveHalf(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }

// Applies sigma . grad to every component of a (possibly non-real) vector
// field, where sigma = a exp(i q.x); the product is formed on the grid.
CoeffArray directionalDerivativeTimesMode(const CoeffArray& f, const Grid& g,
                                          const Eigen::Vector2d& a,
                                          const Wavenumber& q) {
  const int m = g.size();
  CoeffArray deriv(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      deriv(i, j) = Complex(0.0, a.x() * g.derivativeSymbol(i) +
                                     a.y() * g.derivativeSymbol(j)) *
                    f(i, j);
    }
  }
  Eigen::ArrayXXcd samples = toPhysicalComplex(deriv, g);
  for (int j = 0; j < m; ++j) {
    const double y = g.coordinate(j);
    for (int i = 0; i < m; ++i) {
      const double x = g.coordinate(i);
      samples(i, j) *= std::polar(1.0, q.k1 * x + q.k2 * y);
    }
  }
  return toSpectralComplex(samples, g);
}

void lerayInPlace(CoeffArray& vx, CoeffArray& vy, const Grid& g) {
  SpectralVector v{SpectralScalar(g, std::move(vx)), SpectralScalar(g, std::move(vy))};
  SpectralVector p = lerayProject(v);
  vx = std::move(p.x.coeffs);
  vy = std::move(p.y.coeffs);
}

int supportRadius(const SpectralVector& u) {
  const Grid& g = u.grid();
  const int m = g.size();
  const double scale =
      std::max(u.x.coeffs.abs().maxCoeff(), u.y.coeffs.abs().maxCoeff());
  int radius = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (std::abs(u.x.coeffs(i, j)) > 1e-14 * scale ||
          std::abs(u.y.coeffs(i, j)) > 1e-14 * scale) {
        radius = std::max({radius, std::abs(g.wavenumber(i)), std::abs(g.wavenumber(j))});
      }
    }
  }
  return radius;
}

void requireDivergenceFree(const SpectralVector& u) {
  if (divergenceDefect(u) > 1e-8) {
    throw InvalidFieldError("velocity corrector requires a divergence-free field");
  }
}

}  // namespace

double NoiseBasis::zetaNormSquared() const {
  double sum = 0.0;
  for (const auto& mode : modes) sum += mode.zeta * mode.zeta;
  return sum;
}

NoiseBasis buildNoiseBasis(const NoiseSpec& spec, const Grid& grid) {
  if (!(spec.kappa >= 0.0)) throw ConfigError("noise intensity kappa must be >= 0");
  if (spec.shell < 1) throw ConfigError("noise shell index N must be >= 1");
  if (!(spec.gamma > 0.0)) throw ConfigError("noise profile exponent gamma must be > 0");
  if (2 * spec.shell > grid.dealiasRadius()) {
    throw ConfigError("noise shell 2N = " + std::to_string(2 * spec.shell) +
                      " exceeds the dealias radius " +
                      std::to_string(grid.dealiasRadius()) + " of the grid");
  }

  NoiseBasis basis;
  basis.spec = spec;
  const int n = spec.shell;
  const int lo = n * n;
  const int hi = 4 * n * n;
  double lambda2 = 0.0;
  for (int k1 = -2 * n; k1 <= 2 * n; ++k1) {
    for (int k2 = -2 * n; k2 <= 2 * n; ++k2) {
      const int kk = k1 * k1 + k2 * k2;
      if (kk < lo || kk > hi) continue;
      ShellMode mode;
      mode.k = {k1, k2};
      mode.positive = inPositiveHalf(k1, k2);
      const double norm = std::sqrt(static_cast<double>(kk));
      const double sign = mode.positive ? 1.0 : -1.0;
      mode.a = Eigen::Vector2d(-k2, k1) * (sign / norm);
      mode.zeta = std::pow(static_cast<double>(kk), -0.5 * spec.gamma);
      lambda2 += mode.zeta * mode.zeta;
      basis.modes.push_back(mode);
    }
  }
  if (basis.modes.empty()) throw ConfigError("noise shell is empty");
  basis.normalizer = std::sqrt(lambda2);
  for (auto& mode : basis.modes) mode.zeta /= basis.normalizer;

  std::map<std::pair<int, int>, int> lookup;
  for (int i = 0; i < static_cast<int>(basis.modes.size()); ++i) {
    lookup[{basis.modes[i].k.k1, basis.modes[i].k.k2}] = i;
  }
  for (int i = 0; i < static_cast<int>(basis.modes.size()); ++i) {
    const auto& mode = basis.modes[i];
    if (!mode.positive) continue;
    basis.positive.push_back(i);
    basis.partner.push_back(lookup.at({-mode.k.k1, -mode.k.k2}));
  }
  return basis;
}

SpectralVector assembleIncrement(const NoiseBasis& basis, const Grid& grid,
                                 const std::vector<Complex>& increments) {
  SpectralVector dv(grid);
  const double amp = std::sqrt(2.0 * basis.spec.kappa);
  for (std::size_t p = 0; p < basis.positive.size(); ++p) {
    const ShellMode& mode = basis.modes[basis.positive[p]];
    const Complex w = amp * mode.zeta * increments[p];
    const int i = grid.index(mode.k.k1);
    const int j = grid.index(mode.k.k2);
    const int in = grid.index(-mode.k.k1);
    const int jn = grid.index(-mode.k.k2);
    dv.x.coeffs(i, j) += mode.a.x() * w;
    dv.y.coeffs(i, j) += mode.a.y() * w;
    // a_{-k} = a_k and dW^{-k} = conj(dW^k)
    dv.x.coeffs(in, jn) += mode.a.x() * std::conj(w);
    dv.y.coeffs(in, jn) += mode.a.y() * std::conj(w);
  }
  return dv;
}

WienerIncrementField sampleIncrement(const NoiseBasis& basis, const Grid& grid,
                                     double dt, RandomStream& rng) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  WienerIncrementField out;
  out.increments.reserve(basis.positive.size());
  for (std::size_t p = 0; p < basis.positive.size(); ++p) {
    const double re = rng.normal(dt);
    const double im = rng.normal(dt);
    out.increments.emplace_back(re, im);
  }
  out.field = assembleIncrement(basis, grid, out.increments);
  return out;
}

double expectedIncrementEnergyRate(const NoiseBasis& basis) {
  // ||dV||^2 = (2 pi)^2 2 kappa sum_k zeta_k^2 |dW^k|^2, E|dW^k|^2 = 2 dt.
  return kTwoPi * kTwoPi * 4.0 * basis.spec.kappa * basis.zetaNormSquared();
}

SpectralScalar concentrationCorrector(const SpectralScalar& c,
                                      const NoiseSpec& spec) {
  return spec.kappa * laplacian(c);
}

VelocityCorrector::VelocityCorrector(const NoiseBasis& basis, const Grid& grid)
    : grid_(grid), multiplier_(RealArray::Zero(grid.size(), grid.size())) {
  const int m = grid.size();
  const double kappa = basis.spec.kappa;
  if (kappa == 0.0) return;
  for (int jj = 0; jj < m; ++jj) {
    const double j2 = grid.wavenumber(jj);
    for (int ii = 0; ii < m; ++ii) {
      const double j1 = grid.wavenumber(ii);
      const double jn = std::hypot(j1, j2);
      if (jn == 0.0) continue;
      const double p1 = -j2 / jn;
      const double p2 = j1 / jn;
      double sum = 0.0;
      for (const auto& mode : basis.modes) {
        const double aj = mode.a.x() * j1 + mode.a.y() * j2;
        if (aj == 0.0) continue;
        const double q1 = j1 - mode.k.k1;
        const double q2 = j2 - mode.k.k2;
        const double qq = q1 * q1 + q2 * q2;
        const double pq = p1 * q1 + p2 * q2;
        const double keep = qq == 0.0 ? 1.0 : 1.0 - pq * pq / qq;
        sum += mode.zeta * mode.zeta * aj * aj * keep;
      }
      multiplier_(ii, jj) = -2.0 * kappa * sum;
    }
  }
}

SpectralVector VelocityCorrector::apply(const SpectralVector& u) const {
  requireDivergenceFree(u);
  if (!(u.grid() == grid_)) throw InvalidFieldError("velocity corrector built for another grid");
  SpectralVector out(grid_);
  out.x.coeffs = u.x.coeffs * multiplier_.cast<Complex>();
  out.y.coeffs = u.y.coeffs * multiplier_.cast<Complex>();
  return out;
}

SpectralVector velocityCorrector(const SpectralVector& u, const NoiseBasis& basis) {
  return VelocityCorrector(basis, u.grid()).apply(u);
}

SpectralVector velocityCorrectorLiteral(const SpectralVector& u,
                                        const NoiseBasis& basis) {
  requireDivergenceFree(u);
  const Grid& g = u.grid();
  if (basis.spec.kappa == 0.0) return SpectralVector(g);
  // Intermediate fields reach wavenumbers support + 2N and must not wrap.
  if (supportRadius(u) + 2 * basis.spec.shell >= g.size() / 2) {
    throw ConfigError("grid too coarse for the literal corrector sum");
  }
  const int m = g.size();
  CoeffArray accx = CoeffArray::Zero(m, m);
  CoeffArray accy = CoeffArray::Zero(m, m);
  for (const auto& mode : basis.modes) {
    const Wavenumber minus{-mode.k.k1, -mode.k.k2};
    // sigma_{-k} = a_{-k} e_{-k} = a_k e_{-k}
    CoeffArray wx = directionalDerivativeTimesMode(u.x.coeffs, g, mode.a, minus);
    CoeffArray wy = directionalDerivativeTimesMode(u.y.coeffs, g, mode.a, minus);
    lerayInPlace(wx, wy, g);
    CoeffArray zx = directionalDerivativeTimesMode(wx, g, mode.a, mode.k);
    CoeffArray zy = directionalDerivativeTimesMode(wy, g, mode.a, mode.k);
    lerayInPlace(zx, zy, g);
    const double weight = 2.0 * basis.spec.kappa * mode.zeta * mode.zeta;
    accx += weight * zx;
    accy += weight * zy;
  }
  SpectralVector out{SpectralScalar(g, std::move(accx)), SpectralScalar(g, std::move(accy))};
  symmetrize(out.x);
  symmetrize(out.y);
  return out;
}

CorrectorBound correctorBoundReport(const SpectralVector& u,
                                    const NoiseBasis& basis, double s,
                                    double alpha) {
  CorrectorBound report;
  const double kappa = basis.spec.kappa;
  const SpectralVector diff =
      velocityCorrector(u, basis) - (0.25 * kappa) * laplacian(u);
  report.error = sobolevNorm(diff, s - 2.0 - alpha);
  report.scale = kappa * sobolevNorm(u, s) / std::pow(basis.spec.shell, alpha);
  report.ratio = report.scale > 0.0 ? report.error / report.scale : 0.0;
  return report;
}

}  // namespace npns
