#include "npns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"

namespace npns {

Grid::Grid(int modes) : m_(modes) {
  if (modes < 8 || modes % 2 != 0) {
    throw ConfigError("grid resolution must be even and >= 8, got " +
                      std::to_string(modes));
  }
}

namespace {

void requireSameGrid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw InvalidFieldError("fields live on different grids");
}

template <typename Fn>
SpectralScalar multiplyBySymbol(const SpectralScalar& f, Fn symbol) {
  const Grid& g = f.grid;
  const int m = g.size();
  SpectralScalar out(g);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) out.coeffs(i, j) = symbol(i, j) * f.coeffs(i, j);
  }
  return out;
}

}  // namespace

SpectralScalar operator+(const SpectralScalar& a, const SpectralScalar& b) {
  requireSameGrid(a.grid, b.grid);
  return {a.grid, a.coeffs + b.coeffs};
}
SpectralScalar operator-(const SpectralScalar& a, const SpectralScalar& b) {
  requireSameGrid(a.grid, b.grid);
  return {a.grid, a.coeffs - b.coeffs};
}
SpectralScalar operator*(double s, const SpectralScalar& a) {
  return {a.grid, s * a.coeffs};
}
SpectralVector operator+(const SpectralVector& a, const SpectralVector& b) {
  return {a.x + b.x, a.y + b.y};
}
SpectralVector operator-(const SpectralVector& a, const SpectralVector& b) {
  return {a.x - b.x, a.y - b.y};
}
SpectralVector operator*(double s, const SpectralVector& a) {
  return {s * a.x, s * a.y};
}

double hermitianDefect(const SpectralScalar& f) {
  const int m = f.grid.size();
  double defect = 0.0;
  double scale = 0.0;
  for (int j = 0; j < m; ++j) {
    const int jn = (m - j) % m;
    for (int i = 0; i < m; ++i) {
      const int in = (m - i) % m;
      defect = std::max(defect, std::abs(f.coeffs(in, jn) - std::conj(f.coeffs(i, j))));
      scale = std::max(scale, std::abs(f.coeffs(i, j)));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

void symmetrize(SpectralScalar& f) {
  const int m = f.grid.size();
  CoeffArray out(m, m);
  for (int j = 0; j < m; ++j) {
    const int jn = (m - j) % m;
    for (int i = 0; i < m; ++i) {
      const int in = (m - i) % m;
      out(i, j) = 0.5 * (f.coeffs(i, j) + std::conj(f.coeffs(in, jn)));
    }
  }
  f.coeffs = std::move(out);
}

Eigen::ArrayXXcd toPhysicalComplex(const CoeffArray& coeffs, const Grid& g) {
  const int m = g.size();
  Eigen::ArrayXXcd out(m, m);
  detail::fft2d(coeffs.data(), out.data(), m, +1);
  return out;
}

CoeffArray toSpectralComplex(const Eigen::ArrayXXcd& samples, const Grid& g) {
  const int m = g.size();
  CoeffArray out(m, m);
  detail::fft2d(samples.data(), out.data(), m, -1);
  out /= static_cast<double>(m) * m;
  return out;
}

RealArray toPhysical(const SpectralScalar& f) {
  if (hermitianDefect(f) > 1e-10) {
    throw InvalidFieldError("coefficients are not Hermitian symmetric");
  }
  return toPhysicalComplex(f.coeffs, f.grid).real();
}

SpectralScalar toSpectral(const RealArray& samples, const Grid& g) {
  const Eigen::ArrayXXcd z = samples.cast<Complex>();
  SpectralScalar f(g, toSpectralComplex(z, g));
  return f;
}

SpectralScalar partialX(const SpectralScalar& f) {
  const Grid& g = f.grid;
  return multiplyBySymbol(f, [&](int i, int) {
    return Complex(0.0, g.derivativeSymbol(i));
  });
}

SpectralScalar partialY(const SpectralScalar& f) {
  const Grid& g = f.grid;
  return multiplyBySymbol(f, [&](int, int j) {
    return Complex(0.0, g.derivativeSymbol(j));
  });
}

SpectralVector gradient(const SpectralScalar& f) {
  return {partialX(f), partialY(f)};
}

SpectralVector perpGradient(const SpectralScalar& f) {
  return {-1.0 * partialY(f), partialX(f)};
}

SpectralScalar laplacian(const SpectralScalar& f) {
  const Grid& g = f.grid;
  return multiplyBySymbol(f, [&](int i, int j) {
    const double k1 = g.wavenumber(i);
    const double k2 = g.wavenumber(j);
    return Complex(-(k1 * k1 + k2 * k2), 0.0);
  });
}

SpectralVector laplacian(const SpectralVector& v) {
  return {laplacian(v.x), laplacian(v.y)};
}

SpectralScalar divergence(const SpectralVector& v) {
  requireSameGrid(v.x.grid, v.y.grid);
  return partialX(v.x) + partialY(v.y);
}

SpectralVector lerayProject(const SpectralVector& v) {
  const Grid& g = v.grid();
  const int m = g.size();
  SpectralVector out(g);
  for (int j = 0; j < m; ++j) {
    const double k2 = g.derivativeSymbol(j);
    for (int i = 0; i < m; ++i) {
      const double k1 = g.derivativeSymbol(i);
      const double kk = k1 * k1 + k2 * k2;
      const Complex a = v.x.coeffs(i, j);
      const Complex b = v.y.coeffs(i, j);
      if (kk == 0.0) {
        out.x.coeffs(i, j) = a;
        out.y.coeffs(i, j) = b;
        continue;
      }
      const Complex kv = (k1 * a + k2 * b) / kk;
      out.x.coeffs(i, j) = a - k1 * kv;
      out.y.coeffs(i, j) = b - k2 * kv;
    }
  }
  return out;
}

SpectralScalar poissonSolve(const SpectralScalar& rho) {
  if (std::abs(rho.mean()) > 1e-10) {
    throw SolvabilityError("charge density has nonzero mean; -Laplace(phi) = rho "
                           "is not solvable on the torus");
  }
  const Grid& g = rho.grid;
  return multiplyBySymbol(rho, [&](int i, int j) {
    const double k1 = g.wavenumber(i);
    const double k2 = g.wavenumber(j);
    const double kk = k1 * k1 + k2 * k2;
    return kk == 0.0 ? Complex(0.0) : Complex(1.0 / kk);
  });
}

void dealiasInPlace(SpectralScalar& f) {
  const Grid& g = f.grid;
  const int m = g.size();
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!g.retained(i, j)) f.coeffs(i, j) = 0.0;
    }
  }
}

SpectralScalar dealias(const SpectralScalar& f) {
  SpectralScalar out = f;
  dealiasInPlace(out);
  return out;
}

SpectralVector dealias(const SpectralVector& v) {
  return {dealias(v.x), dealias(v.y)};
}

double sobolevNorm(const SpectralScalar& f, double s) {
  const Grid& g = f.grid;
  const int m = g.size();
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const double k2 = g.wavenumber(j);
    for (int i = 0; i < m; ++i) {
      const double k1 = g.wavenumber(i);
      const double w = s == 0.0 ? 1.0 : std::pow(1.0 + k1 * k1 + k2 * k2, s);
      sum += w * std::norm(f.coeffs(i, j));
    }
  }
  return kTwoPi * std::sqrt(sum);
}

double sobolevNorm(const SpectralVector& v, double s) {
  return std::hypot(sobolevNorm(v.x, s), sobolevNorm(v.y, s));
}

double lpNorm(const SpectralScalar& f, double p) {
  const RealArray samples = toPhysical(f);
  if (std::isinf(p)) return samples.abs().maxCoeff();
  if (p != 1.0 && p != 2.0 && p != 3.0) {
    throw ConfigError("lpNorm supports p in {1, 2, 3, inf}");
  }
  const double cell = std::pow(f.grid.spacing(), 2);
  return std::pow(cell * samples.abs().pow(p).sum(), 1.0 / p);
}

double lpNorm(const SpectralVector& v, double p) {
  const RealArray a = toPhysical(v.x);
  const RealArray b = toPhysical(v.y);
  const RealArray mag = (a.square() + b.square()).sqrt();
  if (std::isinf(p)) return mag.maxCoeff();
  const double cell = std::pow(v.grid().spacing(), 2);
  return std::pow(cell * mag.pow(p).sum(), 1.0 / p);
}

double innerProduct(const SpectralScalar& f, const SpectralScalar& g) {
  requireSameGrid(f.grid, g.grid);
  const Complex sum = (f.coeffs * g.coeffs.conjugate()).sum();
  return kTwoPi * kTwoPi * sum.real();
}

double innerProduct(const SpectralVector& f, const SpectralVector& g) {
  return innerProduct(f.x, g.x) + innerProduct(f.y, g.y);
}

double l2NormSquared(const SpectralScalar& f) {
  return kTwoPi * kTwoPi * f.coeffs.abs2().sum();
}

double l2NormSquared(const SpectralVector& v) {
  return l2NormSquared(v.x) + l2NormSquared(v.y);
}

double divergenceDefect(const SpectralVector& v) {
  const Grid& g = v.grid();
  const int m = g.size();
  double defect = 0.0;
  double scale = 0.0;
  for (int j = 0; j < m; ++j) {
    const double k2 = g.derivativeSymbol(j);
    for (int i = 0; i < m; ++i) {
      const double k1 = g.derivativeSymbol(i);
      const Complex a = v.x.coeffs(i, j);
      const Complex b = v.y.coeffs(i, j);
      defect = std::max(defect, std::abs(k1 * a + k2 * b));
      scale = std::max(scale, std::sqrt(k1 * k1 + k2 * k2) *
                                  std::sqrt(std::norm(a) + std::norm(b)));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

}  // namespace npns
