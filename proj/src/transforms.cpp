#include "transforms.hpp"

#include "fft.hpp"

namespace npns::detail {

RealArray physical(const SpectralScalar& f) {
  const int m = f.grid.size();
  Eigen::ArrayXXcd out(m, m);
  fft2d(f.coeffs.data(), out.data(), m, +1);
  return out.real();
}

std::pair<RealArray, RealArray> physicalPair(const SpectralScalar& f,
                                             const SpectralScalar& g) {
  const int m = f.grid.size();
  const Eigen::ArrayXXcd packed = f.coeffs + Complex(0.0, 1.0) * g.coeffs;
  Eigen::ArrayXXcd out(m, m);
  fft2d(packed.data(), out.data(), m, +1);
  return {out.real(), out.imag()};
}

std::pair<SpectralScalar, SpectralScalar> spectralPair(const RealArray& f,
                                                       const RealArray& g,
                                                       const Grid& grid) {
  const int m = grid.size();
  Eigen::ArrayXXcd packed(m, m);
  packed.real() = f;
  packed.imag() = g;
  Eigen::ArrayXXcd h(m, m);
  fft2d(packed.data(), h.data(), m, -1);
  const double scale = 1.0 / (static_cast<double>(m) * m);
  SpectralScalar a(grid);
  SpectralScalar b(grid);
  for (int j = 0; j < m; ++j) {
    const int jn = (m - j) % m;
    for (int i = 0; i < m; ++i) {
      const int in = (m - i) % m;
      const Complex hk = h(i, j);
      const Complex hm = std::conj(h(in, jn));
      a.coeffs(i, j) = 0.5 * scale * (hk + hm);
      b.coeffs(i, j) = Complex(0.0, -0.5) * scale * (hk - hm);
    }
  }
  return {std::move(a), std::move(b)};
}

SpectralScalar divergenceOfFlux(const RealArray& fx, const RealArray& fy,
                                const Grid& grid) {
  auto [sx, sy] = spectralPair(fx, fy, grid);
  const int m = grid.size();
  SpectralScalar out(grid);
  for (int j = 0; j < m; ++j) {
    const double k2 = grid.derivativeSymbol(j);
    for (int i = 0; i < m; ++i) {
      if (!grid.retained(i, j)) continue;
      const double k1 = grid.derivativeSymbol(i);
      out.coeffs(i, j) = Complex(0.0, 1.0) * (k1 * sx.coeffs(i, j) + k2 * sy.coeffs(i, j));
    }
  }
  return out;
}

void lerayProjectInPlace(SpectralScalar& vx, SpectralScalar& vy) {
  const Grid& g = vx.grid;
  const int m = g.size();
  for (int j = 0; j < m; ++j) {
    const double k2 = g.derivativeSymbol(j);
    for (int i = 0; i < m; ++i) {
      const double k1 = g.derivativeSymbol(i);
      const double kk = k1 * k1 + k2 * k2;
      if (kk == 0.0) continue;
      const Complex kv = (k1 * vx.coeffs(i, j) + k2 * vy.coeffs(i, j)) / kk;
      vx.coeffs(i, j) -= k1 * kv;
      vy.coeffs(i, j) -= k2 * kv;
    }
  }
}

}  // namespace npns::detail
