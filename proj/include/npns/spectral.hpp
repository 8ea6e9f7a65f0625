#ifndef NPNS_SPECTRAL_HPP_
#define NPNS_SPECTRAL_HPP_

// Fourier representation of real fields on the 2*pi-periodic torus.
//
// A field f is stored through its coefficients f_k, k = (k1, k2), with
//   f(x) = sum_k f_k exp(i k.x),   f_k = (2 pi)^-2 int f(x) exp(-i k.x) dx.
// Coefficients live in a full M x M complex array: row index <-> k1,
// column index <-> k2, both in FFT order (0, 1, ..., M/2-1, -M/2, ..., -1).

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace npns {

using Complex = std::complex<double>;
using CoeffArray = Eigen::ArrayXXcd;
using RealArray = Eigen::ArrayXXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class InvalidFieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Wavenumber {
  int k1 = 0;
  int k2 = 0;
  friend bool operator==(const Wavenumber&, const Wavenumber&) = default;
  [[nodiscard]] int norm2() const { return k1 * k1 + k2 * k2; }
};

/// Collocation grid with M points per axis on [0, 2 pi)^2.
class Grid {
 public:
  explicit Grid(int modes);

  [[nodiscard]] int size() const { return m_; }
  /// Largest |k_i| kept by the 2/3 rule.
  [[nodiscard]] int dealiasRadius() const { return m_ / 3; }
  [[nodiscard]] double spacing() const { return kTwoPi / m_; }

  /// Signed wavenumber of array index i (FFT order).
  [[nodiscard]] int wavenumber(int index) const {
    return index < m_ / 2 ? index : index - m_;
  }
  /// Array index of a signed wavenumber, or -1 when it is not representable.
  [[nodiscard]] int index(int wavenumber) const {
    if (wavenumber < -m_ / 2 || wavenumber >= m_ / 2) return -1;
    return wavenumber >= 0 ? wavenumber : wavenumber + m_;
  }
  /// Derivative symbol; zero on the unpaired Nyquist line.
  [[nodiscard]] double derivativeSymbol(int index) const {
    return index == m_ / 2 ? 0.0 : static_cast<double>(wavenumber(index));
  }
  [[nodiscard]] bool retained(int i1, int i2) const {
    return std::abs(wavenumber(i1)) <= dealiasRadius() &&
           std::abs(wavenumber(i2)) <= dealiasRadius();
  }
  [[nodiscard]] double coordinate(int index) const { return spacing() * index; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.m_ == b.m_; }

 private:
  int m_;
};

/// Real scalar field held by its Fourier coefficients.
struct SpectralScalar {
  SpectralScalar() = default;
  explicit SpectralScalar(const Grid& g)
      : grid(g), coeffs(CoeffArray::Zero(g.size(), g.size())) {}
  SpectralScalar(const Grid& g, CoeffArray c) : grid(g), coeffs(std::move(c)) {}

  Complex& at(int k1, int k2) { return coeffs(grid.index(k1), grid.index(k2)); }
  [[nodiscard]] const Complex& at(int k1, int k2) const {
    return coeffs(grid.index(k1), grid.index(k2));
  }
  [[nodiscard]] Complex mean() const { return coeffs(0, 0); }

  Grid grid{8};
  CoeffArray coeffs;
};

/// Real vector field, one SpectralScalar per component.
struct SpectralVector {
  SpectralVector() = default;
  explicit SpectralVector(const Grid& g) : x(g), y(g) {}
  SpectralVector(SpectralScalar a, SpectralScalar b)
      : x(std::move(a)), y(std::move(b)) {}

  [[nodiscard]] const Grid& grid() const { return x.grid; }

  SpectralScalar x;
  SpectralScalar y;
};

// Arithmetic helpers. Fields must share a grid.
SpectralScalar operator+(const SpectralScalar& a, const SpectralScalar& b);
SpectralScalar operator-(const SpectralScalar& a, const SpectralScalar& b);
SpectralScalar operator*(double s, const SpectralScalar& a);
SpectralVector operator+(const SpectralVector& a, const SpectralVector& b);
SpectralVector operator-(const SpectralVector& a, const SpectralVector& b);
SpectralVector operator*(double s, const SpectralVector& a);

/// Largest |f_{-k} - conj(f_k)|, relative to the largest |f_k|.
double hermitianDefect(const SpectralScalar& f);
/// Overwrites f with its Hermitian part (f_k + conj(f_{-k})) / 2.
void symmetrize(SpectralScalar& f);

/// Samples on the M x M collocation grid; entry (i, j) is f(x_i, y_j).
RealArray toPhysical(const SpectralScalar& f);
SpectralScalar toSpectral(const RealArray& samples, const Grid& g);

/// Complex-valued transforms used by brute-force operator sums.
Eigen::ArrayXXcd toPhysicalComplex(const CoeffArray& coeffs, const Grid& g);
CoeffArray toSpectralComplex(const Eigen::ArrayXXcd& samples, const Grid& g);

SpectralVector gradient(const SpectralScalar& f);
/// (-d2 f, d1 f); divergence free by construction.
SpectralVector perpGradient(const SpectralScalar& f);
SpectralScalar partialX(const SpectralScalar& f);
SpectralScalar partialY(const SpectralScalar& f);
SpectralScalar laplacian(const SpectralScalar& f);
SpectralVector laplacian(const SpectralVector& v);
SpectralScalar divergence(const SpectralVector& v);
SpectralVector lerayProject(const SpectralVector& v);

/// Solves -Laplace(phi) = rho with zero mean. Throws SolvabilityError when
/// |rho_0| > 1e-10.
SpectralScalar poissonSolve(const SpectralScalar& rho);

/// 2/3 rule: zero every mode with max(|k1|, |k2|) > M/3.
SpectralScalar dealias(const SpectralScalar& f);
void dealiasInPlace(SpectralScalar& f);
SpectralVector dealias(const SpectralVector& v);

/// (sum_k (1 + |k|^2)^s |f_k|^2 (2 pi)^2)^{1/2}.
double sobolevNorm(const SpectralScalar& f, double s);
double sobolevNorm(const SpectralVector& v, double s);
/// Collocation quadrature; p in {1, 2, 3} or +infinity.
double lpNorm(const SpectralScalar& f, double p);
double lpNorm(const SpectralVector& v, double p);
/// <f, g>_{L^2} = (2 pi)^2 sum_k f_k conj(g_k), real part.
double innerProduct(const SpectralScalar& f, const SpectralScalar& g);
double innerProduct(const SpectralVector& f, const SpectralVector& g);
/// ||f||_{L^2}^2 via Parseval.
double l2NormSquared(const SpectralScalar& f);
double l2NormSquared(const SpectralVector& v);

/// Max over modes of |k . v_k|, relative to the largest |k||v_k|.
double divergenceDefect(const SpectralVector& v);

}  // namespace npns

#endif  // NPNS_SPECTRAL_HPP_
