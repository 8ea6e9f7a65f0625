#ifndef NPNS_NOISE_HPP_
#define NPNS_NOISE_HPP_

// Fourier-shell transport noise
//   sqrt(2 kappa) sum_k zeta_k sigma_k dW^k,   sigma_k = a_k exp(i k.x),
// with zeta_k proportional to |k|^-gamma on N <= |k| <= 2N, normalized in
// l^2, and complex Brownian motions satisfying conj(W^k) = W^-k,
// [W^k, W^l]_t = 2t delta_{k,-l}.

#include <vector>

#include "npns/rng.hpp"
#include "npns/spectral.hpp"

namespace npns {

struct NoiseSpec {
  double kappa = 0.0;  // intensity
  int shell = 1;       // N
  double gamma = 1.0;  // profile exponent
};

struct ShellMode {
  Wavenumber k;
  double zeta = 0.0;
  Eigen::Vector2d a;      // unit, a . k = 0
  bool positive = false;  // k in Z^2_+
};

/// Shell modes with their weights. Immutable once built and shareable.
///
/// The partition is Z^2_+ = {k1 > 0} u {k1 = 0, k2 > 0} and
/// a_k = +-k_perp/|k| with k_perp = (-k2, k1), the sign being + on Z^2_+.
/// Hence a_{-k} = a_k and sigma_{-k} = conj(sigma_k).
struct NoiseBasis {
  NoiseSpec spec;
  double normalizer = 0.0;  // Lambda_N
  std::vector<ShellMode> modes;

  /// Indices into `modes` of the Z^2_+ representatives, and of their
  /// partners -k (same order).
  std::vector<int> positive;
  std::vector<int> partner;

  [[nodiscard]] double zetaNormSquared() const;
};

/// Throws ConfigError when the spec is invalid or the shell is not
/// resolved by the grid (2N > M/3).
NoiseBasis buildNoiseBasis(const NoiseSpec& spec, const Grid& grid);

/// One Wiener increment of the noise over a step dt.
struct WienerIncrementField {
  /// sqrt(2 kappa) sum_k zeta_k a_k e_k dW^k, real and divergence free.
  SpectralVector field;
  /// dW^k for each entry of NoiseBasis::positive.
  std::vector<Complex> increments;
};

WienerIncrementField sampleIncrement(const NoiseBasis& basis, const Grid& grid,
                                     double dt, RandomStream& rng);

/// Assemble the field from given increments (dW^k for k in Z^2_+).
SpectralVector assembleIncrement(const NoiseBasis& basis, const Grid& grid,
                                 const std::vector<Complex>& increments);

/// E ||dV||_{L^2}^2 / dt for the basis: (2 pi)^2 * 4 kappa.
double expectedIncrementEnergyRate(const NoiseBasis& basis);

/// Ito corrector for scalars: kappa * Laplace(c).
SpectralScalar concentrationCorrector(const SpectralScalar& c,
                                      const NoiseSpec& spec);

/// Ito corrector for the velocity,
///   S(u) = sum_k L_k L_{-k} u
///        = 2 kappa sum_k zeta_k^2 Pi[sigma_k . grad Pi(sigma_{-k} . grad u)],
/// which tends to (kappa/4) Laplace(u) as N grows.
///
/// On divergence-free input S is diagonal in Fourier space: mode j is scaled
/// by
///   s(j) = -2 kappa sum_k zeta_k^2 (a_k.j)^2 (1 - (jperp.(j-k))^2/|j-k|^2),
/// jperp = j_perp/|j|. The multiplier is precomputed once per grid.
class VelocityCorrector {
 public:
  VelocityCorrector(const NoiseBasis& basis, const Grid& grid);

  /// Throws InvalidFieldError if u is not divergence free (1e-8).
  [[nodiscard]] SpectralVector apply(const SpectralVector& u) const;
  [[nodiscard]] const RealArray& multiplier() const { return multiplier_; }

 private:
  Grid grid_;
  RealArray multiplier_;
};

SpectralVector velocityCorrector(const SpectralVector& u,
                                 const NoiseBasis& basis);

/// Same operator evaluated term by term: each product with sigma_{+-k}
/// taken in physical space, Leray projections in Fourier space. Cost grows
/// with the shell size; used to certify the multiplier form.
SpectralVector velocityCorrectorLiteral(const SpectralVector& u,
                                        const NoiseBasis& basis);

struct CorrectorBound {
  double error = 0.0;  // ||S(u) - (kappa/4) Laplace u||_{H^{s-2-alpha}}
  double scale = 0.0;  // kappa ||u||_{H^s} / N^alpha
  double ratio = 0.0;  // error / scale, 0 when u = 0
};

CorrectorBound correctorBoundReport(const SpectralVector& u,
                                    const NoiseBasis& basis, double s,
                                    double alpha);

}  // namespace npns

#endif  // NPNS_NOISE_HPP_
