#ifndef NPNS_INITIAL_HPP_
#define NPNS_INITIAL_HPP_

#include <cstdint>

#include "npns/config.hpp"
#include "npns/dynamics.hpp"

namespace npns {

/// Real field with independent Gaussian coefficients on 1 <= max|k_i| <= kmax,
/// scaled to unit maximum over the collocation points.
SpectralScalar randomBandScalar(const Grid& grid, int kmax, std::uint64_t seed,
                                std::uint64_t stream);
/// Divergence-free, zero-mean field perpGrad(psi) with psi as above, scaled to
/// unit maximum of |u|.
SpectralVector randomBandVelocity(const Grid& grid, int kmax, std::uint64_t seed,
                                  std::uint64_t stream);
/// (sin x1 cos x2, -cos x1 sin x2).
SpectralVector taylorGreen(const Grid& grid);

/// Builds the initial state with coupling refreshed. Concentrations are
///   cosine-perturbation: c1,2 = cbar +- epsilon cos(k.x),
///   random-band:         c1,2 = cbar + epsilon g1,2 (independent fields),
/// or read from a checkpoint. Throws ConfigError when a concentration is
/// negative at a collocation point.
State buildInitialState(const RunConfig& config);

}  // namespace npns

#endif  // NPNS_INITIAL_HPP_
