#ifndef NPNS_SRC_TRANSFORMS_HPP_
#define NPNS_SRC_TRANSFORMS_HPP_

// Transforms for fields known to be real. Two real fields share one complex
// FFT: ifft(F + iG) = f + ig, and the forward direction splits the result
// by Hermitian symmetry.

#include <utility>

#include "npns/spectral.hpp"

namespace npns::detail {

RealArray physical(const SpectralScalar& f);
std::pair<RealArray, RealArray> physicalPair(const SpectralScalar& f,
                                             const SpectralScalar& g);
std::pair<SpectralScalar, SpectralScalar> spectralPair(const RealArray& f,
                                                       const RealArray& g,
                                                       const Grid& grid);

/// div(F) for a physical flux (fx, fy), truncated by the 2/3 rule.
SpectralScalar divergenceOfFlux(const RealArray& fx, const RealArray& fy,
                                const Grid& grid);

/// Leray projection of a spectral vector given by components, in place.
void lerayProjectInPlace(SpectralScalar& vx, SpectralScalar& vy);

}  // namespace npns::detail

#endif  // NPNS_SRC_TRANSFORMS_HPP_
