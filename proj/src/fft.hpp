#ifndef NPNS_SRC_FFT_HPP_
#define NPNS_SRC_FFT_HPP_

#include <complex>

namespace npns::detail {

// Unnormalized 2D complex DFT of an M x M array, out of place.
// sign = -1 forward, +1 backward. Plans are cached per size; execution is
// safe from concurrent threads.
void fft2d(const std::complex<double>* in, std::complex<double>* out, int m,
           int sign);

}  // namespace npns::detail

#endif  // NPNS_SRC_FFT_HPP_
