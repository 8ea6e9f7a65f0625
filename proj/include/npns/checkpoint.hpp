#ifndef NPNS_CHECKPOINT_HPP_
#define NPNS_CHECKPOINT_HPP_

// Binary layout, all little endian:
//   8 bytes  magic "NPNSCKPT"
//   u32      version
//   u32      M
//   f64 x 4  nu, D, kappa, gamma
//   u32      N (shell)
//   f64      t
//   then u.x, u.y, c1, c2: M*M (re, im) f64 pairs each, row-major in
//   (k1 index, k2 index) with FFT ordering of wavenumbers.

#include <cstdint>
#include <string>
#include <vector>

#include "npns/config.hpp"
#include "npns/dynamics.hpp"

namespace npns {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  SystemParams params;
  double t = 0.0;
  State state;  // phi and rho are recomputed on load
};

std::vector<char> encodeCheckpoint(const Checkpoint& checkpoint);
/// Throws IoError on a bad magic string, version mismatch, truncation or
/// trailing bytes.
Checkpoint decodeCheckpoint(const std::vector<char>& bytes);

void saveCheckpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint loadCheckpoint(const std::string& path);

}  // namespace npns

#endif  // NPNS_CHECKPOINT_HPP_
