#include "npns/initial.hpp"

#include <cmath>
#include <limits>

#include "npns/checkpoint.hpp"
#include "npns/rng.hpp"
#include "transforms.hpp"

namespace npns {

namespace {

SpectralScalar randomBand(const Grid& grid, int kmax, RandomStream& rng) {
  const int m = grid.size();
  SpectralScalar f(grid);
  for (int j = 0; j < m; ++j) {
    const int k2 = grid.wavenumber(j);
    for (int i = 0; i < m; ++i) {
      const int k1 = grid.wavenumber(i);
      if (std::max(std::abs(k1), std::abs(k2)) > kmax || (k1 == 0 && k2 == 0)) continue;
      f.coeffs(i, j) = Complex(rng.normal(1.0), rng.normal(1.0));
    }
  }
  symmetrize(f);
  return f;
}

}  // namespace

SpectralScalar randomBandScalar(const Grid& grid, int kmax, std::uint64_t seed,
                                std::uint64_t stream) {
  RandomStream rng(seed, stream);
  SpectralScalar f = randomBand(grid, kmax, rng);
  const double peak = lpNorm(f, std::numeric_limits<double>::infinity());
  if (peak > 0.0) f.coeffs /= peak;
  return f;
}

SpectralVector randomBandVelocity(const Grid& grid, int kmax, std::uint64_t seed,
                                  std::uint64_t stream) {
  RandomStream rng(seed, stream);
  SpectralVector u = perpGradient(randomBand(grid, kmax, rng));
  const double peak = lpNorm(u, std::numeric_limits<double>::infinity());
  if (peak > 0.0) u = (1.0 / peak) * u;
  return u;
}

SpectralVector taylorGreen(const Grid& grid) {
  // sin x1 cos x2 = (1/4i)(e^{i(x1+x2)} + e^{i(x1-x2)} - c.c.)
  SpectralVector u(grid);
  const Complex q(0.0, -0.25);
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      // u1 = sin x1 cos x2 has coefficient s1 q on (s1, s2);
      // u2 = -cos x1 sin x2 has -s2 q.
      u.x.at(s1, s2) = static_cast<double>(s1) * q;
      u.y.at(s1, s2) = -static_cast<double>(s2) * q;
    }
  }
  return u;
}

namespace {

void requireNonNegative(const State& s) {
  auto [c1, c2] = detail::physicalPair(s.c1, s.c2);
  if (c1.minCoeff() < 0.0 || c2.minCoeff() < 0.0) {
    throw ConfigError("initial concentrations must be non-negative at every grid point");
  }
}

}  // namespace

State buildInitialState(const RunConfig& config) {
  const InitialCondition& ic = config.initial;
  if (ic.kind == ConcentrationIc::kFromCheckpoint) {
    Checkpoint cp = loadCheckpoint(ic.checkpoint);
    if (cp.state.grid().size() != config.grid) {
      throw ConfigError("checkpoint grid " + std::to_string(cp.state.grid().size()) +
                        " differs from configured grid " + std::to_string(config.grid));
    }
    requireNonNegative(cp.state);
    return cp.state;
  }

  const Grid grid(config.grid);
  State s(grid);
  s.c1.coeffs(0, 0) = ic.cbar;
  s.c2.coeffs(0, 0) = ic.cbar;
  if (ic.kind == ConcentrationIc::kCosinePerturbation) {
    const int k1 = ic.modeK1;
    const int k2 = ic.modeK2;
    s.c1.at(k1, k2) += 0.5 * ic.epsilon;
    s.c1.at(-k1, -k2) += 0.5 * ic.epsilon;
    s.c2.at(k1, k2) -= 0.5 * ic.epsilon;
    s.c2.at(-k1, -k2) -= 0.5 * ic.epsilon;
  } else {
    s.c1.coeffs += ic.epsilon * randomBandScalar(grid, ic.kmax, ic.seed, 1).coeffs;
    s.c2.coeffs += ic.epsilon * randomBandScalar(grid, ic.kmax, ic.seed, 2).coeffs;
  }

  switch (ic.velocity) {
    case VelocityIc::kZero:
      break;
    case VelocityIc::kRandomBand:
      s.u = ic.velocityAmplitude * randomBandVelocity(grid, ic.velocityKmax, ic.seed, 3);
      break;
    case VelocityIc::kTaylorGreen:
      s.u = ic.velocityAmplitude * taylorGreen(grid);
      break;
  }

  requireNonNegative(s);
  refreshCoupling(s);
  return s;
}

}  // namespace npns
