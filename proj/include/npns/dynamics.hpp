#ifndef NPNS_DYNAMICS_HPP_
#define NPNS_DYNAMICS_HPP_

// Ito drift and noise action of the two-species (valences +1, -1, common
// diffusivity D) Nernst-Planck-Navier-Stokes system with shell transport
// noise:
//   dc1 = [(D+kappa) Lap c1 - u.grad c1 + D div(c1 grad phi)] dt + dV.grad c1
//   dc2 = [(D+kappa) Lap c2 - u.grad c2 - D div(c2 grad phi)] dt + dV.grad c2
//   du  = [nu Lap u + S(u) - Pi(u.grad u + rho grad phi)] dt + Pi(dV.grad u)
//   -Lap phi = rho = c1 - c2.
// Quadratic terms are formed on the grid in divergence form and truncated by
// the 2/3 rule, so the mean of every increment is exactly zero.

#include <optional>

#include "npns/noise.hpp"
#include "npns/spectral.hpp"

namespace npns {

struct SystemParams {
  double nu = 1.0;  // viscosity
  double D = 1.0;   // ionic diffusivity
  NoiseSpec noise;
};

void validate(const SystemParams& params);

/// Everything that stays fixed along a trajectory.
struct Model {
  Model(const Grid& g, const SystemParams& p);

  Grid grid;
  SystemParams params;
  NoiseBasis basis;
  VelocityCorrector corrector;
};

struct State {
  State() = default;
  explicit State(const Grid& g) : u(g), c1(g), c2(g), phi(g), rho(g) {}

  [[nodiscard]] const Grid& grid() const { return c1.grid; }

  SpectralVector u;
  SpectralScalar c1;
  SpectralScalar c2;
  SpectralScalar phi;  // cached, see refreshCoupling
  SpectralScalar rho;  // cached
};

/// rho = c1 - c2 and -Lap phi = rho. Throws SolvabilityError when the two
/// species have different means.
void refreshCoupling(State& state);

struct DriftEval {
  SpectralScalar dc1;
  SpectralScalar dc2;
  SpectralVector du;
};

struct NoiseAction {
  SpectralScalar dc1;
  SpectralScalar dc2;
  SpectralVector du;
};

/// v.grad f = div(v f), dealiased. v must be divergence free.
SpectralScalar advect(const SpectralVector& v, const SpectralScalar& f);
/// sign * D * div(c grad phi), dealiased.
SpectralScalar migration(const SpectralScalar& c, const SpectralScalar& phi,
                         int sign, double D);
/// -Pi(rho grad phi), dealiased, zero mean.
SpectralVector electricForce(const SpectralScalar& rho, const SpectralScalar& phi);
/// Pi(v.grad u) = Pi div(v (x) u), dealiased.
SpectralVector advectVector(const SpectralVector& v, const SpectralVector& u);

DriftEval fullDrift(const State& state, const Model& model);

/// Transport-noise action of one increment field: (dV.grad c1, dV.grad c2,
/// Pi(dV.grad u)).
NoiseAction applyTransportNoise(const State& state, const SpectralVector& dv);

/// The explicit part of one step, fused to share transforms:
///   dt * [-u.grad c_i +- D div(c_i grad phi)] + dV.grad c_i
///   dt * [-Pi(u.grad u) - Pi(rho grad phi)] + Pi(dV.grad u)
/// (linear diffusion and correctors excluded). Matches the separate
/// operators above.
NoiseAction explicitIncrement(const State& state, const Model& model, double dt,
                              const SpectralVector* dv);

}  // namespace npns

#endif  // NPNS_DYNAMICS_HPP_
