#include "npns/dynamics.hpp"

#include <cmath>

#include "transforms.hpp"

namespace npns {

using detail::divergenceOfFlux;
using detail::physical;
using detail::physicalPair;
using detail::spectralPair;

void validate(const SystemParams& params) {
  if (!(params.nu > 0.0)) throw ConfigError("viscosity nu must be > 0");
  if (!(params.D > 0.0)) throw ConfigError("diffusivity D must be > 0");
  if (!(params.noise.kappa >= 0.0)) throw ConfigError("noise intensity kappa must be >= 0");
}

namespace {

NoiseBasis checkedBasis(const Grid& g, const SystemParams& p) {
  validate(p);
  return buildNoiseBasis(p.noise, g);
}

}  // namespace

Model::Model(const Grid& g, const SystemParams& p)
    : grid(g), params(p), basis(checkedBasis(g, p)), corrector(basis, g) {}

void refreshCoupling(State& state) {
  state.rho = state.c1 - state.c2;
  if (std::abs(state.rho.mean()) <= 1e-10) state.rho.coeffs(0, 0) = 0.0;
  state.phi = poissonSolve(state.rho);
}

SpectralScalar advect(const SpectralVector& v, const SpectralScalar& f) {
  const RealArray fp = physical(f);
  const RealArray vx = physical(v.x);
  const RealArray vy = physical(v.y);
  return divergenceOfFlux(vx * fp, vy * fp, f.grid);
}

SpectralScalar migration(const SpectralScalar& c, const SpectralScalar& phi,
                         int sign, double D) {
  const SpectralVector gp = gradient(phi);
  const RealArray cp = physical(c);
  const RealArray gx = physical(gp.x);
  const RealArray gy = physical(gp.y);
  return (sign * D) * divergenceOfFlux(cp * gx, cp * gy, c.grid);
}

SpectralVector electricForce(const SpectralScalar& rho, const SpectralScalar& phi) {
  const Grid& g = rho.grid;
  const SpectralVector gp = gradient(phi);
  const RealArray rp = physical(rho);
  SpectralVector f{toSpectral(-1.0 * (rp * physical(gp.x)), g),
                   toSpectral(-1.0 * (rp * physical(gp.y)), g)};
  dealiasInPlace(f.x);
  dealiasInPlace(f.y);
  f.x.coeffs(0, 0) = 0.0;
  f.y.coeffs(0, 0) = 0.0;
  detail::lerayProjectInPlace(f.x, f.y);
  return f;
}

SpectralVector advectVector(const SpectralVector& v, const SpectralVector& u) {
  SpectralVector out{advect(v, u.x), advect(v, u.y)};
  detail::lerayProjectInPlace(out.x, out.y);
  return out;
}

NoiseAction explicitIncrement(const State& state, const Model& model, double dt,
                              const SpectralVector* dv) {
  const Grid& g = state.grid();
  const double D = model.params.D;

  auto [c1, c2] = physicalPair(state.c1, state.c2);
  auto [ux, uy] = physicalPair(state.u.x, state.u.y);
  auto [ex, ey] = physicalPair(partialX(state.phi), partialY(state.phi));

  // Transporting velocity: dV - dt u.
  RealArray wx = -dt * ux;
  RealArray wy = -dt * uy;
  if (dv != nullptr) {
    auto [vx, vy] = physicalPair(dv->x, dv->y);
    wx += vx;
    wy += vy;
  }

  NoiseAction out;
  const double mig = dt * D;
  out.dc1 = divergenceOfFlux(c1 * (wx + mig * ex), c1 * (wy + mig * ey), g);
  out.dc2 = divergenceOfFlux(c2 * (wx - mig * ex), c2 * (wy - mig * ey), g);

  SpectralScalar vx = divergenceOfFlux(wx * ux, wy * ux, g);
  SpectralScalar vy = divergenceOfFlux(wx * uy, wy * uy, g);
  if (dt != 0.0) {
    const RealArray rho = c1 - c2;
    auto [fx, fy] = spectralPair(rho * ex, rho * ey, g);
    dealiasInPlace(fx);
    dealiasInPlace(fy);
    fx.coeffs(0, 0) = 0.0;
    fy.coeffs(0, 0) = 0.0;
    vx.coeffs -= dt * fx.coeffs;
    vy.coeffs -= dt * fy.coeffs;
  }
  detail::lerayProjectInPlace(vx, vy);
  out.du = SpectralVector(std::move(vx), std::move(vy));
  return out;
}

DriftEval fullDrift(const State& state, const Model& model) {
  const NoiseAction nonlinear = explicitIncrement(state, model, 1.0, nullptr);
  const double D = model.params.D;
  const double kappa = model.params.noise.kappa;
  DriftEval drift;
  drift.dc1 = (D + kappa) * laplacian(state.c1) + nonlinear.dc1;
  drift.dc2 = (D + kappa) * laplacian(state.c2) + nonlinear.dc2;
  drift.du = model.params.nu * laplacian(state.u) + nonlinear.du;
  if (kappa != 0.0) drift.du = drift.du + model.corrector.apply(state.u);
  return drift;
}

NoiseAction applyTransportNoise(const State& state, const SpectralVector& dv) {
  NoiseAction out;
  const RealArray vx = physical(dv.x);
  const RealArray vy = physical(dv.y);
  const auto transport = [&](const SpectralScalar& f) {
    const RealArray fp = physical(f);
    return divergenceOfFlux(vx * fp, vy * fp, f.grid);
  };
  out.dc1 = transport(state.c1);
  out.dc2 = transport(state.c2);
  out.du = SpectralVector(transport(state.u.x), transport(state.u.y));
  detail::lerayProjectInPlace(out.du.x, out.du.y);
  return out;
}

}  // namespace npns
