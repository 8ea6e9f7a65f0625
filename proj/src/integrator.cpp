#include "npns/integrator.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "transforms.hpp"

namespace npns {

Scheme parseScheme(const std::string& name) {
  if (name == "exponential-euler") return Scheme::kExponentialEuler;
  if (name == "semi-implicit-euler") return Scheme::kSemiImplicitEuler;
  if (name == "transport-splitting") return Scheme::kTransportSplitting;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string schemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kExponentialEuler:
      return "exponential-euler";
    case Scheme::kSemiImplicitEuler:
      return "semi-implicit-euler";
    case Scheme::kTransportSplitting:
      return "transport-splitting";
  }
  return "unknown";
}

namespace {

RealArray squaredWavenumbers(const Grid& grid) {
  const int m = grid.size();
  RealArray kk(m, m);
  for (int j = 0; j < m; ++j) {
    const double k2 = grid.wavenumber(j);
    for (int i = 0; i < m; ++i) {
      const double k1 = grid.wavenumber(i);
      kk(i, j) = k1 * k1 + k2 * k2;
    }
  }
  return kk;
}

// 1 + dt (s(k) + (kappa/4)|k|^2): one explicit step of S(u) - (kappa/4) Lap u.
RealArray correctorResidualFactor(const Model& model, double dt) {
  const double kappa = model.params.noise.kappa;
  const RealArray kk = squaredWavenumbers(model.grid);
  return 1.0 + dt * (model.corrector.multiplier() + 0.25 * kappa * kk);
}

void scale(SpectralScalar& f, const RealArray& factor) {
  f.coeffs *= factor.cast<Complex>();
}

bool finite(const State& s) {
  const double total = s.c1.coeffs.abs2().sum() + s.c2.coeffs.abs2().sum() +
                       s.u.x.coeffs.abs2().sum() + s.u.y.coeffs.abs2().sum();
  return std::isfinite(total);
}

}  // namespace

Semigroups::Semigroups(const Grid& grid, double concentrationDiffusivity,
                       double velocityDiffusivity, double dt) {
  const RealArray kk = squaredWavenumbers(grid);
  concentration = (-concentrationDiffusivity * dt * kk).exp();
  velocity = (-velocityDiffusivity * dt * kk).exp();
}

namespace {

std::string blowUpMessage(double t) {
  std::ostringstream os;
  os << "non-finite coefficient at t = " << t;
  return os.str();
}

}  // namespace

BlowUpError::BlowUpError(double t, EnergyRecord snapshot)
    : std::runtime_error(blowUpMessage(t)), t_(t), snapshot_(snapshot) {}

State stepExponentialEuler(const State& state, const Model& model,
                           const Semigroups& semigroups, double dt,
                           const SpectralVector* dv) {
  NoiseAction inc = explicitIncrement(state, model, dt, dv);
  State next(state.grid());
  next.c1.coeffs = state.c1.coeffs + inc.dc1.coeffs;
  next.c2.coeffs = state.c2.coeffs + inc.dc2.coeffs;
  next.u.x.coeffs = state.u.x.coeffs;
  next.u.y.coeffs = state.u.y.coeffs;
  if (model.params.noise.kappa != 0.0) {
    const RealArray residual = correctorResidualFactor(model, dt);
    scale(next.u.x, residual);
    scale(next.u.y, residual);
  }
  next.u.x.coeffs += inc.du.x.coeffs;
  next.u.y.coeffs += inc.du.y.coeffs;
  scale(next.c1, semigroups.concentration);
  scale(next.c2, semigroups.concentration);
  scale(next.u.x, semigroups.velocity);
  scale(next.u.y, semigroups.velocity);
  dealiasInPlace(next.c1);
  dealiasInPlace(next.c2);
  dealiasInPlace(next.u.x);
  dealiasInPlace(next.u.y);
  if (finite(next)) refreshCoupling(next);
  return next;
}

State stepExponentialEuler(const State& state, const Model& model, double dt,
                           const SpectralVector* dv) {
  const double kappa = model.params.noise.kappa;
  const Semigroups semigroups(model.grid, model.params.D + kappa,
                              model.params.nu + 0.25 * kappa, dt);
  return stepExponentialEuler(state, model, semigroups, dt, dv);
}

State stepSemiImplicit(const State& state, const Model& model, double dt,
                       const SpectralVector* dv) {
  const double kappa = model.params.noise.kappa;
  const RealArray kk = squaredWavenumbers(model.grid);
  const RealArray qc = 1.0 / (1.0 + (model.params.D + kappa) * dt * kk);
  const RealArray qu = 1.0 / (1.0 + (model.params.nu + 0.25 * kappa) * dt * kk);

  NoiseAction inc = explicitIncrement(state, model, dt, dv);
  State next(state.grid());
  next.c1.coeffs = state.c1.coeffs + inc.dc1.coeffs;
  next.c2.coeffs = state.c2.coeffs + inc.dc2.coeffs;
  next.u.x.coeffs = state.u.x.coeffs;
  next.u.y.coeffs = state.u.y.coeffs;
  if (kappa != 0.0) {
    const RealArray residual = correctorResidualFactor(model, dt);
    scale(next.u.x, residual);
    scale(next.u.y, residual);
  }
  next.u.x.coeffs += inc.du.x.coeffs;
  next.u.y.coeffs += inc.du.y.coeffs;
  scale(next.c1, qc);
  scale(next.c2, qc);
  scale(next.u.x, qu);
  scale(next.u.y, qu);
  dealiasInPlace(next.c1);
  dealiasInPlace(next.c2);
  dealiasInPlace(next.u.x);
  dealiasInPlace(next.u.y);
  if (finite(next)) refreshCoupling(next);
  return next;
}

namespace {

// Real fields stored as one or two coefficient arrays. The inner product is
// the L^2 one up to the (2 pi)^2 factor, which cancels in the Arnoldi process.
using Block = std::vector<CoeffArray>;

double dot(const Block& a, const Block& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += (a[i].conjugate() * b[i]).real().sum();
  }
  return s;
}

void axpy(double alpha, const Block& x, Block& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scaleBlock(double alpha, Block& x) {
  for (auto& c : x) c *= alpha;
}

// exp(A) f by Arnoldi on the skew operator A, substepping when the Krylov
// space of dimension kMaxDim does not reach the tolerance.
template <typename Apply>
Block krylovExp(Block f, const Apply& apply, double tolerance) {
  constexpr int kMaxDim = 40;
  int pieces = 1;
  const double beta0 = std::sqrt(dot(f, f));
  if (beta0 == 0.0) return f;

  for (int attempt = 0; attempt < 12; ++attempt) {
    const double tau = 1.0 / pieces;
    Block current = f;
    bool converged = true;
    for (int piece = 0; piece < pieces && converged; ++piece) {
      const double beta = std::sqrt(dot(current, current));
      std::vector<Block> basis;
      basis.push_back(current);
      scaleBlock(1.0 / beta, basis.back());
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(kMaxDim + 1, kMaxDim);
      Eigen::VectorXd coeffs;
      bool done = false;
      for (int j = 0; j < kMaxDim; ++j) {
        Block w = apply(basis[j]);
        scaleBlock(tau, w);
        for (int pass = 0; pass < 2; ++pass) {
          for (int i = 0; i <= j; ++i) {
            const double hij = dot(basis[i], w);
            h(i, j) += hij;
            axpy(-hij, basis[i], w);
          }
        }
        const double next = std::sqrt(dot(w, w));
        h(j + 1, j) = next;
        const int dim = j + 1;
        // The projected operator is skew up to rounding; make it exactly so
        // that exp keeps the norm.
        Eigen::MatrixXd hm = h.topLeftCorner(dim, dim);
        hm = 0.5 * (hm - hm.transpose()).eval();
        const Eigen::MatrixXd e = hm.exp();
        const double estimate = next * std::abs(e(dim - 1, 0));
        if (next <= 1e-14 * beta || estimate <= tolerance) {
          coeffs = e.col(0);
          done = true;
          break;
        }
        scaleBlock(1.0 / next, w);
        basis.push_back(std::move(w));
      }
      if (!done) {
        converged = false;
        break;
      }
      Block out = basis[0];
      scaleBlock(0.0, out);
      for (int i = 0; i < coeffs.size(); ++i) axpy(beta * coeffs(i), basis[i], out);
      current = std::move(out);
    }
    if (converged) return current;
    pieces *= 2;
  }
  throw std::runtime_error("Krylov exponential did not converge");
}

}  // namespace

SpectralScalar transportFlow(const SpectralScalar& f, const SpectralVector& dv,
                             double tolerance) {
  const Grid& g = f.grid;
  auto [vx, vy] = detail::physicalPair(dv.x, dv.y);
  const auto apply = [&](const Block& b) {
    SpectralScalar s(g);
    s.coeffs = b[0];
    const RealArray fp = detail::physical(s);
    return Block{detail::divergenceOfFlux(vx * fp, vy * fp, g).coeffs};
  };
  SpectralScalar start = dealias(f);
  Block out = krylovExp(Block{start.coeffs}, apply, tolerance);
  SpectralScalar result(g);
  result.coeffs = std::move(out[0]);
  return result;
}

SpectralVector transportFlow(const SpectralVector& u, const SpectralVector& dv,
                             double tolerance) {
  const Grid& g = u.grid();
  auto [vx, vy] = detail::physicalPair(dv.x, dv.y);
  const auto apply = [&](const Block& b) {
    SpectralScalar sx(g), sy(g);
    sx.coeffs = b[0];
    sy.coeffs = b[1];
    auto [ux, uy] = detail::physicalPair(sx, sy);
    SpectralScalar ox = detail::divergenceOfFlux(vx * ux, vy * ux, g);
    SpectralScalar oy = detail::divergenceOfFlux(vx * uy, vy * uy, g);
    detail::lerayProjectInPlace(ox, oy);
    return Block{std::move(ox.coeffs), std::move(oy.coeffs)};
  };
  Block out = krylovExp(Block{dealias(u.x).coeffs, dealias(u.y).coeffs}, apply,
                        tolerance);
  SpectralVector result(g);
  result.x.coeffs = std::move(out[0]);
  result.y.coeffs = std::move(out[1]);
  return result;
}

State stepTransportSplitting(const State& state, const Model& model, double dt,
                             const SpectralVector* dv) {
  State mid = state;
  if (dv != nullptr) {
    mid.c1 = transportFlow(state.c1, *dv);
    mid.c2 = transportFlow(state.c2, *dv);
    mid.u = transportFlow(state.u, *dv);
    refreshCoupling(mid);
  }
  const Semigroups molecular(model.grid, model.params.D, model.params.nu, dt);
  NoiseAction inc = explicitIncrement(mid, model, dt, nullptr);
  State next(state.grid());
  next.c1.coeffs = (mid.c1.coeffs + inc.dc1.coeffs) * molecular.concentration.cast<Complex>();
  next.c2.coeffs = (mid.c2.coeffs + inc.dc2.coeffs) * molecular.concentration.cast<Complex>();
  next.u.x.coeffs = (mid.u.x.coeffs + inc.du.x.coeffs) * molecular.velocity.cast<Complex>();
  next.u.y.coeffs = (mid.u.y.coeffs + inc.du.y.coeffs) * molecular.velocity.cast<Complex>();
  dealiasInPlace(next.c1);
  dealiasInPlace(next.c2);
  dealiasInPlace(next.u.x);
  dealiasInPlace(next.u.y);
  if (finite(next)) refreshCoupling(next);
  return next;
}

double stabilityBudget(const State& state, const Model& model) {
  const double umax = lpNorm(state.u, std::numeric_limits<double>::infinity());
  const double kmax = model.grid.dealiasRadius();
  const double advective = umax > 0.0 ? 0.5 / (kmax * umax)
                                      : std::numeric_limits<double>::infinity();
  const double cbar = state.c1.mean().real() + state.c2.mean().real();
  const double screening = 0.1 / (model.params.D * (1.0 + cbar));
  return std::min(advective, screening);
}

TrajectoryResult integrate(const State& initial, const Model& model,
                           const StepperConfig& config,
                           const RecordCallback& onRecord) {
  if (!(config.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(config.tEnd >= 0.0)) throw ConfigError("t_end must be >= 0");
  if (config.recordStride < 1) throw ConfigError("record_stride must be >= 1");
  const double budget = stabilityBudget(initial, model);
  if (config.dt > budget) {
    std::ostringstream os;
    os << "dt = " << config.dt << " exceeds the stability budget " << budget
       << " = min(0.5 / (kmax max|u|), 0.1 / (D (1 + c1bar + c2bar)))";
    throw ConfigError(os.str());
  }

  const long long steps = std::llround(config.tEnd / config.dt);
  const double kappa = model.params.noise.kappa;
  const Semigroups semigroups(model.grid, model.params.D + kappa,
                              model.params.nu + 0.25 * kappa, config.dt);
  RandomStream rng(config.seed, config.stream);

  TrajectoryResult result;
  State current = initial;
  refreshCoupling(current);
  const auto emit = [&](double t) {
    result.records.push_back(record(current, t));
    if (onRecord) onRecord(result.records.back(), current);
  };
  emit(0.0);

  for (long long n = 1; n <= steps; ++n) {
    std::optional<SpectralVector> dv;
    if (kappa != 0.0) dv = sampleIncrement(model.basis, model.grid, config.dt, rng).field;
    const SpectralVector* dvp = dv ? &*dv : nullptr;
    State next;
    switch (config.scheme) {
      case Scheme::kExponentialEuler:
        next = stepExponentialEuler(current, model, semigroups, config.dt, dvp);
        break;
      case Scheme::kSemiImplicitEuler:
        next = stepSemiImplicit(current, model, config.dt, dvp);
        break;
      case Scheme::kTransportSplitting:
        next = stepTransportSplitting(current, model, config.dt, dvp);
        break;
    }
    const double t = static_cast<double>(n) * config.dt;
    if (!finite(next)) {
      result.blowUp.emplace(t, result.records.back());
      break;
    }
    current = std::move(next);
    if (n % config.recordStride == 0 || n == steps) emit(t);
  }
  result.final = std::move(current);
  return result;
}

namespace {

// Weights of the endpoint values in int_0^h e^{-lambda (h - s)} f(s) ds for
// f linear on [0, h]: h * (left, right).
std::pair<double, double> linearHeatWeights(double lambda, double h) {
  const double x = lambda * h;
  double phi1 = 0.0;
  double g = 0.0;
  if (x < 1e-4) {
    phi1 = 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
    g = 0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0;
  } else {
    const double em = -std::expm1(-x);
    phi1 = em / x;
    g = (em - x * std::exp(-x)) / (x * x);
  }
  return {h * g, h * (phi1 - g)};
}

}  // namespace

double heatSmoothingCheck(const std::vector<SpectralScalar>& samples, double delta,
                          double a, double b, double alpha) {
  if (samples.size() < 2) throw ConfigError("heat smoothing check needs at least two samples");
  if (!(b > a)) throw ConfigError("heat smoothing check needs a < b");
  if (!(delta > 0.0)) throw ConfigError("heat smoothing check needs delta > 0");
  const Grid& g = samples.front().grid;
  const int m = g.size();
  const int pieces = static_cast<int>(samples.size()) - 1;
  const double h = (b - a) / pieces;
  double lhs = 0.0;
  double rhs = 0.0;
  for (int jj = 0; jj < m; ++jj) {
    const double k2 = g.wavenumber(jj);
    for (int ii = 0; ii < m; ++ii) {
      const double k1 = g.wavenumber(ii);
      const double kk = k1 * k1 + k2 * k2;
      const double lambda = delta * kk;
      const auto [wl, wr] = linearHeatWeights(lambda, h);
      Complex v = 0.0;
      double energy = 0.0;
      for (int p = 0; p < pieces; ++p) {
        const Complex fl = samples[p].coeffs(ii, jj);
        const Complex fr = samples[p + 1].coeffs(ii, jj);
        // e^{-lambda (b - s_{p+1})} carries the piece to the final time.
        const double carry = std::exp(-lambda * (b - (a + (p + 1) * h)));
        v += carry * (wl * fl + wr * fr);
        energy += h * (std::norm(fl) + (std::conj(fl) * fr).real() + std::norm(fr)) / 3.0;
      }
      lhs += std::pow(1.0 + kk, alpha + 1.0) * std::norm(v);
      rhs += std::pow(1.0 + kk, alpha) * energy;
    }
  }
  if (rhs == 0.0) return 0.0;
  return delta * lhs / rhs;
}

}  // namespace npns
