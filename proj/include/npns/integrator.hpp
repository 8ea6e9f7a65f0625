#ifndef NPNS_INTEGRATOR_HPP_
#define NPNS_INTEGRATOR_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "npns/diagnostics.hpp"
#include "npns/dynamics.hpp"
#include "npns/rng.hpp"

namespace npns {

enum class Scheme {
  /// Ito exponential Euler-Maruyama on the mild form.
  kExponentialEuler,
  /// Diagonal implicit diffusion, explicit everything else.
  kSemiImplicitEuler,
  /// Exact-in-L^2 stochastic transport flow (Krylov exponential of the
  /// Galerkin transport operator), followed by a deterministic exponential
  /// Euler step with molecular diffusion only.
  kTransportSplitting,
};

Scheme parseScheme(const std::string& name);
std::string schemeName(Scheme scheme);

struct StepperConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::kExponentialEuler;
  double tEnd = 10.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // trajectory index
  int recordStride = 100;
};

/// Per-mode multipliers exp(-(D + kappa)|k|^2 dt) and
/// exp(-(nu + kappa/4)|k|^2 dt).
struct Semigroups {
  Semigroups(const Grid& grid, double concentrationDiffusivity,
             double velocityDiffusivity, double dt);

  RealArray concentration;  // Q_dt
  RealArray velocity;       // P_dt
};

/// Non-finite coefficient at time t. The snapshot is the last finite record.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, EnergyRecord snapshot);
  [[nodiscard]] double time() const { return t_; }
  [[nodiscard]] const EnergyRecord& snapshot() const { return snapshot_; }

 private:
  double t_;
  EnergyRecord snapshot_;
};

/// Ito exponential Euler step:
///   c' = Q[c + dt N_c + dV.grad c],
///   u' = P[u + dt (N_u + S(u) - (kappa/4) Lap u) + Pi(dV.grad u)].
/// Drift and increment are evaluated at the left end point. dv may be null
/// (no noise).
State stepExponentialEuler(const State& state, const Model& model, double dt,
                           const SpectralVector* dv);
State stepExponentialEuler(const State& state, const Model& model,
                           const Semigroups& semigroups, double dt,
                           const SpectralVector* dv);

/// Same increments, diffusion treated by (1 + a|k|^2 dt)^-1.
State stepSemiImplicit(const State& state, const Model& model, double dt,
                       const SpectralVector* dv);

/// exp(A) f for A f = div(dV f) on the retained modes. Preserves ||f||_{L^2}
/// to rounding for any Krylov dimension.
SpectralScalar transportFlow(const SpectralScalar& f, const SpectralVector& dv,
                             double tolerance = 1e-12);
/// exp(B) u for B u = Pi div(dV (x) u).
SpectralVector transportFlow(const SpectralVector& u, const SpectralVector& dv,
                             double tolerance = 1e-12);

State stepTransportSplitting(const State& state, const Model& model, double dt,
                             const SpectralVector* dv);

/// Largest admissible dt for the initial state:
/// min(0.5 / (kmax max|u|), 0.1 / (D (1 + 2 cbar))).
double stabilityBudget(const State& state, const Model& model);

struct TrajectoryResult {
  State final;  // last finite state
  std::vector<EnergyRecord> records;
  std::optional<BlowUpError> blowUp;
};

using RecordCallback = std::function<void(const EnergyRecord&, const State&)>;

/// Runs to t_end; records at t = 0, every record_stride steps, and at the
/// end. Throws ConfigError when dt exceeds the stability budget. A non-finite
/// coefficient stops the run; the error is returned in `blowUp` together with
/// the records gathered so far.
TrajectoryResult integrate(const State& initial, const Model& model,
                           const StepperConfig& config,
                           const RecordCallback& onRecord = {});

/// ||int_a^b e^{delta (b - s) Lap} f_s ds||^2_{H^{alpha+1}} divided by
/// (1/delta) int_a^b ||f_s||^2_{H^alpha} ds, with f given at equispaced
/// samples on [a, b] and linearly interpolated in time (the time integral of
/// the heat kernel against each linear piece is exact).
double heatSmoothingCheck(const std::vector<SpectralScalar>& samples, double delta,
                          double a, double b, double alpha);

}  // namespace npns

#endif  // NPNS_INTEGRATOR_HPP_
