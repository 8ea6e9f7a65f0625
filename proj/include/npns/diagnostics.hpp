#ifndef NPNS_DIAGNOSTICS_HPP_
#define NPNS_DIAGNOSTICS_HPP_

#include <stdexcept>
#include <vector>

#include "npns/dynamics.hpp"

namespace npns {

class ConditionFailedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy functionals at one time. Deviations are c_i - mean(c_i).
struct EnergyRecord {
  double t = 0.0;
  double u2 = 0.0;       // ||u||^2
  double c1dev2 = 0.0;   // ||c1 - c1bar||^2
  double c2dev2 = 0.0;   // ||c2 - c2bar||^2
  double U2 = 0.0;       // sum of the three
  double rho3 = 0.0;     // ||rho||_{L^3}^3
  double gradc1 = 0.0;   // ||grad c1||^2
  double gradc2 = 0.0;   // ||grad c2||^2
  double gradu = 0.0;    // ||grad u||^2
  double minc1 = 0.0;    // over collocation points
  double minc2 = 0.0;
  double c1bar = 0.0;
  double c2bar = 0.0;
};

EnergyRecord record(const State& state, double t);

/// Constant in ||f||_inf <= gamma0 ||f||_{H^2}, taken as
/// (sum_{k in Z^2} (1 + |k|^2)^-2)^{1/2}. Evaluated once, accurate to 1e-12.
double sobolevConstant();

struct Smallness {
  bool holds = false;
  double threshold = 0.0;  // nu D / (2 gamma0^2)
  double deviation = 0.0;  // ||c1 - c1bar||^2 + ||c2 - c2bar||^2
  double margin = 0.0;     // threshold - deviation
};

/// nu D - 2 gamma0^2 cbar0 > 0 (identical to cbar0 < nu D gamma0^-2 / 2).
Smallness smallnessCheck(const EnergyRecord& initial, const SystemParams& params,
                         double gamma0);

/// gamma = min{nu, 2D - 4 gamma0^2 cbar0 / nu}. Throws ConditionFailedError
/// when nu D - 2 gamma0^2 cbar0 <= 0.
double deterministicRate(const SystemParams& params, double deviation0,
                         double gamma0);

/// C (1/kappa + 1/kappa^2 + 1/N^2
///    + kappa^{(2 beta - alpha (beta + 1)) / (2 (alpha + beta))}
///      N^{-2 alpha / (alpha + beta)}),  0 < alpha < 1 < beta <= 3.
double deltaBound(double kappa, double N, double alpha, double beta,
                  double constant = 1.0);

struct DecayFit {
  double rate = 0.0;  // -slope of log(value)
  double intercept = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double residual = 0.0;  // rms of log residuals
  int points = 0;
};

/// Log-linear least squares over samples with t0 <= t <= t1.
DecayFit fitDecayRate(const std::vector<double>& t, const std::vector<double>& value,
                      double t0, double t1);
/// Same over the tail half of the sampled time range.
DecayFit fitDecayRate(const std::vector<double>& t, const std::vector<double>& value);

/// ||c1 - c1bar||^2 + ||c2 - c2bar||^2 <= exp(-2 D t) (initial value) at every
/// record, with multiplicative slack 1 + 1e-6 * (t / dt).
bool pathwiseDecayCheck(const std::vector<EnergyRecord>& records, double D,
                        double dt);

struct EnsembleStats {
  std::vector<double> t;
  std::vector<double> meanU2;
  std::vector<double> stderrU2;
  int count = 0;
};

/// Trajectories must share record times.
EnsembleStats aggregate(const std::vector<std::vector<EnergyRecord>>& paths);

/// sup_t exp(lambda t) ||U(t)|| / ||U(0)|| along one path.
double pathPrefactor(const std::vector<EnergyRecord>& path, double lambda);

/// Ratios of ensemble means one time unit apart: E||U(n+1)||^2 / E||U(n)||^2.
std::vector<double> unitStepRatios(const EnsembleStats& stats);

}  // namespace npns

#endif  // NPNS_DIAGNOSTICS_HPP_
