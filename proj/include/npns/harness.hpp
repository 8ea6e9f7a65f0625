#ifndef NPNS_HARNESS_HPP_
#define NPNS_HARNESS_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "npns/config.hpp"
#include "npns/diagnostics.hpp"
#include "npns/integrator.hpp"

namespace npns {

/// One NDJSON line (no trailing newline) with every EnergyRecord field.
std::string recordToJson(const EnergyRecord& r);
/// Throws IoError on malformed lines or missing fields.
EnergyRecord recordFromJson(const std::string& line);
std::vector<EnergyRecord> readRecords(const std::string& path);

/// --threads, else NPNS_THREADS, else the config value, else all cores.
int resolveThreads(std::optional<int> flag, int configured);

Model buildModel(const RunConfig& config);

/// Single trajectory (stream 0). Rows are written to `ndjson` as they are
/// recorded when it is non-null.
TrajectoryResult simulate(const RunConfig& config, std::ostream* ndjson = nullptr);

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<std::vector<EnergyRecord>> paths;
  DecayFit fit;                     // of the ensemble mean of ||U||^2
  std::vector<double> prefactors;   // per path, at lambda = fit.rate / 2
  std::vector<double> unitRatios;   // E||U(n+1)||^2 / E||U(n)||^2
};

/// config.ensemble trajectories on streams 0, 1, ...; the result does not
/// depend on the thread count. Throws BlowUpError if any path blows up.
EnsembleResult runEnsemble(const RunConfig& config, int threads);

void writeEnsemble(std::ostream& ndjson, const EnsembleResult& result);
void writePrefactors(std::ostream& csv, const EnsembleResult& result);

struct CorrectorRow {
  int shell = 0;
  CorrectorBound bound;
};

/// Divergence-free field with Gaussian stream-function coefficients on
/// 1 <= |k| <= kmax, normalized to ||u||_{L^2} = 1.
SpectralVector correctorTestField(const Grid& grid, int kmax, std::uint64_t seed);

/// r(N) for every N in config.shellList on config.grid with config.params
/// kappa and gamma.
std::vector<CorrectorRow> correctorCheck(const RunConfig& config);
void writeCorrectorTable(std::ostream& csv, const std::vector<CorrectorRow>& rows);

struct SweepRow {
  double kappa = 0.0;
  int shell = 0;
  DecayFit fit;
  std::optional<double> gamma;       // deterministic rate, if the condition holds
  std::optional<double> deltaBound;  // kappa > 0 only
  double meanUnitRatio = 0.0;
};

/// One ensemble per (kappa, N) cell, kappa-major.
std::vector<SweepRow> rateSweep(const RunConfig& config, int threads);
void writeSweepTable(std::ostream& csv, const std::vector<SweepRow>& rows);

/// Decay fit of one record field (U2, u2, c1dev2, c2dev2, rho3, gradc1,
/// gradc2, gradu) over [t0, t1], or over the tail half by default.
DecayFit fitRecords(const std::vector<EnergyRecord>& records, const std::string& field,
                    std::optional<double> t0, std::optional<double> t1);

}  // namespace npns

#endif  // NPNS_HARNESS_HPP_
