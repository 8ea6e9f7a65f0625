#include "npns/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "npns/initial.hpp"

namespace npns {

namespace {

using Json = nlohmann::ordered_json;

struct FieldRef {
  const char* name;
  double EnergyRecord::*member;
};

constexpr FieldRef kFields[] = {
    {"t", &EnergyRecord::t},           {"u2", &EnergyRecord::u2},
    {"c1dev2", &EnergyRecord::c1dev2}, {"c2dev2", &EnergyRecord::c2dev2},
    {"U2", &EnergyRecord::U2},         {"rho3", &EnergyRecord::rho3},
    {"gradc1", &EnergyRecord::gradc1}, {"gradc2", &EnergyRecord::gradc2},
    {"gradu", &EnergyRecord::gradu},   {"minc1", &EnergyRecord::minc1},
    {"minc2", &EnergyRecord::minc2},   {"c1bar", &EnergyRecord::c1bar},
    {"c2bar", &EnergyRecord::c2bar},
};

std::string formatDouble(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <typename Task>
void parallelFor(int count, int threads, const Task& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(threads, count));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string recordToJson(const EnergyRecord& r) {
  Json j;
  for (const auto& f : kFields) j[f.name] = r.*(f.member);
  return j.dump();
}

EnergyRecord recordFromJson(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const std::exception& e) {
    throw IoError(std::string("malformed NDJSON line: ") + e.what());
  }
  EnergyRecord r;
  for (const auto& f : kFields) {
    if (!j.contains(f.name) || !j[f.name].is_number()) {
      throw IoError(std::string("NDJSON line lacks numeric field '") + f.name + "'");
    }
    r.*(f.member) = j[f.name].get<double>();
  }
  return r;
}

std::vector<EnergyRecord> readRecords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::vector<EnergyRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(recordFromJson(line));
  }
  return out;
}

int resolveThreads(std::optional<int> flag, int configured) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--threads must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("NPNS_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("NPNS_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

Model buildModel(const RunConfig& config) {
  return Model(Grid(config.grid), config.params);
}

TrajectoryResult simulate(const RunConfig& config, std::ostream* ndjson) {
  const Model model = buildModel(config);
  const State initial = buildInitialState(config);
  StepperConfig stepper = config.stepper;
  stepper.stream = 0;
  RecordCallback sink;
  if (ndjson != nullptr) {
    sink = [ndjson](const EnergyRecord& r, const State&) { *ndjson << recordToJson(r) << '\n'; };
  }
  return integrate(initial, model, stepper, sink);
}

EnsembleResult runEnsemble(const RunConfig& config, int threads) {
  const Model model = buildModel(config);
  const State initial = buildInitialState(config);
  EnsembleResult result;
  result.paths.resize(config.ensemble);
  // Without noise no randomness is consumed and every path is the same.
  const int distinct = config.params.noise.kappa == 0.0 ? 1 : config.ensemble;
  parallelFor(distinct, threads, [&](int i) {
    StepperConfig stepper = config.stepper;
    stepper.stream = static_cast<std::uint64_t>(i);
    TrajectoryResult r = integrate(initial, model, stepper);
    if (r.blowUp) throw *r.blowUp;
    result.paths[i] = std::move(r.records);
  });
  for (int i = distinct; i < config.ensemble; ++i) result.paths[i] = result.paths[0];
  result.stats = aggregate(result.paths);
  if (result.stats.t.size() >= 2) {
    std::vector<double> mean = result.stats.meanU2;
    bool positive = true;
    for (double v : mean) positive = positive && v > 0.0;
    if (positive) {
      const double first = result.stats.t.front();
      const double last = result.stats.t.back();
      result.fit = fitDecayRate(result.stats.t, mean, config.fitT0.value_or(first + 0.5 * (last - first)),
                                config.fitT1.value_or(last));
    }
  }
  for (const auto& p : result.paths) result.prefactors.push_back(pathPrefactor(p, 0.5 * result.fit.rate));
  result.unitRatios = unitStepRatios(result.stats);
  return result;
}

void writeEnsemble(std::ostream& out, const EnsembleResult& result) {
  for (std::size_t i = 0; i < result.stats.t.size(); ++i) {
    Json j;
    j["t"] = result.stats.t[i];
    j["mean_U2"] = result.stats.meanU2[i];
    j["stderr_U2"] = result.stats.stderrU2[i];
    j["count"] = result.stats.count;
    out << j.dump() << '\n';
  }
}

void writePrefactors(std::ostream& csv, const EnsembleResult& result) {
  csv << "path,prefactor,final_U2\n";
  for (std::size_t i = 0; i < result.paths.size(); ++i) {
    csv << i << ',' << formatDouble(result.prefactors[i]) << ','
        << formatDouble(result.paths[i].empty() ? 0.0 : result.paths[i].back().U2) << '\n';
  }
}

SpectralVector correctorTestField(const Grid& grid, int kmax, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  const int m = grid.size();
  SpectralScalar psi(grid);
  for (int j = 0; j < m; ++j) {
    const int k2 = grid.wavenumber(j);
    for (int i = 0; i < m; ++i) {
      const int k1 = grid.wavenumber(i);
      const int kk = k1 * k1 + k2 * k2;
      if (kk == 0 || kk > kmax * kmax) continue;
      psi.coeffs(i, j) = Complex(rng.normal(1.0), rng.normal(1.0));
    }
  }
  symmetrize(psi);
  SpectralVector u = perpGradient(psi);
  const double norm = std::sqrt(l2NormSquared(u));
  return (1.0 / norm) * u;
}

std::vector<CorrectorRow> correctorCheck(const RunConfig& config) {
  if (config.shellList.empty()) throw ConfigError("corrector-check needs shell_list");
  if (!(config.params.noise.kappa > 0.0)) throw ConfigError("corrector-check needs kappa > 0");
  const Grid grid(config.grid);
  const SpectralVector u = correctorTestField(grid, config.correctorKmax, config.correctorSeed);
  std::vector<CorrectorRow> rows;
  for (int n : config.shellList) {
    NoiseSpec spec = config.params.noise;
    spec.shell = n;
    const NoiseBasis basis = buildNoiseBasis(spec, grid);
    rows.push_back({n, correctorBoundReport(u, basis, config.sobolevIndex, config.alpha)});
  }
  return rows;
}

void writeCorrectorTable(std::ostream& csv, const std::vector<CorrectorRow>& rows) {
  csv << "N,error,scale,ratio\n";
  for (const auto& r : rows) {
    csv << r.shell << ',' << formatDouble(r.bound.error) << ',' << formatDouble(r.bound.scale)
        << ',' << formatDouble(r.bound.ratio) << '\n';
  }
}

std::vector<SweepRow> rateSweep(const RunConfig& config, int threads) {
  const std::vector<double> kappas =
      config.kappaList.empty() ? std::vector<double>{config.params.noise.kappa} : config.kappaList;
  const std::vector<int> shells =
      config.shellList.empty() ? std::vector<int>{config.params.noise.shell} : config.shellList;
  const State initial = buildInitialState(config);
  const EnergyRecord r0 = record(initial, 0.0);
  const double gamma0 = sobolevConstant();

  std::vector<SweepRow> rows;
  for (double kappa : kappas) {
    for (int shell : shells) {
      RunConfig cell = config;
      cell.params.noise.kappa = kappa;
      cell.params.noise.shell = shell;
      validate(cell);
      const EnsembleResult e = runEnsemble(cell, threads);
      SweepRow row;
      row.kappa = kappa;
      row.shell = shell;
      row.fit = e.fit;
      try {
        row.gamma = deterministicRate(cell.params, r0.c1dev2 + r0.c2dev2, gamma0);
      } catch (const ConditionFailedError&) {
      }
      if (kappa > 0.0) {
        row.deltaBound = deltaBound(kappa, shell, config.deltaAlpha, config.deltaBeta,
                                    config.deltaConstant);
      }
      double sum = 0.0;
      for (double q : e.unitRatios) sum += q;
      row.meanUnitRatio = e.unitRatios.empty() ? 0.0 : sum / e.unitRatios.size();
      rows.push_back(row);
    }
  }
  return rows;
}

void writeSweepTable(std::ostream& csv, const std::vector<SweepRow>& rows) {
  csv << "kappa,N,lambda_hat,fit_residual,gamma,delta_bound,mean_unit_ratio\n";
  const auto opt = [](const std::optional<double>& v) { return v ? formatDouble(*v) : std::string(); };
  for (const auto& r : rows) {
    csv << formatDouble(r.kappa) << ',' << r.shell << ',' << formatDouble(r.fit.rate) << ','
        << formatDouble(r.fit.residual) << ',' << opt(r.gamma) << ',' << opt(r.deltaBound) << ','
        << formatDouble(r.meanUnitRatio) << '\n';
  }
}

DecayFit fitRecords(const std::vector<EnergyRecord>& records, const std::string& field,
                    std::optional<double> t0, std::optional<double> t1) {
  const FieldRef* ref = nullptr;
  for (const auto& f : kFields) {
    if (field == f.name && field != "t") ref = &f;
  }
  if (ref == nullptr) throw ConfigError("unknown fit field '" + field + "'");
  if (records.empty()) throw FitDomainError("no records to fit");
  std::vector<double> t;
  std::vector<double> v;
  for (const auto& r : records) {
    t.push_back(r.t);
    v.push_back(r.*(ref->member));
  }
  const double first = t.front();
  const double last = t.back();
  return fitDecayRate(t, v, t0.value_or(first + 0.5 * (last - first)), t1.value_or(last));
}

}  // namespace npns
