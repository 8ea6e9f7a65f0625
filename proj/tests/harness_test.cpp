#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "npns/checkpoint.hpp"
#include "npns/config.hpp"
#include "npns/harness.hpp"
#include "npns/initial.hpp"

namespace npns {
namespace {

namespace fs = std::filesystem;

const char* kQuickRun = R"(
grid = 16
nu = 1
D = 0.5
kappa = 0.5
shell = 1
dt = 1e-3
t_end = 0.05
record_stride = 10
ic = random-band
cbar = 1
epsilon = 0.03
ic_kmax = 3
velocity = taylor-green
velocity_amplitude = 0.01
ensemble = 3
)";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "npns_harness_test";
  fs::create_directories(dir);
  return dir / name;
}

void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, Defaults) {
  const RunConfig c = parseConfig("");
  EXPECT_EQ(c.grid, 64);
  EXPECT_EQ(c.stepper.dt, 1e-3);
  EXPECT_EQ(c.stepper.scheme, Scheme::kExponentialEuler);
  EXPECT_EQ(c.fitField, "U2");
  EXPECT_FALSE(c.fitT0.has_value());
}

TEST(Config, ParsesValuesAndComments) {
  const RunConfig c = parseConfig(
      "# comment line\n"
      "grid = 32   # trailing comment\n"
      "kappa = 2.5\n"
      "shell = 3\n"
      "scheme = transport-splitting\n"
      "kappa_list = 0, 1, 4\n"
      "shell_list = 2,4\n"
      "\n"
      "fit_t0 = 1.5\n");
  EXPECT_EQ(c.grid, 32);
  EXPECT_EQ(c.params.noise.kappa, 2.5);
  EXPECT_EQ(c.params.noise.shell, 3);
  EXPECT_EQ(c.stepper.scheme, Scheme::kTransportSplitting);
  EXPECT_EQ(c.kappaList, (std::vector<double>{0.0, 1.0, 4.0}));
  EXPECT_EQ(c.shellList, (std::vector<int>{2, 4}));
  EXPECT_EQ(c.fitT0, 1.5);
}

TEST(Config, Errors) {
  EXPECT_THROW(parseConfig("gird = 32\n"), ConfigError);
  EXPECT_THROW(parseConfig("grid = 32\ngrid = 64\n"), ConfigError);
  EXPECT_THROW(parseConfig("grid = many\n"), ConfigError);
  EXPECT_THROW(parseConfig("nu = 1.0x\n"), ConfigError);
  EXPECT_THROW(parseConfig("grid 32\n"), ConfigError);
  EXPECT_THROW(parseConfig("scheme = leapfrog\n"), ConfigError);
  EXPECT_THROW(parseConfig("grid = 16\nkappa = 1\nshell = 3\n"), ConfigError);  // 2N > M/3
  EXPECT_NO_THROW(parseConfig("grid = 16\nkappa = 0\nshell = 3\n"));
  EXPECT_THROW(parseConfig("dt = -1\n"), ConfigError);
  EXPECT_THROW(loadConfig(scratch("missing.cfg").string()), IoError);
}

TEST(Config, EveryKeyIsDocumented) {
  for (const auto& [key, help] : configKeys()) {
    EXPECT_FALSE(key.empty());
    EXPECT_FALSE(help.empty()) << key;
  }
  EXPECT_GE(configKeys().size(), 30u);
}

Checkpoint sampleCheckpoint() {
  const RunConfig c = parseConfig(kQuickRun);
  Checkpoint cp;
  cp.params = c.params;
  cp.t = 1.25;
  cp.state = buildInitialState(c);
  cp.state.u = 0.3 * randomBandVelocity(Grid(16), 3, 4, 0);
  return cp;
}

TEST(Checkpoint, RoundTripIsBitIdentical) {
  const Checkpoint cp = sampleCheckpoint();
  const std::vector<char> bytes = encodeCheckpoint(cp);
  EXPECT_EQ(bytes.size(), 8u + 4 + 4 + 4 * 8 + 4 + 8 + 4u * 16 * 16 * 16);
  const Checkpoint back = decodeCheckpoint(bytes);
  EXPECT_EQ(back.t, 1.25);
  EXPECT_EQ(back.params.noise.kappa, cp.params.noise.kappa);
  EXPECT_EQ(back.params.noise.shell, cp.params.noise.shell);
  EXPECT_TRUE((back.state.c1.coeffs == cp.state.c1.coeffs).all());
  EXPECT_TRUE((back.state.u.y.coeffs == cp.state.u.y.coeffs).all());
  EXPECT_EQ(encodeCheckpoint(back), bytes);
}

TEST(Checkpoint, RejectsCorruptInput) {
  std::vector<char> bytes = encodeCheckpoint(sampleCheckpoint());
  std::vector<char> magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(decodeCheckpoint(magic), IoError);
  std::vector<char> version = bytes;
  version[8] = static_cast<char>(kCheckpointVersion + 1);
  EXPECT_THROW(decodeCheckpoint(version), IoError);
  std::vector<char> truncated(bytes.begin(), bytes.end() - 8);
  EXPECT_THROW(decodeCheckpoint(truncated), IoError);
  std::vector<char> trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(decodeCheckpoint(trailing), IoError);
}

TEST(Checkpoint, FileRoundTrip) {
  const Checkpoint cp = sampleCheckpoint();
  const fs::path path = scratch("state.ckpt");
  saveCheckpoint(path.string(), cp);
  const Checkpoint back = loadCheckpoint(path.string());
  EXPECT_TRUE((back.state.c2.coeffs == cp.state.c2.coeffs).all());
  EXPECT_THROW(loadCheckpoint(scratch("absent.ckpt").string()), IoError);
  EXPECT_THROW(saveCheckpoint((scratch("no_such_dir") / "x.ckpt").string(), cp), IoError);
}

TEST(Checkpoint, ResumesAsInitialCondition) {
  const Checkpoint cp = sampleCheckpoint();
  const fs::path path = scratch("resume.ckpt");
  saveCheckpoint(path.string(), cp);
  RunConfig c = parseConfig(std::string(kQuickRun) + "\n");
  c.initial.kind = ConcentrationIc::kFromCheckpoint;
  c.initial.checkpoint = path.string();
  const State s = buildInitialState(c);
  EXPECT_TRUE((s.u.x.coeffs == cp.state.u.x.coeffs).all());
  c.grid = 32;
  EXPECT_THROW(buildInitialState(c), ConfigError);
}

TEST(Ndjson, RoundTrip) {
  EnergyRecord r;
  r.t = 0.1;
  r.u2 = 1.0 / 3.0;
  r.U2 = 2.5e-17;
  r.minc1 = -1e-300;
  r.c2bar = 1.0;
  const EnergyRecord back = recordFromJson(recordToJson(r));
  EXPECT_EQ(back.t, r.t);
  EXPECT_EQ(back.u2, r.u2);
  EXPECT_EQ(back.U2, r.U2);
  EXPECT_EQ(back.minc1, r.minc1);
  EXPECT_EQ(back.c2bar, r.c2bar);
  EXPECT_THROW(recordFromJson(R"({"t": 0})"), IoError);
  EXPECT_THROW(recordFromJson("not json"), IoError);
  EXPECT_THROW(readRecords(scratch("absent.ndjson").string()), IoError);
}

TEST(Simulate, EquilibriumStaysAtRest) {
  RunConfig c = parseConfig("grid = 16\nkappa = 1\nshell = 1\nepsilon = 0\nt_end = 0.02\nrecord_stride = 5\n");
  const TrajectoryResult r = simulate(c);
  ASSERT_EQ(r.records.size(), 5u);
  for (const auto& rec : r.records) {
    EXPECT_LE(rec.U2, 1e-28);  // transport of a constant leaves only rounding
    EXPECT_NEAR(rec.minc1, 1.0, 1e-14);
  }
}

TEST(Simulate, SameConfigSameBytes) {
  const RunConfig c = parseConfig(kQuickRun);
  std::ostringstream a, b;
  simulate(c, &a);
  simulate(c, &b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
  RunConfig other = c;
  other.stepper.seed = 1;
  std::ostringstream d;
  simulate(other, &d);
  EXPECT_NE(a.str(), d.str());
}

TEST(Simulate, StabilityBudgetEnforced) {
  RunConfig c = parseConfig(kQuickRun);
  c.stepper.dt = 0.5;
  EXPECT_THROW(simulate(c), ConfigError);
}

TEST(Ensemble, SinglePathMatchesSimulate) {
  RunConfig c = parseConfig(kQuickRun);
  c.ensemble = 1;
  const EnsembleResult e = runEnsemble(c, 1);
  const TrajectoryResult s = simulate(c);
  ASSERT_EQ(e.paths.size(), 1u);
  ASSERT_EQ(e.paths[0].size(), s.records.size());
  for (std::size_t i = 0; i < s.records.size(); ++i) EXPECT_EQ(e.paths[0][i].U2, s.records[i].U2);
  EXPECT_EQ(e.stats.meanU2.back(), s.records.back().U2);
}

TEST(Ensemble, NoiselessPathsCoincide) {
  RunConfig c = parseConfig(kQuickRun);
  c.params.noise.kappa = 0.0;
  const EnsembleResult e = runEnsemble(c, 2);
  for (const auto& p : e.paths) EXPECT_EQ(p.back().U2, e.paths[0].back().U2);
  EXPECT_EQ(e.stats.stderrU2.back(), 0.0);
}

TEST(Ensemble, IndependentOfThreadCount) {
  RunConfig c = parseConfig(kQuickRun);
  c.ensemble = 4;
  const EnsembleResult one = runEnsemble(c, 1);
  const EnsembleResult three = runEnsemble(c, 3);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(one.paths[i].back().U2, three.paths[i].back().U2);
  EXPECT_NE(one.paths[0].back().U2, one.paths[1].back().U2);
  EXPECT_EQ(one.stats.meanU2, three.stats.meanU2);
  std::ostringstream a, b;
  writeEnsemble(a, one);
  writeEnsemble(b, three);
  EXPECT_EQ(a.str(), b.str());
}

TEST(CorrectorCheck, OneRowPerShell) {
  RunConfig c = parseConfig("grid = 32\nkappa = 1\nshell = 1\nshell_list = 1, 2\ncorrector_kmax = 3\n");
  const auto rows = correctorCheck(c);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].shell, 2);
  EXPECT_GT(rows[0].bound.ratio, 0.0);
  std::ostringstream csv;
  writeCorrectorTable(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "N,error,scale,ratio");
  c.shellList.clear();
  EXPECT_THROW(correctorCheck(c), ConfigError);
}

TEST(RateSweep, SingleCell) {
  RunConfig c = parseConfig(std::string(kQuickRun) + "kappa_list = 0.5\nshell_list = 1\n");
  const auto rows = rateSweep(c, 2);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].kappa, 0.5);
  EXPECT_EQ(rows[0].shell, 1);
  EXPECT_GT(rows[0].fit.rate, 0.0);
  ASSERT_TRUE(rows[0].gamma.has_value());
  EXPECT_GT(*rows[0].gamma, 0.0);
  ASSERT_TRUE(rows[0].deltaBound.has_value());
  EXPECT_NEAR(*rows[0].deltaBound, deltaBound(0.5, 1, 0.5, 3.0), 1e-15);
  std::ostringstream csv;
  writeSweepTable(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "kappa,N,lambda_hat,fit_residual,gamma,delta_bound,mean_unit_ratio");
}

TEST(RateSweep, LargeDataLeavesGammaBlank) {
  RunConfig c = parseConfig(std::string(kQuickRun) + "kappa_list = 0\nshell_list = 1\n");
  c.initial.epsilon = 0.5;
  const auto rows = rateSweep(c, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].gamma.has_value());
  EXPECT_FALSE(rows[0].deltaBound.has_value());
}

TEST(Fit, RecordsField) {
  std::vector<EnergyRecord> recs;
  for (int i = 0; i <= 10; ++i) {
    EnergyRecord r;
    r.t = i;
    r.U2 = std::exp(-0.5 * i);
    r.u2 = std::exp(-2.0 * i);
    recs.push_back(r);
  }
  EXPECT_NEAR(fitRecords(recs, "U2", std::nullopt, std::nullopt).rate, 0.5, 1e-12);
  EXPECT_NEAR(fitRecords(recs, "u2", 0.0, 10.0).rate, 2.0, 1e-12);
  EXPECT_THROW(fitRecords(recs, "t", std::nullopt, std::nullopt), ConfigError);
  EXPECT_THROW(fitRecords(recs, "energy", std::nullopt, std::nullopt), ConfigError);
  EXPECT_THROW(fitRecords({}, "U2", std::nullopt, std::nullopt), FitDomainError);
}

TEST(InitialData, NegativeConcentrationRejected) {
  RunConfig c = parseConfig("grid = 16\ncbar = 0.05\nepsilon = 0.1\n");
  EXPECT_THROW(buildInitialState(c), ConfigError);
}

TEST(InitialData, TaylorGreenIsExact) {
  const Grid g(16);
  const SpectralVector u = taylorGreen(g);
  const RealArray ux = toPhysical(u.x);
  const RealArray uy = toPhysical(u.y);
  for (int j = 0; j < 16; ++j) {
    for (int i = 0; i < 16; ++i) {
      const double x = g.coordinate(i), y = g.coordinate(j);
      EXPECT_NEAR(ux(i, j), std::sin(x) * std::cos(y), 1e-15);
      EXPECT_NEAR(uy(i, j), -std::cos(x) * std::sin(y), 1e-15);
    }
  }
  EXPECT_LE(divergence(u).coeffs.abs().maxCoeff(), 1e-16);
}

TEST(InitialData, RandomBandProperties) {
  const Grid g(32);
  const SpectralVector u = randomBandVelocity(g, 5, 3, 0);
  EXPECT_LE(divergence(u).coeffs.abs().maxCoeff(), 1e-13);
  EXPECT_NEAR(lpNorm(u, std::numeric_limits<double>::infinity()), 1.0, 1e-12);
  const SpectralScalar f = randomBandScalar(g, 5, 3, 0);
  EXPECT_NEAR(toPhysical(f).abs().maxCoeff(), 1.0, 1e-12);
  EXPECT_EQ(f.mean(), Complex(0.0));
}

TEST(Threads, Resolution) {
  ::unsetenv("NPNS_THREADS");
  EXPECT_EQ(resolveThreads(3, 5), 3);
  EXPECT_EQ(resolveThreads(std::nullopt, 5), 5);
  EXPECT_GE(resolveThreads(std::nullopt, 0), 1);
  ::setenv("NPNS_THREADS", "7", 1);
  EXPECT_EQ(resolveThreads(std::nullopt, 5), 7);
  EXPECT_EQ(resolveThreads(2, 5), 2);
  ::setenv("NPNS_THREADS", "zero", 1);
  EXPECT_THROW(resolveThreads(std::nullopt, 5), ConfigError);
  ::unsetenv("NPNS_THREADS");
  EXPECT_THROW(resolveThreads(0, 5), ConfigError);
}

int runCli(const std::string& args) {
  const std::string cmd = std::string(NPNS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path cfg = scratch("quick.cfg");
  writeFile(cfg, kQuickRun);
  const fs::path out = scratch("series.ndjson");
  EXPECT_EQ(runCli("simulate --config " + cfg.string() + " --output " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out.string() + ".ckpt"));
  EXPECT_EQ(readRecords(out.string()).size(), 6u);

  const fs::path fitOut = scratch("fit.csv");
  EXPECT_EQ(runCli("fit --input " + out.string() + " --output " + fitOut.string()), 0);
  EXPECT_EQ(readFile(fitOut).rfind("field,rate", 0), 0u);

  const fs::path bad = scratch("bad.cfg");
  writeFile(bad, "grid = 16\nviscosity = 1\n");
  EXPECT_EQ(runCli("simulate --config " + bad.string()), 2);
  EXPECT_EQ(runCli("simulate --bogus-flag"), 2);
  EXPECT_EQ(runCli(""), 2);

  EXPECT_EQ(runCli("simulate --config " + scratch("absent.cfg").string()), 4);
  EXPECT_EQ(runCli("simulate --config " + cfg.string() + " --output " +
                   (scratch("no_such_dir") / "x.ndjson").string()),
            4);

  // Non-finite checkpoint data blows up on the first step.
  Checkpoint cp = sampleCheckpoint();
  cp.state.u.x.at(1, 0) = std::numeric_limits<double>::quiet_NaN();
  cp.state.u.x.at(-1, 0) = std::numeric_limits<double>::quiet_NaN();
  const fs::path nan = scratch("nan.ckpt");
  saveCheckpoint(nan.string(), cp);
  const fs::path resume = scratch("resume.cfg");
  writeFile(resume, std::string(kQuickRun) + "checkpoint = " + nan.string() + "\n");
  std::string text = readFile(resume);
  text.replace(text.find("ic = random-band"), 16, "ic = from-checkpoint");
  writeFile(resume, text);
  EXPECT_EQ(runCli("simulate --config " + resume.string()), 3);

  const fs::path sweepCfg = scratch("sweep.cfg");
  writeFile(sweepCfg, std::string(kQuickRun) + "shell_list = 1\n");
  EXPECT_EQ(runCli("corrector-check --config " + sweepCfg.string()), 0);
  EXPECT_EQ(runCli("ensemble --threads 2 --config " + cfg.string() + " --output " +
                   scratch("ens.ndjson").string()),
            0);
  EXPECT_TRUE(fs::exists(scratch("ens.ndjson.paths.csv")));
}

}  // namespace
}  // namespace npns
