// npns: command-line front end.
//
//   npns simulate        --config run.cfg [--seed S] [--output series.ndjson]
//   npns ensemble        --config run.cfg [--threads T] [--output stats.ndjson]
//   npns corrector-check --config run.cfg [--output table.csv]
//   npns rate-sweep      --config run.cfg [--threads T] [--output sweep.csv]
//   npns fit             --input series.ndjson [--config fit.cfg]
//
// Exit codes: 0 ok, 2 configuration, 3 blow-up, 4 I/O.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "npns/checkpoint.hpp"
#include "npns/config.hpp"
#include "npns/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 2;
constexpr int kBlowUp = 3;
constexpr int kIoFailure = 4;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::optional<int> threads;
  std::string input;
};

npns::RunConfig loadRun(const Options& opt) {
  npns::RunConfig run = opt.config.empty() ? npns::parseConfig("") : npns::loadConfig(opt.config);
  if (opt.seed) run.stepper.seed = *opt.seed;
  if (!opt.output.empty()) run.output = opt.output;
  if (!opt.input.empty()) run.input = opt.input;
  return run;
}

// Opens the output file, or returns null for stdout.
std::unique_ptr<std::ofstream> openOutput(const std::string& path) {
  if (path.empty()) return nullptr;
  auto out = std::make_unique<std::ofstream>(path, std::ios::trunc);
  if (!*out) throw npns::IoError("cannot write '" + path + "'");
  return out;
}

std::ostream& sink(const std::unique_ptr<std::ofstream>& file) {
  return file ? static_cast<std::ostream&>(*file) : std::cout;
}

void finish(const std::unique_ptr<std::ofstream>& file, const std::string& path) {
  if (!file) return;
  file->flush();
  if (!*file) throw npns::IoError("failed writing '" + path + "'");
}

int runSimulate(const Options& opt) {
  const npns::RunConfig run = loadRun(opt);
  auto file = openOutput(run.output);
  const npns::TrajectoryResult result = npns::simulate(run, &sink(file));
  finish(file, run.output);
  if (!run.output.empty()) {
    npns::Checkpoint cp;
    cp.params = run.params;
    cp.t = result.records.empty() ? 0.0 : result.records.back().t;
    cp.state = result.final;
    npns::saveCheckpoint(run.output + ".ckpt", cp);
  }
  if (result.blowUp) {
    std::cerr << "npns: blow-up: " << result.blowUp->what() << '\n';
    return kBlowUp;
  }
  return kOk;
}

int runEnsemble(const Options& opt) {
  const npns::RunConfig run = loadRun(opt);
  const int threads = npns::resolveThreads(opt.threads, run.threads);
  const npns::EnsembleResult result = npns::runEnsemble(run, threads);
  auto file = openOutput(run.output);
  npns::writeEnsemble(sink(file), result);
  finish(file, run.output);
  if (!run.output.empty()) {
    const std::string path = run.output + ".paths.csv";
    auto csv = openOutput(path);
    npns::writePrefactors(*csv, result);
    finish(csv, path);
  }
  std::cerr << "fitted rate " << result.fit.rate << " over [" << result.fit.t0 << ", "
            << result.fit.t1 << "], residual " << result.fit.residual << '\n';
  return kOk;
}

int runCorrectorCheck(const Options& opt) {
  const npns::RunConfig run = loadRun(opt);
  const auto rows = npns::correctorCheck(run);
  auto file = openOutput(run.output);
  npns::writeCorrectorTable(sink(file), rows);
  finish(file, run.output);
  return kOk;
}

int runRateSweep(const Options& opt) {
  const npns::RunConfig run = loadRun(opt);
  const int threads = npns::resolveThreads(opt.threads, run.threads);
  const auto rows = npns::rateSweep(run, threads);
  auto file = openOutput(run.output);
  npns::writeSweepTable(sink(file), rows);
  finish(file, run.output);
  return kOk;
}

int runFit(const Options& opt) {
  const npns::RunConfig run = loadRun(opt);
  if (run.input.empty()) throw npns::ConfigError("fit needs --input or 'input'");
  const auto records = npns::readRecords(run.input);
  const npns::DecayFit fit = npns::fitRecords(records, run.fitField, run.fitT0, run.fitT1);
  auto file = openOutput(run.output);
  std::ostream& out = sink(file);
  out << "field,rate,intercept,t0,t1,residual,points\n";
  out.precision(17);
  out << run.fitField << ',' << fit.rate << ',' << fit.intercept << ',' << fit.t0 << ','
      << fit.t1 << ',' << fit.residual << ',' << fit.points << '\n';
  finish(file, run.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Nernst-Planck-Navier-Stokes simulator"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "key = value run configuration");
    sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
    sub->add_option("--output", opt.output, "output path (default: stdout)");
    sub->add_option("--threads", opt.threads, "worker threads (fallback: NPNS_THREADS)");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "single trajectory to NDJSON");
  CLI::App* ensemble = app.add_subcommand("ensemble", "ensemble statistics to NDJSON");
  CLI::App* corrector = app.add_subcommand("corrector-check", "corrector ratios r(N) to CSV");
  CLI::App* sweep = app.add_subcommand("rate-sweep", "fitted decay rates over (kappa, N) to CSV");
  CLI::App* fit = app.add_subcommand("fit", "decay fit of an NDJSON series");
  for (CLI::App* sub : {simulate, ensemble, corrector, sweep, fit}) common(sub);
  fit->add_option("--input", opt.input, "NDJSON series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*simulate) return runSimulate(opt);
    if (*ensemble) return runEnsemble(opt);
    if (*corrector) return runCorrectorCheck(opt);
    if (*sweep) return runRateSweep(opt);
    if (*fit) return runFit(opt);
  } catch (const npns::BlowUpError& e) {
    std::cerr << "npns: blow-up: " << e.what() << '\n';
    return kBlowUp;
  } catch (const npns::IoError& e) {
    std::cerr << "npns: " << e.what() << '\n';
    return kIoFailure;
  } catch (const npns::ConfigError& e) {
    std::cerr << "npns: configuration: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const npns::FitDomainError& e) {
    std::cerr << "npns: fit: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "npns: " << e.what() << '\n';
    return kConfigFailure;
  }
  return kOk;
}
