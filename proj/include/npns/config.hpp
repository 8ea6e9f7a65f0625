#ifndef NPNS_CONFIG_HPP_
#define NPNS_CONFIG_HPP_

// Flat "key = value" run configuration. Blank lines and text after '#' are
// ignored; unknown or repeated keys are errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "npns/dynamics.hpp"
#include "npns/integrator.hpp"

namespace npns {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConcentrationIc { kCosinePerturbation, kRandomBand, kFromCheckpoint };
enum class VelocityIc { kZero, kRandomBand, kTaylorGreen };

struct InitialCondition {
  ConcentrationIc kind = ConcentrationIc::kCosinePerturbation;
  double cbar = 1.0;
  double epsilon = 0.1;
  int modeK1 = 1;  // cosine-perturbation wavenumber
  int modeK2 = 0;
  int kmax = 4;    // random-band support radius
  std::uint64_t seed = 0;
  std::string checkpoint;

  VelocityIc velocity = VelocityIc::kZero;
  double velocityAmplitude = 0.0;  // max |u| on the grid
  int velocityKmax = 4;
};

struct RunConfig {
  int grid = 64;
  SystemParams params;
  StepperConfig stepper;
  int ensemble = 64;
  InitialCondition initial;
  std::string output;

  // rate-sweep
  std::vector<double> kappaList;
  std::vector<int> shellList;
  double deltaAlpha = 0.5;
  double deltaBeta = 3.0;
  double deltaConstant = 1.0;

  // corrector-check (shellList reused)
  double sobolevIndex = 1.0;  // s
  double alpha = 1.0;
  int correctorKmax = 8;
  std::uint64_t correctorSeed = 0;

  // fit
  std::string input;
  std::string fitField = "U2";
  std::optional<double> fitT0;
  std::optional<double> fitT1;

  int threads = 0;  // 0: hardware concurrency
};

/// Every recognized key with a one-line description, in file order.
const std::vector<std::pair<std::string, std::string>>& configKeys();

/// Throws ConfigError naming the offending line or key.
RunConfig parseConfig(const std::string& text);
/// Throws IoError when the file cannot be read.
RunConfig loadConfig(const std::string& path);

/// Range and compatibility checks shared by the parser and the runners.
void validate(const RunConfig& config);

}  // namespace npns

#endif  // NPNS_CONFIG_HPP_
