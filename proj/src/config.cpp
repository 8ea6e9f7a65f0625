#include "npns/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace npns {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long parseInteger(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

std::uint64_t parseUnsigned(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
  return v;
}

std::vector<std::string> splitList(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

struct KeyInfo {
  std::string help;
  Setter set;
};

const std::vector<std::pair<std::string, KeyInfo>>& table() {
  static const std::vector<std::pair<std::string, KeyInfo>> keys = {
      {"grid", {"modes per axis M (even, >= 8)",
                [](RunConfig& c, const std::string& k, const std::string& v) {
                  c.grid = static_cast<int>(parseInteger(k, v));
                }}},
      {"nu", {"viscosity", [](RunConfig& c, const std::string& k, const std::string& v) {
                c.params.nu = parseDouble(k, v);
              }}},
      {"D", {"ionic diffusivity", [](RunConfig& c, const std::string& k, const std::string& v) {
               c.params.D = parseDouble(k, v);
             }}},
      {"kappa", {"noise intensity", [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.params.noise.kappa = parseDouble(k, v);
                 }}},
      {"shell", {"noise shell index N", [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.params.noise.shell = static_cast<int>(parseInteger(k, v));
                 }}},
      {"gamma", {"noise profile exponent", [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.params.noise.gamma = parseDouble(k, v);
                 }}},
      {"dt", {"time step", [](RunConfig& c, const std::string& k, const std::string& v) {
                c.stepper.dt = parseDouble(k, v);
              }}},
      {"t_end", {"final time", [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.stepper.tEnd = parseDouble(k, v);
                 }}},
      {"record_stride", {"steps between records",
                         [](RunConfig& c, const std::string& k, const std::string& v) {
                           c.stepper.recordStride = static_cast<int>(parseInteger(k, v));
                         }}},
      {"scheme", {"exponential-euler | semi-implicit-euler | transport-splitting",
                  [](RunConfig& c, const std::string&, const std::string& v) {
                    c.stepper.scheme = parseScheme(v);
                  }}},
      {"seed", {"master seed", [](RunConfig& c, const std::string& k, const std::string& v) {
                  c.stepper.seed = parseUnsigned(k, v);
                }}},
      {"ensemble", {"trajectories per ensemble",
                    [](RunConfig& c, const std::string& k, const std::string& v) {
                      c.ensemble = static_cast<int>(parseInteger(k, v));
                    }}},
      {"ic", {"cosine-perturbation | random-band | from-checkpoint",
              [](RunConfig& c, const std::string&, const std::string& v) {
                if (v == "cosine-perturbation") {
                  c.initial.kind = ConcentrationIc::kCosinePerturbation;
                } else if (v == "random-band") {
                  c.initial.kind = ConcentrationIc::kRandomBand;
                } else if (v == "from-checkpoint") {
                  c.initial.kind = ConcentrationIc::kFromCheckpoint;
                } else {
                  throw ConfigError("key 'ic': unknown kind '" + v + "'");
                }
              }}},
      {"cbar", {"mean concentration of both species",
                [](RunConfig& c, const std::string& k, const std::string& v) {
                  c.initial.cbar = parseDouble(k, v);
                }}},
      {"epsilon", {"perturbation amplitude", [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.initial.epsilon = parseDouble(k, v);
                   }}},
      {"mode_k1", {"cosine perturbation wavenumber, first component",
                   [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.initial.modeK1 = static_cast<int>(parseInteger(k, v));
                   }}},
      {"mode_k2", {"cosine perturbation wavenumber, second component",
                   [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.initial.modeK2 = static_cast<int>(parseInteger(k, v));
                   }}},
      {"ic_kmax", {"random-band support radius", [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.initial.kmax = static_cast<int>(parseInteger(k, v));
                   }}},
      {"ic_seed", {"seed of random initial data", [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.initial.seed = parseUnsigned(k, v);
                   }}},
      {"checkpoint", {"checkpoint read by ic = from-checkpoint",
                      [](RunConfig& c, const std::string&, const std::string& v) {
                        c.initial.checkpoint = v;
                      }}},
      {"velocity", {"zero | random-band | taylor-green",
                    [](RunConfig& c, const std::string&, const std::string& v) {
                      if (v == "zero") {
                        c.initial.velocity = VelocityIc::kZero;
                      } else if (v == "random-band") {
                        c.initial.velocity = VelocityIc::kRandomBand;
                      } else if (v == "taylor-green") {
                        c.initial.velocity = VelocityIc::kTaylorGreen;
                      } else {
                        throw ConfigError("key 'velocity': unknown kind '" + v + "'");
                      }
                    }}},
      {"velocity_amplitude", {"max |u| of the initial velocity",
                              [](RunConfig& c, const std::string& k, const std::string& v) {
                                c.initial.velocityAmplitude = parseDouble(k, v);
                              }}},
      {"velocity_kmax", {"random-band velocity support radius",
                         [](RunConfig& c, const std::string& k, const std::string& v) {
                           c.initial.velocityKmax = static_cast<int>(parseInteger(k, v));
                         }}},
      {"output", {"output path", [](RunConfig& c, const std::string&, const std::string& v) {
                    c.output = v;
                  }}},
      {"kappa_list", {"comma separated kappa values for rate-sweep",
                      [](RunConfig& c, const std::string& k, const std::string& v) {
                        c.kappaList.clear();
                        for (const auto& item : splitList(v)) c.kappaList.push_back(parseDouble(k, item));
                      }}},
      {"shell_list", {"comma separated shell indices for rate-sweep and corrector-check",
                      [](RunConfig& c, const std::string& k, const std::string& v) {
                        c.shellList.clear();
                        for (const auto& item : splitList(v)) {
                          c.shellList.push_back(static_cast<int>(parseInteger(k, item)));
                        }
                      }}},
      {"delta_alpha", {"alpha in the contraction bound", [](RunConfig& c, const std::string& k, const std::string& v) {
                         c.deltaAlpha = parseDouble(k, v);
                       }}},
      {"delta_beta", {"beta in the contraction bound", [](RunConfig& c, const std::string& k, const std::string& v) {
                        c.deltaBeta = parseDouble(k, v);
                      }}},
      {"delta_constant", {"constant in the contraction bound",
                          [](RunConfig& c, const std::string& k, const std::string& v) {
                            c.deltaConstant = parseDouble(k, v);
                          }}},
      {"s", {"Sobolev index of the corrector check", [](RunConfig& c, const std::string& k, const std::string& v) {
               c.sobolevIndex = parseDouble(k, v);
             }}},
      {"alpha", {"rate exponent of the corrector check", [](RunConfig& c, const std::string& k, const std::string& v) {
                   c.alpha = parseDouble(k, v);
                 }}},
      {"corrector_kmax", {"support radius of the corrector test field",
                          [](RunConfig& c, const std::string& k, const std::string& v) {
                            c.correctorKmax = static_cast<int>(parseInteger(k, v));
                          }}},
      {"corrector_seed", {"seed of the corrector test field",
                          [](RunConfig& c, const std::string& k, const std::string& v) {
                            c.correctorSeed = parseUnsigned(k, v);
                          }}},
      {"input", {"NDJSON series read by fit", [](RunConfig& c, const std::string&, const std::string& v) {
                   c.input = v;
                 }}},
      {"fit_field", {"record field fitted by fit (default U2)",
                     [](RunConfig& c, const std::string&, const std::string& v) { c.fitField = v; }}},
      {"fit_t0", {"fit window start (default: middle of the series)",
                  [](RunConfig& c, const std::string& k, const std::string& v) {
                    c.fitT0 = parseDouble(k, v);
                  }}},
      {"fit_t1", {"fit window end (default: last sample)",
                  [](RunConfig& c, const std::string& k, const std::string& v) {
                    c.fitT1 = parseDouble(k, v);
                  }}},
      {"threads", {"worker threads (0: all cores)", [](RunConfig& c, const std::string& k, const std::string& v) {
                     c.threads = static_cast<int>(parseInteger(k, v));
                   }}},
  };
  return keys;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& configKeys() {
  static const auto keys = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [name, info] : table()) out.emplace_back(name, info.help);
    return out;
  }();
  return keys;
}

void validate(const RunConfig& c) {
  if (c.grid < 8 || c.grid % 2 != 0) throw ConfigError("grid must be even and >= 8");
  validate(c.params);
  if (c.params.noise.shell < 1) throw ConfigError("shell must be >= 1");
  if (!(c.params.noise.gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (!(c.stepper.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(c.stepper.tEnd >= 0.0)) throw ConfigError("t_end must be >= 0");
  if (c.stepper.recordStride < 1) throw ConfigError("record_stride must be >= 1");
  if (c.ensemble < 1) throw ConfigError("ensemble must be >= 1");
  if (!(c.initial.cbar >= 0.0)) throw ConfigError("cbar must be >= 0");
  if (!(c.initial.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (!(c.initial.velocityAmplitude >= 0.0)) throw ConfigError("velocity_amplitude must be >= 0");
  const int radius = c.grid / 3;
  if (c.initial.kind == ConcentrationIc::kRandomBand && (c.initial.kmax < 1 || c.initial.kmax > radius)) {
    throw ConfigError("ic_kmax must lie in [1, grid/3]");
  }
  if (c.initial.kind == ConcentrationIc::kCosinePerturbation &&
      (std::abs(c.initial.modeK1) > radius || std::abs(c.initial.modeK2) > radius ||
       (c.initial.modeK1 == 0 && c.initial.modeK2 == 0))) {
    throw ConfigError("cosine mode must be nonzero and within grid/3");
  }
  if (c.initial.kind == ConcentrationIc::kFromCheckpoint && c.initial.checkpoint.empty()) {
    throw ConfigError("ic = from-checkpoint requires 'checkpoint'");
  }
  if (c.initial.velocity == VelocityIc::kRandomBand &&
      (c.initial.velocityKmax < 1 || c.initial.velocityKmax > radius)) {
    throw ConfigError("velocity_kmax must lie in [1, grid/3]");
  }
  if (c.params.noise.kappa > 0.0 && 2 * c.params.noise.shell > radius) {
    throw ConfigError("noise shell 2N = " + std::to_string(2 * c.params.noise.shell) +
                      " exceeds the dealias radius " + std::to_string(radius));
  }
  for (double k : c.kappaList) {
    if (!(k >= 0.0)) throw ConfigError("kappa_list entries must be >= 0");
  }
  for (int n : c.shellList) {
    if (n < 1) throw ConfigError("shell_list entries must be >= 1");
  }
  if (c.correctorKmax < 1) throw ConfigError("corrector_kmax must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
}

RunConfig parseConfig(const std::string& text) {
  std::map<std::string, const KeyInfo*> lookup;
  for (const auto& [name, info] : table()) lookup[name] = &info;

  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = lookup.find(key);
    if (it == lookup.end()) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
    it->second->set(config, key, value);
  }
  validate(config);
  return config;
}

RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

}  // namespace npns
