#include "npns/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace npns {

namespace {

constexpr char kMagic[8] = {'N', 'P', 'N', 'S', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::vector<char>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw IoError("checkpoint is truncated");
    char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

void putField(std::vector<char>& out, const SpectralScalar& f) {
  const int m = f.grid.size();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      put(out, f.coeffs(i, j).real());
      put(out, f.coeffs(i, j).imag());
    }
  }
}

void getField(Reader& in, SpectralScalar& f) {
  const int m = f.grid.size();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double re = in.get<double>();
      const double im = in.get<double>();
      f.coeffs(i, j) = Complex(re, im);
    }
  }
}

}  // namespace

std::vector<char> encodeCheckpoint(const Checkpoint& c) {
  std::vector<char> out(std::begin(kMagic), std::end(kMagic));
  const int m = c.state.grid().size();
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m));
  put(out, c.params.nu);
  put(out, c.params.D);
  put(out, c.params.noise.kappa);
  put(out, c.params.noise.gamma);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.params.noise.shell));
  put(out, c.t);
  out.reserve(out.size() + 4 * static_cast<std::size_t>(m) * m * 16);
  putField(out, c.state.u.x);
  putField(out, c.state.u.y);
  putField(out, c.state.c1);
  putField(out, c.state.c2);
  return out;
}

Checkpoint decodeCheckpoint(const std::vector<char>& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a checkpoint file (bad magic)");
  }
  Reader in(bytes);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) in.get<char>();
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                  std::to_string(kCheckpointVersion) + ")");
  }
  const auto m = in.get<std::uint32_t>();
  Checkpoint c;
  c.params.nu = in.get<double>();
  c.params.D = in.get<double>();
  c.params.noise.kappa = in.get<double>();
  c.params.noise.gamma = in.get<double>();
  c.params.noise.shell = static_cast<int>(in.get<std::uint32_t>());
  c.t = in.get<double>();
  const std::size_t payload = 4 * static_cast<std::size_t>(m) * m * 16;
  if (in.remaining() < payload) throw IoError("checkpoint is truncated");
  if (in.remaining() > payload) throw IoError("checkpoint has trailing bytes");
  Grid grid = [&] {
    try {
      return Grid(static_cast<int>(m));
    } catch (const std::exception& e) {
      throw IoError(std::string("checkpoint grid: ") + e.what());
    }
  }();
  State s(grid);
  getField(in, s.u.x);
  getField(in, s.u.y);
  getField(in, s.c1);
  getField(in, s.c2);
  try {
    refreshCoupling(s);
  } catch (const std::exception& e) {
    throw IoError(std::string("checkpoint state: ") + e.what());
  }
  c.state = std::move(s);
  return c;
}

void saveCheckpoint(const std::string& path, const Checkpoint& checkpoint) {
  const std::vector<char> bytes = encodeCheckpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint '" + path + "'");
}

Checkpoint loadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint '" + path + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decodeCheckpoint(bytes);
}

}  // namespace npns
