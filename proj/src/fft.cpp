#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace npns::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex& planMutex() {
  static std::mutex mutex;
  return mutex;
}

// Plans are never destroyed; they live for the whole process.
const PlanPair& plansFor(int m) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planMutex());
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  std::vector<std::complex<double>> a(static_cast<std::size_t>(m) * m);
  std::vector<std::complex<double>> b(a.size());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_MEASURE | FFTW_UNALIGNED;
  PlanPair plans;
  plans.forward = fftw_plan_dft_2d(m, m, pa, pb, FFTW_FORWARD, flags);
  plans.backward = fftw_plan_dft_2d(m, m, pa, pb, FFTW_BACKWARD, flags);
  return cache.emplace(m, plans).first->second;
}

}  // namespace

void fft2d(const std::complex<double>* in, std::complex<double>* out, int m,
           int sign) {
  const PlanPair& plans = plansFor(m);
  fftw_plan plan = sign < 0 ? plans.forward : plans.backward;
  // fftw never writes to the input of an out-of-place c2c transform.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace npns::detail
