#include "fce/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace fce::fft {

namespace {

using cplx = std::complex<double>;

enum class Kind { Forward, Backward, RealForward };

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (kind, size) with FFTW_ESTIMATE, which is
// deterministic, and FFTW_UNALIGNED so results do not depend on buffer
// alignment.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({kind, n});
    if (it != plans_.end()) return it->second;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<cplx> in(n), out(n);
    auto* ci = reinterpret_cast<fftw_complex*>(in.data());
    auto* co = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::Forward:
        plan = fftw_plan_dft_1d(n, ci, co, FFTW_FORWARD, flags);
        break;
      case Kind::Backward:
        plan = fftw_plan_dft_1d(n, ci, co, FFTW_BACKWARD, flags);
        break;
      case Kind::RealForward: {
        std::vector<double> rin(n);
        plan = fftw_plan_dft_r2c_1d(n, rin.data(), co, flags);
        break;
      }
    }
    plans_.emplace(std::make_pair(kind, n), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Kind, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<cplx> complex_transform(std::span<const cplx> x, Kind kind) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> in(x.begin(), x.end());
  std::vector<cplx> out(n);
  if (n == 0) return out;
  fftw_execute_dft(cache().get(kind, n), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> x) {
  return complex_transform(x, Kind::Forward);
}

std::vector<cplx> inverse(std::span<const cplx> x) {
  auto out = complex_transform(x, Kind::Backward);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (cplx& v : out) v *= scale;
  return out;
}

std::vector<cplx> forward_real(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> out(n / 2 + 1);
  if (n == 0) return {};
  std::vector<double> in(x.begin(), x.end());
  fftw_execute_dft_r2c(cache().get(Kind::RealForward, n), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace fce::fft
