#include "ilw/fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace ilw::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// The FFTW planner is not thread-safe; plan creation is serialized and plans
// are cached per size. FFTW_UNALIGNED lets the same plan run on any buffer.
PlanPair& plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  fftw_complex* scratch = fftw_alloc_complex(n);
  if (scratch == nullptr) throw std::runtime_error("fftw allocation failed");
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  if (p.fwd == nullptr || p.bwd == nullptr) throw std::runtime_error("fftw planning failed");
  return cache.emplace(n, p).first->second;
}

fftw_complex* as_fftw(std::span<std::complex<double>> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

void forward(std::span<std::complex<double>> data) {
  fftw_execute_dft(plans_for(data.size()).fwd, as_fftw(data), as_fftw(data));
}

void backward(std::span<std::complex<double>> data) {
  fftw_execute_dft(plans_for(data.size()).bwd, as_fftw(data), as_fftw(data));
}

}  // namespace ilw::fft
