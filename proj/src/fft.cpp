#include "pmech/fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace pmech::fft {

namespace {

// rank, n0, n1, howmany, stride, dist, sign
using PlanKey = std::tuple<int, int, int, int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const auto [rank, n0, n1, howmany, stride, dist, sign] = key;
    int dims[2] = {n0, n1};
    const std::size_t total =
        static_cast<std::size_t>(howmany - 1) * static_cast<std::size_t>(dist) +
        static_cast<std::size_t>(stride) * static_cast<std::size_t>(n0) *
            static_cast<std::size_t>(rank == 2 ? n1 : 1);
    std::vector<Complex> scratch(total + 1);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_many_dft(rank, dims, howmany, buf, nullptr, stride, dist, buf,
                                        nullptr, stride, dist, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(const PlanKey& key, std::span<Complex> data) {
  fftw_plan plan = cache().get(key);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

int as_int(std::size_t v) { return static_cast<int>(v); }

}  // namespace

void transform_1d(std::span<Complex> data, Direction dir) {
  if (data.empty()) return;
  run({1, as_int(data.size()), 1, 1, 1, as_int(data.size()), static_cast<int>(dir)}, data);
}

void transform_rows(std::span<Complex> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw std::invalid_argument("transform_rows: shape mismatch");
  if (data.empty()) return;
  run({1, as_int(cols), 1, as_int(rows), 1, as_int(cols), static_cast<int>(dir)}, data);
}

void transform_cols(std::span<Complex> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw std::invalid_argument("transform_cols: shape mismatch");
  if (data.empty()) return;
  run({1, as_int(rows), 1, as_int(cols), as_int(cols), 1, static_cast<int>(dir)}, data);
}

void transform_2d(std::span<Complex> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw std::invalid_argument("transform_2d: shape mismatch");
  if (data.empty()) return;
  run({2, as_int(rows), as_int(cols), 1, 1, as_int(rows * cols), static_cast<int>(dir)}, data);
}

}  // namespace pmech::fft
