#include "ehf/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "ehf/errors.hpp"

namespace ehf {

namespace {

// Planner calls are not thread-safe in FFTW; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class SineTransform {
 public:
  explicit SineTransform(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_real(n);
    plan_ = fftw_plan_r2r_1d(static_cast<int>(n), in_, out_, FFTW_RODFT00, FFTW_ESTIMATE);
  }
  ~SineTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  void run(std::vector<double>& data) {
    std::copy(data.begin(), data.end(), in_);
    fftw_execute(plan_);
    std::copy(out_, out_ + n_, data.begin());
  }

 private:
  std::size_t n_;
  double* in_ = nullptr;
  double* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<double> apply_radial_symbol(std::span<const double> u, double dr, double c, double power) {
  if (u.size() < 4) throw DomainError("apply_radial_symbol: need at least four samples");
  if (!(dr > 0.0)) throw DomainError("apply_radial_symbol: dr must be positive");
  const std::size_t n = u.size() - 1;  // index of the outer node
  const std::size_t m = n - 1;         // interior nodes
  std::vector<double> w(m);
  for (std::size_t j = 1; j <= m; ++j) w[j - 1] = static_cast<double>(j) * dr * u[j];

  SineTransform dst(m);
  dst.run(w);
  const double length = static_cast<double>(n) * dr;
  for (std::size_t k = 1; k <= m; ++k) {
    const double kappa = std::numbers::pi * static_cast<double>(k) / length;
    w[k - 1] *= std::pow(c * c + kappa * kappa, 0.5 * power);
  }
  dst.run(w);

  std::vector<double> out(u.size(), 0.0);
  const double norm = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t j = 1; j <= m; ++j) out[j] = w[j - 1] * norm / (static_cast<double>(j) * dr);
  out[0] = (4.0 * out[1] - out[2]) / 3.0;
  return out;
}

}  // namespace ehf
