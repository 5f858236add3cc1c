#include "steinbound/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace steinbound::kernels {

namespace scalar_impl {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_abs(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] < 0 ? -x[i] : x[i];
  return acc;
}

double sum_abs_diff(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = x[i] - y[i];
    acc += d < 0 ? -d : d;
  }
  return acc;
}

}  // namespace scalar_impl

#if defined(STEINBOUND_HAVE_AVX2)
namespace avx2_impl {
// defined in kernels_avx2.cpp (compiled with -mavx2)
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double sum_abs_diff(const double* x, const double* y, std::size_t n);
}  // namespace avx2_impl
#endif

#if defined(__aarch64__)
namespace neon_impl {

void axpy(double a, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  float64x2_t va = vdupq_n_f64(a);
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vaddq_f64(vy, vmulq_f64(va, vld1q_f64(x + i)));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i];
  return r;
}

double sum_abs(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i] < 0 ? -x[i] : x[i];
  return r;
}

double sum_abs_diff(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    double d = x[i] - y[i];
    r += d < 0 ? -d : d;
  }
  return r;
}

}  // namespace neon_impl
#endif

namespace {

struct Dispatch {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*sum_abs_diff)(const double*, const double*, std::size_t);
  Backend backend;
};

Dispatch make_dispatch(Backend b) {
  switch (b) {
#if defined(STEINBOUND_HAVE_AVX2)
    case Backend::avx2:
      return {avx2_impl::axpy, avx2_impl::dot, avx2_impl::sum,
              avx2_impl::sum_abs, avx2_impl::sum_abs_diff, Backend::avx2};
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return {neon_impl::axpy, neon_impl::dot, neon_impl::sum,
              neon_impl::sum_abs, neon_impl::sum_abs_diff, Backend::neon};
#endif
    default:
      return {scalar_impl::axpy, scalar_impl::dot, scalar_impl::sum,
              scalar_impl::sum_abs, scalar_impl::sum_abs_diff,
              Backend::scalar};
  }
}

Backend detect_backend() {
  if (const char* env = std::getenv("STEINBOUND_KERNEL")) {
    std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!backend_available(Backend::avx2))
        throw std::invalid_argument("STEINBOUND_KERNEL=avx2 but AVX2 is not available");
      return Backend::avx2;
    }
    if (v == "neon") {
      if (!backend_available(Backend::neon))
        throw std::invalid_argument("STEINBOUND_KERNEL=neon but NEON is not available");
      return Backend::neon;
    }
    if (!v.empty() && v != "auto")
      throw std::invalid_argument("unknown STEINBOUND_KERNEL value: " + v);
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch(detect_backend());
  return d;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(STEINBOUND_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return dispatch().backend; }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

void use_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument(std::string("kernel backend not available: ") +
                                std::string(backend_name(b)));
  dispatch() = make_dispatch(b);
}

void reset_backend() { dispatch() = make_dispatch(detect_backend()); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  dispatch().axpy(a, x, y, n);
}
double dot(const double* x, const double* y, std::size_t n) {
  return dispatch().dot(x, y, n);
}
double sum(const double* x, std::size_t n) { return dispatch().sum(x, n); }
double sum_abs(const double* x, std::size_t n) {
  return dispatch().sum_abs(x, n);
}
double sum_abs_diff(const double* x, const double* y, std::size_t n) {
  return dispatch().sum_abs_diff(x, y, n);
}

}  // namespace steinbound::kernels
