#pragma once

#include <cstddef>
#include <string_view>

// Small dense kernels used by the pmf / moments / stein layers.  Every kernel
// has a scalar reference implementation; on x86-64 an AVX2 variant is compiled
// as well and selected at runtime (cpuid, overridable through the
// STEINBOUND_KERNEL environment variable or use_backend()).

namespace steinbound::kernels {

enum class Backend { scalar, avx2, neon };

Backend active_backend();
std::string_view backend_name(Backend b);
bool backend_available(Backend b);

// Force a backend; throws std::invalid_argument if it is not available on
// this machine.
void use_backend(Backend b);

// Redo automatic selection (honours STEINBOUND_KERNEL=scalar|avx2|neon|auto).
void reset_backend();

// y[i] += a * x[i], 0 <= i < n
void axpy(double a, const double* x, double* y, std::size_t n);

double dot(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);

// sum_i |x[i] - y[i]|
double sum_abs_diff(const double* x, const double* y, std::size_t n);

}  // namespace steinbound::kernels
