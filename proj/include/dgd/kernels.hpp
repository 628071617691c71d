#pragma once

#include <span>
#include <string_view>

// Dense vector kernels used by the gradient accumulators, the weight
// updates and the Q-table reductions. Each kernel has a scalar reference
// implementation and an AVX2 variant selected at runtime; both produce
// bit-identical results (plain IEEE mul/add per element, no FMA).
namespace dgd::kernels {

enum class Backend { scalar, avx2 };

// y[i] += a * x[i]
void axpy(double a, std::span<const double> x, std::span<double> y);

// w[i] = clamp(w[i] + a * g[i], -bound, +bound)
void step_clamped(std::span<double> w, std::span<const double> g, double a,
                  double bound);

// max over x; x must be non-empty, values must not be NaN
double max_value(std::span<const double> x);

Backend active_backend();
bool backend_available(Backend b);
void set_backend(Backend b);  // throws std::runtime_error if unavailable
void reset_backend();         // back to the best available
std::string_view backend_name(Backend b);

}  // namespace dgd::kernels
