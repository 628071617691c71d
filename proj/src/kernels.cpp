#include "dgd/kernels.hpp"

#include <cassert>
#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#define DGD_X86 1
#include <immintrin.h>
#else
#define DGD_X86 0
#endif

namespace dgd::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void step_scalar(double* w, const double* g, double a, double bound,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = w[i] + a * g[i];
    if (v > bound) v = bound;
    if (v < -bound) v = -bound;
    w[i] = v;
  }
}

double max_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

#if DGD_X86

__attribute__((target("avx2"))) void axpy_avx2(double a, const double* x,
                                               double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    // mul then add, same rounding as the scalar loop
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2"))) void step_avx2(double* w, const double* g,
                                               double a, double bound,
                                               std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vhi = _mm256_set1_pd(bound);
  const __m256d vlo = _mm256_set1_pd(-bound);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vw = _mm256_loadu_pd(w + i);
    vw = _mm256_add_pd(vw, _mm256_mul_pd(va, _mm256_loadu_pd(g + i)));
    vw = _mm256_min_pd(vw, vhi);
    vw = _mm256_max_pd(vw, vlo);
    _mm256_storeu_pd(w + i, vw);
  }
  for (; i < n; ++i) {
    double v = w[i] + a * g[i];
    if (v > bound) v = bound;
    if (v < -bound) v = -bound;
    w[i] = v;
  }
}

__attribute__((target("avx2"))) double max_avx2(const double* x,
                                                std::size_t n) {
  if (n < 8) return max_scalar(x, n);
  __m256d vm = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vm);
  double m = max_scalar(lanes, 4);
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

#endif  // DGD_X86

struct Table {
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*step)(double*, const double*, double, double, std::size_t);
  double (*max)(const double*, std::size_t);
  Backend backend;
};

constexpr Table kScalar{axpy_scalar, step_scalar, max_scalar, Backend::scalar};
#if DGD_X86
constexpr Table kAvx2{axpy_avx2, step_avx2, max_avx2, Backend::avx2};
#endif

const Table& best_table() {
#if DGD_X86
  static const bool have_avx2 = __builtin_cpu_supports("avx2");
  if (have_avx2) return kAvx2;
#endif
  return kScalar;
}

const Table* g_table = nullptr;

const Table& table() {
  if (g_table == nullptr) g_table = &best_table();
  return *g_table;
}

}  // namespace

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  if (x.empty()) return;
  table().axpy(a, x.data(), y.data(), x.size());
}

void step_clamped(std::span<double> w, std::span<const double> g, double a,
                  double bound) {
  assert(w.size() == g.size());
  if (w.empty()) return;
  table().step(w.data(), g.data(), a, bound, w.size());
}

double max_value(std::span<const double> x) {
  assert(!x.empty());
  return table().max(x.data(), x.size());
}

Backend active_backend() { return table().backend; }

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
#if DGD_X86
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::runtime_error("kernel backend not available on this cpu");
  if (b == Backend::scalar) {
    g_table = &kScalar;
  } else {
#if DGD_X86
    g_table = &kAvx2;
#endif
  }
}

void reset_backend() { g_table = &best_table(); }

std::string_view backend_name(Backend b) {
  return b == Backend::scalar ? "scalar" : "avx2";
}

}  // namespace dgd::kernels
