#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace sfwm {

enum class Exec { Serial, Parallel };

namespace kernels {

// out[i * ny + j] = f(i, j). Each cell is written by exactly one iteration, so the
// parallel variant is bitwise identical to the serial one.
template <class T, class F>
void fill_seq(std::vector<T>& out, std::size_t nx, std::size_t ny, F&& f) {
  out.resize(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) out[i * ny + j] = f(i, j);
}

template <class T, class F>
void fill_omp(std::vector<T>& out, std::size_t nx, std::size_t ny, F&& f) {
  out.resize(nx * ny);
  const long long n = static_cast<long long>(nx * ny);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (long long c = 0; c < n; ++c) {
    try {
      const std::size_t i = static_cast<std::size_t>(c) / ny, j = static_cast<std::size_t>(c) % ny;
      out[static_cast<std::size_t>(c)] = f(i, j);
    } catch (...) {
#pragma omp critical(sfwm_kernel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

template <class T, class F>
void fill(Exec exec, std::vector<T>& out, std::size_t nx, std::size_t ny, F&& f) {
  if (exec == Exec::Parallel)
    fill_omp(out, nx, ny, f);
  else
    fill_seq(out, nx, ny, f);
}

// out[k] = f(k)
template <class T, class F>
void map_seq(std::vector<T>& out, std::size_t n, F&& f) {
  fill_seq(out, n, 1, [&](std::size_t i, std::size_t) { return f(i); });
}

template <class T, class F>
void map_omp(std::vector<T>& out, std::size_t n, F&& f) {
  fill_omp(out, n, 1, [&](std::size_t i, std::size_t) { return f(i); });
}

template <class T, class F>
void map(Exec exec, std::vector<T>& out, std::size_t n, F&& f) {
  if (exec == Exec::Parallel)
    map_omp(out, n, f);
  else
    map_seq(out, n, f);
}

}  // namespace kernels
}  // namespace sfwm
