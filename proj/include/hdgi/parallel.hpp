#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace hdgi {

/// Execution policy for the element-wise kernels. Both policies write each
/// element's result into its own slot and reduce serially afterwards, so the
/// output is bitwise identical for any thread count.
enum class Exec { serial, parallel };

template <class Body>
void for_each_index(Exec exec, std::size_t count, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  // Keep the failure with the lowest index so errors match the serial loop.
  std::exception_ptr failure;
  std::ptrdiff_t failed_at = -1;
  std::mutex failure_mutex;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (failed_at < 0 || i < failed_at) {
        failure = std::current_exception();
        failed_at = i;
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hdgi
