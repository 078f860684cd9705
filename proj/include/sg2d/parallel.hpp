#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <string>

namespace sg2d {

/// Replica dispatch policy. The serial path is the reference implementation;
/// the OpenMP path must reproduce it bit-for-bit because each replica owns its
/// RNG stream and results are reduced in replica order afterwards.
enum class Execution { serial, parallel };

std::string to_string(Execution exec);

/// Calls body(r) for r in [0, count). Exceptions thrown by any replica are
/// rethrown on the calling thread.
template <class Body>
void for_each_replica(std::size_t count, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long r = 0; r < n; ++r) {
    try {
      body(static_cast<std::size_t>(r));
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sg2d
