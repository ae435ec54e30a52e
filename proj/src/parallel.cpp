#include "hullspace/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>

namespace hullspace {

namespace {

int from_environment() {
  if (const char* env = std::getenv("HULLSPACE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

std::atomic<int> g_override{0};

}  // namespace

int kernel_threads() {
  static const int env_threads = from_environment();
  const int o = g_override.load(std::memory_order_relaxed);
  return o > 0 ? o : env_threads;
}

void set_kernel_threads(int n) { g_override.store(n > 0 ? n : 0, std::memory_order_relaxed); }

}  // namespace hullspace
