#include "blab/parallel.hpp"

#include <atomic>

namespace blab {

namespace {

std::atomic<int> g_threads{0};

}  // namespace

int thread_count() {
  const int n = g_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

}  // namespace blab
