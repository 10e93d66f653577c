#include "lazypca/threading.hpp"

#include <atomic>

namespace lazypca {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() { return g_threads.load(); }

namespace detail {
int resolved_thread_count() {
  int n = g_threads.load();
  if (n == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return n < 1 ? 1 : n;
}
}  // namespace detail

}  // namespace lazypca
