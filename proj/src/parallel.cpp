#include "bergtoep/parallel.hpp"

namespace bergtoep {

namespace {
std::atomic<std::size_t> g_jobs{0};
}

std::size_t default_jobs() {
  const std::size_t j = g_jobs.load();
  if (j > 0) return j;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_jobs(std::size_t jobs) { g_jobs.store(jobs); }

}  // namespace bergtoep
