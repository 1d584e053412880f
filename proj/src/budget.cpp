#include "parastat/budget.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "parastat/errors.hpp"

namespace parastat {
namespace {

std::size_t budget_from_env() {
  if (const char* env = std::getenv("PARASTAT_BUDGET_DIM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 20000;
}

std::atomic<std::size_t>& budget_slot() {
  static std::atomic<std::size_t> slot{budget_from_env()};
  return slot;
}

}  // namespace

std::size_t dimension_budget() { return budget_slot().load(); }

void set_dimension_budget(std::size_t dim) { budget_slot().store(dim); }

void require_within_budget(std::size_t dim, std::string_view what) {
  if (dim > dimension_budget())
    throw ResourceError(std::string(what) + ": dimension " + std::to_string(dim) +
                        " exceeds budget " + std::to_string(dimension_budget()) +
                        " (PARASTAT_BUDGET_DIM)");
}

}  // namespace parastat
