#pragma once

#include <cstddef>
#include <string_view>

namespace parastat {

// Largest matrix/tensor dimension any construction may allocate.
// Read once from PARASTAT_BUDGET_DIM (default 20000).
std::size_t dimension_budget();

// Overrides the budget for the rest of the process (tests, CLI flags).
void set_dimension_budget(std::size_t dim);

// Throws ResourceError naming `what` when dim exceeds the budget.
void require_within_budget(std::size_t dim, std::string_view what);

}  // namespace parastat
