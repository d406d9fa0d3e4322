#pragma once

#include <stdexcept>
#include <string>

namespace homgrowth {

// Cell/size budget exceeded (CLI exit code 2).
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal consistency failure: negative torsion rank, Euler mismatch,
// nerve-lemma assertion (CLI exit code 3).
struct InconsistencyError : std::runtime_error {
    explicit InconsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BudgetOptions {
    // max cells per degree for cover / Davis chain complexes
    std::int64_t max_cells_per_degree = 5'000'000;
};

struct RankOptions {
    int threads = 1;  // results are identical for any value
};

}  // namespace homgrowth
