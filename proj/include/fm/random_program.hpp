#pragma once

// Seeded generator of terminating mini C++ programs for equivalence testing.

#include <cstdint>
#include <vector>

#include "fm/ast.hpp"
#include "fm/sim.hpp"

namespace fm {

struct RandomCase {
    ast::Program program;
    std::vector<InputScript> scripts;  // each long enough for every read the program can make
};

/// At most `max_statements` statements in total, no loop inside a loop, every
/// loop bounded by a fresh counter to at most 50 iterations, and division only
/// by nonzero literals. Same seed, same case.
RandomCase random_case(std::uint64_t seed, int scripts = 3, int max_statements = 20);

/// Upper bound on cin reads over every execution path.
std::size_t max_reads(const ast::Program& program);

}  // namespace fm
