#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "citorder/coupling.hpp"

namespace citorder {

// Strongly connected components, each sorted by name, listed by smallest
// member. A component is nontrivial when it has two or more classes.
std::vector<std::vector<std::string>> tarjan_scc(const Eord& eord);

struct CycleSet {
    // Each cycle lists its classes once, rotated to start at the smallest
    // name; the closing edge back to the first class is implicit.
    std::vector<std::vector<std::string>> cycles;
    std::map<std::pair<std::string, std::string>, int> edge_counts;
};

// All elementary cycles of the dependency graph. Throws AnalysisError once
// more than `cap` cycles exist.
CycleSet enumerate_cycles(const Eord& eord, std::uint64_t cap = 1000000);

struct TestOrder {
    std::vector<std::string> order;
    std::string strategy;
    std::vector<std::pair<std::string, std::string>> removed_edges;
    std::uint64_t seed = 0;
    int iterations = 0;
    std::vector<double> accepted_costs;
};

struct GraphOptions {
    // Permit removing inheritance/aggregation edges when breaking cycles.
    bool break_any = false;
    std::uint64_t cycle_cap = 1000000;
};

// Cycle-breaking strategy: repeatedly removes the removable edge with the
// highest cycle-count/scplx ratio, then topologically sorts.
TestOrder graph_based(const Eord& eord, const Weights& w,
                      const GraphOptions& options = {});

// Priority strategy: integrates zero-cost classes eagerly, otherwise the
// class with the best profit-minus-cost, recomputing after each round.
TestOrder multilevel_feedback(const Eord& eord, const Weights& w);

struct RiaOptions {
    std::uint64_t seed = 0;
    int iterations = 1000;
    // 0 disables annealing; positive values accept some worsening swaps
    // with probability exp(-delta/temperature), cooling by sa_decay.
    double sa_temp = 0.0;
    double sa_decay = 0.995;
};

// Random-iterative baseline: seeded shuffle, then adjacent-swap hill
// climbing; returns the best order seen.
TestOrder ria(const Eord& eord, const Weights& w, const RiaOptions& options = {});

}  // namespace citorder
