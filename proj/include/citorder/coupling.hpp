#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "citorder/eord.hpp"

namespace citorder {

struct DataCoupling {
    std::set<std::string> attrs;
    std::set<std::string> methods;
};

// Distinct cross-class member references per (source, target) class pair.
// Pairs without any reference are absent.
std::map<std::pair<std::string, std::string>, DataCoupling> measure_data_coupling(
    const ProgramModel& model);

// Weights must be nonnegative and sum to 1 (within 1e-9).
void validate_weights(const Weights& w);

// sqrt(wa*A_norm^2 + wm*M_norm^2 + wt*T^2).
double scplx(const CouplingRecord& rec, const Weights& w);

// Edges from an earlier-tested class to a later-tested one; each needs a stub.
std::set<std::pair<std::string, std::string>> stub_set(
    const Eord& eord, const std::vector<std::string>& order);

struct OrderCost {
    double ocplx = 0.0;
    int acplx = 0;
    int mcplx = 0;
    double tcplx = 0.0;
    int stubs = 0;
};

// Total stubbing cost of a test order: sums each stubbed edge's scplx plus
// the raw component tallies.
OrderCost ocplx(const Eord& eord, const std::vector<std::string>& order,
                const Weights& w);

}  // namespace citorder
