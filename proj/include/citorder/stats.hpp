#pragma once

#include <vector>

namespace citorder {

struct WilcoxonResult {
    int n_nonzero = 0;
    double w_plus = 0.0;
    double w_minus = 0.0;
    double statistic = 0.0;  // min(w_plus, w_minus)
    double p = 1.0;
    bool exact = true;
    bool all_zero = false;
    bool reject = false;
};

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
// are dropped; tied magnitudes get average ranks; p is exact (full sign
// enumeration) for up to 20 nonzero pairs, normal approximation above.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    double alpha = 0.05);

WilcoxonResult wilcoxon_from_differences(const std::vector<double>& diffs,
                                         double alpha = 0.05);

}  // namespace citorder
