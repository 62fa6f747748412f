#include "citorder/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "citorder/error.hpp"

namespace citorder {

WilcoxonResult wilcoxon_from_differences(const std::vector<double>& diffs,
                                         double alpha) {
    if (diffs.empty()) throw InputError("at least one pair is required");

    std::vector<double> d;
    for (double x : diffs)
        if (x != 0.0) d.push_back(x);

    WilcoxonResult result;
    result.n_nonzero = static_cast<int>(d.size());
    if (d.empty()) {
        result.all_zero = true;
        return result;
    }

    const int n = static_cast<int>(d.size());
    std::vector<int> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return std::abs(d[a]) < std::abs(d[b]); });

    std::vector<double> rank(d.size(), 0.0);
    double tie_correction = 0.0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && std::abs(d[idx[j]]) == std::abs(d[idx[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[idx[k]] = avg;
        const double t = static_cast<double>(j - i);
        tie_correction += t * t * t - t;
        i = j;
    }

    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0)
            result.w_plus += rank[i];
        else
            result.w_minus += rank[i];
    }
    result.statistic = std::min(result.w_plus, result.w_minus);

    if (n <= 20) {
        result.exact = true;
        // Distribution of 2*W+ over all sign assignments; doubled ranks are
        // integers even with average ranks.
        std::vector<int> doubled;
        for (std::size_t i = 0; i < d.size(); ++i)
            doubled.push_back(static_cast<int>(std::llround(2.0 * rank[i])));
        const int total = std::accumulate(doubled.begin(), doubled.end(), 0);
        std::vector<std::uint64_t> dp(total + 1, 0);
        dp[0] = 1;
        for (int r : doubled)
            for (int s = total; s >= r; --s) dp[s] += dp[s - r];

        const int w2 = static_cast<int>(std::llround(2.0 * result.w_plus));
        std::uint64_t le = 0, ge = 0;
        for (int s = 0; s <= total; ++s) {
            if (s <= w2) le += dp[s];
            if (s >= w2) ge += dp[s];
        }
        const double denom = std::ldexp(1.0, n);  // 2^n
        const double tail = static_cast<double>(std::min(le, ge)) / denom;
        result.p = std::min(1.0, 2.0 * tail);
    } else {
        result.exact = false;
        const double nn = n;
        const double mean = nn * (nn + 1.0) / 4.0;
        const double var =
            nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_correction / 48.0;
        const double z = (result.w_plus - mean) / std::sqrt(var);
        result.p = std::erfc(std::abs(z) / std::sqrt(2.0));
    }
    result.reject = result.p < alpha;
    return result;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b, double alpha) {
    if (a.size() != b.size())
        throw InputError("paired samples must have equal length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) diffs.push_back(a[i] - b[i]);
    return wilcoxon_from_differences(diffs, alpha);
}

}  // namespace citorder
