#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pred/predictor.hpp"

namespace pred::testing {

// Brute-force reference for the conditional bounds: enumerate every
// distribution on the comb of (v, w) with values on the 2^-grid_bits
// grid that dominates p on the comb, and return the extreme
// conditionals q(vw)/q(v), with 0/0 read as 0.
struct CombExtremes {
    Ratio min{1};
    Ratio max{0};
    bool any = false;
};

inline CombExtremes comb_brute_force(const StagedPredictor& p, const BitStr& v,
                                     const BitStr& w, int grid_bits) {
    BitStr target = v.concat(w);
    std::size_t levels = target.size();
    Ratio step = Ratio::pow2(-grid_bits);
    unsigned long cells = 1ul << grid_bits;
    CombExtremes out;
    std::vector<Ratio> q(levels + 1);
    q[0] = Ratio(1);
    std::function<void(std::size_t)> walk = [&](std::size_t j) {
        if (j > levels) {
            Ratio cond = Ratio::quotient_or_zero(q[levels], q[v.size()]);
            if (!out.any || cond < out.min) out.min = cond;
            if (!out.any || cond > out.max) out.max = cond;
            out.any = true;
            return;
        }
        BitStr node = target.prefix(j);
        BitStr sibling = node.complement_last();
        for (unsigned long k = 0; k <= cells; ++k) {
            Ratio val = Ratio(static_cast<long>(k)) * step;
            if (val > q[j - 1]) break;
            if (val < p.limit(node)) continue;
            if (q[j - 1] - val < p.limit(sibling)) continue;
            q[j] = val;
            walk(j + 1);
        }
    };
    walk(1);
    return out;
}

inline std::vector<Bit> pattern_stream(const std::string& pattern, std::size_t length) {
    std::vector<Bit> bits;
    for (std::size_t i = 0; i < length; ++i)
        bits.push_back(pattern[i % pattern.size()] - '0');
    return bits;
}

}  // namespace pred::testing
