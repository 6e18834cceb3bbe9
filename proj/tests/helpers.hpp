#pragma once

#include <map>
#include <random>
#include <vector>

#include "pred/predictor.hpp"
#include "pred/transforms.hpp"

namespace pred::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline BitStr random_bitstr(std::mt19937_64& gen, std::size_t length) {
    BitStr out;
    for (std::size_t i = 0; i < length; ++i)
        out.push_back(static_cast<Bit>(gen() & 1));
    return out;
}

// grid value k * 2^-grid_bits with k uniform in [0, hi * 2^grid_bits]
inline Ratio random_grid_value(std::mt19937_64& gen, const Ratio& hi, int grid_bits) {
    Ratio step = Ratio::pow2(-grid_bits);
    auto cells = (hi / step).numerator().get_ui();  // hi is a grid multiple
    std::uniform_int_distribution<unsigned long> pick(0, cells);
    return Ratio(static_cast<long>(pick(gen))) * step;
}

// Random table satisfying p(x) >= p(x0) + p(x1), values on the grid.
inline std::map<BitStr, Ratio> random_subadditive_table(std::mt19937_64& gen,
                                                        std::size_t depth, int grid_bits,
                                                        bool additive = false,
                                                        bool unit_root = false) {
    std::map<BitStr, Ratio> table;
    table.emplace(BitStr::empty(),
                  unit_root ? Ratio(1) : random_grid_value(gen, Ratio(1), grid_bits));
    for (std::size_t len = 0; len < depth; ++len) {
        for (const BitStr& x : all_strings_of_length(len)) {
            Ratio budget = table.at(x);
            Ratio total = additive ? budget : random_grid_value(gen, budget, grid_bits);
            Ratio left = random_grid_value(gen, total, grid_bits);
            table.emplace(x.child(0), left);
            table.emplace(x.child(1), total - left);
        }
    }
    return table;
}

inline StagedPredictor random_table_predictor(std::mt19937_64& gen, std::size_t depth,
                                              int grid_bits) {
    return table_predictor(random_subadditive_table(gen, depth, grid_bits),
                           TableDefault::ZeroOutside);
}

// Random exact dyadic distribution on the grid (additive, unit root).
inline StagedPredictor random_distribution(std::mt19937_64& gen, std::size_t depth,
                                           int grid_bits) {
    return table_predictor(
        random_subadditive_table(gen, depth, grid_bits, true, true),
        TableDefault::ClosedUnderPrefix);
}

// Random strictly positive distribution: per-node conditionals from
// {1/4, 1/2, 3/4}.
inline StagedPredictor random_positive_distribution(std::mt19937_64& gen,
                                                    std::size_t depth) {
    std::map<BitStr, Ratio> table;
    table.emplace(BitStr::empty(), Ratio(1));
    std::uniform_int_distribution<int> pick(1, 3);
    for (std::size_t len = 0; len < depth; ++len) {
        for (const BitStr& x : all_strings_of_length(len)) {
            Ratio cond(pick(gen), 4);
            table.emplace(x.child(0), table.at(x) * cond);
            table.emplace(x.child(1), table.at(x) * (Ratio(1) - cond));
        }
    }
    return table_predictor(table, TableDefault::ClosedUnderPrefix);
}

// Random staged table: dyadic grid values, nondecreasing in the stage,
// subadditive at every stage, zero outside the depth.
inline StagedPredictor random_staged_subadditive(std::mt19937_64& gen, std::size_t depth,
                                                 Stage stages, int grid_bits) {
    auto pick_between = [&](const Ratio& lo, const Ratio& hi) {
        return lo + random_grid_value(gen, hi - lo, grid_bits);
    };
    std::vector<std::map<BitStr, Ratio>> tabs(stages + 1);
    tabs[0] = random_subadditive_table(gen, depth, grid_bits);
    for (Stage n = 1; n <= stages; ++n) {
        const auto& prev = tabs[n - 1];
        auto& cur = tabs[n];
        cur.emplace(BitStr::empty(), pick_between(prev.at(BitStr::empty()), Ratio(1)));
        for (std::size_t len = 0; len < depth; ++len) {
            for (const BitStr& x : all_strings_of_length(len)) {
                Ratio budget = cur.at(x);
                Ratio left =
                    pick_between(prev.at(x.child(0)), budget - prev.at(x.child(1)));
                Ratio right = pick_between(prev.at(x.child(1)), budget - left);
                cur.emplace(x.child(0), left);
                cur.emplace(x.child(1), right);
            }
        }
    }
    PredictorCaps caps;
    caps.dyadic_valued = true;
    return StagedPredictor(
        [tabs, stages](const BitStr& x, Stage n) {
            const auto& tab = tabs[std::min<Stage>(n, stages)];
            auto it = tab.find(x);
            return it == tab.end() ? Ratio(0) : it->second;
        },
        caps);
}

// Staged view of an exact predictor that reaches the limit at stage
// `delay`: approx(x, n) = p(x) * min(1, n/delay). Stage-wise
// subadditive because the factor is shared across nodes.
inline StagedPredictor staged_ramp(const StagedPredictor& p, Stage delay,
                                   bool keep_flags = true) {
    PredictorCaps caps;
    if (keep_flags) {
        caps.additive = p.caps().additive;
        caps.unit_root = p.caps().unit_root;
    }
    return StagedPredictor(
        [p, delay](const BitStr& x, Stage n) {
            Ratio factor = n >= delay ? Ratio(1)
                                      : Ratio(static_cast<long>(n)) /
                                            Ratio(static_cast<long>(delay));
            return p.limit(x) * factor;
        },
        caps);
}

}  // namespace pred::testing
