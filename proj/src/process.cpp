#include "pred/process.hpp"

#include <algorithm>
#include <set>

#include "pred/errors.hpp"

namespace pred {

std::optional<std::pair<BitStr, BitStr>> check_monotone(
    const std::vector<ProcessPair>& pairs) {
    std::map<BitStr, BitStr> table(pairs.begin(), pairs.end());
    for (const auto& [x, fx] : table) {
        for (std::size_t len = 0; len < x.size(); ++len) {
            auto it = table.find(x.prefix(len));
            if (it != table.end() && !it->second.is_prefix_of(fx))
                return std::pair{it->first, x};
        }
    }
    return std::nullopt;
}

MonotoneProcess MonotoneProcess::from_pairs(std::vector<ProcessPair> pairs) {
    MonotoneProcess f;
    for (auto& [x, fx] : pairs) {
        if (!f.table_.emplace(x, fx).second)
            throw PreconditionError("duplicate process input " + x.str());
    }
    if (auto bad = check_monotone(pairs))
        throw PreconditionError("process is not monotone: f(" + bad->first.str() +
                                ") is no prefix of f(" + bad->second.str() + ")");
    f.pairs_ = std::move(pairs);
    return f;
}

MonotoneProcess& MonotoneProcess::with_enumerator(EnumeratorFactory make) {
    make_ = std::move(make);
    return *this;
}

MonotoneProcess& MonotoneProcess::declare_endless(bool endless) {
    endless_declared_ = endless;
    return *this;
}

std::optional<BitStr> MonotoneProcess::apply(const BitStr& x) const {
    auto it = table_.find(x);
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

MonotoneProcess MonotoneProcess::snapshot(std::uint64_t extra_pairs) const {
    if (!make_ || extra_pairs == 0) {
        MonotoneProcess copy;
        copy.pairs_ = pairs_;
        copy.table_ = table_;
        copy.endless_declared_ = endless_declared_;
        return copy;
    }
    std::vector<ProcessPair> all = pairs_;
    auto en = make_();
    for (std::uint64_t i = 0; i < extra_pairs; ++i) {
        auto pair = en->next();
        if (!pair) break;
        all.push_back(*pair);
    }
    MonotoneProcess out = from_pairs(std::move(all));  // cumulative validation
    out.endless_declared_ = endless_declared_;
    return out;
}

EncodingSet encodings(const MonotoneProcess& f, const BitStr& y, std::uint64_t budget) {
    MonotoneProcess snap = f.snapshot(budget);
    std::set<BitStr> members;
    for (const auto& [x, fx] : snap.pairs()) {
        if (!y.is_prefix_of(fx)) continue;
        bool minimal = true;
        for (std::size_t len = 0; len < x.size() && minimal; ++len) {
            auto anc = snap.apply(x.prefix(len));
            if (anc && y.is_prefix_of(*anc)) minimal = false;
        }
        if (minimal) members.insert(x);
    }
    return EncodingSet{y, PrefixFreeSet::from(std::move(members))};
}

Ratio solomonoff_eval(const MonotoneProcess& f, const BitStr& y, std::uint64_t budget) {
    return encodings(f, y, budget).members.sigma();
}

// ---- interval-allocation builder ----

namespace {

// Free dyadic input intervals per output node, with the conventions:
//  - an extent is a cylinder wholly available for the node's children;
//  - extents are kept in lexicographic (= positional) order;
//  - assigning an interval that is itself in the domain splits it into
//    its two halves, since a fresh pair must properly extend the old.
class ProcessBuilder {
public:
    ProcessBuilder() { root_free_.insert(BitStr::empty()); }

    static Ratio width(const BitStr& c) {
        return Ratio::pow2(-static_cast<long>(c.size()));
    }

    std::set<BitStr>& free_for(const BitStr& y) {
        return y.is_empty() ? root_free_ : free_[y.parent()];
    }

    // Raise y's mass by delta, consuming free intervals leftmost-first
    // and carving the last one left-aligned.
    void allocate_leftmost(const BitStr& y, const Ratio& delta) {
        std::set<BitStr>& F = free_for(y);
        Ratio rem = delta;
        while (!rem.is_zero()) {
            if (F.empty())
                throw PreconditionError("allocation infeasible at " + y.str() +
                                        ": free mass exhausted");
            BitStr c = *F.begin();
            F.erase(F.begin());
            if (width(c) <= rem) {
                assign(c, y);
                rem -= width(c);
            } else {
                carve(F, c, rem, y);
                rem = Ratio(0);
            }
        }
    }

    // Raise y's mass by delta, one aligned interval per binary digit,
    // best-fit: the smallest adequate extent, splitting from its left
    // edge. Distinct extent widths make this always feasible for
    // distribution increments.
    void allocate_aligned(const BitStr& y, const Dyadic& delta) {
        for (unsigned long i : delta.set_digits()) {
            std::set<BitStr>& F = free_for(y);
            const BitStr* pick = nullptr;
            for (const BitStr& c : F) {
                if (c.size() > i) continue;  // too narrow
                if (!pick || c.size() > pick->size()) pick = &c;
            }
            if (!pick)
                throw PreconditionError("aligned allocation infeasible at " + y.str());
            BitStr c = *pick;
            F.erase(c);
            while (c.size() < i) {
                F.insert(c.child(1));
                c = c.child(0);
            }
            assign(c, y);
        }
    }

    std::vector<ProcessPair> take_pairs() { return std::move(pairs_); }

private:
    // Dedicate interval x to output y: it becomes one free extent for
    // y's children, and the virgin parts of its subtree are mapped to
    // y. Domain strings inside a free extent always form a split chain
    // downward from its top, so a fresh pair never acquires domain
    // elements below itself.
    void assign(const BitStr& x, const BitStr& y) {
        emit_covering(x, y);
        free_[y].insert(x);
    }

    void emit_covering(const BitStr& x, const BitStr& y) {
        if (domain_.count(x)) {
            emit_covering(x.child(0), y);
            emit_covering(x.child(1), y);
        } else {
            pairs_.emplace_back(x, y);
            domain_.insert(x);
        }
    }

    // Consume exactly rem (0 < rem < width(c)) from the left edge of c,
    // returning the unused right parts to the free list.
    void carve(std::set<BitStr>& F, BitStr c, Ratio rem, const BitStr& y) {
        while (true) {
            if (rem == width(c)) {
                assign(c, y);
                return;
            }
            BitStr left = c.child(0), right = c.child(1);
            Ratio half = width(left);
            if (rem >= half) {
                assign(left, y);
                rem -= half;
                if (rem.is_zero()) {
                    F.insert(right);
                    return;
                }
                c = right;
            } else {
                F.insert(right);
                c = left;
            }
        }
    }

    std::vector<ProcessPair> pairs_;
    std::set<BitStr> domain_;
    std::map<BitStr, std::set<BitStr>> free_;  // output node -> extents for children
    std::set<BitStr> root_free_;
};

// Adds (x, longest common prefix of f(x0), f(x1)) whenever both
// children are in the domain and x is not; bottom-up to a fixpoint.
// These pairs change no Solomonoff probability.
std::vector<ProcessPair> apply_prefix_closure(std::vector<ProcessPair> pairs) {
    std::map<BitStr, BitStr> table(pairs.begin(), pairs.end());
    std::size_t max_len = 0;
    for (const auto& [x, fx] : table) max_len = std::max(max_len, x.size());
    for (std::size_t len = max_len; len-- > 0;) {
        std::vector<std::pair<BitStr, BitStr>> additions;
        for (const auto& [x, fx] : table) {
            if (x.size() != len + 1 || x.last() != 0) continue;
            BitStr parent = x.parent();
            if (table.count(parent)) continue;
            auto sibling = table.find(parent.child(1));
            if (sibling == table.end()) continue;
            const BitStr& a = fx;
            const BitStr& b = sibling->second;
            std::size_t agree = 0;
            while (agree < a.size() && agree < b.size() && a.bit(agree) == b.bit(agree))
                ++agree;
            additions.emplace_back(parent, a.prefix(agree));
        }
        for (auto& [x, fx] : additions) {
            table.emplace(x, fx);
            pairs.emplace_back(x, fx);
        }
    }
    return pairs;
}

void validate_staged_box(const StagedPredictor& h, Stage stages, std::size_t depth) {
    for (Stage n = 0; n <= stages; ++n) {
        for (std::size_t len = 0; len <= depth; ++len) {
            for (const BitStr& y : all_strings_of_length(len)) {
                Ratio v = h.at(y, n);
                if (!v.is_dyadic())
                    throw PreconditionError("staged value at " + y.str() + ", stage " +
                                            std::to_string(n) + " is not dyadic: " +
                                            v.str());
                if (v > Ratio(1))
                    throw PreconditionError("staged value above 1 at " + y.str());
                if (n > 0 && h.at(y, n - 1) > v)
                    throw PreconditionError("staged values decrease at " + y.str());
                if (len < depth && h.at(y.child(0), n) + h.at(y.child(1), n) > v)
                    throw PreconditionError("staged subadditivity fails at " + y.str() +
                                            ", stage " + std::to_string(n));
            }
        }
    }
}

}  // namespace

MonotoneProcess predictor_to_process(const StagedPredictor& h, Stage stages,
                                     std::size_t depth, bool prefix_closure) {
    if (!h.caps().dyadic_valued)
        throw PreconditionError("process construction needs a dyadic-valued predictor");
    validate_staged_box(h, stages, depth);
    ProcessBuilder builder;
    std::map<BitStr, Ratio> mass;
    for (Stage n = 0; n <= stages; ++n) {
        std::size_t reach = std::min<std::size_t>(n, depth);
        for (std::size_t len = 0; len <= reach; ++len) {
            for (const BitStr& y : all_strings_of_length(len)) {
                Ratio target = h.at(y, n);
                Ratio& cur = mass[y];
                if (cur == target) continue;
                builder.allocate_leftmost(y, target - cur);
                cur = target;
            }
        }
    }
    auto pairs = builder.take_pairs();
    if (prefix_closure) pairs = apply_prefix_closure(std::move(pairs));
    return MonotoneProcess::from_pairs(std::move(pairs));
}

namespace {

void require_dyadic_distribution(const StagedPredictor& p, std::size_t depth) {
    const auto& caps = p.caps();
    if (!caps.additive || !caps.unit_root || !caps.exact)
        throw PreconditionError(
            "process construction needs an exact additive unit-root distribution");
    if (!caps.dyadic_valued)
        throw PreconditionError(
            "process construction needs a dyadic-valued distribution");
    for (std::size_t len = 0; len <= depth; ++len)
        for (const BitStr& y : all_strings_of_length(len))
            if (!p.limit(y).is_dyadic())
                throw PreconditionError("distribution value at " + y.str() +
                                        " is not dyadic: " + p.limit(y).str());
}

template <typename Alloc>
MonotoneProcess build_by_level(const StagedPredictor& p, std::size_t depth,
                               bool prefix_closure, Alloc allocate) {
    ProcessBuilder builder;
    for (std::size_t len = 0; len <= depth; ++len) {
        for (const BitStr& y : all_strings_of_length(len)) {
            Ratio target = p.limit(y);
            if (target.is_zero()) continue;
            allocate(builder, y, target);
        }
    }
    auto pairs = builder.take_pairs();
    if (prefix_closure) pairs = apply_prefix_closure(std::move(pairs));
    return MonotoneProcess::from_pairs(std::move(pairs)).declare_endless();
}

}  // namespace

MonotoneProcess distribution_to_endless_process(const StagedPredictor& p,
                                                std::size_t depth, bool prefix_closure) {
    require_dyadic_distribution(p, depth);
    return build_by_level(p, depth, prefix_closure,
                          [](ProcessBuilder& b, const BitStr& y, const Ratio& v) {
                              b.allocate_leftmost(y, v);
                          });
}

MonotoneProcess digit_aligned_process(const StagedPredictor& p, std::size_t depth,
                                      bool prefix_closure) {
    require_dyadic_distribution(p, depth);
    return build_by_level(p, depth, prefix_closure,
                          [](ProcessBuilder& b, const BitStr& y, const Ratio& v) {
                              b.allocate_aligned(y, Dyadic::from_ratio(v));
                          });
}

namespace {

// Mass that each output of the given length receives from the pair
// list: one pass, using the fact that under monotonicity an ancestor
// maps into the same level-len cylinder exactly when its output has
// length >= len.
std::map<BitStr, Ratio> level_masses(const std::vector<ProcessPair>& pairs,
                                     const std::map<BitStr, BitStr>& domain,
                                     std::size_t len) {
    std::map<BitStr, Ratio> masses;
    for (const auto& [x, fx] : pairs) {
        if (fx.size() < len) continue;
        bool minimal = true;
        for (std::size_t l = 0; l < x.size() && minimal; ++l) {
            auto it = domain.find(x.prefix(l));
            if (it != domain.end() && it->second.size() >= len) minimal = false;
        }
        if (minimal)
            masses[fx.prefix(len)] += Ratio::pow2(-static_cast<long>(x.size()));
    }
    return masses;
}

}  // namespace

Dyadic endless_process_to_distribution(const MonotoneProcess& f, const BitStr& y,
                                       std::uint64_t budget_cap) {
    if (!f.endless_declared())
        throw PreconditionError("process inversion needs an endless-declared process");
    std::vector<ProcessPair> consumed;
    std::map<BitStr, BitStr> domain;
    std::size_t table_pos = 0;
    std::unique_ptr<ProcessEnumerator> en;
    bool exhausted = false;
    std::uint64_t used = 0;
    auto consume_one = [&]() -> bool {
        std::optional<ProcessPair> next;
        bool pre_validated = table_pos < f.pairs().size();
        if (pre_validated) {
            next = f.pairs()[table_pos++];
        } else if (f.has_enumerator()) {
            if (!en) en = f.make_enumerator();
            next = en->next();
        }
        if (!next) {
            exhausted = true;
            return false;
        }
        const auto& [x, fx] = *next;
        if (!domain.emplace(x, fx).second)
            throw PreconditionError("duplicate process input " + x.str());
        if (!pre_validated) {  // the table was validated at construction
            for (std::size_t l = 0; l < x.size(); ++l) {
                auto it = domain.find(x.prefix(l));
                if (it != domain.end() && !it->second.is_prefix_of(fx))
                    throw PreconditionError("process is not monotone at " + x.str());
            }
            for (const auto& [deep, fdeep] : domain)
                if (x.is_proper_prefix_of(deep) && !fx.is_prefix_of(fdeep))
                    throw PreconditionError("process is not monotone at " + deep.str());
        }
        consumed.push_back(*next);
        return true;
    };
    while (true) {
        auto masses = level_masses(consumed, domain, y.size());
        Ratio total;
        for (const auto& [t, m] : masses) total += m;
        if (total.is_one()) {
            auto it = masses.find(y);
            return Dyadic::from_ratio(it == masses.end() ? Ratio(0) : it->second);
        }
        if (used >= budget_cap)
            throw BudgetError("process inversion at " + y.str() +
                              " did not reach level mass 1 within the budget");
        if (exhausted)
            throw PreconditionError("process inversion at " + y.str() +
                                    ": the process is finite and its level mass is " +
                                    total.str() + " < 1, so it is not endless");
        // the finite table arrives in one batch, enumerated pairs one at
        // a time, so finite inversions evaluate the masses only twice
        if (table_pos < f.pairs().size()) {
            while (table_pos < f.pairs().size() && used < budget_cap) {
                consume_one();
                ++used;
            }
        } else if (consume_one()) {
            ++used;
        }
    }
}

bool is_reduced_encoding(const MonotoneProcess& f, const BitStr& x, const BitStr& y,
                         std::size_t search_depth) {
    std::function<bool(const BitStr&, std::size_t)> covered =
        [&](const BitStr& t, std::size_t remaining) -> bool {
        auto ft = f.apply(t);
        if (ft) {
            if (y.is_prefix_of(*ft)) return true;
            // outputs below only extend f(t); they can reach y only if
            // f(t) is still a proper prefix of y
            if (!ft->is_proper_prefix_of(y)) return false;
        }
        if (remaining == 0) return false;
        return covered(t.child(0), remaining - 1) && covered(t.child(1), remaining - 1);
    };
    if (!covered(x, search_depth)) return false;
    for (std::size_t len = 0; len < x.size(); ++len)
        if (covered(x.prefix(len), search_depth)) return false;
    return true;
}

}  // namespace pred
