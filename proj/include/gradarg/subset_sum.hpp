#pragma once

// Exact subset-sum over positive rationals, with an optional cardinality
// constraint. The default solver is a depth-first search over items sorted
// by descending value, pruned by running-sum and suffix-sum bounds; rational
// arithmetic avoids the huge integers a common-denominator scaling would
// produce. A scaled-integer DP backend exists for small-denominator
// instances but is off by default.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gradarg/rational.hpp"

namespace gradarg {

/// Items keep their identity by index even when values repeat. All items are
/// strictly positive; the constructor rejects anything else.
class SubsetSumInstance {
public:
    SubsetSumInstance(std::vector<Rational> items, Rational target,
                      std::optional<std::size_t> cardinality = std::nullopt)
        : items_(std::move(items)), target_(std::move(target)), cardinality_(cardinality) {
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (items_[i] <= 0)
                throw std::invalid_argument("subset-sum item " + std::to_string(i) +
                                            " is not positive");
    }

    const std::vector<Rational>& items() const { return items_; }
    const Rational& target() const { return target_; }
    std::optional<std::size_t> cardinality() const { return cardinality_; }

private:
    std::vector<Rational> items_;
    Rational target_;
    std::optional<std::size_t> cardinality_;
};

struct SubsetSolution {
    std::vector<std::size_t> chosen;  // ascending item indices

    bool operator==(const SubsetSolution&) const = default;
};

struct SolveOptions {
    bool use_scaled_dp = false;
    /// DP tables larger than this fall back to the search backend.
    std::size_t dp_cell_limit = std::size_t(1) << 24;
};

namespace detail {

struct SubsetSearch {
    const std::vector<Rational>& items;
    const Rational& target;
    std::optional<std::size_t> k;
    std::vector<std::size_t> order;  // positions sorted by (value desc, index asc)
    std::vector<Rational> prefix;    // prefix[p] = sum of the first p sorted values
    std::vector<std::size_t> chosen;

    explicit SubsetSearch(const SubsetSumInstance& inst)
        : items(inst.items()), target(inst.target()), k(inst.cardinality()) {
        order.resize(items.size());
        std::iota(order.begin(), order.end(), std::size_t(0));
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (items[a] != items[b]) return items[a] > items[b];
            return a < b;
        });
        prefix.resize(items.size() + 1);
        prefix[0] = 0;
        for (std::size_t p = 0; p < items.size(); ++p)
            prefix[p + 1] = prefix[p] + items[order[p]];
    }

    bool run(std::size_t pos, const Rational& sum, std::size_t count) {
        if (sum == target && (!k || count == *k)) return true;
        if (sum >= target) return false;  // positive items: overshoot is final
        const std::size_t n = order.size();
        if (pos == n) return false;
        const std::size_t remaining = n - pos;
        if (k) {
            const std::size_t slots = *k - count;
            if (slots == 0 || slots > remaining) return false;
            if (sum + (prefix[pos + slots] - prefix[pos]) < target) return false;
            if (sum + (prefix[n] - prefix[n - slots]) > target) return false;
        } else {
            if (sum + (prefix[n] - prefix[pos]) < target) return false;
        }
        chosen.push_back(order[pos]);
        if (run(pos + 1, sum + items[order[pos]], count + 1)) return true;
        chosen.pop_back();
        return run(pos + 1, sum, count);
    }
};

/// Tries the common-denominator DP. Outer nullopt: instance does not fit the
/// cell limit, caller should fall back. Inner optional: the answer.
inline std::optional<std::optional<SubsetSolution>> try_scaled_dp(const SubsetSumInstance& inst,
                                                                  const SolveOptions& opts) {
    const auto& items = inst.items();
    BigInt common = den(inst.target());
    for (const Rational& v : items) common = lcm(common, den(v));
    const BigInt target_scaled = num(inst.target()) * (common / den(inst.target()));
    const std::size_t rows = inst.cardinality() ? *inst.cardinality() + 1 : 1;
    if (target_scaled + 1 > opts.dp_cell_limit ||
        (target_scaled.convert_to<std::size_t>() + 1) * rows > opts.dp_cell_limit)
        return std::nullopt;

    const std::size_t target_int = target_scaled.convert_to<std::size_t>();
    std::vector<std::size_t> scaled(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        BigInt v = num(items[i]) * (common / den(items[i]));
        scaled[i] = v > target_scaled ? target_int + 1 : v.convert_to<std::size_t>();
    }

    constexpr std::int32_t kUnreached = -1, kStart = -2;
    const std::size_t width = target_int + 1;
    std::vector<std::int32_t> from(rows * width, kUnreached);
    from[0] = kStart;
    auto cell = [&](std::size_t c, std::size_t s) -> std::int32_t& {
        return from[c * width + s];
    };

    if (auto k = inst.cardinality()) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (scaled[i] > target_int) continue;
            for (std::size_t c = std::min(*k, i + 1); c >= 1; --c)
                for (std::size_t s = target_int; s >= scaled[i]; --s) {
                    if (cell(c, s) == kUnreached && cell(c - 1, s - scaled[i]) != kUnreached)
                        cell(c, s) = static_cast<std::int32_t>(i);
                    if (s == scaled[i]) break;
                }
        }
        if (cell(*k, target_int) == kUnreached) return {std::optional<SubsetSolution>{}};
        SubsetSolution solution;
        std::size_t s = target_int;
        for (std::size_t c = *k; c > 0; --c) {
            const std::size_t i = static_cast<std::size_t>(cell(c, s));
            solution.chosen.push_back(i);
            s -= scaled[i];
        }
        std::sort(solution.chosen.begin(), solution.chosen.end());
        return {std::optional<SubsetSolution>{std::move(solution)}};
    }

    for (std::size_t i = 0; i < items.size(); ++i) {
        if (scaled[i] > target_int) continue;
        for (std::size_t s = target_int; s >= scaled[i]; --s) {
            if (from[s] == kUnreached && from[s - scaled[i]] != kUnreached)
                from[s] = static_cast<std::int32_t>(i);
            if (s == scaled[i]) break;
        }
    }
    if (from[target_int] == kUnreached) return {std::optional<SubsetSolution>{}};
    SubsetSolution solution;
    std::size_t s = target_int;
    while (s != 0) {
        const std::size_t i = static_cast<std::size_t>(from[s]);
        solution.chosen.push_back(i);
        s -= scaled[i];
    }
    std::sort(solution.chosen.begin(), solution.chosen.end());
    return {std::optional<SubsetSolution>{std::move(solution)}};
}

}  // namespace detail

/// Some subset with exact rational sum equal to the target (and exactly the
/// requested cardinality, if any), or nullopt when none exists. The empty
/// subset answers target 0. Deterministic for identical instances.
inline std::optional<SubsetSolution> solve_subset_sum(const SubsetSumInstance& inst,
                                                      const SolveOptions& opts = {}) {
    if (inst.target() < 0) return std::nullopt;
    if (inst.cardinality() && *inst.cardinality() > inst.items().size()) return std::nullopt;
    if (opts.use_scaled_dp)
        if (auto dp = detail::try_scaled_dp(inst, opts)) return *dp;
    detail::SubsetSearch search(inst);
    if (!search.run(0, Rational(0), 0)) return std::nullopt;
    std::sort(search.chosen.begin(), search.chosen.end());
    return SubsetSolution{std::move(search.chosen)};
}

/// Up to `limit` distinct solutions, in lexicographic order of their sorted
/// index tuples (include-first search in index order yields exactly that).
inline std::vector<SubsetSolution> enumerate_subset_sums(const SubsetSumInstance& inst,
                                                         std::size_t limit) {
    std::vector<SubsetSolution> results;
    if (limit == 0 || inst.target() < 0) return results;
    const auto& items = inst.items();
    const auto k = inst.cardinality();
    if (k && *k > items.size()) return results;
    std::vector<Rational> suffix(items.size() + 1);
    for (std::size_t i = items.size(); i > 0; --i) suffix[i - 1] = suffix[i] + items[i - 1];

    std::vector<std::size_t> chosen;
    auto walk = [&](auto&& self, std::size_t pos, const Rational& sum,
                    std::size_t count) -> void {
        if (results.size() == limit) return;
        if (sum == inst.target() && (!k || count == *k)) {
            results.push_back(SubsetSolution{chosen});
            return;  // positive items: every superset overshoots
        }
        if (sum >= inst.target() || pos == items.size()) return;
        if (sum + suffix[pos] < inst.target()) return;
        if (k) {
            const std::size_t slots = *k - count;
            if (slots == 0 || slots > items.size() - pos) return;
        }
        chosen.push_back(pos);
        self(self, pos + 1, sum + items[pos], count + 1);
        chosen.pop_back();
        self(self, pos + 1, sum, count);
    };
    walk(walk, 0, Rational(0), 0);
    return results;
}

}  // namespace gradarg
