#pragma once

// Constructive reductions used for NP-hardness, as instance generators with
// the reverse solution mappings.
//
// SSP -> HC: n+1 arguments; S(a_i) = w(a_i) = 0.4 m_i / (n m*) with m* the
// item sum, w(a_0) = 1 and S(a_0) = n m* / (0.4 T + n m*). A subset summing
// to T corresponds to its arguments attacking a_0.
//
// kSSP -> CB: m* is the item maximum and u(k) = (sqrt(k^2+2k+4/k+1)-k-1)/3;
// S(a_i) = w(a_i) = u m_i / m*, w(a_0) = 1, S(a_0) = 1/(1+k+Tu/(k m*)). u is
// irrational, so the instance is built from the largest rational under-
// approximation u~ with denominator 10^precision and S(a_0) is recomputed
// from u~, keeping the instance exactly self-consistent. The proof's value
// bounds that pin k and forbid a self-attack on a_0 are re-checked per
// instance and reported in `backward_pinned`.

#include <algorithm>
#include <string>
#include <vector>

#include "gradarg/inference.hpp"

namespace gradarg {

struct HcReductionArtifacts {
    InferenceInstance instance;
    std::vector<std::string> item_args;  // item i <-> argument name
    std::string root;                    // a_0
    Rational item_sum;                   // m*
    Rational target;                     // T
};

struct CbReductionArtifacts {
    InferenceInstance instance;
    std::vector<std::string> item_args;
    std::string root;
    std::size_t attacker_count = 0;  // k
    Rational u_approx;               // u~
    Rational item_max;               // m*
    Rational target;                 // T
    bool backward_pinned = false;
};

namespace detail {

inline void check_reduction_items(const std::vector<Rational>& items, const Rational& target) {
    if (items.empty()) throw Error("reduction needs at least one item");
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i] <= 0)
            throw Error("item " + std::to_string(i) + " is not positive");
    if (target < 0) throw Error("target must be non-negative");
}

}  // namespace detail

/// Accepts T > sum(M) as well; the generated instance is then infeasible,
/// which is useful for negative testing.
inline HcReductionArtifacts ssp_to_hc(const std::vector<Rational>& items,
                                      const Rational& target) {
    detail::check_reduction_items(items, target);
    const std::size_t n = items.size();
    Rational item_sum = 0;
    for (const Rational& v : items) item_sum += v;
    const Rational nm = Rational(n) * item_sum;
    const Rational two_fifths(2, 5);

    HcReductionArtifacts art;
    art.root = "a0";
    art.item_sum = item_sum;
    art.target = target;
    art.instance.semantics = Semantics::HC;
    art.instance.args.push_back(art.root);
    art.instance.weights.push_back(1);
    art.instance.targets.push_back(nm / (two_fifths * target + nm));
    for (std::size_t i = 0; i < n; ++i) {
        const std::string name = "a" + std::to_string(i + 1);
        const Rational degree = two_fifths * items[i] / nm;
        art.item_args.push_back(name);
        art.instance.args.push_back(name);
        art.instance.weights.push_back(degree);
        art.instance.targets.push_back(degree);
    }
    return art;
}

/// Maps a verifying attack set back to the subset {(S(b) n m*)/0.4 | (b,a0)}.
inline SubsetSolution extract_ssp_solution(const HcReductionArtifacts& art,
                                           const AttackSet& d) {
    if (!solution_verifies(art.instance, d))
        throw Error("attack set does not realize the reduction instance");
    SubsetSolution out;
    Rational sum = 0;
    for (const auto& [src, dst] : d.attacks) {
        if (dst != art.root) continue;
        auto it = std::find(art.item_args.begin(), art.item_args.end(), src);
        if (it == art.item_args.end())
            throw Error("attacker '" + src + "' of the root maps to no item");
        const std::size_t index = static_cast<std::size_t>(it - art.item_args.begin());
        out.chosen.push_back(index);
        sum += art.instance.targets[index + 1];
    }
    std::sort(out.chosen.begin(), out.chosen.end());
    const std::size_t n = art.item_args.size();
    if (sum * Rational(n) * art.item_sum / Rational(2, 5) != art.target)
        throw Error("extracted subset does not sum to the target");
    return out;
}

namespace detail {

/// Largest z with z/10^p <= u(k), by exact integer bisection of
/// k (3z + (k+1) 10^p)^2 <= (k^3 + 2k^2 + k + 4) 10^(2p).
inline BigInt u_floor_scaled(std::size_t k, const BigInt& scale) {
    const BigInt kk(k);
    const BigInt radicand = kk * kk * kk + 2 * kk * kk + kk + 4;
    auto fits = [&](const BigInt& z) {
        const BigInt lhs = 3 * z + (kk + 1) * scale;
        return kk * lhs * lhs <= radicand * scale * scale;
    };
    BigInt lo = 0, hi = scale;  // u(k) < 1
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (fits(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

}  // namespace detail

inline CbReductionArtifacts kssp_to_cb(const std::vector<Rational>& items,
                                       const Rational& target, std::size_t k,
                                       unsigned precision_digits = 6) {
    detail::check_reduction_items(items, target);
    const std::size_t n = items.size();
    if (k < 1 || k > n) throw Error("cardinality k must satisfy 1 <= k <= |M|");
    if (precision_digits < 1 || precision_digits > 1000)
        throw Error("precision_digits out of range");

    const BigInt scale = pow10(precision_digits);
    const BigInt scaled = detail::u_floor_scaled(k, scale);
    if (scaled == 0)
        throw Error("precision too low to keep the u approximation positive");

    CbReductionArtifacts art;
    art.root = "a0";
    art.attacker_count = k;
    art.u_approx = Rational(scaled, scale);
    art.item_max = *std::max_element(items.begin(), items.end());
    art.target = target;
    art.instance.semantics = Semantics::CB;
    art.instance.args.push_back(art.root);
    art.instance.weights.push_back(1);
    const Rational root_degree =
        Rational(1) / (1 + Rational(k) + target * art.u_approx / (Rational(k) * art.item_max));
    art.instance.targets.push_back(root_degree);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string name = "a" + std::to_string(i + 1);
        const Rational degree = art.u_approx * items[i] / art.item_max;
        art.item_args.push_back(name);
        art.instance.args.push_back(name);
        art.instance.weights.push_back(degree);
        art.instance.targets.push_back(degree);
    }

    // Proof bounds: S(a0) in [1/(k+2), 1/(k+1)) pins the attacker count to k,
    // and the self-attack fixed point must stay below S(a0).
    const BigInt kk(k);
    const Rational self_attack_bound_sq = (2 * root_degree + Rational(kk * kk + kk));
    const BigInt radicand = kk * kk * kk + 2 * kk * kk + kk + 4;
    const bool no_self_attack =
        Rational(kk * radicand) < self_attack_bound_sq * self_attack_bound_sq;
    art.backward_pinned = target > 0 &&
                          target * art.u_approx <= Rational(k) * art.item_max &&
                          no_self_attack;
    return art;
}

inline SubsetSolution extract_kssp_solution(const CbReductionArtifacts& art,
                                            const AttackSet& d) {
    if (!solution_verifies(art.instance, d))
        throw Error("attack set does not realize the reduction instance");
    SubsetSolution out;
    Rational sum = 0;
    for (const auto& [src, dst] : d.attacks) {
        if (dst != art.root) continue;
        auto it = std::find(art.item_args.begin(), art.item_args.end(), src);
        if (it == art.item_args.end())
            throw Error("attacker '" + src + "' of the root maps to no item");
        const std::size_t index = static_cast<std::size_t>(it - art.item_args.begin());
        out.chosen.push_back(index);
        sum += art.instance.targets[index + 1];
    }
    std::sort(out.chosen.begin(), out.chosen.end());
    if (out.chosen.size() != art.attacker_count)
        throw Error("extracted subset has " + std::to_string(out.chosen.size()) +
                    " items, expected " + std::to_string(art.attacker_count));
    if (sum * art.item_max / art.u_approx != art.target)
        throw Error("extracted subset does not sum to the target");
    return out;
}

}  // namespace gradarg
