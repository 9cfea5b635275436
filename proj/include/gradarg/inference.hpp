#pragma once

// The inverse problem: given arguments, initial weights, and desired final
// degrees, decide whether an attack relation realizes them and construct one.
//
//   MB: linear scan against the lookup set L = {1 + S(b)}.
//   HC: per argument, one subset-sum over M = {S(b) > 0} with target
//       (w(a) - S(a)) / S(a).
//   CB: per argument, cardinality-constrained subset-sum; k is bracketed by
//       [(w - 2S)/S, (w - S)/S] and the target for a candidate k is
//       -k(Sk + S - w)/S.
//
// Every returned attack set satisfies the exact certificate check. An
// assignment satisfying all per-argument equations is treated as the
// semantics' output; that is also what the brute-force oracle tests.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gradarg/semantics.hpp"
#include "gradarg/subset_sum.hpp"

namespace gradarg {

struct AttackSet {
    std::vector<Attack> attacks;  // sorted, unique

    bool operator==(const AttackSet&) const = default;
};

struct TransformError : Error {
    using Error::Error;
};

inline WeightedFramework instance_framework(const InferenceInstance& inst, const AttackSet& d) {
    WeightedFramework f{inst.args, inst.weights, d.attacks};
    normalize_attacks(f.attacks);
    return f;
}

inline DegreeAssignment instance_targets(const InferenceInstance& inst) {
    return {inst.args, inst.targets};
}

/// Exact certificate check of d against the instance's targets.
inline bool solution_verifies(const InferenceInstance& inst, const AttackSet& d) {
    return verify(instance_framework(inst, d), inst.semantics, instance_targets(inst));
}

namespace detail {

/// A zero initial weight cannot lead to a non-zero final degree, and
/// vice-versa, under all three semantics.
inline bool zero_consistent(const InferenceInstance& inst) {
    for (std::size_t i = 0; i < inst.args.size(); ++i)
        if ((inst.weights[i] == 0) != (inst.targets[i] == 0)) return false;
    return true;
}

/// Degrees of arguments with positive target, with their owning argument.
struct PositivePool {
    std::vector<Rational> values;
    std::vector<std::size_t> owner;
};

inline PositivePool positive_pool(const InferenceInstance& inst) {
    PositivePool pool;
    for (std::size_t i = 0; i < inst.args.size(); ++i)
        if (inst.targets[i] > 0) {
            pool.values.push_back(inst.targets[i]);
            pool.owner.push_back(i);
        }
    return pool;
}

inline void require_semantics(const InferenceInstance& inst, Semantics expected,
                              const char* op) {
    if (inst.semantics != expected)
        throw Error(std::string(op) + " expects a " +
                    std::string(gradarg::to_string(expected)) + " instance");
}

}  // namespace detail

/// O(n) decision for the max-based semantics.
inline bool decide_mb(const InferenceInstance& inst) {
    detail::require_semantics(inst, Semantics::MB, "decide_mb");
    std::unordered_set<Rational, RationalHash> lookup;
    lookup.reserve(inst.args.size() * 2);
    for (const Rational& t : inst.targets) lookup.insert(1 + t);
    for (std::size_t i = 0; i < inst.args.size(); ++i) {
        const Rational& w = inst.weights[i];
        const Rational& s = inst.targets[i];
        if ((w == 0) != (s == 0)) return false;
        if (s != 0 && s != w && !lookup.count(w / s)) return false;
    }
    return true;
}

/// Minimal MB witness: one attack per argument that needs one, the attacker
/// being the first declared argument with the matching degree.
inline std::optional<AttackSet> solve_mb(const InferenceInstance& inst) {
    detail::require_semantics(inst, Semantics::MB, "solve_mb");
    std::unordered_map<Rational, std::size_t, RationalHash> first_with_degree;
    first_with_degree.reserve(inst.args.size() * 2);
    for (std::size_t b = 0; b < inst.args.size(); ++b)
        first_with_degree.emplace(inst.targets[b], b);
    AttackSet out;
    for (std::size_t i = 0; i < inst.args.size(); ++i) {
        const Rational& w = inst.weights[i];
        const Rational& s = inst.targets[i];
        if ((w == 0) != (s == 0)) return std::nullopt;
        if (s == 0 || s == w) continue;
        auto it = first_with_degree.find(w / s - 1);
        if (it == first_with_degree.end()) return std::nullopt;
        out.attacks.emplace_back(inst.args[it->second], inst.args[i]);
    }
    normalize_attacks(out.attacks);
    return out;
}

/// Required attacker-degree sum (w - S)/S for an HC argument; nullopt when
/// S > w (degrees cannot exceed initial weights).
inline std::optional<Rational> hc_target(const Rational& weight, const Rational& degree) {
    if (degree == 0) throw Error("hc_target is undefined for degree 0");
    if (degree > weight) return std::nullopt;
    return (weight - degree) / degree;
}

inline std::optional<AttackSet> solve_hc(const InferenceInstance& inst,
                                         const SolveOptions& opts = {}) {
    detail::require_semantics(inst, Semantics::HC, "solve_hc");
    if (!detail::zero_consistent(inst)) return std::nullopt;
    const auto pool = detail::positive_pool(inst);
    AttackSet out;
    for (std::size_t i = 0; i < inst.args.size(); ++i) {
        const Rational& w = inst.weights[i];
        const Rational& s = inst.targets[i];
        if (w == 0 || w == s) continue;
        auto target = hc_target(w, s);
        if (!target) return std::nullopt;
        auto solution = solve_subset_sum(SubsetSumInstance(pool.values, *target), opts);
        if (!solution) return std::nullopt;
        for (std::size_t idx : solution->chosen)
            out.attacks.emplace_back(inst.args[pool.owner[idx]], inst.args[i]);
    }
    normalize_attacks(out.attacks);
    return out;
}

struct CbPlan {
    std::size_t attacker_count = 0;  // k
    Rational attacker_degree_sum;    // required sum over the k attackers
};

/// Integer candidates k in the closed bracket [(w-2S)/S, (w-S)/S] with k >= 1
/// and a target in (0, k]. The bracket has width exactly 1, so it holds one
/// integer, or two when an endpoint is integral; both are returned, smaller
/// k first.
inline std::vector<CbPlan> cb_plan(const Rational& weight, const Rational& degree) {
    if (degree == 0 || weight == 0 || degree == weight)
        throw Error("cb_plan requires 0 != S(a) != w(a) != 0");
    std::vector<CbPlan> plans;
    BigInt lo = ceil_rat((weight - 2 * degree) / degree);
    const BigInt hi = floor_rat((weight - degree) / degree);
    if (lo < 1) lo = 1;
    for (BigInt k = lo; k <= hi; ++k) {
        Rational target = Rational(k) * (weight - degree * Rational(k + 1)) / degree;
        if (target > 0 && target <= Rational(k))
            plans.push_back({k.convert_to<std::size_t>(), std::move(target)});
    }
    return plans;
}

inline std::optional<AttackSet> solve_cb(const InferenceInstance& inst,
                                         const SolveOptions& opts = {}) {
    detail::require_semantics(inst, Semantics::CB, "solve_cb");
    if (!detail::zero_consistent(inst)) return std::nullopt;
    const auto pool = detail::positive_pool(inst);
    AttackSet out;
    for (std::size_t i = 0; i < inst.args.size(); ++i) {
        const Rational& w = inst.weights[i];
        const Rational& s = inst.targets[i];
        if (w == 0 || w == s) continue;
        bool solved = false;
        for (const CbPlan& plan : cb_plan(w, s)) {
            auto solution = solve_subset_sum(
                SubsetSumInstance(pool.values, plan.attacker_degree_sum, plan.attacker_count),
                opts);
            if (!solution) continue;
            for (std::size_t idx : solution->chosen)
                out.attacks.emplace_back(inst.args[pool.owner[idx]], inst.args[i]);
            solved = true;
            break;
        }
        if (!solved) return std::nullopt;
    }
    normalize_attacks(out.attacks);
    return out;
}

inline std::optional<AttackSet> solve_instance(const InferenceInstance& inst,
                                               const SolveOptions& opts = {}) {
    switch (inst.semantics) {
        case Semantics::MB: return solve_mb(inst);
        case Semantics::HC: return solve_hc(inst, opts);
        case Semantics::CB: return solve_cb(inst, opts);
    }
    return std::nullopt;
}

inline bool decide_instance(const InferenceInstance& inst) {
    if (inst.semantics == Semantics::MB) return decide_mb(inst);
    return solve_instance(inst).has_value();
}

namespace detail {

inline void require_realizes(const WeightedFramework& f, Semantics sem,
                             const DegreeAssignment& s, const char* op) {
    if (!verify(f, sem, s))
        throw TransformError(std::string(op) +
                             ": the framework does not realize the degrees exactly");
}

inline std::string attack_text(const Attack& a) {
    return "(" + a.first + "," + a.second + ")";
}

}  // namespace detail

/// MB expansion: adds attacks that are dominated by an existing attacker of
/// the same target, or that land on a zero-weight argument. Degrees are
/// preserved exactly.
inline WeightedFramework expand_mb(const WeightedFramework& f, const DegreeAssignment& s,
                                   const AttackSet& additions) {
    detail::require_realizes(f, Semantics::MB, s, "expand_mb");
    auto index = arg_index(f);
    auto values = aligned_values(f, s);
    // strongest existing attacker degree per attacked argument
    std::unordered_map<std::size_t, Rational> strongest;
    for (const auto& [src, dst] : f.attacks) {
        auto [it, fresh] = strongest.try_emplace(index.at(dst), values[index.at(src)]);
        if (!fresh && values[index.at(src)] > it->second) it->second = values[index.at(src)];
    }
    for (const Attack& a : additions.attacks) {
        auto src = index.find(a.first), dst = index.find(a.second);
        if (src == index.end() || dst == index.end())
            throw TransformError("expand_mb: attack " + detail::attack_text(a) +
                                 " references an unknown argument");
        if (f.weights[dst->second] == 0) continue;
        auto existing = strongest.find(dst->second);
        if (existing == strongest.end() || values[src->second] > existing->second)
            throw TransformError("expand_mb: attack " + detail::attack_text(a) +
                                 " is not dominated by an existing attacker");
    }
    WeightedFramework out = f;
    out.attacks.insert(out.attacks.end(), additions.attacks.begin(), additions.attacks.end());
    normalize_attacks(out.attacks);
    return out;
}

/// MB contraction on a pivot attack: removes co-attacks on the pivot's target
/// that are weaker than the pivot (or anything, if the target has weight 0).
inline WeightedFramework contract_mb(const WeightedFramework& f, const DegreeAssignment& s,
                                     const Attack& pivot, const AttackSet& removals) {
    detail::require_realizes(f, Semantics::MB, s, "contract_mb");
    auto index = arg_index(f);
    auto values = aligned_values(f, s);
    if (std::find(f.attacks.begin(), f.attacks.end(), pivot) == f.attacks.end())
        throw TransformError("contract_mb: pivot " + detail::attack_text(pivot) +
                             " is not an attack of the framework");
    const std::size_t pivot_src = index.at(pivot.first);
    const std::size_t pivot_dst = index.at(pivot.second);
    for (const Attack& a : removals.attacks) {
        auto src = index.find(a.first);
        if (src == index.end() || !index.count(a.second))
            throw TransformError("contract_mb: attack " + detail::attack_text(a) +
                                 " references an unknown argument");
        if (a.second != pivot.second)
            throw TransformError("contract_mb: removal " + detail::attack_text(a) +
                                 " does not target the pivot's target");
        if (f.weights[pivot_dst] == 0) continue;
        if (a.first == pivot.first)
            throw TransformError("contract_mb: cannot remove the pivot itself");
        if (std::find(f.attacks.begin(), f.attacks.end(), a) == f.attacks.end())
            throw TransformError("contract_mb: " + detail::attack_text(a) +
                                 " is not an attack of the framework");
        if (values[src->second] > values[pivot_src])
            throw TransformError("contract_mb: removal " + detail::attack_text(a) +
                                 " is stronger than the pivot");
    }
    WeightedFramework out = f;
    auto removed = [&](const Attack& a) {
        return std::find(removals.attacks.begin(), removals.attacks.end(), a) !=
               removals.attacks.end();
    };
    out.attacks.erase(std::remove_if(out.attacks.begin(), out.attacks.end(), removed),
                      out.attacks.end());
    return out;
}

namespace detail {

inline std::vector<Attack> replace_attacks_onto(const WeightedFramework& f,
                                                const std::string& arg,
                                                const AttackSet& replacement) {
    std::vector<Attack> attacks;
    for (const Attack& a : f.attacks)
        if (a.second != arg) attacks.push_back(a);
    attacks.insert(attacks.end(), replacement.attacks.begin(), replacement.attacks.end());
    normalize_attacks(attacks);
    return attacks;
}

inline std::vector<Attack> checked_substitution_set(const WeightedFramework& f,
                                                    const std::string& arg,
                                                    const AttackSet& replacement,
                                                    const char* op) {
    auto index = arg_index(f);
    if (!index.count(arg)) throw TransformError(std::string(op) + ": unknown argument '" + arg + "'");
    std::vector<Attack> unique = replacement.attacks;
    normalize_attacks(unique);
    for (const Attack& a : unique) {
        if (!index.count(a.first))
            throw TransformError(std::string(op) + ": attack " + attack_text(a) +
                                 " references an unknown argument");
        if (a.second != arg)
            throw TransformError(std::string(op) + ": attack " + attack_text(a) +
                                 " does not target '" + arg + "'");
    }
    return unique;
}

}  // namespace detail

/// HC substitution: replaces all attacks onto `arg` by Z; admissible when the
/// attacker degrees of Z sum to (w - S)/S (no constraint if w(arg) = 0).
inline WeightedFramework substitute_hc(const WeightedFramework& f, const DegreeAssignment& s,
                                       const std::string& arg, const AttackSet& replacement) {
    detail::require_realizes(f, Semantics::HC, s, "substitute_hc");
    auto unique = detail::checked_substitution_set(f, arg, replacement, "substitute_hc");
    auto index = arg_index(f);
    auto values = aligned_values(f, s);
    const std::size_t x = index.at(arg);
    if (f.weights[x] != 0) {
        const Rational required = (f.weights[x] - values[x]) / values[x];
        Rational sum = 0;
        for (const Attack& a : unique) sum += values[index.at(a.first)];
        if (sum != required)
            throw TransformError("substitute_hc: attacker degrees sum to " + to_string(sum) +
                                 ", required " + to_string(required));
    }
    WeightedFramework out = f;
    out.attacks = detail::replace_attacks_onto(f, arg, AttackSet{unique});
    return out;
}

/// CB substitution: the positive-weight attackers of Z must number k and
/// their degrees must sum to the CB target for that k. Zero-weight sources
/// are invisible to CB and pass through unchecked.
inline WeightedFramework substitute_cb(const WeightedFramework& f, const DegreeAssignment& s,
                                       const std::string& arg, const AttackSet& replacement) {
    detail::require_realizes(f, Semantics::CB, s, "substitute_cb");
    auto unique = detail::checked_substitution_set(f, arg, replacement, "substitute_cb");
    auto index = arg_index(f);
    auto values = aligned_values(f, s);
    const std::size_t x = index.at(arg);
    if (f.weights[x] != 0) {
        std::size_t count = 0;
        Rational sum = 0;
        for (const Attack& a : unique) {
            const std::size_t src = index.at(a.first);
            if (f.weights[src] > 0) {
                ++count;
                sum += values[src];
            }
        }
        if (values[x] == f.weights[x]) {
            if (count != 0)
                throw TransformError(
                    "substitute_cb: '" + arg +
                    "' keeps its initial weight, so it admits no positive-weight attackers");
        } else {
            bool admissible = false;
            for (const CbPlan& plan : cb_plan(f.weights[x], values[x]))
                if (plan.attacker_count == count && plan.attacker_degree_sum == sum)
                    admissible = true;
            if (!admissible)
                throw TransformError("substitute_cb: " + std::to_string(count) +
                                     " attackers summing to " + to_string(sum) +
                                     " do not meet the cardinality/sum requirement");
        }
    }
    WeightedFramework out = f;
    out.attacks = detail::replace_attacks_onto(f, arg, AttackSet{unique});
    return out;
}

namespace detail {

/// Evaluates the certificate equations for one candidate attack mask.
/// Bit i*n+j of `mask` encodes the attack (args[i], args[j]).
inline bool mask_verifies(const InferenceInstance& inst, std::uint64_t mask) {
    const std::size_t n = inst.args.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Rational& w = inst.weights[j];
        const Rational& s = inst.targets[j];
        Rational rhs;
        switch (inst.semantics) {
            case Semantics::HC: {
                Rational sum = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> (i * n + j) & 1) sum += inst.targets[i];
                rhs = w / (1 + sum);
                break;
            }
            case Semantics::MB: {
                Rational strongest = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if ((mask >> (i * n + j) & 1) && inst.targets[i] > strongest)
                        strongest = inst.targets[i];
                rhs = w / (1 + strongest);
                break;
            }
            case Semantics::CB: {
                Rational sum = 0;
                std::size_t count = 0;
                for (std::size_t i = 0; i < n; ++i)
                    if ((mask >> (i * n + j) & 1) && inst.weights[i] > 0) {
                        sum += inst.targets[i];
                        ++count;
                    }
                rhs = count == 0 ? w : w / (1 + Rational(count) + sum / Rational(count));
                break;
            }
        }
        if (rhs != s) return false;
    }
    return true;
}

inline AttackSet mask_to_attacks(const InferenceInstance& inst, std::uint64_t mask) {
    const std::size_t n = inst.args.size();
    AttackSet out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (mask >> (i * n + j) & 1) out.attacks.emplace_back(inst.args[i], inst.args[j]);
    normalize_attacks(out.attacks);
    return out;
}

inline void check_bruteforce_size(const InferenceInstance& inst, std::size_t graph_limit) {
    if (graph_limit > 4) throw Error("brute force is capped at 4 arguments");
    if (inst.args.size() > graph_limit)
        throw Error("too many arguments for brute force (" +
                    std::to_string(inst.args.size()) + " > " + std::to_string(graph_limit) +
                    ")");
}

}  // namespace detail

/// Test oracle: enumerates all 2^(n^2) attack relations and accepts exactly
/// those passing the certificate check.
inline bool decide_bruteforce(const InferenceInstance& inst, std::size_t graph_limit = 3) {
    detail::check_bruteforce_size(inst, graph_limit);
    const std::size_t n = inst.args.size();
    const std::uint64_t total = std::uint64_t(1) << (n * n);
    for (std::uint64_t mask = 0; mask < total; ++mask)
        if (detail::mask_verifies(inst, mask)) return true;
    return false;
}

/// All exactly-verifying attack relations (up to `limit`), smallest mask first.
inline std::vector<AttackSet> bruteforce_solutions(const InferenceInstance& inst,
                                                   std::size_t graph_limit = 3,
                                                   std::size_t limit = SIZE_MAX) {
    detail::check_bruteforce_size(inst, graph_limit);
    const std::size_t n = inst.args.size();
    const std::uint64_t total = std::uint64_t(1) << (n * n);
    std::vector<AttackSet> out;
    for (std::uint64_t mask = 0; mask < total && out.size() < limit; ++mask)
        if (detail::mask_verifies(inst, mask)) out.push_back(detail::mask_to_attacks(inst, mask));
    return out;
}

/// Distinct verified solutions assembled from per-argument attacker-set
/// choices (subset-sum enumerations, or matching-degree attackers under MB),
/// in lexicographic choice order. Degree-preserving decorations such as
/// attacks on zero-weight arguments are not enumerated.
inline std::vector<AttackSet> enumerate_solutions(const InferenceInstance& inst,
                                                  std::size_t limit) {
    std::vector<AttackSet> results;
    if (limit == 0 || !detail::zero_consistent(inst)) return results;
    const auto pool = detail::positive_pool(inst);

    std::vector<std::vector<std::vector<Attack>>> choices;  // per constrained argument
    for (std::size_t i = 0; i < inst.args.size(); ++i) {
        const Rational& w = inst.weights[i];
        const Rational& s = inst.targets[i];
        if (w == 0 || w == s) continue;
        std::vector<std::vector<Attack>> options;
        if (inst.semantics == Semantics::MB) {
            const Rational want = w / s - 1;
            for (std::size_t b = 0; b < inst.args.size(); ++b)
                if (inst.targets[b] == want)
                    options.push_back({Attack{inst.args[b], inst.args[i]}});
        } else {
            std::vector<CbPlan> plans;
            if (inst.semantics == Semantics::HC) {
                auto target = hc_target(w, s);
                if (!target) return {};
                plans.push_back({0, *target});
            } else {
                plans = cb_plan(w, s);
            }
            for (const CbPlan& plan : plans) {
                std::optional<std::size_t> k;
                if (inst.semantics == Semantics::CB) k = plan.attacker_count;
                for (const SubsetSolution& sol : enumerate_subset_sums(
                         SubsetSumInstance(pool.values, plan.attacker_degree_sum, k), limit)) {
                    std::vector<Attack> attacks;
                    for (std::size_t idx : sol.chosen)
                        attacks.emplace_back(inst.args[pool.owner[idx]], inst.args[i]);
                    options.push_back(std::move(attacks));
                }
            }
        }
        if (options.empty()) return {};
        choices.push_back(std::move(options));
    }

    std::vector<std::size_t> pick(choices.size(), 0);
    while (results.size() < limit) {
        AttackSet candidate;
        for (std::size_t c = 0; c < choices.size(); ++c)
            candidate.attacks.insert(candidate.attacks.end(), choices[c][pick[c]].begin(),
                                     choices[c][pick[c]].end());
        normalize_attacks(candidate.attacks);
        results.push_back(std::move(candidate));
        // odometer over the per-argument choices, last digit fastest
        std::size_t c = choices.size();
        while (c > 0) {
            --c;
            if (++pick[c] < choices[c].size()) break;
            pick[c] = 0;
            if (c == 0) return results;
        }
        if (choices.empty()) break;
    }
    return results;
}

}  // namespace gradarg
