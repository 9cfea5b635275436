#pragma once

// Seeded generators for random frameworks and guaranteed-solvable inference
// instances. All randomness comes from the explicit seed; identical configs
// produce identical output.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gradarg/inference.hpp"

namespace gradarg {

struct GenConfig {
    std::size_t n = 4;
    Rational attack_probability = Rational(1, 4);
    bool acyclic = false;
    std::uint64_t weight_denominator = 1000;
    std::uint64_t seed = 0;
};

/// Weights uniform over {0, 1/d, ..., d/d}; each ordered pair becomes an
/// attack independently with the configured probability. Acyclic mode draws a
/// random permutation and keeps only forward edges under it (no self-attacks).
inline WeightedFramework random_waf(const GenConfig& cfg) {
    if (cfg.n == 0) throw Error("generator needs n >= 1");
    if (!in_unit_interval(cfg.attack_probability))
        throw Error("attack probability must lie in [0,1]");
    if (cfg.weight_denominator == 0 || cfg.weight_denominator > (std::uint64_t(1) << 62))
        throw Error("weight denominator out of range");

    std::mt19937_64 rng(cfg.seed);
    WeightedFramework f;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        f.args.push_back("a" + std::to_string(i));
        f.weights.emplace_back(rng() % (cfg.weight_denominator + 1), cfg.weight_denominator);
    }

    std::vector<std::size_t> rank(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) rank[i] = i;
    if (cfg.acyclic)
        for (std::size_t i = cfg.n; i > 1; --i)
            std::swap(rank[i - 1], rank[rng() % i]);

    const BigInt threshold =
        (num(cfg.attack_probability) << 64) / den(cfg.attack_probability);
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.n; ++j) {
            if (cfg.acyclic && (i == j || rank[i] >= rank[j])) continue;
            if (BigInt(rng()) < threshold) f.attacks.emplace_back(f.args[i], f.args[j]);
        }
    normalize_attacks(f.attacks);
    return f;
}

struct ForwardInstance {
    InferenceInstance instance;
    AttackSet witness;  // the generating attacks; realizes the targets exactly
};

/// Generates a framework, computes its exact degrees, and poses the inverse
/// problem with the generating attack set as witness. Exact degrees require
/// acyclic generation for all three semantics.
inline ForwardInstance forward_instance(const GenConfig& cfg, Semantics sem) {
    if (!cfg.acyclic)
        throw Error("forward instances need cfg.acyclic (cyclic fixed points are inexact)");
    auto f = random_waf(cfg);
    auto degrees = compute_degrees_exact_acyclic(f, sem);
    return {InferenceInstance{f.args, f.weights, degrees.values, sem}, AttackSet{f.attacks}};
}

}  // namespace gradarg
