#pragma once

// Forward computation of the weighted h-categoriser (HC), max-based (MB), and
// cardinality-based (CB) semantics, plus the polynomial certificate check:
//
//   HC: S(a) = w(a) / (1 + sum_{b in Att(a)} S(b))
//   MB: S(a) = w(a) / (1 + max_{b in Att(a)} S(b))
//   CB: S(a) = w(a) / (1 + |Att*(a)| + sum_{b in Att*(a)} S(b) / |Att*(a)|)
//
// Empty attacker sets contribute 0. Att*(a) keeps only attackers with
// strictly positive initial weight.

#include <cstddef>
#include <deque>
#include <vector>

#include "gradarg/framework.hpp"

namespace gradarg {

struct IterationConfig {
    Rational tolerance = Rational(1, pow10(12));
    std::size_t max_iterations = 20000;
};

struct ComputeResult {
    DegreeAssignment degrees;
    std::size_t iterations = 0;
};

struct ConvergenceError : Error {
    ConvergenceError(Rational last_change, std::size_t iterations_)
        : Error("no convergence after " + std::to_string(iterations_) +
                " iterations; last change " + gradarg::to_string(last_change)),
          residual(std::move(last_change)),
          iterations(iterations_) {}

    Rational residual;
    std::size_t iterations;
};

struct CycleError : Error {
    using Error::Error;
};

namespace detail {

struct IndexedFramework {
    std::vector<Rational> weights;
    std::vector<std::vector<std::size_t>> attackers;           // Att
    std::vector<std::vector<std::size_t>> positive_attackers;  // Att*
};

inline IndexedFramework index_framework(const WeightedFramework& f) {
    auto report = validate(f);
    if (!report.ok()) throw Error("invalid framework: " + report.violations.front());
    IndexedFramework ix;
    ix.weights = f.weights;
    ix.attackers.resize(f.args.size());
    ix.positive_attackers.resize(f.args.size());
    auto index = arg_index(f);
    for (const auto& [src, dst] : f.attacks) {
        const std::size_t s = index.at(src), d = index.at(dst);
        ix.attackers[d].push_back(s);
        if (f.weights[s] > 0) ix.positive_attackers[d].push_back(s);
    }
    return ix;
}

/// Right-hand side of the semantics equation for argument i, evaluated on
/// the given degree vector.
inline Rational semantics_rhs(const IndexedFramework& ix, Semantics sem,
                              const std::vector<Rational>& values, std::size_t i) {
    const Rational& w = ix.weights[i];
    switch (sem) {
        case Semantics::HC: {
            Rational sum = 0;
            for (std::size_t b : ix.attackers[i]) sum += values[b];
            return w / (1 + sum);
        }
        case Semantics::MB: {
            Rational strongest = 0;
            for (std::size_t b : ix.attackers[i])
                if (values[b] > strongest) strongest = values[b];
            return w / (1 + strongest);
        }
        case Semantics::CB: {
            const auto& pos = ix.positive_attackers[i];
            if (pos.empty()) return w;
            Rational sum = 0;
            for (std::size_t b : pos) sum += values[b];
            const Rational k(pos.size());
            return w / (1 + k + sum / k);
        }
    }
    return w;
}

}  // namespace detail

/// One synchronous application of the recurrence to every argument.
inline DegreeAssignment step(const WeightedFramework& f, Semantics sem,
                             const DegreeAssignment& current) {
    auto ix = detail::index_framework(f);
    auto values = aligned_values(f, current);
    DegreeAssignment next{f.args, {}};
    next.values.reserve(f.args.size());
    for (std::size_t i = 0; i < f.args.size(); ++i)
        next.values.push_back(detail::semantics_rhs(ix, sem, values, i));
    return next;
}

// Iterates are kept exact until a denominator outgrows 10^18, then snapped to
// that grid; cyclic graphs have irrational limits, so unbounded numerators
// would otherwise stall the iteration.
inline constexpr unsigned kIterationGridDigits = 18;

/// Jacobi-style iteration from the initial weights until the largest
/// per-argument change drops below cfg.tolerance.
inline ComputeResult compute_degrees(const WeightedFramework& f, Semantics sem,
                                     const IterationConfig& cfg = {}) {
    if (cfg.tolerance <= 0) throw Error("tolerance must be positive");
    if (cfg.max_iterations == 0) throw Error("max_iterations must be at least 1");
    auto ix = detail::index_framework(f);
    const BigInt grid = pow10(kIterationGridDigits);
    const std::size_t n = f.args.size();

    std::vector<Rational> current = f.weights;
    std::vector<Rational> next(n);
    Rational change;
    for (std::size_t iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
        change = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Rational v = detail::semantics_rhs(ix, sem, current, i);
            if (den(v) > grid) v = round_to_denominator(v, grid);
            Rational delta = abs(v - current[i]);
            if (delta > change) change = delta;
            next[i] = std::move(v);
        }
        current.swap(next);
        if (change < cfg.tolerance)
            return {DegreeAssignment{f.args, std::move(current)}, iteration};
    }
    throw ConvergenceError(change, cfg.max_iterations);
}

/// Exact degrees in topological order; only defined on acyclic attack graphs,
/// where the recurrences close after finitely many steps.
inline DegreeAssignment compute_degrees_exact_acyclic(const WeightedFramework& f,
                                                      Semantics sem) {
    auto ix = detail::index_framework(f);
    const std::size_t n = f.args.size();
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> attacked_by(n);
    auto index = arg_index(f);
    for (const auto& [src, dst] : f.attacks) {
        ++pending[index.at(dst)];
        attacked_by[index.at(src)].push_back(index.at(dst));
    }
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0) ready.push_back(i);

    std::vector<Rational> values(n);
    std::size_t processed = 0;
    while (!ready.empty()) {
        const std::size_t i = ready.front();
        ready.pop_front();
        values[i] = detail::semantics_rhs(ix, sem, values, i);
        ++processed;
        for (std::size_t j : attacked_by[i])
            if (--pending[j] == 0) ready.push_back(j);
    }
    if (processed != n)
        throw CycleError("attack graph contains a cycle; use compute_degrees instead");
    return {f.args, std::move(values)};
}

/// Largest per-argument violation of the semantics equation by S.
inline Rational residual(const WeightedFramework& f, Semantics sem,
                         const DegreeAssignment& s) {
    auto ix = detail::index_framework(f);
    auto values = aligned_values(f, s);
    Rational worst = 0;
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        Rational gap = abs(values[i] - detail::semantics_rhs(ix, sem, values, i));
        if (gap > worst) worst = gap;
    }
    return worst;
}

/// Certificate check: S satisfies every per-argument equation within tol.
/// tol = 0 demands exact rational equality.
inline bool verify(const WeightedFramework& f, Semantics sem, const DegreeAssignment& s,
                   const Rational& tol = Rational(0)) {
    return residual(f, sem, s) <= tol;
}

}  // namespace gradarg
