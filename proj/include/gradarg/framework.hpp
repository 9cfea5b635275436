#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gradarg/error.hpp"
#include "gradarg/rational.hpp"

namespace gradarg {

/// Directed attack (source, target). Self-attacks are legal.
using Attack = std::pair<std::string, std::string>;

enum class Semantics { HC, MB, CB };

inline const char* to_string(Semantics sem) {
    switch (sem) {
        case Semantics::HC: return "hc";
        case Semantics::MB: return "mb";
        case Semantics::CB: return "cb";
    }
    return "?";
}

inline std::optional<Semantics> parse_semantics(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "hc") return Semantics::HC;
    if (lower == "mb") return Semantics::MB;
    if (lower == "cb") return Semantics::CB;
    return std::nullopt;
}

inline bool valid_arg_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name)
        if (c == '#' || std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

inline void normalize_attacks(std::vector<Attack>& attacks) {
    std::sort(attacks.begin(), attacks.end());
    attacks.erase(std::unique(attacks.begin(), attacks.end()), attacks.end());
}

/// A weighted argumentation framework: arguments in declaration order,
/// weights[i] belonging to args[i], and a lexicographically sorted attack set.
/// The struct itself admits invalid states (dangling attacks, out-of-range
/// weights); validate() reports them.
struct WeightedFramework {
    std::vector<std::string> args;
    std::vector<Rational> weights;
    std::vector<Attack> attacks;

    bool operator==(const WeightedFramework&) const = default;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

inline std::unordered_map<std::string, std::size_t> arg_index(const WeightedFramework& f) {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(f.args.size());
    for (std::size_t i = 0; i < f.args.size(); ++i) index.emplace(f.args[i], i);
    return index;
}

inline ValidationReport validate(const WeightedFramework& f) {
    ValidationReport report;
    if (f.weights.size() != f.args.size()) {
        report.violations.push_back("weight table size does not match argument count");
        return report;
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        const std::string& name = f.args[i];
        if (!valid_arg_name(name))
            report.violations.push_back("invalid argument name '" + name + "'");
        if (!seen.insert(name).second)
            report.violations.push_back("duplicate argument name '" + name + "'");
        if (!in_unit_interval(f.weights[i]))
            report.violations.push_back("weight of '" + name + "' out of [0,1]: " +
                                        to_string(f.weights[i]));
    }
    std::set<Attack> seen_attacks;
    for (const auto& attack : f.attacks) {
        const auto& [src, dst] = attack;
        if (!seen.count(src))
            report.violations.push_back("attack (" + src + "," + dst + "): unknown source");
        if (!seen.count(dst))
            report.violations.push_back("attack (" + src + "," + dst + "): unknown target");
        if (!seen_attacks.insert(attack).second)
            report.violations.push_back("duplicate attack (" + src + "," + dst + ")");
    }
    return report;
}

namespace detail {

inline std::size_t index_of_or_throw(const WeightedFramework& f, std::string_view name) {
    for (std::size_t i = 0; i < f.args.size(); ++i)
        if (f.args[i] == name) return i;
    throw Error("unknown argument '" + std::string(name) + "'");
}

}  // namespace detail

/// Att(a): all attackers of `arg`, sorted by name.
inline std::vector<std::string> attackers(const WeightedFramework& f, std::string_view arg) {
    detail::index_of_or_throw(f, arg);
    std::vector<std::string> result;
    for (const auto& [src, dst] : f.attacks)
        if (dst == arg) result.push_back(src);
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

/// Att*(a): attackers with strictly positive initial weight.
inline std::vector<std::string> positive_attackers(const WeightedFramework& f,
                                                   std::string_view arg) {
    auto index = arg_index(f);
    std::vector<std::string> result;
    for (const std::string& src : attackers(f, arg)) {
        auto it = index.find(src);
        if (it != index.end() && f.weights[it->second] > 0) result.push_back(src);
    }
    return result;
}

/// Total map argument -> final acceptability degree, paired vectors.
struct DegreeAssignment {
    std::vector<std::string> args;
    std::vector<Rational> values;

    bool operator==(const DegreeAssignment&) const = default;

    std::optional<Rational> value_of(std::string_view name) const {
        for (std::size_t i = 0; i < args.size(); ++i)
            if (args[i] == name) return values[i];
        return std::nullopt;
    }
};

/// Values of `s` reordered to match f.args; the domains must coincide.
inline std::vector<Rational> aligned_values(const WeightedFramework& f,
                                            const DegreeAssignment& s) {
    if (s.args.size() != s.values.size()) throw Error("degree assignment tables out of sync");
    if (s.args.size() != f.args.size())
        throw Error("degree assignment domain differs from the framework's arguments");
    std::unordered_map<std::string, const Rational*> map;
    map.reserve(s.args.size());
    for (std::size_t i = 0; i < s.args.size(); ++i)
        if (!map.emplace(s.args[i], &s.values[i]).second)
            throw Error("duplicate degree entry for '" + s.args[i] + "'");
    std::vector<Rational> out;
    out.reserve(f.args.size());
    for (const std::string& name : f.args) {
        auto it = map.find(name);
        if (it == map.end()) throw Error("no degree given for argument '" + name + "'");
        out.push_back(*it->second);
    }
    return out;
}

/// Input to the inverse problem: arguments with initial weights and the
/// desired final degrees, under one semantics. No attack relation.
struct InferenceInstance {
    std::vector<std::string> args;
    std::vector<Rational> weights;
    std::vector<Rational> targets;
    Semantics semantics = Semantics::HC;
};

inline InferenceInstance make_instance(const WeightedFramework& f, const DegreeAssignment& s,
                                       Semantics sem) {
    auto report = validate(f);
    if (!report.ok()) throw Error("invalid framework: " + report.violations.front());
    InferenceInstance inst{f.args, f.weights, aligned_values(f, s), sem};
    for (std::size_t i = 0; i < inst.targets.size(); ++i)
        if (!in_unit_interval(inst.targets[i]))
            throw Error("target degree of '" + inst.args[i] + "' out of [0,1]: " +
                        to_string(inst.targets[i]));
    return inst;
}

}  // namespace gradarg
