#pragma once

// Line-oriented text formats:
//   WAF file:    `arg <name> <weight>` and `att <src> <dst>` lines
//   degree file: `deg <name> <value>` lines
// `#` starts a comment, blank lines are skipped, weights/values are decimals
// or `p/q` literals (parsed exactly). Serialization is canonical: arguments
// in declaration order, attacks sorted lexicographically, values as `p/q`.

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "gradarg/framework.hpp"

namespace gradarg {

namespace detail {

inline std::vector<std::string> tokenize_line(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

template <typename LineFn>
inline void for_each_data_line(std::string_view text, LineFn&& fn) {
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto tokens = tokenize_line(line);
        if (!tokens.empty()) fn(line_no, tokens);
        if (end == text.size()) break;
        pos = end + 1;
    }
}

}  // namespace detail

inline WeightedFramework parse_waf(std::string_view text) {
    WeightedFramework f;
    detail::for_each_data_line(text, [&](std::size_t line_no,
                                         const std::vector<std::string>& tokens) {
        if (tokens[0] == "arg") {
            if (tokens.size() != 3)
                throw ParseError(line_no, "expected 'arg <name> <weight>'");
            auto weight = parse_rational(tokens[2]);
            if (!weight) throw ParseError(line_no, "invalid weight '" + tokens[2] + "'");
            f.args.push_back(tokens[1]);
            f.weights.push_back(*weight);
        } else if (tokens[0] == "att") {
            if (tokens.size() != 3)
                throw ParseError(line_no, "expected 'att <source> <target>'");
            f.attacks.emplace_back(tokens[1], tokens[2]);
        } else {
            throw ParseError(line_no, "unknown directive '" + tokens[0] + "'");
        }
    });
    normalize_attacks(f.attacks);
    return f;
}

inline std::string serialize_waf(const WeightedFramework& f) {
    std::string out;
    for (std::size_t i = 0; i < f.args.size(); ++i)
        out += "arg " + f.args[i] + " " + to_string(f.weights[i]) + "\n";
    for (const auto& [src, dst] : f.attacks) out += "att " + src + " " + dst + "\n";
    return out;
}

inline DegreeAssignment parse_degrees(std::string_view text) {
    DegreeAssignment s;
    detail::for_each_data_line(text, [&](std::size_t line_no,
                                         const std::vector<std::string>& tokens) {
        if (tokens[0] != "deg" || tokens.size() != 3)
            throw ParseError(line_no, "expected 'deg <name> <value>'");
        auto value = parse_rational(tokens[2]);
        if (!value) throw ParseError(line_no, "invalid value '" + tokens[2] + "'");
        s.args.push_back(tokens[1]);
        s.values.push_back(*value);
    });
    return s;
}

inline std::string serialize_degrees(const DegreeAssignment& s) {
    std::string out;
    for (std::size_t i = 0; i < s.args.size(); ++i)
        out += "deg " + s.args[i] + " " + to_string(s.values[i]) + "\n";
    return out;
}

// JSON mirrors, values carried as exact "p/q" strings.

inline nlohmann::json waf_to_json(const WeightedFramework& f) {
    nlohmann::json args = nlohmann::json::array();
    for (std::size_t i = 0; i < f.args.size(); ++i)
        args.push_back({{"name", f.args[i]}, {"weight", to_string(f.weights[i])}});
    nlohmann::json attacks = nlohmann::json::array();
    for (const auto& [src, dst] : f.attacks) attacks.push_back({src, dst});
    return {{"args", args}, {"attacks", attacks}};
}

inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        auto q = parse_rational(j.get<std::string>());
        if (!q) throw Error("invalid rational literal '" + j.get<std::string>() + "'");
        return *q;
    }
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw Error("expected a rational as a \"p/q\" string");
}

inline WeightedFramework waf_from_json(const nlohmann::json& j) {
    WeightedFramework f;
    if (!j.is_object() || !j.contains("args") || !j["args"].is_array())
        throw Error("framework JSON needs an \"args\" array");
    for (const auto& entry : j["args"]) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("weight"))
            throw Error("framework JSON argument entries need \"name\" and \"weight\"");
        f.args.push_back(entry["name"].get<std::string>());
        f.weights.push_back(rational_from_json(entry["weight"]));
    }
    if (j.contains("attacks")) {
        for (const auto& pair : j["attacks"]) {
            if (!pair.is_array() || pair.size() != 2)
                throw Error("framework JSON attacks must be [source, target] pairs");
            f.attacks.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
        }
    }
    normalize_attacks(f.attacks);
    return f;
}

inline nlohmann::json degrees_to_json(const DegreeAssignment& s) {
    nlohmann::json degrees = nlohmann::json::object();
    for (std::size_t i = 0; i < s.args.size(); ++i)
        degrees[s.args[i]] = to_string(s.values[i]);
    return {{"degrees", degrees}};
}

inline DegreeAssignment degrees_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("degrees") || !j["degrees"].is_object())
        throw Error("degree JSON needs a \"degrees\" object");
    DegreeAssignment s;
    for (const auto& [name, value] : j["degrees"].items()) {
        s.args.push_back(name);
        s.values.push_back(rational_from_json(value));
    }
    return s;
}

namespace detail {

inline std::string dot_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

/// Graphviz export; node labels carry the weight and, when given, the degree.
inline std::string to_dot(const WeightedFramework& f,
                          const DegreeAssignment* degrees = nullptr) {
    std::string out = "digraph waf {\n";
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        std::string label = detail::dot_escape(f.args[i]) + "\\nw=" + to_string(f.weights[i]);
        if (degrees)
            if (auto v = degrees->value_of(f.args[i])) label += "\\nS=" + to_string(*v);
        out += "  \"" + detail::dot_escape(f.args[i]) + "\" [label=\"" + label + "\"];\n";
    }
    for (const auto& [src, dst] : f.attacks)
        out += "  \"" + detail::dot_escape(src) + "\" -> \"" + detail::dot_escape(dst) +
               "\";\n";
    out += "}\n";
    return out;
}

}  // namespace gradarg
