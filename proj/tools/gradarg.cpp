// Command-line front end: forward computation (compute, verify), the inverse
// problem (decide, infer), reduction instance generation (reduce), random
// instance generation (gen), and degree-preserving rewrites (transform).
//
// Exit codes: 0 success or a positive answer, 1 negative answer (no attack
// relation exists, verification failed), 2 usage or input errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gradarg/inference.hpp"
#include "gradarg/instance_gen.hpp"
#include "gradarg/io.hpp"
#include "gradarg/reductions.hpp"
#include "gradarg/semantics.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

gradarg::WeightedFramework load_framework(const std::string& path) {
    gradarg::WeightedFramework f;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        f = gradarg::waf_from_json(nlohmann::json::parse(read_file(path)));
    else
        f = gradarg::parse_waf(read_file(path));
    auto report = gradarg::validate(f);
    if (!report.ok()) {
        std::string message = path + ": invalid framework";
        for (const auto& v : report.violations) message += "\n  " + v;
        throw UsageError(message);
    }
    return f;
}

gradarg::DegreeAssignment load_degrees(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return gradarg::degrees_from_json(nlohmann::json::parse(read_file(path)));
    return gradarg::parse_degrees(read_file(path));
}

gradarg::Semantics semantics_flag(const std::string& text) {
    auto sem = gradarg::parse_semantics(text);
    if (!sem) throw UsageError("unknown semantics '" + text + "' (use hc, mb or cb)");
    return *sem;
}

gradarg::Rational rational_flag(const std::string& text, const char* what) {
    auto q = gradarg::parse_rational(text);
    if (!q) throw UsageError(std::string("invalid ") + what + " '" + text + "'");
    return *q;
}

gradarg::Attack attack_flag(const std::string& text) {
    auto sep = text.find('>');
    if (sep == std::string::npos || sep == 0 || sep + 1 == text.size())
        throw UsageError("attack '" + text + "' must look like source>target");
    return {text.substr(0, sep), text.substr(sep + 1)};
}

/// Serialized text must survive a parse round trip before it reaches disk.
void write_framework_checked(const std::string& path, const gradarg::WeightedFramework& f) {
    const std::string text = gradarg::serialize_waf(f);
    if (!(gradarg::parse_waf(text) == f))
        throw std::logic_error("serialized framework does not re-parse identically");
    write_file(path, text);
}

std::string degrees_text(const gradarg::DegreeAssignment& s, bool approx) {
    std::string out;
    for (std::size_t i = 0; i < s.args.size(); ++i) {
        out += "deg " + s.args[i] + " " + gradarg::to_string(s.values[i]);
        if (approx) out += "  # " + gradarg::decimal_string(s.values[i], 6);
        out += "\n";
    }
    return out;
}

struct ComputeOptions {
    std::string waf_path;
    std::string semantics = "hc";
    std::string tolerance = "1e-12";
    std::size_t max_iterations = 20000;
    bool exact_acyclic = false;
    bool json = false;
    bool approx = false;
    std::string out_path;
};

int run_compute(const ComputeOptions& opt) {
    auto f = load_framework(opt.waf_path);
    const auto sem = semantics_flag(opt.semantics);
    gradarg::DegreeAssignment degrees;
    std::optional<std::size_t> iterations;
    if (opt.exact_acyclic) {
        degrees = gradarg::compute_degrees_exact_acyclic(f, sem);
    } else {
        gradarg::IterationConfig cfg;
        cfg.tolerance = rational_flag(opt.tolerance, "tolerance");
        cfg.max_iterations = opt.max_iterations;
        auto result = gradarg::compute_degrees(f, sem, cfg);
        degrees = std::move(result.degrees);
        iterations = result.iterations;
    }
    std::string text;
    if (opt.json) {
        auto j = gradarg::degrees_to_json(degrees);
        if (iterations) j["iterations"] = *iterations;
        text = j.dump(2) + "\n";
    } else {
        text = degrees_text(degrees, opt.approx);
        if (iterations) text += "# iterations " + std::to_string(*iterations) + "\n";
    }
    if (opt.out_path.empty())
        std::cout << text;
    else
        write_file(opt.out_path, text);
    return kExitYes;
}

struct InstanceOptions {
    std::string args_path;
    std::string targets_path;
    std::string semantics = "hc";
};

gradarg::InferenceInstance load_instance(const InstanceOptions& opt) {
    auto f = load_framework(opt.args_path);
    auto s = load_degrees(opt.targets_path);
    return gradarg::make_instance(f, s, semantics_flag(opt.semantics));
}

int run_decide(const InstanceOptions& opt) {
    auto inst = load_instance(opt);
    if (gradarg::decide_instance(inst)) {
        std::cout << "yes: an attack relation realizes the target degrees\n";
        return kExitYes;
    }
    std::cout << "no: no attack relation realizes the target degrees\n";
    return kExitNo;
}

struct InferOptions {
    InstanceOptions instance;
    std::size_t enumerate = 0;
    std::string format = "waf";
    std::string out_path;
};

std::string render_solution(const gradarg::InferenceInstance& inst,
                            const gradarg::AttackSet& attacks, const std::string& format) {
    auto f = gradarg::instance_framework(inst, attacks);
    if (format == "waf") return gradarg::serialize_waf(f);
    if (format == "dot") {
        auto targets = gradarg::instance_targets(inst);
        return gradarg::to_dot(f, &targets);
    }
    if (format == "json") return gradarg::waf_to_json(f).dump(2) + "\n";
    throw UsageError("unknown output format '" + format + "' (use waf, dot or json)");
}

int run_infer(const InferOptions& opt) {
    auto inst = load_instance(opt.instance);
    std::vector<gradarg::AttackSet> solutions;
    if (opt.enumerate == 0) {
        if (auto one = gradarg::solve_instance(inst)) solutions.push_back(std::move(*one));
    } else {
        solutions = gradarg::enumerate_solutions(inst, opt.enumerate);
    }
    if (solutions.empty()) {
        std::cout << "no attack relation realizes the target degrees\n";
        return kExitNo;
    }
    std::string text;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        if (!gradarg::solution_verifies(inst, solutions[i]))
            throw std::logic_error("solver returned a non-verifying attack set");
        if (solutions.size() > 1) text += "# solution " + std::to_string(i + 1) + "\n";
        text += render_solution(inst, solutions[i], opt.format);
    }
    if (opt.out_path.empty())
        std::cout << text;
    else
        write_file(opt.out_path, text);
    return kExitYes;
}

struct VerifyOptions {
    std::string waf_path;
    std::string targets_path;
    std::string semantics = "hc";
    std::string tolerance = "0";
};

int run_verify(const VerifyOptions& opt) {
    auto f = load_framework(opt.waf_path);
    auto s = load_degrees(opt.targets_path);
    const auto sem = semantics_flag(opt.semantics);
    const auto tol = rational_flag(opt.tolerance, "tolerance");
    auto gap = gradarg::residual(f, sem, s);
    std::cout << "residual " << gradarg::to_string(gap) << " (about "
              << gradarg::decimal_string(gap, 12) << ")\n";
    return gap <= tol ? kExitYes : kExitNo;
}

struct ReduceOptions {
    std::string input_path;
    std::string out_prefix = "reduction";
    unsigned precision = 6;
};

int run_reduce(const ReduceOptions& opt) {
    auto j = nlohmann::json::parse(read_file(opt.input_path));
    if (!j.contains("items") || !j["items"].is_array())
        throw UsageError("reduce input needs an \"items\" array");
    std::vector<gradarg::Rational> items;
    for (const auto& item : j["items"]) items.push_back(gradarg::rational_from_json(item));
    if (!j.contains("target")) throw UsageError("reduce input needs a \"target\"");
    const auto target = gradarg::rational_from_json(j["target"]);

    gradarg::InferenceInstance inst;
    nlohmann::json map;
    if (j.contains("k") && !j["k"].is_null()) {
        auto art = gradarg::kssp_to_cb(items, target, j["k"].get<std::size_t>(),
                                       opt.precision);
        inst = art.instance;
        map["semantics"] = "cb";
        map["k"] = art.attacker_count;
        map["u_approx"] = gradarg::to_string(art.u_approx);
        map["backward_pinned"] = art.backward_pinned;
        map["root"] = art.root;
        for (std::size_t i = 0; i < art.item_args.size(); ++i)
            map["items"].push_back({{"index", i},
                                    {"value", gradarg::to_string(items[i])},
                                    {"argument", art.item_args[i]}});
        if (!art.backward_pinned)
            std::cerr << "warning: the proof bounds do not pin the attacker count for "
                         "this instance; the backward mapping is not guaranteed\n";
    } else {
        auto art = gradarg::ssp_to_hc(items, target);
        inst = art.instance;
        map["semantics"] = "hc";
        map["root"] = art.root;
        for (std::size_t i = 0; i < art.item_args.size(); ++i)
            map["items"].push_back({{"index", i},
                                    {"value", gradarg::to_string(items[i])},
                                    {"argument", art.item_args[i]}});
    }
    map["target"] = gradarg::to_string(target);

    gradarg::WeightedFramework f{inst.args, inst.weights, {}};
    gradarg::DegreeAssignment targets{inst.args, inst.targets};
    write_framework_checked(opt.out_prefix + ".waf", f);
    write_file(opt.out_prefix + ".deg", gradarg::serialize_degrees(targets));
    write_file(opt.out_prefix + ".map.json", map.dump(2) + "\n");

    std::cout << "argument  weight   target\n";
    for (std::size_t i = 0; i < inst.args.size(); ++i)
        std::cout << inst.args[i] << "  " << gradarg::decimal_string(inst.weights[i], 5)
                  << "  " << gradarg::decimal_string(inst.targets[i], 5) << "\n";
    std::cout << "wrote " << opt.out_prefix << ".waf, " << opt.out_prefix << ".deg, "
              << opt.out_prefix << ".map.json\n";
    return kExitYes;
}

struct GenOptions {
    std::size_t n = 4;
    std::string attack_probability = "1/4";
    bool acyclic = false;
    std::uint64_t weight_denominator = 1000;
    std::uint64_t seed = 0;
    std::string semantics;
    std::string out_prefix = "generated";
};

int run_gen(const GenOptions& opt) {
    gradarg::GenConfig cfg;
    cfg.n = opt.n;
    cfg.attack_probability = rational_flag(opt.attack_probability, "attack probability");
    cfg.acyclic = opt.acyclic;
    cfg.weight_denominator = opt.weight_denominator;
    cfg.seed = opt.seed;
    if (opt.semantics.empty()) {
        auto f = gradarg::random_waf(cfg);
        write_framework_checked(opt.out_prefix + ".waf", f);
        std::cout << "wrote " << opt.out_prefix << ".waf\n";
        return kExitYes;
    }
    const auto sem = semantics_flag(opt.semantics);
    auto fwd = gradarg::forward_instance(cfg, sem);
    gradarg::WeightedFramework args_only{fwd.instance.args, fwd.instance.weights, {}};
    auto witness_framework = gradarg::instance_framework(fwd.instance, fwd.witness);
    if (!gradarg::solution_verifies(fwd.instance, fwd.witness))
        throw std::logic_error("generated witness does not verify");
    write_framework_checked(opt.out_prefix + ".waf", args_only);
    write_file(opt.out_prefix + ".deg",
               gradarg::serialize_degrees(gradarg::instance_targets(fwd.instance)));
    write_framework_checked(opt.out_prefix + ".witness.waf", witness_framework);
    std::cout << "wrote " << opt.out_prefix << ".waf, " << opt.out_prefix << ".deg, "
              << opt.out_prefix << ".witness.waf\n";
    return kExitYes;
}

struct TransformOptions {
    std::string waf_path;
    std::string targets_path;
    std::string semantics;
    std::vector<std::string> add;
    std::string pivot;
    std::vector<std::string> remove;
    std::string arg;
    std::vector<std::string> with_sources;
    std::string out_path;
};

int run_transform(const std::string& kind, const TransformOptions& opt) {
    auto f = load_framework(opt.waf_path);
    auto s = load_degrees(opt.targets_path);
    const auto sem = semantics_flag(opt.semantics);
    gradarg::WeightedFramework result;
    if (kind == "expand" || kind == "contract") {
        if (sem != gradarg::Semantics::MB)
            throw UsageError("expansion and contraction are max-based rewrites");
        if (kind == "expand") {
            gradarg::AttackSet additions;
            for (const auto& text : opt.add) additions.attacks.push_back(attack_flag(text));
            result = gradarg::expand_mb(f, s, additions);
        } else {
            if (opt.pivot.empty()) throw UsageError("contract needs --pivot");
            gradarg::AttackSet removals;
            for (const auto& text : opt.remove) removals.attacks.push_back(attack_flag(text));
            result = gradarg::contract_mb(f, s, attack_flag(opt.pivot), removals);
        }
    } else {
        if (opt.arg.empty()) throw UsageError("substitute needs --arg");
        gradarg::AttackSet replacement;
        for (const auto& src : opt.with_sources) replacement.attacks.push_back({src, opt.arg});
        if (sem == gradarg::Semantics::HC)
            result = gradarg::substitute_hc(f, s, opt.arg, replacement);
        else if (sem == gradarg::Semantics::CB)
            result = gradarg::substitute_cb(f, s, opt.arg, replacement);
        else
            throw UsageError("substitution applies to the hc and cb semantics");
    }
    if (!gradarg::verify(result, sem, s))
        throw std::logic_error("transformed framework does not verify");
    if (opt.out_path.empty())
        std::cout << gradarg::serialize_waf(result);
    else
        write_framework_checked(opt.out_path, result);
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradual-semantics degrees and attack-relation inference"};
    app.require_subcommand(1);

    ComputeOptions compute;
    auto* cmd_compute = app.add_subcommand("compute", "compute final acceptability degrees");
    cmd_compute->add_option("waf", compute.waf_path, "framework file")->required();
    cmd_compute->add_option("-s,--semantics", compute.semantics, "hc, mb or cb")->required();
    cmd_compute->add_option("--tolerance", compute.tolerance, "iteration stop threshold");
    cmd_compute->add_option("--max-iter", compute.max_iterations, "iteration cap");
    cmd_compute->add_flag("--exact-acyclic", compute.exact_acyclic,
                          "exact evaluation in topological order");
    cmd_compute->add_flag("--json", compute.json, "JSON output");
    cmd_compute->add_flag("--approx", compute.approx, "append decimal approximations");
    cmd_compute->add_option("-o,--out", compute.out_path, "write degrees to a file");

    InstanceOptions decide;
    auto* cmd_decide = app.add_subcommand("decide", "does an attack relation exist?");
    cmd_decide->add_option("args", decide.args_path, "framework file (attacks ignored)")
        ->required();
    cmd_decide->add_option("targets", decide.targets_path, "target degree file")->required();
    cmd_decide->add_option("-s,--semantics", decide.semantics, "hc, mb or cb")->required();

    InferOptions infer;
    auto* cmd_infer = app.add_subcommand("infer", "construct an attack relation");
    cmd_infer->add_option("args", infer.instance.args_path, "framework file (attacks ignored)")
        ->required();
    cmd_infer->add_option("targets", infer.instance.targets_path, "target degree file")
        ->required();
    cmd_infer->add_option("-s,--semantics", infer.instance.semantics, "hc, mb or cb")
        ->required();
    cmd_infer->add_option("--enumerate", infer.enumerate, "list up to N distinct solutions");
    cmd_infer->add_option("--out", infer.format, "output format: waf, dot or json");
    cmd_infer->add_option("-o,--out-file", infer.out_path, "write to a file");

    VerifyOptions verify_opt;
    auto* cmd_verify = app.add_subcommand("verify", "check degrees against a framework");
    cmd_verify->add_option("waf", verify_opt.waf_path, "framework file")->required();
    cmd_verify->add_option("targets", verify_opt.targets_path, "degree file")->required();
    cmd_verify->add_option("-s,--semantics", verify_opt.semantics, "hc, mb or cb")
        ->required();
    cmd_verify->add_option("--tol", verify_opt.tolerance, "acceptance tolerance");

    ReduceOptions reduce;
    auto* cmd_reduce = app.add_subcommand("reduce", "build a DEC instance from (k)SSP JSON");
    cmd_reduce->add_option("input", reduce.input_path, "JSON: {items, target, k}")->required();
    cmd_reduce->add_option("-o,--out", reduce.out_prefix, "output file prefix");
    cmd_reduce->add_option("--precision", reduce.precision,
                           "digits of the u approximation (CB)");

    GenOptions gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate random frameworks and instances");
    cmd_gen->add_option("-n", gen.n, "argument count");
    cmd_gen->add_option("-p,--attack-prob", gen.attack_probability, "attack probability");
    cmd_gen->add_flag("--acyclic", gen.acyclic, "layered acyclic topology");
    cmd_gen->add_option("--weight-denominator", gen.weight_denominator, "weight grid");
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");
    cmd_gen->add_option("-s,--semantics", gen.semantics,
                        "also emit exact targets and a witness (needs --acyclic)");
    cmd_gen->add_option("-o,--out", gen.out_prefix, "output file prefix");

    TransformOptions transform;
    auto* cmd_transform = app.add_subcommand("transform", "degree-preserving rewrites");
    cmd_transform->require_subcommand(1);
    std::vector<CLI::App*> kinds;
    for (const char* kind : {"expand", "contract", "substitute"}) {
        auto* sub = cmd_transform->add_subcommand(kind);
        sub->add_option("waf", transform.waf_path, "framework file")->required();
        sub->add_option("targets", transform.targets_path, "degree file")->required();
        sub->add_option("-s,--semantics", transform.semantics, "hc, mb or cb")->required();
        sub->add_option("-o,--out-file", transform.out_path, "write to a file");
        kinds.push_back(sub);
    }
    kinds[0]->add_option("--add", transform.add, "attacks to add, as source>target");
    kinds[1]->add_option("--pivot", transform.pivot, "pivot attack source>target");
    kinds[1]->add_option("--remove", transform.remove, "attacks to remove");
    kinds[2]->add_option("--arg", transform.arg, "argument whose attackers are replaced");
    kinds[2]->add_option("--with", transform.with_sources, "replacement attacker names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitError;
    }

    try {
        if (app.got_subcommand(cmd_compute)) return run_compute(compute);
        if (app.got_subcommand(cmd_decide)) return run_decide(decide);
        if (app.got_subcommand(cmd_infer)) return run_infer(infer);
        if (app.got_subcommand(cmd_verify)) return run_verify(verify_opt);
        if (app.got_subcommand(cmd_reduce)) return run_reduce(reduce);
        if (app.got_subcommand(cmd_gen)) return run_gen(gen);
        if (app.got_subcommand(cmd_transform)) {
            for (std::size_t i = 0; i < kinds.size(); ++i)
                if (cmd_transform->got_subcommand(kinds[i]))
                    return run_transform(kinds[i]->get_name(), transform);
        }
        throw UsageError("no subcommand given");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const gradarg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitError;
    }
}
