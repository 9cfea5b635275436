// Acceptance suite. Each criterion prints one PASS/FAIL line; the CLI-facing
// criteria drive the installed binary through std::system.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gradarg/inference.hpp"
#include "gradarg/instance_gen.hpp"
#include "gradarg/io.hpp"
#include "gradarg/reductions.hpp"
#include "gradarg/semantics.hpp"

using namespace gradarg;

namespace {

bool criterion_line(int number, const std::string& name, bool pass) {
    std::printf("criterion %d (%s): %s\n", number, name.c_str(), pass ? "PASS" : "FAIL");
    std::fflush(stdout);
    return pass;
}

std::string work_dir() {
    static std::string dir = [] {
        auto path = std::filesystem::temp_directory_path() / "gradarg_acceptance";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
        return path.string();
    }();
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_cli(const std::string& args, std::string* out_text = nullptr) {
    static int counter = 0;
    const std::string capture = work_dir() + "/cli_" + std::to_string(counter++) + ".txt";
    const std::string command =
        std::string(GRADARG_CLI_PATH) + " " + args + " >" + capture + " 2>/dev/null";
    const int status = std::system(command.c_str());
    if (out_text) *out_text = slurp(capture);
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string data_path(const std::string& name) {
    return std::string(GRADARG_DATA_DIR) + "/" + name;
}

template <typename Fn>
double best_of_ms(int repetitions, Fn&& fn) {
    double best = 1e100;
    for (int r = 0; r < repetitions; ++r) {
        auto start = std::chrono::steady_clock::now();
        fn();
        auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

}  // namespace

TEST_CASE("criterion 1: worked example degrees", "[acceptance]") {
    auto f = parse_waf(slurp(data_path("demo.waf")));
    const Rational tol(5, 10000);
    const char* expected[3][4] = {{"0.421", "0.700", "0.438", "0.600"},
                                  {"0.529", "0.700", "0.438", "0.600"},
                                  {"0.258", "0.700", "0.269", "0.600"}};
    const Semantics sems[3] = {Semantics::HC, Semantics::MB, Semantics::CB};
    const char* names[3] = {"hc", "mb", "cb"};

    bool ok = true;
    for (int row = 0; row < 3; ++row) {
        ComputeResult result;
        const double elapsed_ms =
            best_of_ms(3, [&] { result = compute_degrees(f, sems[row]); });
        INFO("semantics " << names[row] << " took " << elapsed_ms << " ms");
        CHECK(elapsed_ms < 10.0);
        ok = ok && elapsed_ms < 10.0;
        for (int i = 0; i < 4; ++i) {
            const Rational reference = *parse_rational(expected[row][i]);
            const bool close = abs(result.degrees.values[i] - reference) <= tol;
            const bool rounds = decimal_string(result.degrees.values[i], 3) == expected[row][i];
            CHECK(close);
            CHECK(rounds);
            ok = ok && close && rounds;
        }
        // the CLI must report the same degrees
        std::string text;
        const int rc = run_cli("compute " + data_path("demo.waf") + " -s " + names[row],
                               &text);
        CHECK(rc == 0);
        bool cli_matches = rc == 0;
        try {
            auto cli_degrees = parse_degrees(text);
            cli_matches = cli_matches && aligned_values(f, cli_degrees) == result.degrees.values;
        } catch (const Error&) {
            cli_matches = false;
        }
        CHECK(cli_matches);
        ok = ok && cli_matches;
    }
    REQUIRE(criterion_line(1, "worked example degrees", ok));
}

TEST_CASE("criterion 2: reduction round trip", "[acceptance]") {
    const std::string prefix = work_dir() + "/t2";
    bool ok = run_cli("reduce " + data_path("ssp_demo.json") + " -o " + prefix) == 0;

    auto f = parse_waf(slurp(prefix + ".waf"));
    auto targets = parse_degrees(slurp(prefix + ".deg"));
    const char* weights5[] = {"0.00944", "0.03856", "0.00041", "0.01518", "0.01641"};
    for (int i = 0; i < 5; ++i) {
        const bool w_ok = decimal_string(f.weights[i + 1], 5) == weights5[i];
        const bool t_ok = decimal_string(targets.values[i + 1], 5) == weights5[i];
        CHECK(w_ok);
        CHECK(t_ok);
        ok = ok && w_ok && t_ok;
    }
    const bool root_ok = decimal_string(targets.values[0], 5) == "0.96059";
    CHECK(root_ok);
    ok = ok && root_ok;

    std::string text;
    const int rc = run_cli("infer " + prefix + ".waf " + prefix + ".deg -s hc", &text);
    CHECK(rc == 0);
    ok = ok && rc == 0;
    auto solved = parse_waf(text);
    const std::vector<Attack> known_attacks{{"a1", "a0"}, {"a4", "a0"}, {"a5", "a0"}};
    CHECK(solved.attacks == known_attacks);
    ok = ok && solved.attacks == known_attacks;

    auto art = ssp_to_hc({Rational(23), Rational(94), Rational(1), Rational(37), Rational(40)},
                         Rational(100));
    auto subset = extract_ssp_solution(art, AttackSet{solved.attacks});
    const bool extracted = subset.chosen == std::vector<std::size_t>{0, 3, 4};
    CHECK(extracted);
    Rational sum = 0;
    for (std::size_t i : subset.chosen) sum += Rational(std::vector<int>{23, 94, 1, 37, 40}[i]);
    CHECK(sum == 100);
    ok = ok && extracted && sum == 100;
    REQUIRE(criterion_line(2, "reduction round trip", ok));
}

TEST_CASE("criterion 3: brute-force parity on 500 random 3-argument instances",
          "[acceptance]") {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::size_t feasible = 0, infeasible = 0;
    for (Semantics sem : {Semantics::HC, Semantics::MB, Semantics::CB}) {
        std::mt19937_64 rng(0xACCE55 + static_cast<int>(sem));
        for (int round = 0; round < 500; ++round) {
            GenConfig cfg;
            cfg.n = 3;
            cfg.acyclic = true;
            cfg.attack_probability = Rational(1, 2);
            cfg.weight_denominator = 8;
            cfg.seed = rng();
            InferenceInstance inst = forward_instance(cfg, sem).instance;
            if (round % 2) {
                auto& t = inst.targets[rng() % 3];
                t = t / 2 + Rational(1, 1 + rng() % 17);
                if (t > 1) t = Rational(1, 1 + rng() % 5);
            }
            const bool solver = decide_instance(inst);
            const bool oracle = decide_bruteforce(inst);
            if (solver != oracle) {
                CAPTURE(static_cast<int>(sem), round);
                CHECK(solver == oracle);
                ok = false;
            }
            (solver ? feasible : infeasible)++;
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    INFO("parity over " << feasible << " feasible / " << infeasible << " infeasible in "
                        << seconds << " s");
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
    CHECK(seconds < 60.0);
    ok = ok && feasible > 0 && infeasible > 0 && seconds < 60.0;
    REQUIRE(criterion_line(3, "brute-force parity, 500 instances per semantics", ok));
}

TEST_CASE("criterion 4: exact round trips on acyclic instances up to 12 arguments",
          "[acceptance]") {
    bool ok = true;
    for (Semantics sem : {Semantics::HC, Semantics::MB, Semantics::CB}) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            GenConfig cfg;
            cfg.n = 1 + seed % 12;
            cfg.acyclic = true;
            cfg.attack_probability = Rational(1, 3);
            cfg.seed = seed * 977 + static_cast<int>(sem);
            auto fwd = forward_instance(cfg, sem);
            auto witness = solve_instance(fwd.instance);
            if (!witness || !solution_verifies(fwd.instance, *witness)) {
                CAPTURE(static_cast<int>(sem), seed);
                CHECK(witness.has_value());
                if (witness) CHECK(solution_verifies(fwd.instance, *witness));
                ok = false;
            }
        }
    }
    REQUIRE(criterion_line(4, "round-trip property, 200 seeds per semantics", ok));
}

namespace {

InferenceInstance linear_mb_instance(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    InferenceInstance inst;
    inst.semantics = Semantics::MB;
    inst.args.reserve(n);
    inst.weights.reserve(n);
    inst.targets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        inst.args.push_back("x" + std::to_string(i));
        inst.weights.emplace_back(1 + rng() % 1000, 1000);
        if (i == 0 || rng() % 2) {
            inst.targets.push_back(inst.weights[i]);  // unattacked
        } else {
            const std::size_t j = rng() % i;  // attacker picked among settled arguments
            inst.targets.push_back(inst.weights[i] / (1 + inst.targets[j]));
        }
    }
    return inst;
}

}  // namespace

TEST_CASE("criterion 5: linear-time MB decision", "[acceptance]") {
    bool ok = true;
    auto big = linear_mb_instance(100000, 31);
    bool decided = false;
    const double big_ms = best_of_ms(3, [&] { decided = decide_mb(big); });
    INFO("n = 100000 took " << big_ms << " ms");
    CHECK(decided);
    CHECK(big_ms < 1000.0);
    ok = ok && decided && big_ms < 1000.0;

    double previous = 0;
    for (std::size_t n : {10000u, 20000u, 40000u}) {
        auto inst = linear_mb_instance(n, 77);
        const double ms = best_of_ms(5, [&] { decided = decide_mb(inst); });
        INFO("n = " << n << " took " << ms << " ms");
        CHECK(decided);
        ok = ok && decided;
        if (previous > 0) {
            CHECK(ms <= previous * 2.5);
            ok = ok && ms <= previous * 2.5;
        }
        previous = ms;
    }
    REQUIRE(criterion_line(5, "MB decision is linear", ok));
}

TEST_CASE("criterion 6: transformation invariance", "[acceptance]") {
    bool ok = true;
    std::mt19937_64 rng(606);

    // expansions and contractions under MB
    std::size_t expansions = 0, contractions = 0;
    for (std::uint64_t seed = 0; expansions < 100 || contractions < 100; ++seed) {
        REQUIRE(seed < 4000);
        GenConfig cfg;
        cfg.n = 6;
        cfg.acyclic = true;
        cfg.attack_probability = Rational(1, 3);
        cfg.weight_denominator = 6;
        cfg.seed = seed;
        auto fwd = forward_instance(cfg, Semantics::MB);
        auto f = instance_framework(fwd.instance, fwd.witness);
        auto s = instance_targets(fwd.instance);
        auto index = arg_index(f);
        auto values = aligned_values(f, s);

        std::unordered_map<std::string, Rational> strongest;
        for (const auto& [src, dst] : f.attacks) {
            auto [it, fresh] = strongest.try_emplace(dst, values[index.at(src)]);
            if (!fresh && values[index.at(src)] > it->second) it->second = values[index.at(src)];
        }
        AttackSet additions;
        for (const auto& src : f.args)
            for (const auto& dst : f.args) {
                const bool free = f.weights[index.at(dst)] == 0;
                const bool dominated =
                    strongest.count(dst) && values[index.at(src)] <= strongest.at(dst);
                if ((free || dominated) && rng() % 2)
                    additions.attacks.emplace_back(src, dst);
            }
        if (additions.attacks.empty()) continue;
        auto expanded = expand_mb(f, s, additions);
        if (expansions < 100) {
            const bool kept = verify(expanded, Semantics::MB, s);
            CHECK(kept);
            ok = ok && kept;
            ++expansions;
        }
        if (contractions < 100) {
            // remove a random subset of dominated co-attacks around a pivot
            for (const auto& [dst, best] : strongest) {
                Attack pivot;
                bool have_pivot = false;
                AttackSet removals;
                for (const auto& a : expanded.attacks) {
                    if (a.second != dst) continue;
                    if (!have_pivot && values[index.at(a.first)] == best) {
                        pivot = a;
                        have_pivot = true;
                        continue;
                    }
                    if (values[index.at(a.first)] <= best && rng() % 2)
                        removals.attacks.push_back(a);
                }
                if (!have_pivot || removals.attacks.empty()) continue;
                auto contracted = contract_mb(expanded, s, pivot, removals);
                const bool kept = verify(contracted, Semantics::MB, s);
                CHECK(kept);
                ok = ok && kept;
                ++contractions;
                break;
            }
        }
    }

    // substitutions under HC and CB
    for (Semantics sem : {Semantics::HC, Semantics::CB}) {
        std::size_t substitutions = 0;
        for (std::uint64_t seed = 0; substitutions < 100; ++seed) {
            REQUIRE(seed < 4000);
            GenConfig cfg;
            cfg.n = 7;
            cfg.acyclic = true;
            cfg.attack_probability = Rational(1, 3);
            cfg.weight_denominator = 4;  // coarse grid, duplicate degrees are common
            cfg.seed = seed * 13 + 1;
            auto fwd = forward_instance(cfg, sem);
            auto f = instance_framework(fwd.instance, fwd.witness);
            auto s = instance_targets(fwd.instance);
            std::vector<Rational> pool_values;
            std::vector<std::size_t> pool_owner;
            for (std::size_t i = 0; i < fwd.instance.targets.size(); ++i)
                if (fwd.instance.targets[i] > 0) {
                    pool_values.push_back(fwd.instance.targets[i]);
                    pool_owner.push_back(i);
                }
            for (std::size_t i = 0; i < f.args.size() && substitutions < 100; ++i) {
                const Rational& w = fwd.instance.weights[i];
                const Rational& t = fwd.instance.targets[i];
                if (w == 0 || w == t) continue;
                std::vector<CbPlan> plans;
                if (sem == Semantics::HC)
                    plans.push_back({0, *hc_target(w, t)});
                else
                    plans = cb_plan(w, t);
                for (const CbPlan& plan : plans) {
                    std::optional<std::size_t> k;
                    if (sem == Semantics::CB) k = plan.attacker_count;
                    auto options = enumerate_subset_sums(
                        SubsetSumInstance(pool_values, plan.attacker_degree_sum, k), 6);
                    if (options.empty()) continue;
                    const auto& choice = options[rng() % options.size()];
                    AttackSet replacement;
                    for (std::size_t idx : choice.chosen)
                        replacement.attacks.emplace_back(f.args[pool_owner[idx]], f.args[i]);
                    auto swapped = sem == Semantics::HC
                                       ? substitute_hc(f, s, f.args[i], replacement)
                                       : substitute_cb(f, s, f.args[i], replacement);
                    const bool kept = verify(swapped, sem, s);
                    CHECK(kept);
                    ok = ok && kept;
                    ++substitutions;
                    break;
                }
            }
        }
    }

    // inadmissible applications carry a diagnostic
    auto fr = parse_waf(slurp(data_path("rewrite_demo.waf")));
    auto sr = parse_degrees(slurp(data_path("rewrite_demo.deg")));
    std::size_t rejected = 0;
    auto expect_reject = [&](auto&& fn) {
        try {
            fn();
            CHECK(false);
            ok = false;
        } catch (const TransformError& e) {
            CHECK(std::string(e.what()).size() > 10);
            ++rejected;
        }
    };
    expect_reject([&] { expand_mb(fr, sr, AttackSet{{{"a2", "a0"}}}); });
    expect_reject([&] { expand_mb(fr, sr, AttackSet{{{"a3", "a1"}}}); });
    expect_reject([&] { contract_mb(fr, sr, {"a1", "a2"}, AttackSet{{{"a2", "a2"}}}); });
    expect_reject([&] { contract_mb(fr, sr, {"a2", "a2"}, AttackSet{{{"a2", "a2"}}}); });
    auto fh = parse_waf("arg t 1\narg b 1/2\natt b t\n");
    DegreeAssignment sh{{"t", "b"}, {Rational(2, 3), Rational(1, 2)}};
    expect_reject([&] { substitute_hc(fh, sh, "t", AttackSet{}); });
    auto fc = parse_waf("arg t 1\narg b 2/5\narg c 2/5\natt b t\natt c t\n");
    DegreeAssignment sc{{"t", "b", "c"}, {Rational(5, 17), Rational(2, 5), Rational(2, 5)}};
    expect_reject([&] { substitute_cb(fc, sc, "t", AttackSet{{{"b", "t"}}}); });
    CHECK(rejected == 6);
    ok = ok && rejected == 6;

    REQUIRE(criterion_line(6, "transformation invariance, 100 applications each", ok));
}

TEST_CASE("criterion 7: MB solution space is connected by expansion and contraction",
          "[acceptance]") {
    bool ok = true;
    std::vector<InferenceInstance> battery;
    {  // a rich instance: 36 solutions
        InferenceInstance inst;
        inst.semantics = Semantics::MB;
        inst.args = {"a", "b", "c"};
        inst.weights = {Rational(3, 4), Rational(1, 2), Rational(3, 8)};
        inst.targets = {Rational(1, 2), Rational(1, 2), Rational(1, 4)};
        battery.push_back(inst);
    }
    std::mt19937_64 rng(707);
    while (battery.size() < 24) {
        GenConfig cfg;
        cfg.n = 1 + rng() % 3;
        cfg.acyclic = true;
        cfg.attack_probability = Rational(1, 2);
        cfg.weight_denominator = 5;
        cfg.seed = rng();
        auto inst = forward_instance(cfg, Semantics::MB).instance;
        bool positive = true;
        for (const auto& w : inst.weights) positive = positive && w > 0;
        if (positive) battery.push_back(std::move(inst));
    }

    std::size_t pairs = 0;
    for (const auto& inst : battery) {
        auto solutions = bruteforce_solutions(inst);
        REQUIRE_FALSE(solutions.empty());
        const auto targets = instance_targets(inst);
        for (const auto& from : solutions)
            for (const auto& to : solutions) {
                AttackSet additions;
                for (const auto& a : to.attacks)
                    if (std::find(from.attacks.begin(), from.attacks.end(), a) ==
                        from.attacks.end())
                        additions.attacks.push_back(a);
                bool reached = false;
                try {
                    auto current =
                        expand_mb(instance_framework(inst, from), targets, additions);
                    auto values = aligned_values(current, targets);
                    auto index = arg_index(current);
                    for (const auto& arg : inst.args) {
                        AttackSet removals;
                        for (const auto& a : current.attacks)
                            if (a.second == arg &&
                                std::find(to.attacks.begin(), to.attacks.end(), a) ==
                                    to.attacks.end())
                                removals.attacks.push_back(a);
                        if (removals.attacks.empty()) continue;
                        Attack pivot;
                        Rational best(-1);
                        for (const auto& a : to.attacks)
                            if (a.second == arg && values[index.at(a.first)] > best) {
                                best = values[index.at(a.first)];
                                pivot = a;
                            }
                        REQUIRE(best >= 0);  // positive weights: the target stays attacked
                        current = contract_mb(current, targets, pivot, removals);
                    }
                    reached = current.attacks == to.attacks &&
                              verify(current, Semantics::MB, targets);
                } catch (const TransformError&) {
                    reached = false;
                }
                if (!reached) {
                    CHECK(reached);
                    ok = false;
                }
                ++pairs;
            }
    }
    INFO("checked " << pairs << " solution pairs over " << battery.size() << " instances");
    CHECK(pairs > 1000);
    ok = ok && pairs > 1000;
    REQUIRE(criterion_line(7, "solution-space reachability", ok));
}

TEST_CASE("criterion 8: iterative convergence on cyclic frameworks", "[acceptance]") {
    bool ok = true;
    const Rational bound(1, pow10(10));
    std::size_t worst_iterations = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GenConfig cfg;
        cfg.n = 50;
        cfg.attack_probability = Rational(1, 10);
        cfg.seed = seed * 31 + 5;
        auto f = random_waf(cfg);
        for (Semantics sem : {Semantics::HC, Semantics::MB, Semantics::CB}) {
            try {
                auto result = compute_degrees(f, sem);  // tol 1e-12, cap 20000
                worst_iterations = std::max(worst_iterations, result.iterations);
                const Rational gap = residual(f, sem, result.degrees);
                if (gap >= bound) {
                    CAPTURE(seed, static_cast<int>(sem), to_string(gap));
                    CHECK(gap < bound);
                    ok = false;
                }
            } catch (const ConvergenceError& e) {
                CAPTURE(seed, static_cast<int>(sem), to_string(e.residual));
                CHECK(false);
                ok = false;
            }
        }
    }
    INFO("worst iteration count " << worst_iterations);
    CHECK(worst_iterations <= 20000);
    ok = ok && worst_iterations <= 20000;
    REQUIRE(criterion_line(8, "convergence within 20000 iterations", ok));
}
