// ltower: build, check and benchmark l-adic extension towers over F_p.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ltower/bench.hpp"
#include "ltower/error.hpp"
#include "ltower/tower_io.hpp"

using namespace ltower;

namespace {

enum Exit : int {
    ok = 0,
    verification_failed = 1,
    invalid_parameters = 2,
    bad_file = 3,
    not_in_subfield = 4,
    version_mismatch = 5,
};

int exit_code(Errc code) {
    switch (code) {
        case Errc::invalid_parameter: return invalid_parameters;
        case Errc::io_error:
        case Errc::corrupt_file: return bad_file;
        case Errc::not_in_subfield: return not_in_subfield;
        case Errc::version_mismatch: return version_mismatch;
        default: return verification_failed;
    }
}

// --seed wins over SEED; both absent means seed 1.
u64 resolve_seed(const std::optional<u64>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && end != env) return v;
        throw Error(Errc::invalid_parameter, "SEED must be a decimal integer");
    }
    return 1;
}

std::optional<Strategy> strategy_flag(const std::string& name) {
    if (name == "auto") return std::nullopt;
    return parse_strategy(name);
}

std::string poly_text(const DensePoly& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = a.size(); k-- > 0;) {
        if (a[k] == 0) continue;
        if (!first) out << " + ";
        first = false;
        if (a[k] != 1 || k == 0) out << a[k];
        if (k > 0) out << (a[k] != 1 ? "*X" : "X");
        if (k > 1) out << '^' << k;
    }
    return out.str();
}

std::string coefficients_line(const DensePoly& a) {
    std::ostringstream out;
    if (a.is_zero()) return "0";
    for (std::size_t k = 0; k < a.size(); ++k) out << (k ? " " : "") << a[k];
    return out.str();
}

DensePoly read_element(const PrimeField& f, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path);
    std::string token;
    std::vector<u64> c;
    char ch;
    while (in.get(ch)) {
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            token += ch;
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ',' && ch != '[' && ch != ']' && ch != '"')
            throw Error(Errc::corrupt_file, path + ": unexpected character in element file");
        if (!token.empty()) c.push_back(std::stoull(token) % f.modulus());
        token.clear();
    }
    if (!token.empty()) c.push_back(std::stoull(token) % f.modulus());
    return DensePoly(f, std::move(c));
}

void print_summary(const Tower& t, std::ostream& out) {
    out << "strategy " << strategy_name(t.strategy()) << "\n";
    out << "p " << t.field().modulus() << "\nell " << t.ell() << "\n";
    std::visit(
        [&](const auto& init) {
            using T = std::decay_t<decltype(init)>;
            if constexpr (std::is_same_v<T, T1Init>) {
                out << "seed " << init.seed << "\n";
            } else if constexpr (std::is_same_v<T, T2Init>) {
                out << "delta " << init.params.delta << "\nalpha " << init.alpha << "\n";
            } else if constexpr (std::is_same_v<T, EllipticInit>) {
                const Curve& e0 = init.cycle.steps.front().domain;
                out << "curve y^2 = x^3 + " << e0.a << "x + " << e0.b << "\norder " << init.order << "\ncycle_length "
                    << init.cycle.length() << "\neta " << init.eta << "\n";
            } else {
                out << "base_degree " << init.degree << "\nbase_modulus " << poly_text(init.base_modulus) << "\n";
            }
        },
        t.init());
    for (unsigned i = 0; i < t.built_levels(); ++i) {
        const DensePoly& q = t.level(i)->minpoly;
        out << "Q_" << i << " degree " << q.degree();
        if (q.size() <= 30) out << " = " << poly_text(q);
        out << "\n";
    }
}

bool print_report(const VerifyReport& r, std::ostream& out) {
    for (const auto& c : r.checks) {
        out << "level " << r.level << ' ' << c.name << ' ' << (c.passed ? "PASS" : "FAIL") << ' ' << c.seconds << "s";
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
    }
    return r.passed();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error(Errc::io_error, "cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arithmetic in l-adic towers of finite fields"};
    app.require_subcommand(1);

    std::optional<u64> seed_flag;
    u64 p = 0, ell = 0;
    unsigned levels = 2;
    std::string strategy = "auto", in_path, out_path, element_path, csv_path;
    unsigned from_level = 0, to_level = 0;
    std::optional<unsigned> verify_level;
    bool random_element = false;
    std::size_t reps = 5;
    unsigned jobs = 1, baseline_max = 4, first_level = 1;
    std::vector<std::string> ops;

    const std::vector<std::string> strategies{"auto", "t1", "t2", "elliptic", "general"};

    auto* build = app.add_subcommand("build", "Build a tower and write it as JSON");
    build->add_option("--p", p, "Prime characteristic")->required();
    build->add_option("--ell", ell, "Odd prime degree of each step")->required();
    build->add_option("--levels", levels, "Number of levels above F_p")->capture_default_str();
    build->add_option("--strategy", strategy)->check(CLI::IsMember(strategies))->capture_default_str();
    build->add_option("--seed", seed_flag, "Random seed (overrides SEED)");
    build->add_option("--out", out_path, "Output file (stdout when omitted)");

    auto* verify = app.add_subcommand("verify", "Check the invariants of a stored tower");
    verify->add_option("--in", in_path)->required();
    verify->add_option("--level", verify_level, "Highest level to check (default: all stored)");
    verify->add_option("--seed", seed_flag);

    auto* embed = app.add_subcommand("embed", "Map an element between two levels");
    embed->add_option("--in", in_path, "Tower file")->required();
    embed->add_option("--from", from_level)->required();
    embed->add_option("--to", to_level)->required();
    auto* element_opt = embed->add_option("--element", element_path, "File of coefficients, lowest degree first");
    auto* random_opt = embed->add_flag("--random", random_element, "Use a random element of the source level");
    element_opt->excludes(random_opt);
    embed->add_option("--out", out_path);
    embed->add_option("--seed", seed_flag);

    auto* bench = app.add_subcommand("bench", "Time tower operations and write CSV");
    bench->add_option("--p", p)->required();
    bench->add_option("--ell", ell)->required();
    bench->add_option("--levels", levels)->capture_default_str();
    bench->add_option("--first-level", first_level)->capture_default_str();
    bench->add_option("--strategy", strategy)->check(CLI::IsMember(strategies))->capture_default_str();
    bench->add_option("--reps", reps)->capture_default_str();
    bench->add_option("--csv", csv_path, "Output file (stdout when omitted)");
    bench->add_option("--jobs", jobs, "Levels measured concurrently")->capture_default_str();
    bench->add_option("--ops", ops, "Subset of build,lift,push,embed,mul,inv,baseline_embed");
    bench->add_option("--baseline-max-level", baseline_max)->capture_default_str();
    bench->add_option("--seed", seed_flag);

    auto* exp = app.add_subcommand("export", "Rewrite a tower file, optionally with more levels");
    exp->add_option("--in", in_path)->required();
    exp->add_option("--out", out_path);
    std::optional<unsigned> export_levels;
    exp->add_option("--levels", export_levels, "Build up to this level before writing");

    auto* imp = app.add_subcommand("import", "Load a tower file and re-validate every level");
    imp->add_option("--in", in_path)->required();
    imp->add_option("--seed", seed_flag);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid_parameters;
    }

    try {
        const u64 seed = resolve_seed(seed_flag);
        Rng rng(seed);
        if (*build) {
            Tower t = Tower::create(PrimeField(p), ell, strategy_flag(strategy), rng);
            t.level(levels);
            write_output(out_path, export_tower(t));
            print_summary(t, out_path.empty() ? std::cerr : std::cout);
            return ok;
        }
        if (*verify || *imp) {
            Tower t = load_tower(in_path);
            const unsigned top = verify_level ? *verify_level : std::max(1u, t.built_levels()) - 1;
            bool passed = true;
            for (unsigned i = 0; i <= top; ++i) passed = print_report(t.verify_level(i, rng), std::cout) && passed;
            if (*imp) print_summary(t, std::cout);
            std::cout << (passed ? "verify: PASS" : "verify: FAIL") << "\n";
            return passed ? ok : verification_failed;
        }
        if (*embed) {
            Tower t = load_tower(in_path);
            if (!random_element && element_path.empty())
                throw Error(Errc::invalid_parameter, "embed needs --element or --random");
            const LevelElement a = random_element ? t.random(from_level, rng)
                                                  : LevelElement{from_level, read_element(t.field(), element_path)};
            if (a.value.size() > t.degree(from_level))
                throw Error(Errc::invalid_parameter, "element degree exceeds the source level");
            LevelElement b = to_level >= from_level ? t.embed(a, to_level) : t.project(a, to_level);
            write_output(out_path, coefficients_line(b.value) + "\n");
            return ok;
        }
        if (*bench) {
            BenchConfig cfg;
            cfg.p = p;
            cfg.ell = ell;
            cfg.strategy = strategy_flag(strategy);
            cfg.levels = levels;
            cfg.first_level = first_level;
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.jobs = jobs;
            cfg.ops = ops;
            cfg.baseline_max_level = baseline_max;
            {
                // Rejects bad parameters before any timing starts.
                Rng probe(seed);
                Tower::create(PrimeField(p), ell, cfg.strategy, probe);
            }
            std::ostringstream csv;
            write_bench_csv(csv, run_bench(cfg));
            write_output(csv_path, csv.str());
            return ok;
        }
        if (*exp) {
            Tower t = load_tower(in_path);
            if (export_levels) t.level(*export_levels);
            write_output(out_path, export_tower(t));
            return ok;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return verification_failed;
    }
    return ok;
}
