// ============================================================================
// modalk_cli.cpp — command-line front end
// ============================================================================
//
// Exit codes: 0 positive result, 1 negative result (invalid / unsat /
// verification failed), 2 usage or parse error, 3 resource guard tripped.
//
// ============================================================================

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modalk/automata.hpp"
#include "modalk/bench.hpp"
#include "modalk/nabla.hpp"
#include "modalk/quasimodel.hpp"
#include "modalk/sequent.hpp"
#include "modalk/verify.hpp"

using namespace modalk;

namespace {

// formulas and models come inline or as @file references
std::string read_arg(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw Error("cannot read file '" + arg.substr(1) + "'");
    std::ostringstream os;
    os << in.rdbuf();
    std::string text = os.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

Formula parse_arg(const std::string& arg) { return parse(read_arg(arg)); }

SignatureSet parse_letters(const std::string& csv) {
    SignatureSet out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.insert(item);
    }
    return out;
}

struct Options {
    std::string format = "text";
    bool report = false;
    bool explain = false;
    std::optional<std::uint64_t> seed;  // randomizes the elimination order
    std::size_t max_types = 20;
    double timeout_ms = 0;
    int jobs = 1;
};

TypeOptions type_options(const Options& opt) {
    TypeOptions t;
    t.max_table_per_side = opt.max_types;
    t.order_seed = opt.seed;
    return t;
}

nlohmann::json formula_json(Formula f) {
    nlohmann::json j;
    j["formula"] = print(f);
    j["sig"] = sig(f).letters();
    j["size_dag"] = size_dag(f);
    if (!contains_nabla(f)) j["size_string"] = size_string(f);
    return j;
}

int cmd_parse(const std::string& text, const Options& opt) {
    Formula f = parse_arg(text);
    if (opt.format == "json") std::cout << formula_json(f).dump() << "\n";
    else std::cout << print(f) << "\n";
    return 0;
}

int cmd_nnf(const std::string& text, const Options& opt) {
    Formula f = nnf(parse_arg(text));
    if (opt.format == "json") std::cout << formula_json(f).dump() << "\n";
    else std::cout << print(f) << "\n";
    return 0;
}

int cmd_nabla_nf(const std::string& text, const Options& opt) {
    Formula f = to_nabla_nf(parse_arg(text));
    if (opt.format == "json") std::cout << formula_json(f).dump() << "\n";
    else std::cout << print(f) << "\n";
    return 0;
}

int cmd_sat(const std::string& text, const Options& opt) {
    Formula f = parse_arg(text);
    if (contains_nabla(f)) f = expand_nabla(f);
    SatResult r = satisfiable(f, type_options(opt));
    if (opt.format == "json") {
        nlohmann::json j;
        j["satisfiable"] = r.satisfiable;
        if (r.witness) j["witness"] = nlohmann::json::parse(r.witness->to_json());
        if (opt.explain) j["trace"] = nlohmann::json::parse(r.trace.to_json());
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (r.satisfiable ? "SAT" : "UNSAT") << "\n";
        if (r.satisfiable && r.witness) std::cout << r.witness->to_json() << "\n";
        if (opt.explain) std::cout << r.trace.to_json() << "\n";
    }
    return r.satisfiable ? 0 : 1;
}

int cmd_valid(const std::string& a, const std::string& b, const Options& opt) {
    Formula phi = b.empty() ? top() : parse_arg(a);
    Formula psi = b.empty() ? parse_arg(a) : parse_arg(b);
    bool valid = valid_implication(phi, psi);
    if (opt.format == "json") {
        nlohmann::json j;
        j["valid"] = valid;
        if (!valid) {
            auto cm = countermodel(phi, psi);
            if (cm) j["countermodel"] = nlohmann::json::parse(cm->to_json());
        }
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (valid ? "VALID" : "INVALID") << "\n";
    }
    return valid ? 0 : 1;
}

Formula run_method(const std::string& method, Formula phi, Formula psi, const Options& opt) {
    if (method == "nabla") return craig_via_nabla(phi, psi);
    if (method == "automata") return craig_via_automata(phi, psi);
    if (method == "sequent") return craig_via_sequent(phi, psi);
    if (method == "quasimodel") {
        TypeOptions t = type_options(opt);
        return lyndon_interpolant(phi, psi, t);
    }
    throw Error("unknown method '" + method + "'");
}

int cmd_interpolate(const std::string& method, const std::string& a, const std::string& b,
                    const Options& opt) {
    Formula phi = parse_arg(a), psi = parse_arg(b);
    if (!valid_implication(phi, psi)) {
        if (opt.format == "json") std::cout << "{\"valid\":false}\n";
        else std::cout << "INVALID implication; no interpolant\n";
        return 1;
    }
    std::vector<std::string> methods;
    if (method == "all")
        methods.assign(std::begin(kBenchMethods), std::end(kBenchMethods));
    else methods.push_back(method);

    bool all_ok = true;
    nlohmann::json out = nlohmann::json::array();
    for (const auto& m : methods) {
        Formula theta = run_method(m, phi, psi, opt);
        bool lyndon_applicable = (m == "quasimodel" || m == "sequent");
        InterpolantReport report = lyndon_applicable ? check_lyndon(theta, phi, psi)
                                                     : check_craig(theta, phi, psi);
        bool ok = lyndon_applicable ? report.all_ok() : report.craig_ok();
        all_ok = all_ok && ok;
        if (opt.format == "json") {
            nlohmann::json j;
            j["method"] = m;
            j["interpolant"] = print(theta);
            j["verified"] = ok;
            if (opt.report) j["report"] = nlohmann::json::parse(report.to_json());
            out.push_back(j);
        } else {
            std::cout << m << ": " << print(theta) << "\n";
            std::cout << "  craig: " << (report.craig_ok() ? "pass" : "FAIL");
            if (report.lyndon_ok) std::cout << ", lyndon: " << (*report.lyndon_ok ? "pass" : "FAIL");
            std::cout << "\n";
            if (opt.report) std::cout << "  " << report.to_json() << "\n";
        }
    }
    if (opt.format == "json") std::cout << out.dump() << "\n";
    return all_ok ? 0 : 1;
}

int cmd_uniform(const std::string& keep_csv, const std::string& text, const Options& opt) {
    Formula f = parse_arg(text);
    Formula u = uniform_interpolant(f, parse_letters(keep_csv));
    if (opt.format == "json") std::cout << formula_json(u).dump() << "\n";
    else std::cout << print(u) << "\n";
    return 0;
}

int cmd_check_model(const std::string& model_arg, const std::string& text, const Options& opt) {
    PointedModel pm = PointedModel::from_json(read_arg("@" + model_arg));
    Formula f = parse_arg(text);
    bool holds = eval(pm.model, pm.point, f);
    if (opt.format == "json") std::cout << "{\"holds\":" << (holds ? "true" : "false") << "}\n";
    else std::cout << (holds ? "true" : "false") << "\n";
    return holds ? 0 : 1;
}

int cmd_bisim(const std::string& m1_arg, const std::string& m2_arg, const std::string& sig_csv,
              const Options& opt) {
    std::string j1 = read_arg("@" + m1_arg), j2 = read_arg("@" + m2_arg);
    KripkeModel m1 = KripkeModel::from_json(j1);
    KripkeModel m2 = KripkeModel::from_json(j2);
    SignatureSet letters = sig_csv.empty()
                               ? set_intersection(m1.signature(), m2.signature())
                               : parse_letters(sig_csv);
    BisimRelation z = largest_bisimulation(m1, m2, letters);

    std::optional<bool> points_related;
    auto p1 = nlohmann::json::parse(j1), p2 = nlohmann::json::parse(j2);
    if (p1.contains("point") && p2.contains("point"))
        points_related = z.contains(p1["point"].get<std::string>(),
                                    p2["point"].get<std::string>());

    if (opt.format == "json") {
        nlohmann::json j;
        auto pairs = nlohmann::json::array();
        for (const auto& [a, b] : z.pairs) pairs.push_back({a, b});
        j["pairs"] = pairs;
        j["signature"] = letters.letters();
        if (points_related) j["points_bisimilar"] = *points_related;
        std::cout << j.dump() << "\n";
    } else {
        for (const auto& [a, b] : z.pairs) std::cout << a << " ~ " << b << "\n";
        if (points_related)
            std::cout << "points " << (*points_related ? "bisimilar" : "not bisimilar") << "\n";
    }
    return points_related.value_or(true) ? 0 : 1;
}

int cmd_prove(const std::string& text, const Options& opt) {
    std::string input = read_arg(text);
    auto arrow = input.find("=>");
    if (arrow == std::string::npos) throw ParseError("expected '=>' in sequent", 0, {"'=>'"});
    auto split_formulas = [](const std::string& side) {
        std::vector<Formula> out;
        std::string trimmed;
        int depth = 0;
        for (char c : side) {
            if (c == '(' || c == '{') ++depth;
            if (c == ')' || c == '}') --depth;
            if (c == ',' && depth == 0) {
                if (trimmed.find_first_not_of(" \t") != std::string::npos)
                    out.push_back(desugar_diamonds(parse(trimmed)));
                trimmed.clear();
            } else {
                trimmed += c;
            }
        }
        if (trimmed.find_first_not_of(" \t") != std::string::npos)
            out.push_back(desugar_diamonds(parse(trimmed)));
        return out;
    };
    Sequent s = Sequent::make(split_formulas(input.substr(0, arrow)),
                              split_formulas(input.substr(arrow + 2)));
    auto proof = prove(s);
    if (opt.format == "json") {
        nlohmann::json j;
        j["provable"] = proof.has_value();
        if (proof && opt.explain) j["proof"] = render_proof(**proof);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (proof ? "PROVABLE" : "NOT PROVABLE") << "\n";
        if (proof && opt.explain) std::cout << render_proof(**proof);
    }
    return proof ? 0 : 1;
}

int cmd_bench(int n, const std::string& method, const Options& opt) {
    std::vector<std::string> methods;
    if (method == "all")
        methods.assign(std::begin(kBenchMethods), std::end(kBenchMethods));
    else methods.push_back(method);

    std::optional<double> timeout;
    if (opt.timeout_ms > 0) timeout = opt.timeout_ms;

    std::vector<BenchRow> rows;
    if (opt.jobs > 1) {
        // rows are independent; formula interning is safe to share
        std::vector<std::future<std::vector<BenchRow>>> futures;
        for (const auto& m : methods)
            futures.push_back(std::async(std::launch::async, [&, m] {
                return run_bench(n, {m}, timeout);
            }));
        for (auto& fut : futures) {
            auto part = fut.get();
            rows.insert(rows.end(), part.begin(), part.end());
        }
        std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
            return std::tie(a.n, a.method) < std::tie(b.n, b.method);
        });
    } else {
        rows = run_bench(n, methods, timeout);
    }

    if (opt.format == "json") std::cout << bench_json(rows) << "\n";
    else if (opt.format == "csv") std::cout << bench_csv(rows);
    else {
        for (const auto& r : rows)
            std::cout << "n=" << r.n << " method=" << r.method << " size_string=" << r.size_string
                      << " size_dag=" << r.size_dag << " millis=" << r.millis
                      << " verified=" << (r.verified ? "yes" : "no") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modal-K interpolation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Options opt;
    app.add_option("--format", opt.format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_flag("--report", opt.report, "Include the full verification report");
    app.add_flag("--explain", opt.explain, "Include traces / proof trees");
    std::uint64_t seed_value = 0;
    auto* seed_opt =
        app.add_option("--seed", seed_value, "Randomize the type-elimination order");
    app.add_option("--max-types", opt.max_types,
                   "Subformula-table guard per side for type elimination");
    app.add_option("--timeout-ms", opt.timeout_ms, "Per-row soft timeout for bench");
    app.add_option("--jobs", opt.jobs, "Parallel workers for bench sweeps");

    std::string f1, f2, method = "all", keep, sig_csv;
    int bench_n = 3;

    auto* c_parse = app.add_subcommand("parse", "Parse and reprint a formula");
    c_parse->add_option("formula", f1)->required();
    auto* c_nnf = app.add_subcommand("nnf", "Negation normal form");
    c_nnf->add_option("formula", f1)->required();
    auto* c_nabla = app.add_subcommand("nabla-nf", "Nabla normal form");
    c_nabla->add_option("formula", f1)->required();
    auto* c_sat = app.add_subcommand("sat", "Satisfiability via type elimination");
    c_sat->add_option("formula", f1)->required();
    auto* c_valid = app.add_subcommand("valid", "Validity of a formula or implication");
    c_valid->add_option("formula", f1)->required();
    c_valid->add_option("consequent", f2);
    auto* c_interp = app.add_subcommand("interpolate", "Craig/Lyndon interpolation");
    c_interp->add_option("--method", method, "nabla|automata|quasimodel|sequent|all")
        ->check(CLI::IsMember({"nabla", "automata", "quasimodel", "sequent", "all"}));
    c_interp->add_option("antecedent", f1)->required();
    c_interp->add_option("consequent", f2)->required();
    auto* c_uniform = app.add_subcommand("uniform", "Uniform interpolant");
    c_uniform->add_option("--keep", keep, "Comma-separated letters to keep")->required();
    c_uniform->add_option("formula", f1)->required();
    auto* c_check = app.add_subcommand("check-model", "Evaluate a formula in a pointed model");
    c_check->add_option("model", f2, "Model JSON file")->required();
    c_check->add_option("formula", f1)->required();
    auto* c_bisim = app.add_subcommand("bisim", "Largest bisimulation between two models");
    c_bisim->add_option("model1", f1)->required();
    c_bisim->add_option("model2", f2)->required();
    c_bisim->add_option("--sig", sig_csv, "Comma-separated signature");
    auto* c_prove = app.add_subcommand("prove", "G3K proof search for a sequent");
    c_prove->add_option("sequent", f1, "e.g. \"[]p, []q => [](p & q)\"")->required();
    auto* c_bench = app.add_subcommand("bench", "Benchmarks");
    auto* c_lower = c_bench->add_subcommand("lower-bound", "Lower-bound family sweep");
    c_lower->add_option("--n", bench_n, "Largest family index");
    c_lower->add_option("--method", method, "nabla|automata|quasimodel|sequent|all")
        ->check(CLI::IsMember({"nabla", "automata", "quasimodel", "sequent", "all"}));

    try {
        app.parse(argc, argv);
        if (!seed_opt->empty()) opt.seed = seed_value;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_parse->parsed()) return cmd_parse(f1, opt);
        if (c_nnf->parsed()) return cmd_nnf(f1, opt);
        if (c_nabla->parsed()) return cmd_nabla_nf(f1, opt);
        if (c_sat->parsed()) return cmd_sat(f1, opt);
        if (c_valid->parsed()) return cmd_valid(f1, f2, opt);
        if (c_interp->parsed()) return cmd_interpolate(method, f1, f2, opt);
        if (c_uniform->parsed()) return cmd_uniform(keep, f1, opt);
        if (c_check->parsed()) return cmd_check_model(f2, f1, opt);
        if (c_bisim->parsed()) return cmd_bisim(f1, f2, sig_csv, opt);
        if (c_prove->parsed()) return cmd_prove(f1, opt);
        if (c_bench->parsed()) {
            if (!c_lower->parsed()) {
                std::cerr << "bench requires the lower-bound subcommand\n";
                return 2;
            }
            return cmd_bench(bench_n, method, opt);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
