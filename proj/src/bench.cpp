// ============================================================================
// bench.cpp — the lower-bound family and the per-method measurement loop
// ============================================================================

#include "modalk/bench.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "modalk/automata.hpp"
#include "modalk/nabla.hpp"
#include "modalk/quasimodel.hpp"
#include "modalk/sequent.hpp"
#include "modalk/verify.hpp"

namespace modalk {

std::tuple<Formula, Formula, Formula> lower_bound_family(int n) {
    if (n < 1) throw Error("lower_bound_family: n must be at least 1");

    auto p = [](int i) { return prop("p" + std::to_string(i)); };
    auto q = [](int i) { return prop("q" + std::to_string(i)); };
    Formula s = prop("s");

    Formula phi = diamond(s);
    for (int i = 1; i <= n; ++i) {
        phi = conj(phi, implies(p(i), box(implies(s, p(i)))));
        phi = conj(phi, implies(neg(p(i)), box(implies(s, neg(p(i))))));
    }

    Formula transfer;
    for (int i = 1; i <= n; ++i) {
        Formula step = conj(implies(p(i), box(q(i))), implies(neg(p(i)), box(neg(q(i)))));
        transfer = (i == 1) ? step : conj(transfer, step);
    }
    Formula agree;
    for (int i = 1; i <= n; ++i) {
        Formula both = conj(implies(p(i), q(i)), implies(q(i), p(i)));
        agree = (i == 1) ? both : conj(agree, both);
    }
    Formula psi = implies(transfer, diamond(agree));

    Formula chi;
    for (std::uint32_t k = 0; k < (1u << n); ++k) {
        std::uint32_t mask = (1u << n) - 1 - k;  // all-positive block first
        Formula tau;
        for (int i = 1; i <= n; ++i) {
            Formula lit = ((mask >> (i - 1)) & 1u) ? p(i) : neg(p(i));
            tau = (i == 1) ? lit : conj(tau, lit);
        }
        Formula disjunct = conj(tau, diamond(tau));
        chi = (k == 0) ? disjunct : disj(chi, disjunct);
    }

    return {phi, psi, chi};
}

Formula nested_box_family(int n) {
    Formula f = disj(box(prop("p")), box(neg(prop("p"))));
    for (int i = 0; i < n; ++i) f = disj(box(f), box(neg(f)));
    return f;
}

namespace {

Formula interpolant_by_method(const std::string& method, Formula phi, Formula psi) {
    if (method == "nabla") return craig_via_nabla(phi, psi);
    if (method == "automata") return craig_via_automata(phi, psi);
    if (method == "sequent") return craig_via_sequent(phi, psi);
    if (method == "quasimodel") {
        TypeOptions opts;
        opts.space = TypeSpace::Saturated;  // the full space stops scaling past n=1
        opts.max_table_per_side = 128;
        return lyndon_interpolant(phi, psi, opts);
    }
    throw Error("run_bench: unknown method '" + method + "'");
}

}  // namespace

std::vector<BenchRow> run_bench(int n_max, const std::vector<std::string>& methods,
                                std::optional<double> timeout_ms) {
    std::vector<BenchRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        auto [phi, psi, chi] = lower_bound_family(n);
        (void)chi;
        for (const auto& method : methods) {
            BenchRow row;
            row.n = n;
            row.method = method;
            auto start = std::chrono::steady_clock::now();
            Formula theta = interpolant_by_method(method, phi, psi);
            InterpolantReport report = check_craig(theta, phi, psi);
            row.millis = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
            row.size_string = report.theta_size_string;
            row.size_dag = report.theta_size_dag;
            row.verified = report.craig_ok();
            row.timed_out = timeout_ms && row.millis > *timeout_ms;
            if (row.verified && row.size_dag < (1ull << n))
                throw Error("run_bench: a verified interpolant undercut the 2^n DAG bound");
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "n,method,size_string,size_dag,millis,verified\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.method << ',' << r.size_string << ',' << r.size_dag << ','
           << r.millis << ',' << (r.verified ? "true" : "false") << '\n';
    return os.str();
}

std::string bench_json(const std::vector<BenchRow>& rows) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
        j.push_back({{"n", r.n},
                     {"method", r.method},
                     {"size_string", r.size_string},
                     {"size_dag", r.size_dag},
                     {"millis", r.millis},
                     {"verified", r.verified},
                     {"timed_out", r.timed_out}});
    return j.dump();
}

}  // namespace modalk
