// ============================================================================
// modalk/bench.hpp — lower-bound formula families and size measurement
// ============================================================================

#ifndef MODALK_BENCH_HPP
#define MODALK_BENCH_HPP

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "modalk/formula.hpp"

namespace modalk {

struct BenchRow {
    int n = 0;
    std::string method;
    std::size_t size_string = 0;  // of the nabla-expanded interpolant
    std::size_t size_dag = 0;
    double millis = 0.0;
    bool verified = false;
    bool timed_out = false;
};

// The family with letters {p1..pn, s, q1..qn}:
//   phi_n  = <>s & /\_i ((p_i -> [](s -> p_i)) & (~p_i -> [](s -> ~p_i)))
//   psi_n  = (/\_i ((p_i -> []q_i) & (~p_i -> []~q_i))) -> <> /\_i (p_i <-> q_i)
//   chi_n  = \/_{X subseteq {1..n}} (tau_X & <>tau_X)
// phi_n and psi_n grow polynomially while every interpolant of the pair has
// DAG-size at least 2^n.  Rejects n = 0.
std::tuple<Formula, Formula, Formula> lower_bound_family(int n);

// Nested non-contingency: []p | []~p, boxed-and-negated at each level; its
// string size is 14 * 2^n - 6 while the DAG grows by 4 per level.
Formula nested_box_family(int n);

inline const char* const kBenchMethods[] = {"nabla", "automata", "quasimodel", "sequent"};

// One row per (n, method): compute the interpolant, verify it, record sizes
// and wall time.  Rows exceeding timeout_ms are flagged, not dropped.  A
// verified row with DAG-size below 2^n would contradict the lower bound and
// raises an error.
std::vector<BenchRow> run_bench(int n_max, const std::vector<std::string>& methods,
                                std::optional<double> timeout_ms = std::nullopt);

std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

}  // namespace modalk

#endif  // MODALK_BENCH_HPP
