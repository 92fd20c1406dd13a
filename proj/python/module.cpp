// ============================================================================
// module.cpp — pybind11 bindings for the main operations
// ============================================================================

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modalk/automata.hpp"
#include "modalk/bench.hpp"
#include "modalk/nabla.hpp"
#include "modalk/quasimodel.hpp"
#include "modalk/sequent.hpp"
#include "modalk/verify.hpp"

namespace py = pybind11;
using namespace modalk;

namespace {

SignatureSet to_sigset(const std::vector<std::string>& letters) {
    SignatureSet out;
    for (const auto& ell : letters) out.insert(ell);
    return out;
}

Formula interpolate(const std::string& method, Formula phi, Formula psi) {
    if (method == "nabla") return craig_via_nabla(phi, psi);
    if (method == "automata") return craig_via_automata(phi, psi);
    if (method == "sequent") return craig_via_sequent(phi, psi);
    if (method == "quasimodel") return lyndon_interpolant(phi, psi);
    throw Error("unknown method '" + method + "'");
}

py::dict report_to_dict(const InterpolantReport& r) {
    py::dict d;
    d["left_valid"] = r.left_valid;
    d["right_valid"] = r.right_valid;
    d["signature_ok"] = r.signature_ok;
    d["craig_ok"] = r.craig_ok();
    if (r.lyndon_ok) d["lyndon_ok"] = *r.lyndon_ok;
    d["size_string"] = r.theta_size_string;
    d["size_dag"] = r.theta_size_dag;
    if (r.countermodel) d["countermodel"] = r.countermodel->to_json();
    return d;
}

}  // namespace

PYBIND11_MODULE(_modalk, m) {
    m.doc() = "Craig/Lyndon/uniform interpolation for the modal logic K";

    py::register_exception<GuardError>(m, "GuardError");
    static py::exception<Error> error_exc(m, "ModalError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const GuardError&) {
            throw;  // handled by the registered type above
        } catch (const Error& e) {
            py::set_error(error_exc, e.what());
        }
    });

    py::class_<Formula>(m, "Formula")
        .def("__str__", [](Formula f) { return print(f); })
        .def("__repr__", [](Formula f) { return "Formula(" + print(f) + ")"; })
        .def("__eq__", [](Formula a, Formula b) { return a == b; })
        .def("__hash__", [](Formula f) { return f.id(); });

    m.def("parse", &parse, "Parse a formula from text");
    m.def("pretty", &print, "Render a formula as text");
    m.def("nnf", &nnf);
    m.def("expand_nabla", &expand_nabla);
    m.def("modal_depth", &modal_depth);
    m.def("size_string", &size_string);
    m.def("size_dag", &size_dag);
    m.def("sig", [](Formula f) { return sig(f).letters(); });
    m.def("polarity", [](Formula f) {
        PolarityReport r = polarity(f);
        return py::make_tuple(r.positive.letters(), r.negative.letters());
    });
    m.def("subformulas", [](Formula f) { return subf(f); });

    m.def("to_nabla_nf", &to_nabla_nf);
    m.def("uniform_interpolant", [](Formula f, const std::vector<std::string>& keep) {
        return uniform_interpolant(f, to_sigset(keep));
    });

    m.def("satisfiable", [](Formula f) {
        Formula g = contains_nabla(f) ? expand_nabla(f) : f;
        SatResult r = satisfiable(g);
        return py::make_tuple(r.satisfiable,
                              r.witness ? py::object(py::str(r.witness->to_json()))
                                        : py::object(py::none()));
    });
    m.def("valid_implication", &valid_implication);
    m.def("equivalent", &equivalent);

    m.def("interpolate", &interpolate, py::arg("method"), py::arg("phi"), py::arg("psi"),
          "method: nabla | automata | quasimodel | sequent");
    m.def("check_craig", [](Formula theta, Formula phi, Formula psi) {
        return report_to_dict(check_craig(theta, phi, psi));
    });
    m.def("check_lyndon", [](Formula theta, Formula phi, Formula psi) {
        return report_to_dict(check_lyndon(theta, phi, psi));
    });

    m.def("eval_model", [](const std::string& model_json, Formula f) {
        PointedModel pm = PointedModel::from_json(model_json);
        return eval(pm.model, pm.point, f);
    });
    m.def("largest_bisimulation",
          [](const std::string& m1, const std::string& m2, const std::vector<std::string>& sig) {
              BisimRelation z = largest_bisimulation(KripkeModel::from_json(m1),
                                                     KripkeModel::from_json(m2), to_sigset(sig));
              return z.pairs;
          });

    m.def("lower_bound_family", [](int n) {
        auto [phi, psi, chi] = lower_bound_family(n);
        return py::make_tuple(phi, psi, chi);
    });
    m.def("run_bench", [](int n_max, const std::vector<std::string>& methods) {
        return bench_json(run_bench(n_max, methods));
    });

    m.def("prove_sequent", [](const std::vector<std::string>& ant,
                              const std::vector<std::string>& suc) {
        std::vector<Formula> a, s;
        for (const auto& t : ant) a.push_back(desugar_diamonds(parse(t)));
        for (const auto& t : suc) s.push_back(desugar_diamonds(parse(t)));
        auto proof = prove(Sequent::make(std::move(a), std::move(s)));
        return py::make_tuple(proof.has_value(),
                              proof ? py::object(py::str(render_proof(**proof)))
                                    : py::object(py::none()));
    });
}
