#include <pybind11/pybind11.h>

#include "gptlab/report.hpp"

namespace py = pybind11;
using namespace gptlab;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null:
            return py::none();
        case nlohmann::json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::json::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default:
            throw std::runtime_error("unsupported JSON value");
    }
}

template <class B>
nlohmann::json space_json(const StateSpace<B>& s) {
    return {{"name", s.name},
            {"dimension", s.dim},
            {"backend", B::is_exact ? "exact" : "float"},
            {"unit", detail::vec_json<B>(s.unit)},
            {"vertices", detail::mat_json<B>(s.vertices)}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Workbench for polytopal state spaces: symmetry groups, bit symmetry, "
              "self-duality, maximal tensor products, and CHSH optimization.";

    py::register_exception<Error>(m, "GptlabError", PyExc_RuntimeError);
    py::register_exception<BudgetExceeded>(m, "BudgetError", PyExc_RuntimeError);

    m.def(
        "analyze",
        [](const std::string& spec, double tolerance, int jobs) {
            return json_to_py(std::visit(
                [&](const auto& s) { return analysis_report(s, jobs); },
                resolve_space(spec, tolerance)));
        },
        py::arg("spec"), py::arg("tolerance") = 1e-9, py::arg("jobs") = 1,
        "Full analysis report for a catalog spec or state-space file.");

    m.def(
        "tensor",
        [](const std::string& spec_a, const std::string& spec_b, bool classify, bool chsh,
           bool check_theorem2, int budget, double tolerance, int jobs) {
            AnySpace a = resolve_space(spec_a, tolerance);
            AnySpace b = resolve_space(spec_b, tolerance);
            if (a.index() != b.index()) {  // mixed backends fall back to float
                if (auto* e = std::get_if<StateSpace<Exact>>(&a)) a = to_approx(*e, tolerance);
                if (auto* e = std::get_if<StateSpace<Exact>>(&b)) b = to_approx(*e, tolerance);
            }
            return json_to_py(std::visit(
                [&](const auto& fa) {
                    const auto& fb = std::get<std::decay_t<decltype(fa)>>(b);
                    return tensor_report(fa, fb, classify, chsh, check_theorem2, budget, 30, jobs);
                },
                a));
        },
        py::arg("spec_a"), py::arg("spec_b"), py::arg("classify") = true, py::arg("chsh") = true,
        py::arg("check_theorem2") = false, py::arg("budget") = 16, py::arg("tolerance") = 1e-9,
        py::arg("jobs") = 1, "Maximal tensor product report for two state spaces.");

    m.def(
        "distinguish",
        [](const std::string& spec, int i, int j, double tolerance) {
            return json_to_py(std::visit(
                [&](const auto& s) { return distinguish_report(s, i, j); },
                resolve_space(spec, tolerance)));
        },
        py::arg("spec"), py::arg("i"), py::arg("j"), py::arg("tolerance") = 1e-9,
        "Perfect distinguishability of two pure states, with the witness effect.");

    m.def(
        "catalog", [] { return json_to_py(catalog_report()); },
        "Built-in state-space catalog.");

    m.def(
        "space_info",
        [](const std::string& spec, double tolerance) {
            return json_to_py(std::visit(
                [](const auto& s) { return space_json(s); }, resolve_space(spec, tolerance)));
        },
        py::arg("spec"), py::arg("tolerance") = 1e-9,
        "Name, dimension, backend, unit, and vertex list of a state space.");
}
