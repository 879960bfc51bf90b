#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "morseopt/report.hpp"
#include "morseopt/version.hpp"

namespace py = pybind11;

namespace {

using namespace morseopt;
using nlohmann::json;

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

ToolConfig make_config(std::uint64_t seed, const std::string& order, double gap_tol) {
    ToolConfig config;
    config.variety().seed = seed;
    config.order = MonomialOrder::from_name(order);
    config.relax.sdp.gap_tol = gap_tol;
    config.relax.limits = GroebnerLimits::from_env();
    return config;
}

Polynomial parse_arg(const std::string& text, std::optional<std::size_t> nvars) {
    return parse_polynomial(text, nvars);
}

}  // namespace

PYBIND11_MODULE(morseopt, m) {
    m.doc() = "Morse / radicality certificates and gradient SOS relaxations for polynomials";
    m.attr("__version__") = kToolVersion;

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init([](const std::string& text, std::optional<std::size_t> nvars) {
                 return parse_arg(text, nvars);
             }),
             py::arg("text"), py::arg("nvars") = std::nullopt)
        .def_property_readonly("nvars", &Polynomial::nvars)
        .def_property_readonly("degree",
                               [](const Polynomial& p) -> py::object {
                                   const auto d = p.degree();
                                   if (!d) return py::none();
                                   return py::int_(*d);
                               })
        .def_property_readonly("num_terms", &Polynomial::num_terms)
        .def("__str__", &Polynomial::to_string)
        .def("__repr__",
             [](const Polynomial& p) { return "Polynomial(\"" + p.to_string() + "\")"; })
        .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
        .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
        .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
        .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
        .def("derivative", &Polynomial::derivative, py::arg("var"))
        .def("gradient", [](const Polynomial& p) { return gradient(p); })
        .def(
            "evaluate",
            [](const Polynomial& p, const std::vector<Complex>& at) {
                Point q(static_cast<Eigen::Index>(at.size()));
                for (std::size_t i = 0; i < at.size(); ++i) q(static_cast<Eigen::Index>(i)) = at[i];
                return p.evaluate(q);
            },
            py::arg("point"))
        .def("hessian_at", [](const Polynomial& p, const std::vector<Complex>& at) {
            Point q(static_cast<Eigen::Index>(at.size()));
            for (std::size_t i = 0; i < at.size(); ++i) q(static_cast<Eigen::Index>(i)) = at[i];
            const Eigen::MatrixXcd h = hessian_at(p, q);
            std::vector<std::vector<Complex>> out(static_cast<std::size_t>(h.rows()));
            for (Eigen::Index r = 0; r < h.rows(); ++r)
                for (Eigen::Index c = 0; c < h.cols(); ++c)
                    out[static_cast<std::size_t>(r)].push_back(h(r, c));
            return out;
        });

    m.def(
        "parse", &parse_arg, py::arg("text"), py::arg("nvars") = std::nullopt,
        "Parse a polynomial in the x1,...,xn grammar; nvars is inferred when omitted.");

    m.def(
        "total_milnor_number",
        [](const std::string& text, std::optional<std::size_t> nvars) -> py::object {
            const auto mu = total_milnor_number(parse_arg(text, nvars));
            if (!mu) return py::none();
            return py::int_(*mu);
        },
        py::arg("polynomial"), py::arg("nvars") = std::nullopt,
        "dim C[X]/I_grad(f); None encodes an infinite (positive-dimensional) answer.");

    m.def(
        "is_convenient_support",
        [](const std::string& text, std::optional<std::size_t> nvars) {
            const auto cs = is_convenient_support(parse_arg(text, nvars));
            py::list witnesses;
            for (const auto& w : cs.axis_witness) {
                if (w)
                    witnesses.append(py::cast(w->exponents()));
                else
                    witnesses.append(py::none());
            }
            return py::make_tuple(cs.convenient, witnesses);
        },
        py::arg("polynomial"), py::arg("nvars") = std::nullopt);

    m.def(
        "analyze",
        [](const std::string& text, std::optional<std::size_t> nvars, std::uint64_t seed,
           const std::string& order, double gap_tol) {
            const ToolConfig config = make_config(seed, order, gap_tol);
            const Polynomial f = parse_arg(text, nvars);
            const AnalysisOutcome outcome = run_analysis(f, config);
            json j = report_skeleton("analyze", f, config);
            j["analysis"] = analysis_json(outcome);
            return json_to_py(j);
        },
        py::arg("polynomial"), py::arg("nvars") = std::nullopt, py::arg("seed") = 1729,
        py::arg("order") = "grevlex", py::arg("gap_tol") = 1e-8,
        "Critical variety, Morse certificate and radicality report as a dict.");

    m.def(
        "optimize",
        [](const std::string& text, std::optional<unsigned> nmin, std::optional<unsigned> nmax,
           std::optional<std::size_t> nvars, std::uint64_t seed, double gap_tol) {
            const ToolConfig config = make_config(seed, "grevlex", gap_tol);
            const Polynomial f = parse_arg(text, nvars);
            const AnalysisOutcome outcome = run_analysis(f, config);
            const unsigned lo = nmin.value_or(default_sweep_min(f));
            const unsigned hi = nmax.value_or(lo + 3);
            const ConvergenceTrace trace =
                run_convergence_sweep(f, lo, hi, config.relax, &outcome.points);
            json j = report_skeleton("optimize", f, config);
            j["analysis"] = analysis_json(outcome);
            j["optimization"] = trace_json(trace);
            j["optimization"]["n_min"] = lo;
            j["optimization"]["n_max"] = hi;
            return json_to_py(j);
        },
        py::arg("polynomial"), py::arg("nmin") = std::nullopt, py::arg("nmax") = std::nullopt,
        py::arg("nvars") = std::nullopt, py::arg("seed") = 1729, py::arg("gap_tol") = 1e-8,
        "Gradient SOS relaxation sweep with certificates and the critical-value cross-check.");

    m.def(
        "certify",
        [](const std::string& f_text, const std::string& gamma,
           const std::vector<std::string>& multipliers, const std::vector<std::string>& squares,
           std::optional<std::size_t> nvars) {
            const Polynomial f = parse_arg(f_text, nvars);
            const Polynomial g = parse_polynomial(gamma, f.nvars());
            if (!g.is_constant()) throw std::invalid_argument("gamma must be a constant");
            std::vector<Polynomial> phis;
            for (const auto& s : multipliers) phis.push_back(parse_polynomial(s, f.nvars()));
            if (!phis.empty() && phis.size() != f.nvars())
                throw std::invalid_argument("expected one multiplier per variable");
            std::vector<Polynomial> sqs;
            for (const auto& s : squares) sqs.push_back(parse_polynomial(s, f.nvars()));
            const Polynomial residual = verify_identity(f, g.constant_term(), phis, sqs);
            py::dict out;
            out["residual"] = residual.to_string();
            out["exact_zero"] = residual.is_zero();
            out["max_abs_coefficient"] = residual.max_abs_coefficient();
            return out;
        },
        py::arg("polynomial"), py::arg("gamma"), py::arg("multipliers") = std::vector<std::string>{},
        py::arg("squares") = std::vector<std::string>{}, py::arg("nvars") = std::nullopt,
        "Exact re-verification of f - gamma - sum phi_i df/dx_i - sum s_j^2 == 0.");

    m.def(
        "min_eigenvalue",
        [](const std::vector<std::vector<double>>& rows) {
            const auto n = static_cast<Eigen::Index>(rows.size());
            Eigen::MatrixXd mat(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
                    throw std::invalid_argument("matrix must be square");
                for (Eigen::Index j = 0; j < n; ++j)
                    mat(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            return min_eigenvalue(mat);
        },
        py::arg("matrix"), "Smallest eigenvalue of a symmetric matrix.");

    m.def(
        "export_sdp",
        [](const std::string& text, unsigned order, std::optional<std::size_t> nvars) {
            const auto prob = build_grad_relaxation(parse_arg(text, nvars), order);
            return export_sdp_text(prob.sdp);
        },
        py::arg("polynomial"), py::arg("order"), py::arg("nvars") = std::nullopt,
        "Plain-text sparse export of the order-N relaxation SDP.");

    py::register_exception<Error>(m, "MorseOptError");
}
