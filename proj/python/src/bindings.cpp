#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pearcey/acceptance.hpp"
#include "pearcey/asymptotics.hpp"
#include "pearcey/chf.hpp"
#include "pearcey/errors.hpp"
#include "pearcey/fredholm.hpp"
#include "pearcey/hamiltonian.hpp"
#include "pearcey/kernel.hpp"
#include "pearcey/pearcey_fn.hpp"

namespace py = pybind11;
using namespace pearcey;

namespace {

py::dict det_dict(const DetResult& d) {
    py::dict r;
    r["f"] = d.f;
    r["order"] = d.order;
    r["err_est"] = d.err_est;
    r["sign_ok"] = d.sign_ok;
    return r;
}

py::tuple values_tuple(const PearceyValues& v) { return py::make_tuple(v.v0, v.v1, v.v2); }

}  // namespace

PYBIND11_MODULE(_pearcey, m) {
    m.doc() = "Pearcey kernel, thinned gap probabilities and the associated Hamiltonian system";

    static py::exception<Error> exc(m, "PearceyError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(exc.ptr(), (std::string(e.kind_name()) + ": " + e.what()).c_str());
        }
    });

    m.def("beta_of_gamma", [](double g) { return beta_of_gamma(g); }, py::arg("gamma"));

    m.def("pearcey_p", [](double x, double rho) { return values_tuple(pearcey_p(x, rho)); },
          py::arg("x"), py::arg("rho") = 0.0, "(P, P', P'') at real x");
    m.def("pearcey_q", [](double y, double rho) { return values_tuple(pearcey_q(y, rho)); },
          py::arg("y"), py::arg("rho") = 0.0, "(Q, Q', Q'') at real y");

    m.def("kernel", [](double x, double y, double rho, const std::string& oracle) {
        if (oracle == "rational") return kernel_rational(x, y, rho);
        if (oracle == "integral") return kernel_integral(x, y, rho);
        if (oracle == "rh") return kernel_rh(x, y, rho);
        throw py::value_error("oracle must be rational, integral or rh");
    }, py::arg("x"), py::arg("y"), py::arg("rho") = 0.0, py::arg("oracle") = "rational");
    m.def("kernel_diagonal", &kernel_diagonal, py::arg("x"), py::arg("rho") = 0.0);

    m.def("logdet", [](double s, double gamma, double rho, int n) {
        return det_dict(fredholm_logdet_general(s, gamma, rho, n));
    }, py::arg("s"), py::arg("gamma"), py::arg("rho") = 0.0, py::arg("n") = 128);
    m.def("logdet_converged", [](double s, double gamma, double rho, double tol) {
        return det_dict(logdet_converged_general(s, gamma, rho, tol));
    }, py::arg("s"), py::arg("gamma"), py::arg("rho") = 0.0, py::arg("tol") = 1e-11);
    m.def("moments", [](double s, double rho, int n, const std::string& method) {
        const Moments mo = method == "mgf" ? moments_mgf(s, rho, n) : moments_trace(s, rho, n);
        return py::make_tuple(mo.mean, mo.variance);
    }, py::arg("s"), py::arg("rho") = 0.0, py::arg("n") = 128, py::arg("method") = "trace");

    m.def("f_large_gap", [](double s, double gamma, double rho) {
        const GapAsymptotics a = f_large_gap(s, {gamma, rho});
        py::dict r;
        r["leading"] = a.leading;
        r["subleading"] = a.subleading;
        r["log_term"] = a.log_term;
        r["constant"] = a.constant;
        r["total"] = a.total;
        return r;
    }, py::arg("s"), py::arg("gamma"), py::arg("rho") = 0.0);
    m.def("f_gamma1", &f_gamma1, py::arg("s"), py::arg("rho"), py::arg("C"));
    m.def("h_large_s", [](double s, double gamma, double rho) { return h_large_s(s, {gamma, rho}); },
          py::arg("s"), py::arg("gamma"), py::arg("rho") = 0.0);
    m.def("h_gamma1", &h_gamma1, py::arg("s"), py::arg("rho") = 0.0);
    m.def("counting_stats", [](double s, double rho) {
        const CountingStats c = counting_stats(s, rho);
        return py::make_tuple(c.mu, c.sigma2, c.var_const);
    }, py::arg("s"), py::arg("rho") = 0.0, "(mu, sigma^2, variance constant)");
    m.def("clt_distance", [](double s, double rho) { return clt_distance(s, rho, default_clt_grid()); },
          py::arg("s"), py::arg("rho") = 0.0);

    m.def("hamiltonian_trajectory", [](double s0, double s_end, double gamma, double rho) {
        const Trajectory t = special_trajectory(s0, s_end, {gamma, rho});
        std::vector<double> s, h;
        for (const auto& x : t.samples) {
            s.push_back(x.s);
            h.push_back(x.h.real());
        }
        py::dict r;
        r["s"] = s;
        r["H"] = h;
        r["max_constraint_drift"] = t.max_constraint_drift;
        return r;
    }, py::arg("s0"), py::arg("s_end"), py::arg("gamma"), py::arg("rho") = 0.0);

    m.def("chf_verify", [](double beta_im) {
        const ChfReport r = chf_verify(cplx(0.0, beta_im));
        py::dict d;
        d["max_ray_residual"] = r.max_ray_residual;
        d["det_variation"] = r.det_variation;
        d["infinity_upper"] = r.infinity_upper;
        d["infinity_lower"] = r.infinity_lower;
        d["upsilon0_err"] = r.origin.upsilon0_err;
        d["upsilon1_21_err"] = r.origin.upsilon1_21_err;
        return d;
    }, py::arg("beta_im"));

    m.def("run_acceptance", [](const std::vector<int>& ids) {
        std::vector<CriterionResult> res;
        {
            py::gil_scoped_release nogil;
            res = run_acceptance(ids);
        }
        py::list out;
        for (const auto& r : res) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            d["line"] = format_result_line(r);
            out.append(d);
        }
        return out;
    }, py::arg("ids") = std::vector<int>{});
}
