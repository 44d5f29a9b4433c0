#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "combmap/capacity.hpp"
#include "combmap/closed_forms.hpp"
#include "combmap/errors.hpp"
#include "combmap/estimates.hpp"
#include "combmap/quantities.hpp"

namespace py = pybind11;
using namespace combmap;

namespace {

SolverOptions options_from_kwargs(double residual_tol, int max_newton_iters,
                                  int continuation_steps, int samples) {
    SolverOptions opts;
    opts.residual_tol = residual_tol;
    opts.max_newton_iters = max_newton_iters;
    opts.continuation_steps = continuation_steps;
    opts.initial_samples = samples;
    return opts;
}

py::dict quantities_to_dict(const QuantityReport& rep) {
    py::dict q;
    q["l"] = rep.l;
    q["h"] = rep.h_computed;
    q["u"] = rep.u_recovered;
    q["A"] = rep.A;
    q["J"] = rep.J;
    q["mu_plus_abs"] = rep.mu_plus_abs;
    q["mu_minus_abs"] = rep.mu_minus_abs;
    q["nu"] = rep.nu;
    q["L"] = rep.L;
    q["e"] = rep.e;
    q["d"] = rep.d;
    q["Q0"] = rep.Q0;
    q["I_D"] = rep.I_D;
    if (rep.s_defined) q["s"] = rep.s;
    else q["s"] = py::none();
    return q;
}

py::dict check_to_dict(const CheckResult& r) {
    py::dict d;
    d["checkId"] = r.id;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["margin"] = r.margin;
    d["passed"] = r.passed;
    d["applicable"] = r.applicable;
    d["instance"] = r.instance;
    return d;
}

} // namespace

PYBIND11_MODULE(_combmap, m) {
    m.doc() = "comb conformal mappings for finite vertical-slit configurations";

    py::register_exception<Error>(m, "CombmapError");

    py::class_<SlitConfig>(m, "SlitConfig")
        .def(py::init([](std::vector<double> u, std::vector<double> h) {
                 return SlitConfig::validated(std::move(u), std::move(h));
             }),
             py::arg("u"), py::arg("h"))
        .def_readonly("u", &SlitConfig::u)
        .def_readonly("h", &SlitConfig::h)
        .def_readonly("u_star", &SlitConfig::u_star)
        .def("__len__", &SlitConfig::size);

    m.def("weighted_norm",
          [](std::vector<double> f, double p, std::optional<std::vector<double>> omega) {
              NormSpec spec{p, omega.value_or(std::vector<double>{})};
              return weighted_norm(f, spec);
          },
          py::arg("f"), py::arg("p"), py::arg("omega") = py::none());

    m.def("greedy_tilde",
          [](std::vector<double> u, std::vector<double> h) {
              return greedy_tilde(SlitConfig::validated(std::move(u), std::move(h)));
          },
          py::arg("u"), py::arg("h"));

    m.def("greedy_energy_bounds",
          [](std::vector<double> u, std::vector<double> h) {
              return greedy_energy_bounds(SlitConfig::validated(std::move(u), std::move(h)));
          },
          py::arg("u"), py::arg("h"));

    py::class_<Quasimomentum>(m, "Quasimomentum")
        .def(py::init([](const std::vector<std::pair<double, double>>& endpoints) {
                 return Quasimomentum::solve(endpoints);
             }),
             py::arg("endpoints"))
        .def("value", [](const Quasimomentum& q, std::complex<double> z) { return q.value(z); })
        .def("derivative",
             [](const Quasimomentum& q, std::complex<double> z) { return q.derivative(z); })
        .def("invert",
             [](const Quasimomentum& q, std::complex<double> k) { return q.invert(k); })
        .def("position", &Quasimomentum::position)
        .def("height", &Quasimomentum::height)
        .def("v_on_gap", &Quasimomentum::v_on_gap)
        .def("action", &Quasimomentum::action)
        .def("effective_masses", &Quasimomentum::effective_masses)
        .def("tip_mass", &Quasimomentum::tip_mass)
        .def("invariant_length", &Quasimomentum::invariant_length)
        .def("q0_and_dirichlet", &Quasimomentum::q0_and_dirichlet)
        .def("critical_points", [](const Quasimomentum& q) {
            std::vector<double> c;
            for (const auto& gap : q.gap_system().gaps) c.push_back(gap.c);
            return c;
        });

    m.def("solve",
          [](std::vector<double> u, std::vector<double> h, double residual_tol,
             int max_newton_iters, int continuation_steps, int samples) {
              SlitConfig cfg = SlitConfig::validated(std::move(u), std::move(h));
              CombSolution sol = solve_forward(
                  cfg, options_from_kwargs(residual_tol, max_newton_iters, continuation_steps,
                                           samples));
              QuantityReport rep = compute_quantities(sol);
              py::dict out;
              py::list gaps;
              for (std::size_t g = 0; g < sol.gaps.size(); ++g) {
                  const Gap& gap = sol.gaps.gaps[g];
                  py::dict gd;
                  gd["slit"] = sol.gap_slit[g];
                  gd["zminus"] = gap.lo;
                  gd["c"] = gap.c;
                  gd["zplus"] = gap.hi;
                  gaps.append(gd);
              }
              out["gaps"] = gaps;
              out["residual"] = sol.residual;
              out["iterations"] = sol.iterations;
              out["quantities"] = quantities_to_dict(rep);
              return out;
          },
          py::arg("u"), py::arg("h"), py::arg("residual_tol") = 1e-9,
          py::arg("max_newton_iters") = 60, py::arg("continuation_steps") = 8,
          py::arg("samples") = 64);

    m.def("verify",
          [](std::vector<double> u, std::vector<double> h, bool include_local) {
              SlitConfig cfg = SlitConfig::validated(std::move(u), std::move(h));
              CombSolution sol = solve_forward(cfg);
              CheckOptions opts;
              opts.include_local = include_local;
              py::list out;
              for (const auto& r : run_all_checks(sol, opts, "config"))
                  out.append(check_to_dict(r));
              return out;
          },
          py::arg("u"), py::arg("h"), py::arg("include_local") = false);

    m.def("capacity",
          [](const std::vector<std::pair<double, double>>& intervals) {
              return capacity(IntervalUnion::validated(intervals));
          },
          py::arg("intervals"));

    m.def("ahlfors",
          [](const std::vector<std::pair<double, double>>& intervals, std::complex<double> z) {
              return ahlfors(IntervalUnion::validated(intervals), z);
          },
          py::arg("intervals"), py::arg("z"));

    m.def("ahlfors_derivative_at_infinity",
          [](const std::vector<std::pair<double, double>>& intervals) {
              return ahlfors_derivative_at_infinity(IntervalUnion::validated(intervals));
          },
          py::arg("intervals"));

    m.def("single_slit_map", &single_slit_map, py::arg("k"), py::arg("u0"), py::arg("h"));
    m.def("uniform_comb_gap_length", &uniform_comb_gap_length, py::arg("H"));

    m.def("example",
          [](int id, int size) {
              ExampleReport rep = reproduce_example(id, size);
              py::dict out;
              out["id"] = rep.id;
              out["size"] = rep.size;
              out["passed"] = rep.passed;
              out["lines"] = rep.lines;
              py::list chain;
              for (const auto& c : rep.chain) chain.append(check_to_dict(c));
              out["chain"] = chain;
              return out;
          },
          py::arg("id"), py::arg("size"));
}
