#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "krymat/dlebdf.hpp"
#include "krymat/dleexp.hpp"
#include "krymat/dsylv.hpp"
#include "krymat/errors.hpp"
#include "krymat/generators.hpp"
#include "krymat/limits.hpp"
#include "krymat/oracle.hpp"
#include "krymat/smallmat.hpp"

namespace py = pybind11;
using namespace krymat;

namespace {

py::dict report_dict(const SolveReport& r) {
  py::list rows;
  for (const ReportRow& row : r.rows) {
    py::dict d;
    d["m"] = row.m;
    d["t"] = row.t;
    d["residual_bound"] = row.residual_bound;
    d["apriori_bound"] = row.apriori_bound;
    d["rank"] = row.rank;
    rows.append(d);
  }
  py::dict out;
  out["method"] = r.method;
  out["rows"] = rows;
  out["max_bound"] = r.max_bound;
  out["n"] = r.n;
  out["p"] = r.p;
  out["m"] = r.m;
  out["basis_dim"] = r.basis_dim;
  out["converged"] = r.converged;
  out["breakdown"] = r.breakdown;
  out["seconds"] = r.seconds;
  out["warnings"] = r.warnings;
  return out;
}

// Problem data crosses the boundary as plain arrays; scipy.sparse inputs are
// converted by pybind11's Eigen caster.
DLEProblem make_dle(const SparseMat& a, const DenseMat& b, const std::optional<DenseMat>& z0, double t0,
                    double tf) {
  DLEProblem p;
  p.a = a;
  p.b = b;
  if (z0) p.z0 = *z0;
  p.t0 = t0;
  p.tf = tf;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Krylov solvers for large differential Sylvester and Lyapunov matrix equations";

  py::register_exception<Error>(m, "KrymatError");

  py::class_<DLEProblem>(m, "DLEProblem")
      .def(py::init(&make_dle), py::arg("a"), py::arg("b"), py::arg("z0") = std::nullopt, py::arg("t0") = 0.0,
           py::arg("tf") = 1.0)
      .def_readwrite("a", &DLEProblem::a)
      .def_readwrite("b", &DLEProblem::b)
      .def_readwrite("z0", &DLEProblem::z0)
      .def_readwrite("t0", &DLEProblem::t0)
      .def_readwrite("tf", &DLEProblem::tf)
      .def_property_readonly("n", &DLEProblem::n)
      .def_property_readonly("p", &DLEProblem::p)
      .def("validate", &DLEProblem::validate);

  py::class_<GenSylvesterProblem>(m, "GenSylvesterProblem")
      .def(py::init([](std::vector<SparseMat> a, std::vector<SparseMat> b, DenseMat c,
                       std::optional<DenseMat> x0, double t0, double tf) {
             GenSylvesterProblem p;
             p.a = std::move(a);
             p.b = std::move(b);
             p.x0 = x0 ? *x0 : DenseMat::Zero(c.rows(), c.cols());
             p.c = std::move(c);
             p.t0 = t0;
             p.tf = tf;
             return p;
           }),
           py::arg("a"), py::arg("b"), py::arg("c"), py::arg("x0") = std::nullopt, py::arg("t0") = 0.0,
           py::arg("tf") = 1.0)
      .def_readwrite("c", &GenSylvesterProblem::c)
      .def_readwrite("x0", &GenSylvesterProblem::x0)
      .def_property_readonly("n", &GenSylvesterProblem::n)
      .def_property_readonly("p", &GenSylvesterProblem::p)
      .def("validate", &GenSylvesterProblem::validate);

  py::class_<LowRankSolution>(m, "LowRankSolution")
      .def_property_readonly("nodes", &LowRankSolution::nodes)
      .def("dense", &LowRankSolution::dense, py::arg("k"))
      .def("factor", &LowRankSolution::factor, py::arg("k"))
      .def("factor_signature", &LowRankSolution::factor_signature, py::arg("k"));

  py::class_<GalerkinSolution>(m, "GalerkinSolution")
      .def_property_readonly("nodes", &GalerkinSolution::nodes)
      .def("at", &GalerkinSolution::at, py::arg("k"));

  m.def("laplacian2d", &gen_laplacian2d, py::arg("n0"));
  m.def("random_stable", &gen_random_stable, py::arg("n"), py::arg("seed"));
  m.def("laplacian_dle", &gen_laplacian_dle, py::arg("n0"), py::arg("p"), py::arg("seed"), py::arg("t0") = 0.0,
        py::arg("tf") = 1.0);
  m.def("sylvester_q2", &gen_sylvester_q2, py::arg("n"), py::arg("p"), py::arg("seed"));

  m.def(
      "egadl_solve",
      [](const DLEProblem& p, Index steps, Index m_max, double tol, int l, Index substeps) {
        EgadlOptions o;
        o.m_max = m_max;
        o.tol = tol;
        o.l = l;
        o.substeps = substeps;
        auto [sol, rep] = egadl_solve(p, TimeGrid(p.t0, p.tf, steps), o);
        return py::make_tuple(std::move(sol), report_dict(rep));
      },
      py::arg("problem"), py::arg("steps") = 20, py::arg("m_max") = 30, py::arg("tol") = 1e-8, py::arg("l") = 2,
      py::arg("substeps") = 1);

  m.def(
      "expo_solve",
      [](const DLEProblem& p, Index steps, Index m_max, double tol, bool extended) {
        ExpoOptions o;
        o.m_max = m_max;
        o.tol = tol;
        o.variant = extended ? ExpoVariant::extended : ExpoVariant::global;
        auto [sol, rep] = expo_dle_solve(p, TimeGrid(p.t0, p.tf, steps), o);
        return py::make_tuple(std::move(sol), report_dict(rep));
      },
      py::arg("problem"), py::arg("steps") = 20, py::arg("m_max") = 30, py::arg("tol") = 1e-8,
      py::arg("extended") = false);

  m.def(
      "galerkin_solve",
      [](const GenSylvesterProblem& p, Index steps, Index m_max, double tol) {
        GalerkinOptions o;
        o.m_max = m_max;
        o.eps = tol;
        auto [sol, rep] = galerkin_solve(p, TimeGrid(p.t0, p.tf, steps), o);
        return py::make_tuple(std::move(sol), report_dict(rep));
      },
      py::arg("problem"), py::arg("steps") = 20, py::arg("m_max") = 50, py::arg("tol") = 1e-8);

  m.def(
      "dense_dle_exact",
      [](const DLEProblem& p, Index steps) { return dense_dle_exact(p, TimeGrid(p.t0, p.tf, steps)); },
      py::arg("problem"), py::arg("steps") = 20);
  m.def(
      "dense_dme_solve",
      [](const GenSylvesterProblem& p, Index steps) { return dense_dme_solve(p, TimeGrid(p.t0, p.tf, steps)); },
      py::arg("problem"), py::arg("steps") = 20);

  m.def("expm", [](const DenseMat& a) { return expm(a); }, py::arg("a"));
  m.def(
      "lyap_solve", [](const DenseMat& t, const DenseMat& q) { return lyap_solve(t, SymmetricMat(q)).matrix(); },
      py::arg("t"), py::arg("q"));
  m.def(
      "vanloan_gram",
      [](const DenseMat& h, const DenseMat& q, double t) { return vanloan_gram(h, q, t).matrix(); },
      py::arg("h"), py::arg("q"), py::arg("t"));

  m.def("dense_cap", &dense_cap);
  m.def("set_dense_cap", &set_dense_cap, py::arg("cap"));
}
