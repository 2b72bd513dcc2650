#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kgstar/asymptotics.hpp"
#include "kgstar/energy_flow.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/solution.hpp"
#include "kgstar/spectral_core.hpp"
#include "kgstar/transform.hpp"

namespace py = pybind11;
using namespace kgstar;

PYBIND11_MODULE(_kgstar, m) {
  m.doc() = "Klein-Gordon waves on two half-axes with a potential step";

  static py::exception<QuadratureError> quad_error(m, "QuadratureError", PyExc_RuntimeError);
  py::register_exception<BranchPointError>(m, "BranchPointError", PyExc_ValueError);
  py::register_exception<OutsideLightCone>(m, "OutsideLightCone", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  m.attr("PLANCHEREL_CONSTANT") = kPlancherelConstant;

  py::enum_<Branch>(m, "Branch").value("one", Branch::one).value("two", Branch::two);
  py::enum_<Sign>(m, "Sign").value("minus", Sign::minus).value("plus", Sign::plus);
  py::enum_<ProfileShape>(m, "ProfileShape")
      .value("plateau", ProfileShape::plateau)
      .value("raised_cosine", ProfileShape::raised_cosine)
      .value("zero", ProfileShape::zero);
  py::enum_<ConeKind>(m, "ConeKind").value("outer", ConeKind::outer).value("inner", ConeKind::inner);

  py::class_<BranchPotentials>(m, "BranchPotentials")
      .def(py::init([](double a1, double a2) {
             BranchPotentials p{a1, a2};
             p.validate();
             return p;
           }),
           py::arg("a1") = 0.0, py::arg("a2") = 1.0)
      .def_readwrite("a1", &BranchPotentials::a1)
      .def_readwrite("a2", &BranchPotentials::a2)
      .def("__repr__", [](const BranchPotentials& p) {
        return "BranchPotentials(a1=" + py::repr(py::float_(p.a1)).cast<std::string>() +
               ", a2=" + py::repr(py::float_(p.a2)).cast<std::string>() + ")";
      });

  py::class_<EnergyBand>(m, "EnergyBand")
      .def(py::init([](double alpha, double alpha_prime, double beta_prime, double beta, double mm) {
             EnergyBand b{alpha, alpha_prime, beta_prime, beta, mm};
             b.validate();
             return b;
           }),
           py::arg("alpha") = 0.25, py::arg("alpha_prime") = 0.375, py::arg("beta_prime") = 0.625,
           py::arg("beta") = 0.75, py::arg("m") = 1.0)
      .def_readwrite("alpha", &EnergyBand::alpha)
      .def_readwrite("alpha_prime", &EnergyBand::alpha_prime)
      .def_readwrite("beta_prime", &EnergyBand::beta_prime)
      .def_readwrite("beta", &EnergyBand::beta)
      .def_readwrite("m", &EnergyBand::m);

  py::class_<QuadratureConfig>(m, "QuadratureConfig")
      .def(py::init<>())
      .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
      .def_readwrite("rel_tol", &QuadratureConfig::rel_tol)
      .def_readwrite("max_panels", &QuadratureConfig::max_panels)
      .def_readwrite("points_per_period", &QuadratureConfig::points_per_period);

  py::class_<SpectralProfile>(m, "SpectralProfile")
      .def(py::init<const EnergyBand&, double, ProfileShape>(), py::arg("band"), py::arg("a2"),
           py::arg("shape") = ProfileShape::plateau)
      .def("psi", &SpectralProfile::psi)
      .def("psi_tilde", &SpectralProfile::psi_tilde)
      .def_property_readonly("a2", &SpectralProfile::a2)
      .def_property_readonly("shape", &SpectralProfile::shape)
      .def("l2_norm", &SpectralProfile::l2_norm)
      .def("plateau_floor", &SpectralProfile::plateau_floor);

  py::class_<ConeSpec>(m, "ConeSpec")
      .def_readonly("slope_low", &ConeSpec::slope_low)
      .def_readonly("slope_high", &ConeSpec::slope_high)
      .def_readonly("inner_slope_low", &ConeSpec::inner_slope_low)
      .def_readonly("inner_slope_high", &ConeSpec::inner_slope_high)
      .def_readonly("v_min", &ConeSpec::v_min)
      .def_readonly("v_max", &ConeSpec::v_max);

  const auto cq = py::arg("cq") = kPlancherelConstant;
  const auto quad = py::arg("quad") = QuadratureConfig{};

  m.def("branch_sqrt", &branch_sqrt, py::arg("z"));
  m.def("xi", &xi, py::arg("k"), py::arg("lam"), py::arg("pots"));
  m.def("s", &s, py::arg("j"), py::arg("lam"), py::arg("pots"));
  m.def("q", &q, py::arg("l"), py::arg("lam"), py::arg("pots"), cq);
  m.def(
      "eigenfunction",
      [](Sign sign, Branch j, Branch k, double x, double lam, const BranchPotentials& pots) {
        return eigenfunction({sign, j, k, x}, lam, pots);
      },
      py::arg("sign"), py::arg("j"), py::arg("k"), py::arg("x"), py::arg("lam"), py::arg("pots"));

  m.def(
      "u_plus",
      [](double t, double x, const SpectralProfile& pr, const BranchPotentials& pots, const QuadratureConfig& qc,
         double c) { return u_plus({t, x}, pr, pots, qc, c).value; },
      py::arg("t"), py::arg("x"), py::arg("profile"), py::arg("pots"), quad, cq);
  m.def(
      "u_minus",
      [](double t, double x, const SpectralProfile& pr, const BranchPotentials& pots, const QuadratureConfig& qc,
         double c) { return u_minus({t, x}, pr, pots, qc, c).value; },
      py::arg("t"), py::arg("x"), py::arg("profile"), py::arg("pots"), quad, cq);
  m.def(
      "u2",
      [](double t, double x, const SpectralProfile& pr, const BranchPotentials& pots, const QuadratureConfig& qc,
         double c) { return u2({t, x}, pr, pots, qc, c).value; },
      py::arg("t"), py::arg("x"), py::arg("profile"), py::arg("pots"), quad, cq);

  m.def("make_cone", &make_cone, py::arg("pots"), py::arg("band"));
  m.def(
      "stationary_point", [](double t, double x, double a2) { return stationary_point({t, x}, a2); },
      py::arg("t"), py::arg("x"), py::arg("a2"));
  m.def(
      "coefficient_H",
      [](double t, double x, const SpectralProfile& pr, const BranchPotentials& pots, double c) {
        return coefficient_H({t, x}, pr, pots, c);
      },
      py::arg("t"), py::arg("x"), py::arg("profile"), py::arg("pots"), cq);
  m.def(
      "coefficient_modulus",
      [](double t, double x, const SpectralProfile& pr, const BranchPotentials& pots) {
        return coefficient_modulus({t, x}, pr, pots);
      },
      py::arg("t"), py::arg("x"), py::arg("profile"), py::arg("pots"));
  m.def("bound_g", &bound_g, py::arg("pots"), py::arg("beta"));
  m.def("bound_f", &bound_f, py::arg("pots"), py::arg("band"));

  m.def(
      "l2_branch",
      [](double t, const SpectralProfile& pr, const BranchPotentials& pots, const QuadratureConfig& qc, double c) {
        return l2_branch(t, pr, pots, qc, c).norm;
      },
      py::arg("t"), py::arg("profile"), py::arg("pots"), quad, cq);
  m.def(
      "l2_cone",
      [](double t, const SpectralProfile& pr, const BranchPotentials& pots, const QuadratureConfig& qc, double c) {
        return l2_cone(t, pr, pots, qc, c).norm;
      },
      py::arg("t"), py::arg("profile"), py::arg("pots"), quad, cq);
  m.def("plancherel_bound", &plancherel_bound, py::arg("profile"), py::arg("pots"));
  m.def("ratio_bound", &ratio_bound, py::arg("profile"), py::arg("pots"), py::arg("eps") = 0.0);

  m.def(
      "reconstruct_initial",
      [](const SpectralProfile& pr, const BranchPotentials& pots, double h, double x_end,
         const QuadratureConfig& qc, double c) {
        const auto f = reconstruct_initial_sampled(pr, pots, h, x_end, qc, c);
        std::vector<double> x(f.v1.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = f.x(i);
        return py::make_tuple(x, f.v1, f.v2);
      },
      py::arg("profile"), py::arg("pots"), py::arg("h"), py::arg("x_end"), quad, cq,
      "Samples (x, u0 on branch 1, u0 on branch 2) on a uniform grid.");
  m.def(
      "round_trip",
      [](const SpectralProfile& pr, const BranchPotentials& pots, const QuadratureConfig& qc, double c) {
        const RoundTripReport r = round_trip(pr, pots, qc, c);
        py::dict d;
        d["residual"] = r.residual;
        d["profile_norm"] = r.profile_norm;
        d["out_of_band"] = r.out_of_band;
        d["x_max"] = r.x_max;
        return d;
      },
      py::arg("profile"), py::arg("pots"), quad, cq);
}
