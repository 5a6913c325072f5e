#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "disklab/curve.hpp"
#include "disklab/energy.hpp"
#include "disklab/residuals.hpp"
#include "disklab/solver.hpp"
#include "disklab/special.hpp"
#include "disklab/surface.hpp"

namespace py = pybind11;
using namespace disklab;

namespace {

// std::variant would be unpacked by pybind11's variant caster; the python
// surface keeps densities opaque instead.
struct PyDensity {
  DensitySpec spec;
};
struct PyBend {
  CurveDensitySpec spec;
};

py::dict report_dict(const CriticalityReport& rep) {
  py::dict d;
  d["regime"] = rep.regime;
  d["el1_max"] = rep.el1_max;
  d["el2"] = rep.el2;
  d["el3"] = rep.el3;
  d["el4"] = rep.el4;
  d["rescaling_defect"] = rep.rescaling;
  d["flux_value"] = rep.flux ? py::cast(*rep.flux) : py::none();
  d["eta"] = rep.eta;
  d["beta"] = rep.beta;
  d["varpi"] = rep.varpi;
  d["orientation_branch"] = rep.orientation_branch;
  d["critical"] = rep.critical;
  if (rep.regularity) d["regularity"] = *rep.regularity;
  return d;
}

py::dict shot_dict(const ShootingResult& r) {
  py::dict d;
  d["phi_prime0"] = r.phi_prime0;
  d["length"] = r.length;
  d["eta"] = r.eta;
  d["beta"] = r.beta;
  d["iterations"] = r.iterations;
  d["regime"] = r.regime;
  d["target_residual"] = py::make_tuple(r.target_residual[0], r.target_residual[1]);
  d["report"] = report_dict(r.report);
  d["trajectory"] = py::cast(r.trajectory);
  return d;
}

StopSpec make_stop(double max_length, double min_abs_H, int stop_at_vertical_tangent) {
  StopSpec stop;
  stop.max_length = max_length;
  stop.min_abs_H = min_abs_H;
  stop.stop_at_vertical_tangent = stop_at_vertical_tangent;
  return stop;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "critical disk-type surfaces of revolution with elastic boundary energies";

  py::class_<PyDensity>(m, "DensitySpec");
  py::class_<PyBend>(m, "CurveDensitySpec");

  m.def("p_willmore", [](double sigma, double c0, double p) {
    return PyDensity{PWillmore{sigma, c0, p}};
  }, py::arg("sigma") = 1.0, py::arg("c0") = 0.0, py::arg("p") = 2.0);
  m.def("exp_square", [] { return PyDensity{ExpSquare{}}; });
  m.def("log_square", [] { return PyDensity{LogSquare{}}; });
  m.def("polynomial_density", [](std::vector<double> coeffs) {
    return PyDensity{PolyDensity{std::move(coeffs)}};
  });
  m.def("quadratic_bend", [] { return PyBend{QuadraticBend{}}; });
  m.def("total_curvature_bend",
        [](double alpha) { return PyBend{TotalCurvatureBend{alpha}}; },
        py::arg("alpha"));
  m.def("polynomial_bend", [](std::vector<double> coeffs) {
    return PyBend{PolyBend{std::move(coeffs)}};
  });

  m.def("eval_density", [](const PyDensity& d, double H, int order) {
    return eval_density(d.spec, H, order);
  }, py::arg("spec"), py::arg("H"), py::arg("order"));
  m.def("eval_curve_density", [](const PyBend& d, double kappa, int order) {
    return eval_curve_density(d.spec, kappa, order);
  }, py::arg("spec"), py::arg("kappa"), py::arg("order"));
  m.def("circle_condition", [](const PyBend& d, double kappa, double beta) {
    return circle_condition(d.spec, kappa, beta);
  }, py::arg("spec"), py::arg("kappa"), py::arg("beta"));
  m.def(
      "solve_circle_curvature",
      [](const PyBend& lambda, double beta, double sigma_area, int sign) {
        return solve_circle_curvature(lambda.spec, beta, sigma_area, sign);
      },
      py::arg("boundary_density"), py::arg("beta"), py::arg("sigma_area") = 0.0,
      py::arg("sign") = 0);

  py::class_<ProfileSample>(m, "ProfileSample")
      .def_readonly("s", &ProfileSample::s)
      .def_readonly("r", &ProfileSample::r)
      .def_readonly("z", &ProfileSample::z)
      .def_readonly("phi", &ProfileSample::phi)
      .def_readonly("H", &ProfileSample::H)
      .def_readonly("phi_prime", &ProfileSample::phi_prime)
      .def_readonly("H_prime", &ProfileSample::H_prime);

  py::class_<ProfileTrajectory>(m, "ProfileTrajectory")
      .def_readonly("samples", &ProfileTrajectory::samples)
      .def_readonly("length", &ProfileTrajectory::length)
      .def_readonly("max_first_integral_residual",
                    &ProfileTrajectory::max_first_integral_residual)
      .def_property_readonly("stop_reason",
                             [](const ProfileTrajectory& t) {
                               switch (t.stop_reason) {
                                 case StopReason::MaxLength: return "max_length";
                                 case StopReason::VerticalTangent: return "vertical_tangent";
                                 case StopReason::CollapseToAxis: return "collapse_to_axis";
                                 case StopReason::BlowUp: return "blow_up";
                                 case StopReason::SmallH: return "small_H";
                                 case StopReason::DensityDegeneracy:
                                   return "density_degeneracy";
                               }
                               return "unknown";
                             })
      .def("H_values",
           [](const ProfileTrajectory& t) {
             std::vector<double> v;
             for (const auto& q : t.samples) v.push_back(q.H);
             return v;
           })
      .def("to_csv", &profile_to_csv);

  m.def(
      "integrate_profile",
      [](double phi_prime0, const PyDensity& density, double max_length, double min_abs_H,
         int stop_at_vertical_tangent, double rtol) {
        SolverOptions opts;
        opts.rtol = rtol;
        opts.atol = rtol;
        return integrate_profile(phi_prime0, density.spec,
                                 make_stop(max_length, min_abs_H, stop_at_vertical_tangent),
                                 opts);
      },
      py::arg("phi_prime0"), py::arg("density"), py::arg("max_length") = 10.0,
      py::arg("min_abs_H") = 0.0, py::arg("stop_at_vertical_tangent") = 0,
      py::arg("rtol") = 1e-9);

  m.def("gauss_bonnet_defect", &gauss_bonnet_defect, py::arg("trajectory"),
        py::arg("quad_tol") = 1e-10);

  m.def(
      "total_energy",
      [](const ProfileTrajectory& traj, const PyDensity& density, const PyBend& lambda,
         double eta, double varpi, double beta, double quad_tol) {
        EnergyParams params;
        params.density = density.spec;
        params.boundary_density = lambda.spec;
        params.eta = eta;
        params.varpi = varpi;
        params.beta = beta;
        const auto e = total_energy(traj, params, quad_tol);
        py::dict d;
        d["surface_P"] = e.surface_P;
        d["surface_K"] = e.surface_K;
        d["boundary_lambda"] = e.boundary_lambda;
        d["boundary_tau"] = e.boundary_tau;
        d["boundary_beta"] = e.boundary_beta;
        d["total"] = e.total;
        return d;
      },
      py::arg("trajectory"), py::arg("density"), py::arg("boundary_density"),
      py::arg("eta") = 0.0, py::arg("varpi") = 0.0, py::arg("beta") = 0.0,
      py::arg("quad_tol") = 1e-9);

  m.def(
      "helfrich_first_integral",
      [](const ProfileTrajectory& traj, double sigma, double c0) {
        const auto h = helfrich_first_integral(traj, sigma, c0);
        py::dict d;
        d["z0_fit"] = h.z0_fit;
        d["max_deviation"] = h.max_deviation;
        d["std_deviation"] = h.std_deviation;
        return d;
      },
      py::arg("trajectory"), py::arg("sigma"), py::arg("c0"));

  m.def(
      "cap_criticality",
      [](double p, double kappa0, double sigma, double c0) {
        const auto c = cap_criticality(p, kappa0, sigma, c0);
        py::dict d;
        d["eta"] = c.eta;
        d["H0"] = c.H0 ? py::cast(*c.H0) : py::none();
        d["feasible"] = c.feasible;
        d["c0_forced_zero"] = c.c0_forced_zero;
        d["eta_sign_ok"] = c.eta_sign_ok;
        return d;
      },
      py::arg("p"), py::arg("kappa0"), py::arg("sigma"), py::arg("c0"));

  m.def(
      "build_cap",
      [](double p, double sigma, double c0, double kappa0, const PyBend& lambda, double beta,
         double H0, int n) {
        CapSpec spec;
        spec.p = p;
        spec.sigma = sigma;
        spec.c0 = c0;
        spec.kappa0 = kappa0;
        spec.H0 = H0;
        const auto cap = build_cap(spec, lambda.spec, beta, n);
        py::dict d;
        d["eta"] = cap.criticality.eta;
        d["report"] = report_dict(cap.report);
        d["trajectory"] = py::cast(cap.trajectory);
        return d;
      },
      py::arg("p"), py::arg("sigma"), py::arg("c0"), py::arg("kappa0"),
      py::arg("boundary_density"), py::arg("beta"), py::arg("H0") = -1.0,
      py::arg("n") = 201);

  m.def(
      "cmc_classify",
      [](double H0, double c0, double p) {
        const auto c = cmc_classify(H0, c0, p);
        py::dict d;
        switch (c.branch) {
          case CmcBranch::Isoparametric: d["branch"] = "isoparametric"; break;
          case CmcBranch::GroundState: d["branch"] = "ground_state"; break;
          case CmcBranch::NotCritical: d["branch"] = "not_critical"; break;
        }
        d["K"] = c.K ? py::cast(*c.K) : py::none();
        return d;
      },
      py::arg("H0"), py::arg("c0"), py::arg("p"));

  m.def("weingarten_kn", &weingarten_kn, py::arg("chi"), py::arg("c0"));
  m.def(
      "weingarten_profile",
      [](double c0, double d_const, int n) {
        const auto w = weingarten_profile({c0, d_const}, n);
        py::dict d;
        d["trajectory"] = py::cast(w.trajectory);
        d["boundary_kappa_n"] = w.boundary_kappa_n;
        d["max_weingarten_residual"] = w.max_weingarten_residual;
        d["chi"] = w.chi;
        d["report"] = report_dict(w.report);
        return d;
      },
      py::arg("c0"), py::arg("d"), py::arg("n") = 400);

  m.def(
      "shoot_geodesic",
      [](const PyDensity& density, const PyBend& lambda, double phi_prime0,
         py::object length, double max_length, double varpi) {
        ShootingGuess guess;
        guess.phi_prime0 = phi_prime0;
        if (!length.is_none()) guess.length = length.cast<double>();
        return shot_dict(shoot_geodesic(density.spec, lambda.spec, guess,
                                        make_stop(max_length, 0.0, 0), {}, varpi));
      },
      py::arg("density"), py::arg("boundary_density"), py::arg("phi_prime0"),
      py::arg("length") = py::none(), py::arg("max_length") = 6.0, py::arg("varpi") = 0.0);

  m.def(
      "shoot_nongeodesic",
      [](const PyDensity& density, const PyBend& lambda, double phi_prime0,
         py::object length, double max_length, double min_abs_H, double varpi) {
        ShootingGuess guess;
        guess.phi_prime0 = phi_prime0;
        if (!length.is_none()) guess.length = length.cast<double>();
        return shot_dict(shoot_nongeodesic(density.spec, lambda.spec, guess,
                                           make_stop(max_length, min_abs_H, 0), {}, varpi));
      },
      py::arg("density"), py::arg("boundary_density"), py::arg("phi_prime0"),
      py::arg("length") = py::none(), py::arg("max_length") = 6.0,
      py::arg("min_abs_H") = 0.0, py::arg("varpi") = 0.0);

  py::class_<RevolvedMesh>(m, "RevolvedMesh")
      .def_readonly("vertices", &RevolvedMesh::vertices)
      .def_readonly("triangles", &RevolvedMesh::triangles)
      .def_readonly("boundary_loop", &RevolvedMesh::boundary_loop)
      .def("area", &RevolvedMesh::area)
      .def("boundary_length", &RevolvedMesh::boundary_length)
      .def("to_obj", [](const RevolvedMesh& mesh) { return mesh_to_obj(mesh); });

  m.def("revolve", &revolve, py::arg("trajectory"), py::arg("n_t") = 64);

  m.def(
      "frenet_evolve",
      [](const std::function<double(double)>& kappa, const std::function<double(double)>& tau,
         double L) {
        const auto samples = frenet_evolve(kappa, tau, L);
        py::list out;
        for (const auto& q : samples) {
          py::dict d;
          d["s"] = q.s;
          d["position"] = q.position;
          d["T"] = q.T;
          d["kappa"] = q.kappa;
          d["tau"] = q.tau;
          out.append(d);
        }
        return out;
      },
      py::arg("kappa"), py::arg("tau"), py::arg("L"));

  m.attr("__version__") = "0.1.0";
}
