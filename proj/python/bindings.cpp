#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adhm/adhm_s4.hpp"
#include "adhm/errors.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/json_io.hpp"
#include "adhm/moment_flow.hpp"
#include "adhm/monad_p2.hpp"
#include "adhm/stab_limit.hpp"

namespace py = pybind11;
using namespace adhm;

namespace {

py::dict report_dict(const FlowReport& r) {
  py::dict d;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["final_residual"] = r.final_residual;
  d["group_norm"] = r.group_norm;
  d["instability_flag"] = r.instability_flag;
  d["integrability_drift"] = r.integrability_drift;
  return d;
}

FlowConfig make_cfg(double tol, int max_iter, bool require_integrable = true) {
  FlowConfig cfg;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.require_integrable = require_integrable;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_adhmkit, m) {
  m.doc() = "ADHM and monad matrix models: checks, Kempf-Ness flows, homotopies, fields";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<SamplerError>(m, "SamplerError", PyExc_RuntimeError);
  py::register_exception<UnsupportedParameter>(m, "UnsupportedParameter", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::enum_<Verdict>(m, "Verdict")
      .value("Holds", Verdict::Holds)
      .value("Fails", Verdict::Fails)
      .value("Unknown", Verdict::Unknown);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("verdict", &CheckResult::verdict)
      .def_property_readonly("witness",
                             [](const CheckResult& c) {
                               std::vector<CMat> bases;
                               for (const auto& s : c.witness) bases.push_back(s.basis);
                               return bases;
                             })
      .def_readonly("witness_map", &CheckResult::witness_map)
      .def("holds", &CheckResult::holds)
      .def("fails", &CheckResult::fails)
      .def("__repr__", [](const CheckResult& c) {
        return "CheckResult(" + std::string(to_string(c.verdict)) + ")";
      });

  py::class_<AdhmDatumS4>(m, "AdhmDatumS4")
      .def(py::init([](const CMat& a1, const CMat& a2, const CMat& b, const CMat& c) {
             AdhmDatumS4 d{static_cast<int>(a1.rows()), static_cast<int>(b.cols()), a1, a2, b, c};
             d.validate();
             return d;
           }),
           py::arg("a1"), py::arg("a2"), py::arg("b"), py::arg("c"))
      .def_static("zero", &AdhmDatumS4::zero, py::arg("k"), py::arg("r"))
      .def_readonly("k", &AdhmDatumS4::k)
      .def_readonly("r", &AdhmDatumS4::r)
      .def_readwrite("a1", &AdhmDatumS4::a1)
      .def_readwrite("a2", &AdhmDatumS4::a2)
      .def_readwrite("b", &AdhmDatumS4::b)
      .def_readwrite("c", &AdhmDatumS4::c)
      .def("norm", &AdhmDatumS4::norm)
      .def("to_json", [](const AdhmDatumS4& d) { return json(d).dump(); })
      .def_static("from_json", [](const std::string& s) { return json::parse(s).get<AdhmDatumS4>(); });

  py::class_<MonadDatumP2>(m, "MonadDatumP2")
      .def(py::init([](const CMat& a1, const CMat& a2, const CMat& d, const CMat& b,
                       const CMat& c) {
             MonadDatumP2 x{static_cast<int>(a1.rows()), static_cast<int>(b.cols()), a1, a2, d, b, c};
             x.validate();
             return x;
           }),
           py::arg("a1"), py::arg("a2"), py::arg("d"), py::arg("b"), py::arg("c"))
      .def_static("zero", &MonadDatumP2::zero, py::arg("k"), py::arg("r"))
      .def_readonly("k", &MonadDatumP2::k)
      .def_readonly("r", &MonadDatumP2::r)
      .def_readwrite("a1", &MonadDatumP2::a1)
      .def_readwrite("a2", &MonadDatumP2::a2)
      .def_readwrite("d", &MonadDatumP2::d)
      .def_readwrite("b", &MonadDatumP2::b)
      .def_readwrite("c", &MonadDatumP2::c)
      .def("norm", &MonadDatumP2::norm)
      .def("to_json", [](const MonadDatumP2& d) { return json(d).dump(); })
      .def_static("from_json", [](const std::string& s) { return json::parse(s).get<MonadDatumP2>(); });

  // S^4
  m.def("moment_s4", py::overload_cast<const AdhmDatumS4&>(&moment));
  m.def("integrability_residual_s4",
        py::overload_cast<const AdhmDatumS4&>(&integrability_residual));
  m.def("level_residual_s4", py::overload_cast<const AdhmDatumS4&, double>(&level_residual));
  m.def("act_s4", py::overload_cast<const CMat&, const AdhmDatumS4&>(&act));
  m.def("check_c1_s4", [](const AdhmDatumS4& d) { return check_c1(d); });
  m.def("check_c2_s4", [](const AdhmDatumS4& d) { return check_c2(d); });
  m.def("stabilizer_dim_s4", [](const AdhmDatumS4& d) { return stabilizer_dim(d); });

  // P^2
  m.def("moment_p2", [](const MonadDatumP2& d) {
    const MomentP2 mu = moment(d);
    return std::make_pair(mu.mu0, mu.mu1);
  });
  m.def("integrability_residual_p2",
        py::overload_cast<const MonadDatumP2&>(&integrability_residual));
  m.def("level_residual_p2", py::overload_cast<const MonadDatumP2&, double>(&level_residual));
  m.def("act_p2", py::overload_cast<const CMat&, const CMat&, const MonadDatumP2&>(&act));
  m.def("surjectivity_check", [](const MonadDatumP2& d) { return surjectivity_check(d); });
  m.def("check_c1p", [](const MonadDatumP2& d) { return check_c1_prime(d); });
  m.def("check_c2p", [](const MonadDatumP2& d) { return check_c2_prime(d); });
  m.def("stabilizer_dim_p2", [](const MonadDatumP2& d) { return stabilizer_dim(d); });
  m.def("combined_identity_residual", &combined_identity_residual);
  m.def("max_rank_margins", &max_rank_margins);
  m.def("p_map", &p_map);

  // flows and samplers
  m.def("random_integrable_s4", &random_integrable_s4, py::arg("k"), py::arg("r"),
        py::arg("seed"), py::arg("scale"));
  m.def("random_integrable_p2", &random_integrable_p2, py::arg("k"), py::arg("r"),
        py::arg("seed"), py::arg("scale"));
  m.def("random_integrable_newton_s4", &random_integrable_newton_s4, py::arg("k"),
        py::arg("r"), py::arg("seed"), py::arg("scale"));
  m.def("random_integrable_newton_p2", &random_integrable_newton_p2, py::arg("k"),
        py::arg("r"), py::arg("seed"), py::arg("scale"));
  m.def(
      "kempf_ness_flow_s4",
      [](const AdhmDatumS4& d, double zeta, double tol, int max_iter, bool require_integrable) {
        py::gil_scoped_release release;
        auto res = kempf_ness_flow(d, zeta, make_cfg(tol, max_iter, require_integrable));
        py::gil_scoped_acquire acquire;
        return py::make_tuple(res.datum, report_dict(res.report));
      },
      py::arg("m"), py::arg("zeta"), py::arg("tol") = 1e-10, py::arg("max_iter") = 20000,
      py::arg("require_integrable") = true);
  m.def(
      "kempf_ness_flow_p2",
      [](const MonadDatumP2& d, double zeta, double tol, int max_iter, bool require_integrable) {
        py::gil_scoped_release release;
        auto res = kempf_ness_flow(d, zeta, make_cfg(tol, max_iter, require_integrable));
        py::gil_scoped_acquire acquire;
        return py::make_tuple(res.datum, report_dict(res.report));
      },
      py::arg("m"), py::arg("zeta"), py::arg("tol") = 1e-10, py::arg("max_iter") = 20000,
      py::arg("require_integrable") = true);
  m.def(
      "sample_on_level_s4",
      [](int k, int r, double zeta, std::uint64_t seed, double tol) {
        return sample_on_level_s4(k, r, zeta, seed, make_cfg(tol, 20000)).first;
      },
      py::arg("k"), py::arg("r"), py::arg("zeta"), py::arg("seed"), py::arg("tol") = 1e-11);
  m.def(
      "sample_on_level_p2",
      [](int k, int r, double zeta, std::uint64_t seed, double tol) {
        return sample_on_level_p2(k, r, zeta, seed, make_cfg(tol, 20000)).first;
      },
      py::arg("k"), py::arg("r"), py::arg("zeta"), py::arg("seed"), py::arg("tol") = 1e-11);
  m.def("tangent_dimension_s4", [](const AdhmDatumS4& d, double zeta) {
    return tangent_dimension(d, zeta);
  });
  m.def("tangent_dimension_p2", [](const MonadDatumP2& d, double zeta) {
    return tangent_dimension(d, zeta);
  });
  m.def("df_surjectivity_check", [](const MonadDatumP2& d) { return df_surjectivity_check(d); });
  m.def("resolution_project", [](const MonadDatumP2& d, double zeta) {
    const ResolutionRecord rec = resolution_project(d, zeta);
    return py::make_tuple(rec.representative, report_dict(rec.report), rec.p_image,
                          rec.boundary);
  });

  // rank stabilization
  m.def("embed_s4", &embed_s4);
  m.def("embed_p2", &embed_p2);
  m.def(
      "homotopy_s4",
      [](const AdhmDatumS4& d, double zeta, double t) {
        return homotopy_s4(d, zeta, t, SplitParams::default_for(zeta));
      },
      py::arg("m"), py::arg("zeta"), py::arg("t"));
  m.def("homotopy_p2_h", &homotopy_p2_h, py::arg("m"), py::arg("zeta"), py::arg("t"));
  m.def("homotopy_p2_htilde", &homotopy_p2_htilde, py::arg("m"), py::arg("zeta"), py::arg("t"));
  m.def("verify_null_homotopy_s4", [](const AdhmDatumS4& d, double zeta) {
    return json(verify_null_homotopy(d, zeta, uniform_grid())).dump();
  });
  m.def("verify_null_homotopy_p2", [](const MonadDatumP2& d, double zeta) {
    return json(verify_null_homotopy(d, zeta, uniform_grid())).dump();
  });

  // fields
  m.def("one_instanton", &one_instanton, py::arg("rho") = 1.0);
  m.def("monad_maps", &monad_maps);
  m.def(
      "asd_residual_at",
      [](const AdhmDatumS4& d, std::array<double, 4> x, double h) {
        return asd_residual(gauge_field_at(d, x, h));
      },
      py::arg("m"), py::arg("x"), py::arg("h") = 1e-3);
  m.def(
      "charge_density_at",
      [](const AdhmDatumS4& d, std::array<double, 4> x, double h) {
        return charge_density(gauge_field_at(d, x, h));
      },
      py::arg("m"), py::arg("x"), py::arg("h") = 1e-3);
  m.def(
      "charge_integral",
      [](const AdhmDatumS4& d, double radius, long samples, std::uint64_t seed) {
        ChargeOptions opt;
        opt.radius = radius;
        opt.samples = samples;
        opt.seed = seed;
        ChargeReport rep;
        {
          py::gil_scoped_release release;
          rep = charge_integral(d, opt);
        }
        return json(rep).dump();
      },
      py::arg("m"), py::arg("radius") = 6.0, py::arg("samples") = 200000, py::arg("seed") = 1);
}
