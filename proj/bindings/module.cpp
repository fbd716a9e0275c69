#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ilw/config.hpp"
#include "ilw/experiments.hpp"
#include "ilw/resonance.hpp"

namespace py = pybind11;
using namespace ilw;

namespace {

SpectralField field_from_coeffs(const Grid& grid,
                                const std::vector<std::complex<double>>& coeffs) {
  if (coeffs.size() != grid.modes()) throw std::invalid_argument("coefficient count mismatch");
  SpectralField f(grid);
  std::copy(coeffs.begin(), coeffs.end(), f.coeffs().begin());
  f.enforce_real_symmetry();
  return f;
}

std::vector<std::complex<double>> coeffs_of(const SpectralField& f) {
  return {f.coeffs().begin(), f.coeffs().end()};
}

EquationSpec spec_from(const std::string& family, int k, std::optional<double> delta) {
  const auto fam = family_from_name(family);
  if (!fam) throw std::invalid_argument("unknown family: " + family);
  switch (*fam) {
    case Family::gilw_deep:
      if (!delta) throw std::invalid_argument("gILW-deep needs a depth");
      return EquationSpec::deep(*delta, k);
    case Family::gbo: return EquationSpec::bo(k);
    case Family::scaled_gilw:
      if (!delta) throw std::invalid_argument("scaled-gILW needs a depth");
      return EquationSpec::shallow(*delta, k);
    case Family::gkdv: return EquationSpec::kdv(k);
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace

PYBIND11_MODULE(_ilwlimits, m) {
  m.doc() = "ILW / BO / KdV pseudospectral limit experiments";
  m.attr("__version__") = "0.1.0";

  py::class_<Grid>(m, "Grid")
      .def(py::init<std::size_t, double>(), py::arg("modes"), py::arg("period") = two_pi)
      .def_property_readonly("modes", &Grid::modes)
      .def_property_readonly("period", &Grid::period)
      .def("wavenumber", &Grid::wavenumber)
      .def("nodes", &Grid::nodes);

  py::class_<SpectralField>(m, "SpectralField")
      .def(py::init(&field_from_coeffs), py::arg("grid"), py::arg("coeffs"))
      .def_property_readonly("grid", &SpectralField::grid)
      .def("coeff", py::overload_cast<int>(&SpectralField::coeff, py::const_))
      .def("coeffs", &coeffs_of);

  m.def("to_spectral",
        [](const Grid& g, const std::vector<double>& x) {
          return to_spectral(g, std::span<const double>(x.data(), x.size()));
        },
        py::arg("grid"), py::arg("samples"));
  m.def("to_physical", &to_physical);
  m.def("project_dyadic", &project_dyadic);
  m.def("project_leq", &project_leq);
  m.def("sobolev_norm", &sobolev_norm);
  m.def("random_hs_field", &random_hs_field, py::arg("grid"), py::arg("s"), py::arg("amplitude"),
        py::arg("seed"));

  m.def("coth_stable", &coth_stable);
  m.def("k_delta", &k_delta);
  m.def("l_delta", &l_delta);
  m.def("q_delta", &q_delta);
  m.def("h_series", &h_series, py::arg("delta"), py::arg("xi"), py::arg("tol") = 1e-12);
  m.def("h_closed", &h_closed);
  m.def("deep_symbol", &deep_symbol, py::arg("delta"), py::arg("xi"));
  m.def("scaled_symbol", &scaled_symbol, py::arg("delta"), py::arg("xi"));

  m.def("omega",
        [](const std::string& regime, std::optional<double> delta, std::vector<int> entries) {
          const Regime r = regime == "deep" ? Regime::deep : Regime::shallow;
          return omega(r, delta, FrequencyTuple::make(std::move(entries)));
        },
        py::arg("regime"), py::arg("delta"), py::arg("entries"));

  m.def("dispersion_table",
        [](const std::string& family, int k, std::optional<double> delta, const Grid& grid) {
          const SymbolTable t = SymbolTable::build(spec_from(family, k, delta), grid);
          std::vector<double> p(t.p_values().begin(), t.p_values().end());
          return p;
        },
        py::arg("family"), py::arg("k"), py::arg("delta"), py::arg("grid"));

  m.def("evolve",
        [](const SpectralField& u0, const std::string& family, int k, std::optional<double> delta,
           double T, double dt, bool linear_only, std::optional<double> truncation) {
          SolverConfig cfg;
          cfg.spec = spec_from(family, k, delta);
          cfg.grid = u0.grid();
          cfg.final_time = T;
          cfg.dt = dt;
          cfg.linear_only = linear_only;
          cfg.truncation = truncation;
          const Trajectory traj = evolve(u0, cfg);
          py::dict out;
          py::list times, fields, l2, hs;
          for (const auto& s : traj.snapshots) {
            times.append(s.t);
            fields.append(coeffs_of(s.field));
          }
          for (const auto& d : traj.diagnostics) {
            l2.append(d.l2);
            hs.append(d.hs);
          }
          out["t"] = times;
          out["coeffs"] = fields;
          out["l2"] = l2;
          out["hs"] = hs;
          out["blown_up"] = traj.blown_up;
          out["dt"] = traj.dt;
          return out;
        },
        py::arg("u0"), py::arg("family"), py::arg("k") = 2, py::arg("delta") = py::none(),
        py::arg("T") = 0.3, py::arg("dt") = 0.0, py::arg("linear_only") = false,
        py::arg("truncation") = py::none());

  m.def("invariant_i2", &invariant_i2);
  m.def("invariant_i2_flipped", &invariant_i2_flipped);

  m.def("check_res1",
        [](const std::string& regime, const std::vector<std::optional<double>>& deltas, int k,
           int cap) {
          const Regime r = regime == "deep" ? Regime::deep : Regime::shallow;
          const BoundReport rep = check_res1(r, deltas, k, cap);
          py::dict out;
          out["min_ratio"] = rep.min_ratio;
          out["pass"] = rep.pass;
          out["indeterminate"] = rep.indeterminate;
          py::list per;
          for (const auto& df : rep.per_delta) {
            py::dict e;
            e["delta"] = df.delta ? py::cast(*df.delta) : py::none();
            e["tuple_count"] = df.tuple_count;
            e["min_ratio"] = df.min_ratio;
            e["argmin"] = df.argmin;
            per.append(e);
          }
          out["per_delta"] = per;
          return out;
        },
        py::arg("regime"), py::arg("deltas"), py::arg("k"), py::arg("cap") = 32);

  m.def("run_check_suite", [](std::size_t modes, double T, int cap) {
    CheckConfig cfg;
    cfg.modes = modes;
    cfg.final_time = T;
    cfg.resonance_cap = cap;
    const CheckReport rep = run_check(cfg);
    py::list items;
    for (const auto& it : rep.items) {
      py::dict e;
      e["name"] = it.name;
      e["measured"] = it.measured;
      e["pass"] = it.pass;
      items.append(e);
    }
    py::dict out;
    out["pass"] = rep.pass;
    out["items"] = items;
    return out;
  }, py::arg("modes") = 64, py::arg("T") = 0.1, py::arg("cap") = 16);
}
