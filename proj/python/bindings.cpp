#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "qlat/algebra.hpp"
#include "qlat/cli.hpp"
#include "qlat/dynamics.hpp"
#include "qlat/errors.hpp"
#include "qlat/polariton.hpp"
#include "qlat/radiation.hpp"

namespace py = pybind11;
using namespace qlat;

namespace {

HalfInteger half_integer(double u) {
  const double twice = 2.0 * u;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    throw DomainError("excitation number must be an integer or half-integer");
  return HalfInteger::from_twice(static_cast<int>(std::lround(twice)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cavity polaritons in a quasi-lattice of qubits";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init<int, double, double>(), py::arg("n_qubits"), py::arg("relative_spacing"),
           py::arg("omega_q"))
      .def_property_readonly("n_qubits", &LatticeSpec::n_qubits)
      .def_property_readonly("relative_spacing", &LatticeSpec::relative_spacing)
      .def_property_readonly("omega_q", &LatticeSpec::omega_q)
      .def_property_readonly("r", [](const LatticeSpec& l) { return l.r().value(); });

  py::class_<CavitySpec>(m, "CavitySpec")
      .def(py::init<double, double>(), py::arg("omega_c"), py::arg("eta"))
      .def_property_readonly("omega_c", &CavitySpec::omega_c)
      .def_property_readonly("eta", &CavitySpec::eta)
      .def_property_readonly("wavelength", &CavitySpec::wavelength);

  m.def("deformation_factor", &deformation_factor, py::arg("lattice"));

  m.def(
      "diagonalize_sector",
      [](const LatticeSpec& lattice, const CavitySpec& cavity, double u) {
        const PolaritonSector s = diagonalize_sector(lattice, cavity, half_integer(u));
        py::dict out;
        out["eigenvalues"] = s.eigenvalues;
        out["stark_splittings"] = s.stark_splittings;
        out["coefficients"] = s.coefficients;
        std::vector<int> photons;
        for (const SectorEntry& e : s.basis.entries()) photons.push_back(e.n);
        out["photon_numbers"] = photons;
        return out;
      },
      py::arg("lattice"), py::arg("cavity"), py::arg("u"),
      "Eigenvalues, Stark splittings and coefficient columns of sector u.");

  m.def(
      "closed_form_coefficients",
      [](const LatticeSpec& lattice, const CavitySpec& cavity, double u, int branch) {
        return closed_form_coefficients(lattice, cavity, half_integer(u), branch);
      },
      py::arg("lattice"), py::arg("cavity"), py::arg("u"), py::arg("branch"));

  m.def("first_excited_transition", &first_excited_transition, py::arg("lattice"),
        py::arg("cavity"), py::arg("branch") = 0);

  m.def("chi", &chi, py::arg("lattice"), py::arg("cavity"), py::arg("l"), py::arg("k"));
  m.def("chi_closed_form", &chi_closed_form, py::arg("lattice"), py::arg("cavity"), py::arg("l"),
        py::arg("k"));
  m.def("s_factor",
        py::overload_cast<const LatticeSpec&, const CavitySpec&, double, double>(&s_factor),
        py::arg("lattice"), py::arg("cavity"), py::arg("k"), py::arg("transition_element"));
  m.def("quasi_period", &quasi_period, py::arg("lattice"), py::arg("cavity"));

  py::class_<DecayResult>(m, "DecayResult")
      .def_readonly("gamma_normalized", &DecayResult::gamma_normalized)
      .def_readonly("gamma_physical", &DecayResult::gamma_physical)
      .def_readonly("s_at_kq", &DecayResult::s_at_kq)
      .def_readonly("s_at_zero", &DecayResult::s_at_zero)
      .def_readonly("transition_element", &DecayResult::transition_element);

  m.def(
      "decay_rate",
      [](const LatticeSpec& lattice, const CavitySpec& cavity, int branch, std::optional<double> mu,
         std::optional<double> epsilon_d, std::optional<double> area) {
        std::optional<PrefactorInputs> prefactor;
        if (mu || epsilon_d || area) {
          if (!(mu && epsilon_d && area)) throw DomainError("mu, epsilon_d and area go together");
          prefactor = PrefactorInputs{*mu, *epsilon_d, *area};
        }
        return decay_rate(lattice, cavity, branch, prefactor);
      },
      py::arg("lattice"), py::arg("cavity"), py::arg("branch") = 0, py::arg("mu") = py::none(),
      py::arg("epsilon_d") = py::none(), py::arg("area") = py::none());

  py::class_<PvResult>(m, "PvResult")
      .def_readonly("numeric", &PvResult::numeric)
      .def_readonly("numeric_imag", &PvResult::numeric_imag)
      .def_readonly("analytic", &PvResult::analytic)
      .def_readonly("residue_imag", &PvResult::residue_imag)
      .def_readonly("delta_used", &PvResult::delta_used)
      .def_readonly("halving_change", &PvResult::halving_change)
      .def_readonly("halvings", &PvResult::halvings);

  m.def(
      "pv_integral_check",
      [](const LatticeSpec& lattice, const CavitySpec& cavity, int branch, double delta,
         double k_max) {
        PvControls c;
        c.delta = delta;
        c.k_max = k_max;
        return pv_integral_check(lattice, cavity, branch, c);
      },
      py::arg("lattice"), py::arg("cavity"), py::arg("branch") = 0, py::arg("delta") = 1e-3,
      py::arg("k_max") = 0.0);

  m.def(
      "integrate_normalized_bath",
      [](const LatticeSpec& lattice, const CavitySpec& cavity, int modes, double bandwidth,
         double rate_scale, double t_final, double dt, int record_stride, int branch) {
        const double element = first_excited_transition(lattice, cavity, branch);
        const BathSpec bath = normalized_bath(lattice, cavity, modes, bandwidth, rate_scale);
        DynamicsOptions options;
        options.record_stride = record_stride;
        const AmplitudeTrajectory t =
            integrate_amplitudes(lattice, cavity, bath, element, t_final, dt, options);
        py::dict out;
        out["times"] = t.times;
        out["alpha"] = t.alpha;
        out["norm"] = t.norm_history;
        return out;
      },
      py::arg("lattice"), py::arg("cavity"), py::arg("modes") = 800, py::arg("bandwidth") = 2.0,
      py::arg("rate_scale") = 0.01, py::arg("t_final") = 120.0, py::arg("dt") = 0.05,
      py::arg("record_stride") = 10, py::arg("branch") = 0,
      "Trajectory of alpha against a flat bath; returns times, alpha and norm.");

  m.def(
      "fit_decay",
      [](const std::vector<double>& times, const std::vector<std::complex<double>>& alpha,
         double t_start, double t_end) {
        AmplitudeTrajectory t;
        t.times = times;
        t.alpha = alpha;
        return fit_decay(t, {t_start, t_end});
      },
      py::arg("times"), py::arg("alpha"), py::arg("t_start"), py::arg("t_end"));

  m.def(
      "validate",
      [](std::uint64_t seed) {
        const ValidationReport r = validation_suite(seed);
        return py::make_tuple(r.passed(), r.to_json());
      },
      py::arg("seed") = 20240601, "Run the invariant suite; returns (passed, report_json).");
}
