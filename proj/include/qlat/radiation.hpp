#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qlat/algebra.hpp"

namespace qlat {

using complex = std::complex<double>;

/// Transform indices l in {0, 1/N, ..., (N-1)/N}.
std::vector<double> transform_indices(int n_qubits);

/// chi_l(k) = sum_j cos(j pi l) exp(i j pi ell k / k0), evaluated as the direct
/// finite sum. k is given as a frequency in GHz.
complex chi(const LatticeSpec& lattice, const CavitySpec& cavity, double l, double k);

/// Ratio form of the same geometric sum. Throws SingularDenominatorError when
/// |denominator| <= 1e-9; callers fall back to chi().
complex chi_closed_form(const LatticeSpec& lattice, const CavitySpec& cavity, double l, double k);

/// s(k) = (1/N) sum_l chi_l(k) [S_l,+] with one l-independent element.
complex s_factor(const LatticeSpec& lattice, const CavitySpec& cavity, double k,
                 double transition_element);

/// s(k) with a separate [S_l,+] per transform index (size N).
complex s_factor(const LatticeSpec& lattice, const CavitySpec& cavity, double k,
                 const std::vector<double>& transition_elements);

struct CouplingProfile {
  std::vector<double> l_values;
  std::vector<double> k_grid;
  /// chi(l index, k index).
  Eigen::MatrixXcd chi;
  std::vector<complex> s_factor;
};

CouplingProfile coupling_profile(const LatticeSpec& lattice, const CavitySpec& cavity,
                                 const std::vector<double>& k_grid, double transition_element);

/// Quasi-period of chi in frequency, 2 omega_C / ell. Infinite when ell = 0.
double quasi_period(const LatticeSpec& lattice, const CavitySpec& cavity);

struct PrefactorInputs {
  double mu;         // qubit dipole moment
  double epsilon_d;  // waveguide dielectric constant
  double area;       // resonator cross-section A
};

struct DecayResult {
  /// 2 |s(k_q)|^2 - |s(0)|^2.
  double gamma_normalized = 0.0;
  /// (k_q mu^2 / (4 eps_d A)) * gamma_normalized; set iff prefactor inputs given.
  std::optional<double> gamma_physical;
  double s_at_kq = 0.0;
  double s_at_zero = 0.0;
  double transition_element = 0.0;
  std::optional<PrefactorInputs> prefactor_inputs;
};

DecayResult decay_rate(const LatticeSpec& lattice, const CavitySpec& cavity, int branch = 0,
                       std::optional<PrefactorInputs> prefactor = std::nullopt);

/// Quadrature controls for the principal-value integral
///   PV int dk |s(k)|^2 / (i k (k - k_q))  over [-k_max, k_max].
struct PvControls {
  /// Initial exclusion half-width around each pole (GHz).
  double delta = 1e-3;
  /// Cutoff; <= 0 selects 20 quasi-periods (or 400 k_q when ell = 0).
  double k_max = 0.0;
  /// Gauss panel width away from the poles; <= 0 selects k_q / 16.
  double step = 0.0;
  /// Relative change under delta halving accepted as converged.
  double halving_tolerance = 2e-3;
  int max_halvings = 12;
  /// Add the exact |k| > k_max contribution of the k-independent part of |s|^2.
  bool tail_correction = true;
};

struct PvResult {
  /// Real part of the assembled principal value.
  double numeric = 0.0;
  /// Imaginary part of the assembled principal value.
  double numeric_imag = 0.0;
  /// (pi / k_q) (|s(0)|^2 - |s(k_q)|^2).
  double analytic = 0.0;
  /// Imaginary part from sign-resolved residues: (2 pi / k_q) sum_{d>0} a_d sin(d phi_q),
  /// where |s|^2 = sum_d a_d exp(i d phi); only available for the lattice overload.
  std::optional<double> residue_imag;
  double delta_used = 0.0;
  /// Relative change of the complex value at the last halving step.
  double halving_change = 0.0;
  int halvings = 0;
};

/// Generic principal-value quadrature for a real |s(k)|^2. `period_mean` is the
/// mean of |s|^2 over k (used by the tail correction when enabled).
/// Throws ConvergenceError when delta halving does not settle.
PvResult pv_integral(const std::function<double(double)>& s_squared, double k_q, double k_max,
                     std::optional<double> period_mean, const PvControls& controls);

PvResult pv_integral_check(const LatticeSpec& lattice, const CavitySpec& cavity, int branch = 0,
                           const PvControls& controls = {});

/// Fourier coefficients a_d, d = 0..N-1, of |s(k)|^2 = sum_{|d|<N} a_{|d|} exp(i d phi),
/// phi = pi ell k / k0. Real and symmetric because the transform weights are real.
std::vector<double> s_squared_harmonics(const LatticeSpec& lattice, double transition_element);

}  // namespace qlat
