#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qlat/algebra.hpp"

namespace qlat {

/// Discretized radiation continuum. `couplings` already carry the continuum
/// measure, g_k * sqrt(dk * lambda_C / 2 pi).
struct BathSpec {
  std::vector<double> mode_frequencies;
  std::vector<double> couplings;
  /// Grid spacing dk (GHz); zero for a single mode.
  double spacing = 0.0;

  /// Throws DomainError on an empty, unsorted or non-positive grid, a size
  /// mismatch, or negative couplings.
  void validate() const;
};

/// Flat bath in normalized units: every mode carries g^2 = 2 p / lambda_C before
/// the measure factor, so the per-mode coupling is sqrt(p dk / pi). `rate_scale`
/// is p, the factor k_q mu^2 / (4 eps_d A) of the physical rate.
BathSpec normalized_bath(const LatticeSpec& lattice, const CavitySpec& cavity, int modes,
                         double bandwidth, double rate_scale = 1.0);

/// Bath with g_k^2 = k_q^2 mu^2 / (2 eps_d k V), V = area * lambda_C.
BathSpec physical_bath(const LatticeSpec& lattice, const CavitySpec& cavity, int modes,
                       double bandwidth, double mu, double epsilon_d, double area);

/// One mode at omega_k with bare coupling g (no measure factor).
BathSpec single_mode_bath(double omega_k, double coupling);

struct DynamicsOptions {
  /// Keep every stride-th step in the trajectory (the last step is always kept).
  int record_stride = 1;
  /// When non-empty (size N), couple through sum_l chi_l(k) [S_l,+] / N with these
  /// per-l elements instead of the collapsed s(k).
  std::vector<double> per_l_elements;
};

struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> alpha;
  /// beta(mode, time index).
  Eigen::MatrixXcd beta;
  /// |alpha|^2 + sum_k |beta_k|^2 per recorded time.
  std::vector<double> norm_history;
};

/// Fixed-step RK4 in the interaction picture:
///   d alpha / dt  = -i sum_k g_k s(k) beta_k exp(-i (w_q - w_k) t)
///   d beta_k / dt = -i g_k s*(k) alpha exp(+i (w_q - w_k) t)
/// from alpha(0) = 1, beta(0) = 0. Throws DomainError when dt does not resolve
/// the largest detuning (dt max|w_q - w_k| >= 0.1) or when the recurrence time
/// 2 pi / dk is shorter than t_final; IntegrationError on non-finite amplitudes.
AmplitudeTrajectory integrate_amplitudes(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         const BathSpec& bath, double transition_element,
                                         double t_final, double dt,
                                         const DynamicsOptions& options = {});

struct FitWindow {
  double t_start;
  double t_end;
};

/// Least-squares decay rate -d ln|alpha|^2 / dt over the window. Throws
/// ComputationError if |alpha|^2 rises anywhere inside the window or fewer
/// than three samples fall in it.
double fit_decay(const AmplitudeTrajectory& traj, const FitWindow& window);

/// Golden-rule rate of |alpha|^2 for a bath: 2 pi g(k_q)^2 |s(k_q)|^2 / dk,
/// with g(k_q) interpolated from the nearest modes.
double golden_rule_rate(const LatticeSpec& lattice, const CavitySpec& cavity, const BathSpec& bath,
                        double transition_element);

}  // namespace qlat
