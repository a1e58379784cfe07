#include "qlat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qlat/errors.hpp"
#include "qlat/radiation.hpp"

namespace qlat {

using std::numbers::pi;

namespace {

std::vector<double> centered_grid(double center, int modes, double bandwidth) {
  if (modes < 1) throw DomainError("bath needs at least one mode");
  if (!(bandwidth > 0.0)) throw DomainError("bath bandwidth must be positive");
  const double step = bandwidth / modes;
  std::vector<double> grid(modes);
  for (int i = 0; i < modes; ++i) grid[i] = center - 0.5 * bandwidth + (i + 0.5) * step;
  return grid;
}

}  // namespace

void BathSpec::validate() const {
  if (mode_frequencies.empty()) throw DomainError("bath has no modes");
  if (mode_frequencies.size() != couplings.size())
    throw DomainError("bath frequencies and couplings differ in length");
  for (std::size_t i = 0; i < mode_frequencies.size(); ++i) {
    if (!(mode_frequencies[i] > 0.0)) throw DomainError("bath mode frequencies must be positive");
    if (i > 0 && !(mode_frequencies[i] > mode_frequencies[i - 1]))
      throw DomainError("bath grid must be strictly increasing");
    if (!(couplings[i] >= 0.0)) throw DomainError("bath couplings must be nonnegative");
  }
  if (mode_frequencies.size() > 1 && !(spacing > 0.0))
    throw DomainError("multi-mode bath needs a positive spacing");
}

BathSpec normalized_bath(const LatticeSpec& lattice, const CavitySpec& /*cavity*/, int modes,
                         double bandwidth, double rate_scale) {
  if (!(rate_scale >= 0.0)) throw DomainError("rate scale must be nonnegative");
  BathSpec bath;
  bath.mode_frequencies = centered_grid(lattice.omega_q(), modes, bandwidth);
  bath.spacing = bandwidth / modes;
  bath.couplings.assign(modes, std::sqrt(rate_scale * bath.spacing / pi));
  bath.validate();
  return bath;
}

BathSpec physical_bath(const LatticeSpec& lattice, const CavitySpec& /*cavity*/, int modes,
                       double bandwidth, double mu, double epsilon_d, double area) {
  if (!(epsilon_d > 0.0) || !(area > 0.0))
    throw DomainError("dielectric constant and area must be positive");
  BathSpec bath;
  bath.mode_frequencies = centered_grid(lattice.omega_q(), modes, bandwidth);
  bath.spacing = bandwidth / modes;
  const double kq = lattice.k_q();
  bath.couplings.reserve(modes);
  for (double k : bath.mode_frequencies) {
    if (!(k > 0.0)) throw DomainError("bath extends to non-positive frequencies");
    // g_k^2 dk lambda_C / 2 pi with V = A lambda_C.
    bath.couplings.push_back(std::sqrt(kq * kq * mu * mu * bath.spacing / (4.0 * pi * epsilon_d * k * area)));
  }
  bath.validate();
  return bath;
}

BathSpec single_mode_bath(double omega_k, double coupling) {
  BathSpec bath;
  bath.mode_frequencies = {omega_k};
  bath.couplings = {coupling};
  bath.validate();
  return bath;
}

AmplitudeTrajectory integrate_amplitudes(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         const BathSpec& bath, double transition_element,
                                         double t_final, double dt,
                                         const DynamicsOptions& options) {
  bath.validate();
  if (!(t_final > 0.0) || !(dt > 0.0)) throw DomainError("t_final and dt must be positive");
  if (options.record_stride < 1) throw DomainError("record stride must be >= 1");

  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final / static_cast<double>(steps);
  const int modes = static_cast<int>(bath.mode_frequencies.size());
  const double wq = lattice.omega_q();

  std::vector<double> detuning(modes);
  double max_detuning = 0.0;
  for (int k = 0; k < modes; ++k) {
    detuning[k] = wq - bath.mode_frequencies[k];
    max_detuning = std::max(max_detuning, std::abs(detuning[k]));
  }
  if (h * max_detuning >= 0.1)
    throw DomainError("dt does not resolve the largest detuning (dt * max|dw| = " +
                      std::to_string(h * max_detuning) + ")");
  if (modes > 1 && 2.0 * pi / bath.spacing <= t_final)
    throw DomainError("t_final exceeds the bath recurrence time 2 pi / dk");

  std::vector<std::complex<double>> coupling(modes);
  const bool per_l = !options.per_l_elements.empty();
  for (int k = 0; k < modes; ++k) {
    const double w = bath.mode_frequencies[k];
    const std::complex<double> s = per_l
                                       ? s_factor(lattice, cavity, w, options.per_l_elements)
                                       : s_factor(lattice, cavity, w, transition_element);
    coupling[k] = bath.couplings[k] * s;
  }

  using cvec = Eigen::VectorXcd;
  const std::complex<double> minus_i(0.0, -1.0);
  cvec phase(modes);
  auto set_phase = [&](double t) {
    for (int k = 0; k < modes; ++k) phase[k] = std::polar(1.0, -detuning[k] * t);
  };
  // y = (alpha, beta_0, ..., beta_{M-1}); `phase` must hold exp(-i dw t).
  auto rhs = [&](const cvec& y, cvec& out) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < modes; ++k) {
      acc += coupling[k] * y[k + 1] * phase[k];
      out[k + 1] = minus_i * std::conj(coupling[k]) * y[0] * std::conj(phase[k]);
    }
    out[0] = minus_i * acc;
  };

  cvec y = cvec::Zero(modes + 1);
  y[0] = 1.0;

  AmplitudeTrajectory traj;
  const long recorded = steps / options.record_stride + 1 + (steps % options.record_stride ? 1 : 0);
  traj.times.reserve(recorded);
  traj.alpha.reserve(recorded);
  traj.norm_history.reserve(recorded);
  traj.beta.resize(modes, recorded);
  auto record = [&](double t) {
    const Eigen::Index col = static_cast<Eigen::Index>(traj.times.size());
    traj.times.push_back(t);
    traj.alpha.push_back(y[0]);
    traj.beta.col(col) = y.tail(modes);
    traj.norm_history.push_back(y.squaredNorm());
  };
  record(0.0);

  cvec k1(modes + 1), k2(modes + 1), k3(modes + 1), k4(modes + 1), tmp(modes + 1);
  for (long step = 0; step < steps; ++step) {
    const double t = step * h;
    set_phase(t);
    rhs(y, k1);
    set_phase(t + 0.5 * h);
    tmp = y + 0.5 * h * k1;
    rhs(tmp, k2);
    tmp = y + 0.5 * h * k2;
    rhs(tmp, k3);
    set_phase(t + h);
    tmp = y + h * k3;
    rhs(tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!y.allFinite()) throw IntegrationError("non-finite amplitude", t + h);
    if ((step + 1) % options.record_stride == 0 || step + 1 == steps) record((step + 1) * h);
  }
  traj.beta.conservativeResize(modes, static_cast<Eigen::Index>(traj.times.size()));
  return traj;
}

double fit_decay(const AmplitudeTrajectory& traj, const FitWindow& window) {
  if (!(window.t_end > window.t_start)) throw DomainError("fit window is empty");
  std::vector<double> ts;
  std::vector<double> ys;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t < window.t_start || t > window.t_end) continue;
    const double p = std::norm(traj.alpha[i]);
    if (!(p > 0.0)) throw ComputationError("|alpha|^2 vanishes inside the fit window");
    if (p > previous * (1.0 + 1e-12))
      throw ComputationError("|alpha|^2 is not monotone in the fit window (revival at t = " +
                             std::to_string(t) + " ns)");
    previous = p;
    ts.push_back(t);
    ys.push_back(std::log(p));
  }
  if (ts.size() < 3) throw ComputationError("fewer than three samples in the fit window");

  Eigen::MatrixXd design(ts.size(), 2);
  Eigen::VectorXd rhs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = ts[i];
    rhs[static_cast<Eigen::Index>(i)] = ys[i];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  return -coef[1];
}

double golden_rule_rate(const LatticeSpec& lattice, const CavitySpec& cavity, const BathSpec& bath,
                        double transition_element) {
  bath.validate();
  if (bath.mode_frequencies.size() < 2) throw DomainError("golden rule needs a continuum bath");
  const double kq = lattice.k_q();
  const auto& w = bath.mode_frequencies;
  if (kq < w.front() || kq > w.back()) throw DomainError("bath does not cover k_q");
  const auto hi = std::lower_bound(w.begin(), w.end(), kq);
  std::size_t j = static_cast<std::size_t>(hi - w.begin());
  double g2;
  if (j == 0) {
    g2 = bath.couplings[0] * bath.couplings[0];
  } else {
    const double x = (kq - w[j - 1]) / (w[j] - w[j - 1]);
    const double a = bath.couplings[j - 1] * bath.couplings[j - 1];
    const double b = bath.couplings[j] * bath.couplings[j];
    g2 = a + x * (b - a);
  }
  const double s2 = std::norm(s_factor(lattice, cavity, kq, transition_element));
  return 2.0 * pi * g2 * s2 / bath.spacing;
}

}  // namespace qlat
