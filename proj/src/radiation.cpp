#include "qlat/radiation.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qlat/errors.hpp"
#include "qlat/polariton.hpp"

namespace qlat {

using std::numbers::pi;

namespace {

// Phase advance per qubit, pi ell k / k0.
double phase_step(const LatticeSpec& lattice, const CavitySpec& cavity, double k) {
  return pi * lattice.relative_spacing() * k / cavity.k0();
}

// W_j = sum_l cos(j pi l): the l-summed transform weight of qubit j.
std::vector<double> summed_transform_weights(int n) {
  std::vector<double> w(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int p = 0; p < n; ++p) w[j] += std::cos(j * pi * p / n);
  return w;
}

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <typename F>
complex gauss_panels(F&& fn, double a, double b, int panels) {
  complex sum = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
      sum += kGaussWeights[i] * half * fn(mid + half * kGaussNodes[i]);
  }
  return sum;
}

}  // namespace

std::vector<double> transform_indices(int n_qubits) {
  std::vector<double> l(n_qubits);
  for (int p = 0; p < n_qubits; ++p) l[p] = static_cast<double>(p) / n_qubits;
  return l;
}

complex chi(const LatticeSpec& lattice, const CavitySpec& cavity, double l, double k) {
  const double phi = phase_step(lattice, cavity, k);
  complex sum = 0.0;
  for (int j = 0; j < lattice.n_qubits(); ++j)
    sum += std::cos(j * pi * l) * std::polar(1.0, j * phi);
  return sum;
}

complex chi_closed_form(const LatticeSpec& lattice, const CavitySpec& cavity, double l,
                        double k) {
  const int n = lattice.n_qubits();
  const double phi = phase_step(lattice, cavity, k);
  const complex z = std::polar(1.0, phi);
  const complex den = 1.0 + z * z - 2.0 * z * std::cos(l * pi);
  if (std::abs(den) <= 1e-9)
    throw SingularDenominatorError("chi closed form: denominator vanishes at k = " +
                                   std::to_string(k));
  const complex num = 1.0 + std::polar(1.0, (n + 1) * phi) * std::cos(l * (n - 1) * pi) -
                      std::polar(1.0, n * phi) * std::cos(n * l * pi) - z * std::cos(l * pi);
  return num / den;
}

complex s_factor(const LatticeSpec& lattice, const CavitySpec& cavity, double k,
                 double transition_element) {
  const int n = lattice.n_qubits();
  complex sum = 0.0;
  for (double l : transform_indices(n)) sum += chi(lattice, cavity, l, k);
  return sum * transition_element / static_cast<double>(n);
}

complex s_factor(const LatticeSpec& lattice, const CavitySpec& cavity, double k,
                 const std::vector<double>& transition_elements) {
  const int n = lattice.n_qubits();
  if (static_cast<int>(transition_elements.size()) != n)
    throw DomainError("need one transition element per transform index");
  const std::vector<double> l = transform_indices(n);
  complex sum = 0.0;
  for (int p = 0; p < n; ++p) sum += chi(lattice, cavity, l[p], k) * transition_elements[p];
  return sum / static_cast<double>(n);
}

CouplingProfile coupling_profile(const LatticeSpec& lattice, const CavitySpec& cavity,
                                 const std::vector<double>& k_grid, double transition_element) {
  CouplingProfile out;
  const int n = lattice.n_qubits();
  out.l_values = transform_indices(n);
  out.k_grid = k_grid;
  out.chi.resize(n, static_cast<Eigen::Index>(k_grid.size()));
  out.s_factor.reserve(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    complex total = 0.0;
    for (int p = 0; p < n; ++p) {
      const complex c = chi(lattice, cavity, out.l_values[p], k_grid[i]);
      out.chi(p, static_cast<Eigen::Index>(i)) = c;
      total += c;
    }
    out.s_factor.push_back(total * transition_element / static_cast<double>(n));
  }
  return out;
}

double quasi_period(const LatticeSpec& lattice, const CavitySpec& cavity) {
  if (lattice.relative_spacing() == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * cavity.omega_c() / lattice.relative_spacing();
}

DecayResult decay_rate(const LatticeSpec& lattice, const CavitySpec& cavity, int branch,
                       std::optional<PrefactorInputs> prefactor) {
  DecayResult out;
  out.transition_element = first_excited_transition(lattice, cavity, branch);
  out.s_at_kq = std::abs(s_factor(lattice, cavity, lattice.k_q(), out.transition_element));
  out.s_at_zero = std::abs(s_factor(lattice, cavity, 0.0, out.transition_element));
  out.gamma_normalized = 2.0 * out.s_at_kq * out.s_at_kq - out.s_at_zero * out.s_at_zero;
  if (prefactor) {
    if (!(prefactor->epsilon_d > 0.0) || !(prefactor->area > 0.0))
      throw DomainError("dielectric constant and area must be positive");
    const double scale =
        lattice.k_q() * prefactor->mu * prefactor->mu / (4.0 * prefactor->epsilon_d * prefactor->area);
    out.gamma_physical = scale * out.gamma_normalized;
    out.prefactor_inputs = prefactor;
  }
  return out;
}

std::vector<double> s_squared_harmonics(const LatticeSpec& lattice, double transition_element) {
  const int n = lattice.n_qubits();
  const std::vector<double> w = summed_transform_weights(n);
  const double scale = transition_element * transition_element / (static_cast<double>(n) * n);
  std::vector<double> a(n, 0.0);
  for (int d = 0; d < n; ++d)
    for (int j = 0; j + d < n; ++j) a[d] += w[j + d] * w[j];
  for (double& v : a) v *= scale;
  return a;
}

PvResult pv_integral(const std::function<double(double)>& s_squared, double k_q, double k_max,
                     std::optional<double> period_mean, const PvControls& controls) {
  if (!(k_q > 0.0)) throw DomainError("k_q must be positive");
  if (!(controls.delta > 0.0)) throw DomainError("exclusion radius must be positive");
  const double window = 0.5 * k_q;
  if (!(k_max > k_q + window)) throw DomainError("k_max must exceed 1.5 k_q");
  if (!(controls.delta < window)) throw DomainError("exclusion radius must be below k_q / 2");

  const complex i_unit(0.0, 1.0);
  auto integrand = [&](double k) -> complex {
    return s_squared(k) / (i_unit * k * (k - k_q));
  };
  // Paired points p + x and p - x cancel the simple pole at p.
  auto paired = [&](double pole) {
    return [&, pole](double x) -> complex { return integrand(pole + x) + integrand(pole - x); };
  };

  double width = controls.step;
  if (!(width > 0.0)) width = window / 8.0;
  auto outer_panels = [&](double a, double b) {
    return std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  };

  const complex outer = gauss_panels(integrand, -k_max, -window, outer_panels(-k_max, -window)) +
                        gauss_panels(integrand, k_q + window, k_max, outer_panels(k_q + window, k_max));
  complex tail = 0.0;
  if (controls.tail_correction && period_mean)
    tail = *period_mean / (i_unit * k_q) * std::log((k_max + k_q) / (k_max - k_q));

  // The paired integrand is regular at x = 0, so the excluded [0, delta] is
  // restored by its midpoint value; halving then changes the result at O(delta^3).
  auto assemble = [&](double delta) {
    const int panels = 64;
    complex sum = outer + tail;
    for (double pole : {0.0, k_q}) {
      const auto g = paired(pole);
      sum += gauss_panels(g, delta, window, panels) + delta * g(0.5 * delta);
    }
    return sum;
  };

  const double floor = 1e-6 * (1.0 + std::abs(s_squared(0.0)) + std::abs(s_squared(k_q))) / k_q;
  PvResult out;
  double delta = controls.delta;
  complex previous = assemble(delta);
  for (int h = 1; h <= controls.max_halvings; ++h) {
    const complex current = assemble(0.5 * delta);
    const double change = std::abs(current - previous) / std::max(std::abs(current), floor);
    delta *= 0.5;
    out.halvings = h;
    out.halving_change = change;
    previous = current;
    if (change < controls.halving_tolerance) break;
  }
  if (!(out.halving_change < controls.halving_tolerance))
    throw ConvergenceError("principal value did not settle under exclusion-radius halving",
                           out.halving_change);

  out.numeric = previous.real();
  out.numeric_imag = previous.imag();
  out.delta_used = delta;
  out.analytic = pi / k_q * (s_squared(0.0) - s_squared(k_q));
  return out;
}

PvResult pv_integral_check(const LatticeSpec& lattice, const CavitySpec& cavity, int branch,
                           const PvControls& controls) {
  const double element = first_excited_transition(lattice, cavity, branch);
  const double k_q = lattice.k_q();
  double k_max = controls.k_max;
  if (!(k_max > 0.0)) {
    const double period = quasi_period(lattice, cavity);
    k_max = std::isfinite(period) ? 20.0 * period : 400.0 * k_q;
    k_max = std::max(k_max, 4.0 * k_q);
  }
  const std::vector<double> harmonics = s_squared_harmonics(lattice, element);
  auto s_sq = [&](double k) { return std::norm(s_factor(lattice, cavity, k, element)); };

  PvResult out = pv_integral(s_sq, k_q, k_max, harmonics[0], controls);
  const double phi_q = phase_step(lattice, cavity, k_q);
  double residue = 0.0;
  for (std::size_t d = 1; d < harmonics.size(); ++d)
    residue += harmonics[d] * std::sin(static_cast<double>(d) * phi_q);
  out.residue_imag = 2.0 * pi / k_q * residue;
  return out;
}

}  // namespace qlat
