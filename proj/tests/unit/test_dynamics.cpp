#include <doctest.h>

#include <cmath>

#include "qlat/dynamics.hpp"
#include "qlat/errors.hpp"
#include "qlat/polariton.hpp"
#include "qlat/radiation.hpp"

using namespace qlat;
using std::numbers::pi;

namespace {

constexpr double kOmegaC = 6.729;
const LatticeSpec kLattice(4, 2.0 / 3.0, kOmegaC);
const CavitySpec kCavity(kOmegaC, 0.1);

double element() { return first_excited_transition(kLattice, kCavity); }

}  // namespace

TEST_CASE("bath construction and validation") {
  const BathSpec b = normalized_bath(kLattice, kCavity, 400, 2.0, 0.01);
  REQUIRE(b.mode_frequencies.size() == 400);
  CHECK(b.spacing == doctest::Approx(0.005));
  CHECK(b.mode_frequencies.front() == doctest::Approx(kOmegaC - 1.0 + 0.0025));
  CHECK(b.couplings[7] == doctest::Approx(std::sqrt(0.01 * 0.005 / pi)));
  CHECK_THROWS_AS(normalized_bath(kLattice, kCavity, 1000, 2.0 * kLattice.omega_q() + 1.0), DomainError);
  CHECK_THROWS_AS(normalized_bath(kLattice, kCavity, 0, 1.0), DomainError);
  CHECK_THROWS_AS(normalized_bath(kLattice, kCavity, 10, 1.0, -1.0), DomainError);

  BathSpec bad = b;
  std::swap(bad.mode_frequencies[3], bad.mode_frequencies[4]);
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = b;
  bad.couplings[0] = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = b;
  bad.couplings.pop_back();
  CHECK_THROWS_AS(bad.validate(), DomainError);

  const BathSpec phys = physical_bath(kLattice, kCavity, 100, 1.0, 2.0, 3.0, 5.0);
  const double k = phys.mode_frequencies[10];
  CHECK(phys.couplings[10] ==
        doctest::Approx(std::sqrt(kOmegaC * kOmegaC * 4.0 / (2.0 * 3.0 * k * 5.0 * (2.0 * pi / kOmegaC)) *
                                  phys.spacing * (2.0 * pi / kOmegaC) / (2.0 * pi))));
  // Golden rule for the physical bath: 2 (k_q mu^2 / 4 eps A) |s(k_q)|^2.
  const double s2 = std::norm(s_factor(kLattice, kCavity, kOmegaC, element()));
  CHECK(golden_rule_rate(kLattice, kCavity, phys, element()) ==
        doctest::Approx(2.0 * kOmegaC * 4.0 / (4.0 * 3.0 * 5.0) * s2).epsilon(1e-6));
}

TEST_CASE("decoupled bath leaves alpha at one") {
  const BathSpec b = normalized_bath(kLattice, kCavity, 50, 1.0, 0.0);
  const AmplitudeTrajectory t = integrate_amplitudes(kLattice, kCavity, b, element(), 10.0, 0.05);
  CHECK(t.alpha.front() == std::complex<double>(1.0, 0.0));
  for (const auto& a : t.alpha) CHECK(a == std::complex<double>(1.0, 0.0));
  CHECK(t.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single resonant mode gives Rabi oscillation") {
  const double g = 0.2;
  const double big_g = g * std::abs(s_factor(kLattice, kCavity, kOmegaC, element()));
  const AmplitudeTrajectory t =
      integrate_amplitudes(kLattice, kCavity, single_mode_bath(kOmegaC, g), element(), 30.0, 0.01);
  REQUIRE(t.times.size() == 3001);
  double sum = 0.0;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    const double c = std::cos(big_g * t.times[i]);
    sum += std::pow(std::norm(t.alpha[i]) - c * c, 2);
  }
  CHECK(std::sqrt(sum / t.times.size()) < 1e-8);
  CHECK_THROWS_AS(fit_decay(t, {0.0, 30.0}), ComputationError);
}

TEST_CASE("norm conservation and step convergence") {
  const BathSpec b = normalized_bath(kLattice, kCavity, 400, 2.0, 0.01);
  const AmplitudeTrajectory t = integrate_amplitudes(kLattice, kCavity, b, element(), 60.0, 0.05);
  double worst = 0.0;
  for (std::size_t i = 1; i < t.times.size(); ++i)
    worst = std::max(worst, std::abs(t.norm_history[i] - 1.0) / t.times[i]);
  CHECK(worst < 1e-6);
  const AmplitudeTrajectory half = integrate_amplitudes(kLattice, kCavity, b, element(), 60.0, 0.025);
  CHECK(std::abs(std::abs(t.alpha.back()) - std::abs(half.alpha.back())) < 1e-7);
}

TEST_CASE("recording stride keeps endpoints") {
  const BathSpec b = normalized_bath(kLattice, kCavity, 20, 0.5, 0.01);
  DynamicsOptions o;
  o.record_stride = 7;
  const AmplitudeTrajectory t = integrate_amplitudes(kLattice, kCavity, b, element(), 5.0, 0.05, o);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(5.0));
  CHECK(t.beta.cols() == static_cast<Eigen::Index>(t.times.size()));
  CHECK(t.times.size() == 100 / 7 + 2);
}

TEST_CASE("integrator preconditions") {
  const BathSpec b = normalized_bath(kLattice, kCavity, 100, 2.0, 0.01);
  CHECK_THROWS_AS(integrate_amplitudes(kLattice, kCavity, b, element(), 10.0, 0.2), DomainError);
  // Recurrence time 2 pi / 0.02 ~ 314 ns.
  CHECK_THROWS_AS(integrate_amplitudes(kLattice, kCavity, b, element(), 400.0, 0.05), DomainError);
  CHECK_THROWS_AS(integrate_amplitudes(kLattice, kCavity, b, element(), -1.0, 0.05), DomainError);
}

TEST_CASE("per-l coupling with uniform elements matches the collapsed form") {
  const BathSpec b = normalized_bath(kLattice, kCavity, 60, 1.0, 0.01);
  DynamicsOptions o;
  o.per_l_elements.assign(4, element());
  const auto a = integrate_amplitudes(kLattice, kCavity, b, element(), 10.0, 0.05);
  const auto c = integrate_amplitudes(kLattice, kCavity, b, element(), 10.0, 0.05, o);
  CHECK(std::abs(a.alpha.back() - c.alpha.back()) < 1e-13);
}

TEST_CASE("decay fit") {
  AmplitudeTrajectory t;
  for (int i = 0; i <= 200; ++i) {
    t.times.push_back(0.5 * i);
    t.alpha.push_back(std::polar(std::exp(-0.025 * 0.5 * i), 0.3 * i));
  }
  CHECK(fit_decay(t, {0.0, 100.0}) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(fit_decay(t, {10.0, 10.4}), ComputationError);
  CHECK_THROWS_AS(fit_decay(t, {10.0, 5.0}), DomainError);
}

TEST_CASE("dense bath decays at the golden-rule rate") {
  const double p = 0.01;
  const BathSpec b = normalized_bath(kLattice, kCavity, 800, 2.0, p);
  const auto t = integrate_amplitudes(kLattice, kCavity, b, element(), 120.0, 0.05, {10});
  const double fit = fit_decay(t, {10.0, 100.0});
  const double golden = golden_rule_rate(kLattice, kCavity, b, element());
  CHECK(golden / p == doctest::Approx(2.0 * std::norm(s_factor(kLattice, kCavity, kOmegaC, element()))));
  CHECK(std::abs(fit / golden - 1.0) < 0.05);
}
