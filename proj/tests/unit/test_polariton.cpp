#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "qlat/errors.hpp"
#include "qlat/oracle.hpp"
#include "qlat/polariton.hpp"

using namespace qlat;

namespace {

HalfInteger hi(int twice) { return HalfInteger::from_twice(twice); }

}  // namespace

TEST_CASE("sector basis ranges and ordering") {
  const HalfInteger r = HalfInteger::from_int(2);
  CHECK(SectorBasis(r, HalfInteger::from_int(-2)).dimension() == 1);
  CHECK(SectorBasis(r, HalfInteger::from_int(-1)).dimension() == 2);
  CHECK(SectorBasis(r, HalfInteger::from_int(2)).dimension() == 5);
  // Above u = r the photon number starts at u - r and the count saturates at 2r + 1.
  const SectorBasis high(r, HalfInteger::from_int(3));
  CHECK(high.dimension() == 5);
  CHECK(high.n_min() == 1);
  for (int twice_u = -4; twice_u <= 10; twice_u += 2) {
    const SectorBasis b(r, hi(twice_u));
    int last = -1;
    for (const SectorEntry& e : b.entries()) {
      CHECK(e.n > last);
      last = e.n;
      CHECK(e.m >= -r);
      CHECK(e.m <= r);
      CHECK((e.m + e.n) == b.u());
    }
  }
  CHECK_THROWS_AS(SectorBasis(r, hi(-5)), DomainError);
  CHECK_THROWS_AS(SectorBasis(r, HalfInteger::from_int(-3)), DomainError);
  // Odd N: half-integer sectors.
  CHECK(SectorBasis(hi(3), hi(-1)).dimension() == 2);
}

TEST_CASE("sector Hamiltonian worked entries") {
  const LatticeSpec lat(4, 2.0 / 3.0, 5.0);
  const CavitySpec cav(5.0, 0.1);
  const Eigen::MatrixXd g = build_sector_hamiltonian(lat, cav, HalfInteger::from_int(-2));
  REQUIRE(g.rows() == 1);
  CHECK(g(0, 0) == doctest::Approx(-10.0));
  const Eigen::MatrixXd h = build_sector_hamiltonian(lat, cav, HalfInteger::from_int(-1));
  REQUIRE(h.rows() == 2);
  CHECK(h(0, 1) == doctest::Approx(2.0 * 0.1 * std::sqrt(0.625)).epsilon(1e-14));
  CHECK(h(1, 0) == h(0, 1));
  CHECK(h(0, 0) == doctest::Approx(-5.0));
  CHECK(h(1, 1) == doctest::Approx(-10.0 + 5.0));
  // Tridiagonal.
  const Eigen::MatrixXd big = build_sector_hamiltonian(lat, cav, HalfInteger::from_int(1));
  for (Eigen::Index i = 0; i < big.rows(); ++i)
    for (Eigen::Index j = 0; j < big.cols(); ++j)
      if (std::abs(i - j) > 1) CHECK(big(i, j) == 0.0);
  CHECK_THROWS_AS(build_sector_hamiltonian(lat, cav, HalfInteger::from_int(-3)), DomainError);
}

TEST_CASE("first excited splitting solves the quadratic") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 50; ++draw) {
    const double ell = unit(rng);
    const double eta = 0.01 + 0.5 * unit(rng);
    const double delta = -2.0 + 4.0 * unit(rng);
    const LatticeSpec lat(4, ell, 6.0 - delta);
    const CavitySpec cav(6.0, eta);
    const double f = deformation_factor(lat);
    const PolaritonSector s = diagonalize_sector(lat, cav, HalfInteger::from_int(-1));
    const double root = std::sqrt(delta * delta + 16.0 * eta * eta * f);
    CHECK(std::abs(s.stark_splittings[0] - 0.5 * (delta - root)) < 1e-12);
    CHECK(std::abs(s.stark_splittings[1] - 0.5 * (delta + root)) < 1e-12);
  }
  const PolaritonSector tc =
      diagonalize_sector(LatticeSpec(4, 0.0, 6.0), CavitySpec(6.0, 0.1), HalfInteger::from_int(-1));
  CHECK(tc.stark_splittings[0] == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(tc.stark_splittings[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("ground sector and normalization") {
  const LatticeSpec lat(4, 0.4, 6.0);
  const CavitySpec cav(6.5, 0.3);
  const PolaritonSector g = diagonalize_sector(lat, cav, HalfInteger::from_int(-2));
  CHECK(g.eigenvalues[0] == doctest::Approx(-12.0));
  CHECK(g.coefficients(0, 0) == 1.0);
  for (int twice_u = -4; twice_u <= 6; twice_u += 2) {
    const PolaritonSector s = diagonalize_sector(lat, cav, hi(twice_u));
    for (int b = 0; b < s.branches(); ++b) {
      CHECK(std::abs(s.coefficients.col(b).norm() - 1.0) < 1e-12);
      CHECK(s.coefficients(0, b) >= 0.0);
      if (b > 0) CHECK(s.eigenvalues[b] >= s.eigenvalues[b - 1]);
      CHECK(s.stark_splittings[b] == doctest::Approx(s.eigenvalues[b] - hi(twice_u).value() * 6.0));
    }
  }
}

TEST_CASE("decoupled sectors are bare") {
  for (int n : {2, 3, 4}) {
    const LatticeSpec lat(n, 0.3, 5.0);
    const CavitySpec cav(5.7, 0.0);
    for (int offset = 0; offset <= 3; ++offset) {
      const HalfInteger u = ground_excitation(lat) + offset;
      const PolaritonSector s = diagonalize_sector(lat, cav, u);
      for (int b = 0; b < s.branches(); ++b) {
        CHECK(s.coefficients.col(b).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
        const Eigen::VectorXd cf = closed_form_coefficients(lat, cav, u, b);
        CHECK((cf - s.coefficients.col(b)).cwiseAbs().maxCoeff() < 1e-12);
      }
      std::vector<double> bare;
      for (const SectorEntry& e : s.basis.entries()) bare.push_back(5.0 * e.m.value() + 5.7 * e.n);
      std::sort(bare.begin(), bare.end());
      for (int b = 0; b < s.branches(); ++b) CHECK(s.eigenvalues[b] == doctest::Approx(bare[b]));
    }
  }
}

TEST_CASE("closed form matches the eigen-solver") {
  SUBCASE("worked N = 4 sector") {
    const LatticeSpec lat(4, 2.0 / 3.0, 6.0 - 0.5);
    const CavitySpec cav(6.0, 0.1);
    const HalfInteger u = HalfInteger::from_int(-1);
    const PolaritonSector s = diagonalize_sector(lat, cav, u);
    const double f = deformation_factor(lat);
    for (int b = 0; b < 2; ++b) {
      const Eigen::VectorXd c = closed_form_coefficients(lat, cav, u, b);
      CHECK((c - s.coefficients.col(b)).cwiseAbs().maxCoeff() < 1e-10);
      const double e = s.stark_splittings[b];
      const double denom = e * e + 4.0 * 0.01 * f;
      CHECK(std::abs(c[0] - std::sqrt(4.0 * 0.01 * f / denom)) < 1e-12);
      CHECK(std::abs(std::abs(c[1]) - std::sqrt(e * e / denom)) < 1e-12);
    }
  }
  SUBCASE("random draws, N = 2..5, three lowest sectors") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int compared = 0;
    for (int draw = 0; draw < 120; ++draw) {
      const int n = 2 + draw % 4;
      const LatticeSpec lat(n, unit(rng), 6.0 - (-2.0 + 4.0 * unit(rng)));
      const CavitySpec cav(6.0, 0.01 + 0.5 * unit(rng));
      for (int offset = 0; offset <= 2; ++offset) {
        const HalfInteger u = ground_excitation(lat) + offset;
        const PolaritonSector s = diagonalize_sector(lat, cav, u);
        for (int b = 0; b < s.branches(); ++b) {
          try {
            const Eigen::VectorXd c = closed_form_coefficients(lat, cav, u, b);
            CAPTURE(n);
            CAPTURE(offset);
            CHECK((c - s.coefficients.col(b)).cwiseAbs().maxCoeff() < 1e-9);
            ++compared;
          } catch (const DegenerateDetuningError&) {
          }
        }
      }
    }
    CHECK(compared > 700);
  }
  SUBCASE("odd-n coefficients in a larger sector") {
    const LatticeSpec lat(6, 0.3, 5.4);
    const CavitySpec cav(6.0, 0.2);
    const HalfInteger u = HalfInteger::from_int(1);
    const PolaritonSector s = diagonalize_sector(lat, cav, u);
    REQUIRE(s.branches() == 5);
    for (int b = 0; b < s.branches(); ++b)
      CHECK((closed_form_coefficients(lat, cav, u, b) - s.coefficients.col(b)).cwiseAbs().maxCoeff() <
            1e-9);
  }
}

TEST_CASE("closed form domain and degenerate detuning") {
  const LatticeSpec lat(2, 0.2, 6.0);
  CHECK_THROWS_AS(closed_form_coefficients(lat, CavitySpec(6.0, 0.1), HalfInteger::from_int(2), 0),
                  DomainError);
  // Resonant N = 2, u = 1 has a dark branch with eps = 0, which is a pole.
  CHECK_THROWS_AS(closed_form_coefficients(lat, CavitySpec(6.0, 0.1), HalfInteger::from_int(1), 1),
                  DegenerateDetuningError);
  CHECK_THROWS_AS(closed_form_coefficients(lat, CavitySpec(6.0, 0.1), HalfInteger::from_int(0), 7),
                  DomainError);
}

TEST_CASE("transition matrices") {
  const LatticeSpec lat(4, 2.0 / 3.0, 6.2);
  const CavitySpec cav(6.0, 0.15);
  const TransitionMatrices tm = transition_matrices(lat, cav);
  CHECK(tm.u_min() == HalfInteger::from_int(-2));
  CHECK(tm.u_max() == HalfInteger::from_int(2));
  CHECK(tm.sectors().size() == 5);

  SUBCASE("ground to first excited") {
    const double f = deformation_factor(lat);
    const PolaritonSector& s = tm.sector(HalfInteger::from_int(-1));
    for (int b = 0; b < 2; ++b) {
      const double e = s.stark_splittings[b];
      const double expected = 4.0 * 0.15 * f / std::sqrt(e * e + 4.0 * 0.15 * 0.15 * f);
      CHECK(std::abs(tm.raise(HalfInteger::from_int(-1), b, 0) - expected) < 1e-12);
      CHECK(first_excited_transition(lat, cav, b) == tm.raise(HalfInteger::from_int(-1), b, 0));
    }
    CHECK(first_excited_transition(LatticeSpec(4, 0.0, 6.0), CavitySpec(6.0, 0.1)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("conjugacy and absent diagonal blocks") {
    for (const auto& [key, value] : tm.lower_elements()) {
      const double mirrored = tm.raise(HalfInteger::from_twice(key.twice_u) + 1, key.adjacent_branch,
                                       key.branch);
      CHECK(std::abs(value - mirrored) < 1e-14);
    }
    CHECK(tm.raise_elements().size() == tm.lower_elements().size());
    CHECK_THROWS_AS(tm.raise(HalfInteger::from_int(-2), 0, 0), DomainError);
    CHECK_THROWS_AS(tm.lower(HalfInteger::from_int(2), 0, 0), DomainError);
    for (const auto& [key, value] : tm.raise_elements()) CHECK(key.twice_u > tm.u_min().twice());
  }
  CHECK_THROWS_AS(first_excited_transition(lat, cav, 2), DomainError);
}

TEST_CASE("sum rule at ell = 0 against product-space states") {
  for (int n : {2, 3, 4}) {
    const LatticeSpec lat(n, 0.0, 5.8);
    const CavitySpec cav(6.0, 0.25);
    const HalfInteger r = lat.r();
    const TransitionMatrices tm = transition_matrices(lat, cav, ground_excitation(lat) + 3);
    const ProductSpaceOperators ops = build_operators(lat, cav, 6);
    const Eigen::MatrixXd dicke = dicke_basis(n);
    const int fdim = ops.n_max + 1;
    const Eigen::MatrixXd splus =
        Eigen::kroneckerProduct(ops.S_plus, Eigen::MatrixXd::Identity(fdim, fdim));
    for (HalfInteger u = tm.u_min() + 1; u <= tm.u_max(); u = u + 1) {
      const PolaritonSector& lower = tm.sector(u - 1);
      for (int b2 = 0; b2 < lower.branches(); ++b2) {
        // Embed the lower-sector polariton in product space.
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(ops.dimension());
        for (int i = 0; i < lower.basis.dimension(); ++i) {
          const SectorEntry& e = lower.basis.entries()[i];
          const int excited = (e.m + r).twice() / 2;
          for (Eigen::Index q = 0; q < dicke.rows(); ++q)
            psi[q * fdim + e.n] += lower.coefficients(i, b2) * dicke(q, excited);
        }
        const double exact = (splus * psi).squaredNorm();
        double model = 0.0;
        for (int b = 0; b < tm.sector(u).branches(); ++b) model += std::pow(tm.raise(u, b, b2), 2);
        CAPTURE(n);
        CHECK(std::abs(model - exact) < 1e-11);
      }
    }
  }
}
