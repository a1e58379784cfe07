#include <doctest.h>

#include <cmath>
#include <random>

#include "qlat/errors.hpp"
#include "qlat/oracle.hpp"
#include "qlat/polariton.hpp"

using namespace qlat;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("operator construction") {
  const CavitySpec cav(6.0, 0.1);
  const auto one = build_operators(LatticeSpec(1, 0.3, 5.0), cav, 2);
  CHECK(one.S_z(0, 0) == -0.5);
  CHECK(one.S_z(1, 1) == 0.5);
  CHECK(one.S_plus(1, 0) == 1.0);
  CHECK(one.dimension() == 6);

  const auto deformed = build_operators(LatticeSpec(4, 2.0 / 3.0, 5.0), cav, 2);
  const double expected[] = {1.0, -0.5, -0.5, 1.0};
  for (int j = 0; j < 4; ++j) CHECK(deformed.S_plus(1 << j, 0) == doctest::Approx(expected[j]).epsilon(1e-15));
  CHECK(deformed.S_minus == deformed.S_plus.transpose());
  CHECK((deformed.H_total - deformed.H_total.transpose()).cwiseAbs().maxCoeff() < 1e-13);

  const auto flat = build_operators(LatticeSpec(4, 0.0, 5.0), cav, 2);
  const Eigen::MatrixXd d = dicke_basis(4);
  const Eigen::MatrixXd sp = d.transpose() * flat.S_plus * d;
  for (int k = 0; k < 4; ++k) {
    const double m = k - 2.0;
    CHECK(sp(k + 1, k) == doctest::Approx(std::sqrt((2.0 - m) * (2.0 + m + 1.0))).epsilon(1e-14));
  }

  CHECK_THROWS_AS(build_operators(LatticeSpec(9, 0.1, 5.0), cav, 2), DomainError);
  CHECK_THROWS_AS(build_operators(LatticeSpec(4, 0.1, 5.0), cav, 13), DomainError);
  CHECK_THROWS_AS(build_operators(LatticeSpec(4, 0.1, 5.0), cav, 0), DomainError);
}

TEST_CASE("commutation relations") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 1; n <= 6; ++n)
    for (int draw = 0; draw < 20; ++draw) {
      const auto ops = build_operators(LatticeSpec(n, unit(rng), 5.0), CavitySpec(6.0, 0.1), 1);
      const CommutatorReport rep = verify_commutators(ops);
      CHECK(rep.passed);
      CHECK(rep.sz_splus < 1e-12);
      CHECK(rep.sz_sminus < 1e-12);
      CHECK(rep.splus_sminus < 1e-12);
      CHECK(rep.undeformed < 0.0);
    }
  for (int n = 1; n <= 6; ++n) {
    const CommutatorReport rep =
        verify_commutators(build_operators(LatticeSpec(n, 0.0, 5.0), CavitySpec(6.0, 0.1), 1));
    CHECK(rep.passed);
    CHECK(rep.undeformed >= 0.0);
    CHECK(rep.undeformed < 1e-12);
  }
}

TEST_CASE("Dicke states") {
  for (int n = 1; n <= 8; ++n) {
    const Eigen::MatrixXd d = dicke_basis(n);
    CHECK(dicke_orthonormality_residual(d) < 1e-13);
    for (int excited = 0; excited <= n; ++excited) {
      // Every nonzero amplitude equals sqrt((r+m)! (r-m)! / (2r)!).
      const double c = std::sqrt(factorial(excited) * factorial(n - excited) / factorial(n));
      for (Eigen::Index q = 0; q < d.rows(); ++q) {
        if (__builtin_popcount(static_cast<unsigned>(q)) == excited)
          CHECK(d(q, excited) == doctest::Approx(c).epsilon(1e-14));
        else
          CHECK(d(q, excited) == 0.0);
      }
    }
    const auto ops = build_operators(LatticeSpec(n, 0.37, 5.0), CavitySpec(6.0, 0.1), 1);
    CHECK(dicke_diagonal_residual(ops) < 1e-14);
  }
}

TEST_CASE("deformation bridge and excitation conservation") {
  for (int n = 1; n <= 6; ++n)
    for (double ell : {0.0, 0.13, 0.5, 2.0 / 3.0, 0.91}) {
      const LatticeSpec lat(n, ell, 5.0);
      const auto ops = build_operators(lat, CavitySpec(6.0, 0.4), 3);
      CHECK(std::abs(deformation_bridge(ops) - deformation_factor(lat)) < 1e-12);
      CHECK(excitation_commutator(ops) < 1e-12);
    }
}

TEST_CASE("Tavis-Cummings limit matches the sector model") {
  for (int n : {2, 4, 6}) {
    const LatticeSpec lat(n, 0.0, 5.7);
    const CavitySpec cav(6.0, 0.2);
    const auto ops = build_operators(lat, cav, 3);
    for (int offset = 0; offset <= 2; ++offset) {
      const HalfInteger u = ground_excitation(lat) + offset;
      const Eigen::VectorXd model = diagonalize_sector(lat, cav, u).eigenvalues;
      const Eigen::VectorXd sym = exact_sector_spectrum(ops, u, SectorSpace::symmetric);
      REQUIRE(sym.size() == model.size());
      CHECK((sym - model).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::VectorXd full = exact_sector_spectrum(ops, u);
      CHECK(nearest_eigenvalue_deviation(model, full) < 1e-10);
      CHECK(full.size() >= model.size());
    }
  }
}

TEST_CASE("decoupled exact spectrum is bare") {
  const LatticeSpec lat(3, 0.4, 5.0);
  const CavitySpec cav(6.0, 0.0);
  const auto ops = build_operators(lat, cav, 4);
  const HalfInteger u = ground_excitation(lat) + 1;
  const Eigen::VectorXd e = exact_sector_spectrum(ops, u);
  // One photon on the ground state, or one of three single spin flips.
  REQUIRE(e.size() == 4);
  CHECK(e[0] == doctest::Approx(5.0 * -0.5));
  CHECK(e[2] == doctest::Approx(5.0 * -0.5));
  CHECK(e[3] == doctest::Approx(5.0 * -1.5 + 6.0));
}

TEST_CASE("single-excitation sector is exact for any spacing") {
  for (double ell : {0.2, 0.5, 2.0 / 3.0}) {
    const LatticeSpec lat(4, ell, 6.5);
    const CavitySpec cav(6.729, 0.1);
    const auto ops = build_operators(lat, cav, 3);
    const HalfInteger u = HalfInteger::from_int(-1);
    CHECK(nearest_eigenvalue_deviation(diagonalize_sector(lat, cav, u).eigenvalues,
                                       exact_sector_spectrum(ops, u)) < 1e-12);
  }
}

TEST_CASE("sector guards") {
  const LatticeSpec lat(4, 0.3, 5.0);
  const auto ops = build_operators(lat, CavitySpec(6.0, 0.1), 2);
  CHECK_NOTHROW(exact_sector_spectrum(ops, HalfInteger::from_int(-1)));
  CHECK_THROWS_AS(exact_sector_spectrum(ops, HalfInteger::from_int(0)), DomainError);
  CHECK_THROWS_AS(exact_sector_spectrum(ops, HalfInteger::from_int(-3)), DomainError);
  CHECK_THROWS_AS(exact_sector_spectrum(ops, HalfInteger::from_twice(-3)), DomainError);
  auto broken = ops;
  broken.H_total(0, 1) += 1e-6;
  broken.H_total(1, 0) += 1e-6;
  CHECK_THROWS_AS(exact_sector_spectrum(broken, HalfInteger::from_int(-1)), ComputationError);
}
