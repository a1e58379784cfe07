#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qlat/algebra.hpp"

namespace qlat {

/// Dense operators of the 2^N qubit space and the truncated Fock space, plus
/// the full Hamiltonian on their tensor product (qubit index major). All
/// entries are real in this basis, so real matrices are stored.
struct ProductSpaceOperators {
  int n_qubits = 0;
  int n_max = 0;
  double relative_spacing = 0.0;
  double omega_q = 0.0;
  double omega_c = 0.0;
  double eta = 0.0;

  /// Qubit space, 2^N square. Qubit j is excited when bit j of the index is set.
  Eigen::MatrixXd S_z;
  Eigen::MatrixXd S_plus;   // sum_j cos(j pi ell) sigma_{j,+}
  Eigen::MatrixXd S_minus;  // transpose of S_plus
  Eigen::MatrixXd Sigma_z;  // sum_j cos^2(j pi ell) sigma_{j,z}
  /// Fock space, (n_max + 1) square.
  Eigen::MatrixXd a;
  Eigen::MatrixXd a_dagger;
  /// omega_q S_z + omega_C a^dag a + eta (S+ a + S- a^dag) on the product space.
  Eigen::MatrixXd H_total;
  /// Diagonal of S_z + a^dag a on the product space.
  Eigen::VectorXd excitation_number;

  int dimension() const { return static_cast<int>(H_total.rows()); }
};

/// Throws DomainError for N > 8 or n_max > 12 (or n_max < 1).
ProductSpaceOperators build_operators(const LatticeSpec& lattice, const CavitySpec& cavity,
                                      int n_max);

struct CommutatorReport {
  double sz_splus = 0.0;       // max|[S_z, S+] - S+|
  double sz_sminus = 0.0;      // max|[S_z, S-] + S-|
  double splus_sminus = 0.0;   // max|[S+, S-] - 2 Sigma_z|
  /// max|[S+, S-] - 2 S_z|; only checked at ell = 0, negative otherwise.
  double undeformed = -1.0;
  double tolerance = 1e-12;
  bool passed = false;
};

CommutatorReport verify_commutators(const ProductSpaceOperators& ops, double tolerance = 1e-12);

/// Symmetric Dicke states |r, m> for m = -r..r as columns (ascending m).
Eigen::MatrixXd dicke_basis(int n_qubits);

/// max|<r,m|r,m'> - delta_mm'|.
double dicke_orthonormality_residual(const Eigen::MatrixXd& basis);

/// max_m |<r,m| S+ |r,m>|.
double dicke_diagonal_residual(const ProductSpaceOperators& ops);

/// tr(Sigma_z S_z) / tr(S_z^2), the mean squared coupling weight.
double deformation_bridge(const ProductSpaceOperators& ops);

/// max|[H_total, S_z + a^dag a]|.
double excitation_commutator(const ProductSpaceOperators& ops);

enum class SectorSpace {
  /// Whole eigenspace of the excitation number.
  full,
  /// Its intersection with the symmetric (Dicke) qubit subspace.
  symmetric,
};

/// Ascending eigenvalues of H_total on the excitation-u eigenspace. Throws
/// ComputationError if H_total fails to conserve excitation number to 1e-12,
/// DomainError if n_max < u + r + 1 (the sector would feel the Fock cutoff).
Eigen::VectorXd exact_sector_spectrum(const ProductSpaceOperators& ops, HalfInteger u,
                                      SectorSpace space = SectorSpace::full);

/// Largest distance from a model eigenvalue to the nearest exact eigenvalue.
double nearest_eigenvalue_deviation(const Eigen::VectorXd& model, const Eigen::VectorXd& exact);

}  // namespace qlat
