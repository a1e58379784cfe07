#include "qlat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qlat/errors.hpp"

namespace qlat {

using std::numbers::pi;

namespace {

// Single-qubit operator placed at qubit j, qubit 0 being the least significant bit.
Eigen::MatrixXd embed(const Eigen::Matrix2d& op, int j, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const Eigen::MatrixXd factor = q == j ? Eigen::MatrixXd(op) : Eigen::MatrixXd::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

ProductSpaceOperators build_operators(const LatticeSpec& lattice, const CavitySpec& cavity,
                                      int n_max) {
  const int n = lattice.n_qubits();
  if (n > 8) throw DomainError("oracle supports at most 8 qubits");
  if (n_max < 1 || n_max > 12) throw DomainError("oracle Fock cutoff must lie in [1, 12]");

  ProductSpaceOperators ops;
  ops.n_qubits = n;
  ops.n_max = n_max;
  ops.relative_spacing = lattice.relative_spacing();
  ops.omega_q = lattice.omega_q();
  ops.omega_c = cavity.omega_c();
  ops.eta = cavity.eta();

  // Basis (|g>, |e>): sigma_z = diag(-1/2, +1/2), sigma_+ = |e><g|.
  Eigen::Matrix2d sz;
  sz << -0.5, 0.0, 0.0, 0.5;
  Eigen::Matrix2d sp;
  sp << 0.0, 0.0, 1.0, 0.0;

  const int qdim = 1 << n;
  ops.S_z = Eigen::MatrixXd::Zero(qdim, qdim);
  ops.S_plus = Eigen::MatrixXd::Zero(qdim, qdim);
  ops.Sigma_z = Eigen::MatrixXd::Zero(qdim, qdim);
  for (int j = 0; j < n; ++j) {
    const double w = std::cos(j * pi * lattice.relative_spacing());
    const Eigen::MatrixXd zj = embed(sz, j, n);
    ops.S_z += zj;
    ops.Sigma_z += w * w * zj;
    ops.S_plus += w * embed(sp, j, n);
  }
  ops.S_minus = ops.S_plus.transpose();

  const int fdim = n_max + 1;
  ops.a = Eigen::MatrixXd::Zero(fdim, fdim);
  for (int k = 1; k < fdim; ++k) ops.a(k - 1, k) = std::sqrt(static_cast<double>(k));
  ops.a_dagger = ops.a.transpose();

  const Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(qdim, qdim);
  const Eigen::MatrixXd fi = Eigen::MatrixXd::Identity(fdim, fdim);
  const Eigen::MatrixXd number = ops.a_dagger * ops.a;
  ops.H_total = ops.omega_q * Eigen::kroneckerProduct(ops.S_z, fi).eval() +
                ops.omega_c * Eigen::kroneckerProduct(iq, number).eval() +
                ops.eta * (Eigen::kroneckerProduct(ops.S_plus, ops.a).eval() +
                           Eigen::kroneckerProduct(ops.S_minus, ops.a_dagger).eval());
  ops.excitation_number = (Eigen::kroneckerProduct(ops.S_z, fi).eval() +
                           Eigen::kroneckerProduct(iq, number).eval())
                              .diagonal();
  return ops;
}

CommutatorReport verify_commutators(const ProductSpaceOperators& ops, double tolerance) {
  CommutatorReport rep;
  rep.tolerance = tolerance;
  const auto comm = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
    return x * y - y * x;
  };
  rep.sz_splus = max_abs(comm(ops.S_z, ops.S_plus) - ops.S_plus);
  rep.sz_sminus = max_abs(comm(ops.S_z, ops.S_minus) + ops.S_minus);
  const Eigen::MatrixXd pm = comm(ops.S_plus, ops.S_minus);
  rep.splus_sminus = max_abs(pm - 2.0 * ops.Sigma_z);
  rep.passed = rep.sz_splus < tolerance && rep.sz_sminus < tolerance && rep.splus_sminus < tolerance;
  if (ops.relative_spacing == 0.0) {
    rep.undeformed = max_abs(pm - 2.0 * ops.S_z);
    rep.passed = rep.passed && rep.undeformed < tolerance;
  }
  return rep;
}

Eigen::MatrixXd dicke_basis(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 8) throw DomainError("Dicke basis supports 1..8 qubits");
  const int qdim = 1 << n_qubits;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(qdim, n_qubits + 1);
  for (int excited = 0; excited <= n_qubits; ++excited) {
    // Every distinct arrangement of `excited` ones: the permutation sum.
    std::vector<int> pattern(n_qubits, 0);
    std::fill(pattern.end() - excited, pattern.end(), 1);
    const double norm = 1.0 / std::sqrt(binomial(n_qubits, excited));
    do {
      int index = 0;
      for (int j = 0; j < n_qubits; ++j)
        if (pattern[j]) index |= 1 << j;
      basis(index, excited) += norm;
    } while (std::next_permutation(pattern.begin(), pattern.end()));
  }
  return basis;
}

double dicke_orthonormality_residual(const Eigen::MatrixXd& basis) {
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  return max_abs(gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
}

double dicke_diagonal_residual(const ProductSpaceOperators& ops) {
  const Eigen::MatrixXd d = dicke_basis(ops.n_qubits);
  return (d.transpose() * ops.S_plus * d).diagonal().cwiseAbs().maxCoeff();
}

double deformation_bridge(const ProductSpaceOperators& ops) {
  return (ops.Sigma_z * ops.S_z).trace() / (ops.S_z * ops.S_z).trace();
}

double excitation_commutator(const ProductSpaceOperators& ops) {
  // The number operator is diagonal, so [H, N]_ij = H_ij (N_j - N_i).
  const Eigen::VectorXd& num = ops.excitation_number;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ops.H_total.rows(); ++i)
    for (Eigen::Index j = 0; j < ops.H_total.cols(); ++j)
      worst = std::max(worst, std::abs(ops.H_total(i, j) * (num[j] - num[i])));
  return worst;
}

Eigen::VectorXd exact_sector_spectrum(const ProductSpaceOperators& ops, HalfInteger u,
                                      SectorSpace space) {
  const double residual = excitation_commutator(ops);
  if (!(residual < 1e-12))
    throw ComputationError("H_total does not conserve excitation number (residual " +
                           std::to_string(residual) + ")");
  const HalfInteger r = HalfInteger::from_twice(ops.n_qubits);
  if (u < -r) throw DomainError("sector below the ground excitation");
  if ((u + r).twice() % 2 != 0) throw DomainError("u and r must differ by an integer");
  if (ops.n_max < (u + r).twice() / 2 + 1)
    throw DomainError("Fock cutoff " + std::to_string(ops.n_max) + " truncates sector u = " +
                      u.to_string());

  std::vector<Eigen::Index> indices;
  for (Eigen::Index i = 0; i < ops.excitation_number.size(); ++i)
    if (std::abs(ops.excitation_number[i] - u.value()) < 1e-9) indices.push_back(i);

  const Eigen::Index dim = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd block(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) block(i, j) = ops.H_total(indices[i], indices[j]);

  if (space == SectorSpace::symmetric) {
    // Isometry onto |r, m> (x) |n> inside the sector.
    const Eigen::MatrixXd dicke = dicke_basis(ops.n_qubits);
    const int fdim = ops.n_max + 1;
    std::vector<Eigen::VectorXd> columns;
    for (int excited = 0; excited <= ops.n_qubits; ++excited) {
      const int photons = (u + r).twice() / 2 - excited;
      if (photons < 0 || photons > ops.n_max) continue;
      Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index idx = indices[i];
        if (idx % fdim == photons) col[i] = dicke(idx / fdim, excited);
      }
      columns.push_back(col);
    }
    Eigen::MatrixXd iso(dim, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) iso.col(static_cast<Eigen::Index>(c)) = columns[c];
    block = (iso.transpose() * block * iso).eval();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ComputationError("sector eigen-solver failed");
  return solver.eigenvalues();
}

double nearest_eigenvalue_deviation(const Eigen::VectorXd& model, const Eigen::VectorXd& exact) {
  if (exact.size() == 0) throw DomainError("no exact eigenvalues to compare against");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < model.size(); ++i)
    worst = std::max(worst, (exact.array() - model[i]).abs().minCoeff());
  return worst;
}

}  // namespace qlat
