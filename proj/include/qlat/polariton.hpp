#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qlat/algebra.hpp"

namespace qlat {

/// Product state |r, m; n> inside an excitation sector, with m = u - n.
struct SectorEntry {
  int n;
  HalfInteger m;
};

/// Basis of the sector with total excitation number u, sorted by ascending n.
class SectorBasis {
 public:
  SectorBasis(HalfInteger r, HalfInteger u);

  HalfInteger r() const { return r_; }
  HalfInteger u() const { return u_; }
  const std::vector<SectorEntry>& entries() const { return entries_; }
  int dimension() const { return static_cast<int>(entries_.size()); }
  int n_min() const { return entries_.front().n; }

 private:
  HalfInteger r_;
  HalfInteger u_;
  std::vector<SectorEntry> entries_;
};

/// Diagonalized excitation sector. Column b of `coefficients` holds c_n for
/// branch b (rows follow the basis order); branches ascend in energy.
struct PolaritonSector {
  SectorBasis basis;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd coefficients;
  /// eps_b = Omega_b - u * omega_q.
  Eigen::VectorXd stark_splittings;

  int branches() const { return static_cast<int>(eigenvalues.size()); }
};

/// Lowest excitation number of the ladder, u = -r.
HalfInteger ground_excitation(const LatticeSpec& lattice);

/// Real symmetric tridiagonal block of H_sys + V_cav in the sector basis.
Eigen::MatrixXd build_sector_hamiltonian(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         HalfInteger u);

/// Throws ComputationError if the eigen-solver fails or returns non-finite values.
PolaritonSector diagonalize_sector(const LatticeSpec& lattice, const CavitySpec& cavity,
                                   HalfInteger u);

/// Coefficients from the product / nested-sum closed form, normalized with the
/// same sign gauge as diagonalize_sector. `epsilon` is the branch's Stark
/// splitting. Throws DegenerateDetuningError when eps - j*detuning vanishes,
/// DomainError for sectors with u > r (basis does not start at n = 0).
Eigen::VectorXd closed_form_coefficients(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         HalfInteger u, double epsilon);

/// Same, taking eps from diagonalize_sector for `branch`. With eta = 0 the
/// result is the bare unit vector of that branch.
Eigen::VectorXd closed_form_coefficients(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         HalfInteger u, int branch);

/// (u, branch in sector u, branch in the adjacent sector).
struct TransitionKey {
  int twice_u;
  int branch;
  int adjacent_branch;
  auto operator<=>(const TransitionKey&) const = default;
};

/// Polariton-basis matrix elements of S+ (sector u-1 -> u) and S- (u+1 -> u).
/// Only first off-diagonal blocks exist; u -> u elements are never stored.
class TransitionMatrices {
 public:
  HalfInteger u_min() const { return u_min_; }
  HalfInteger u_max() const { return u_max_; }

  /// [S+]_{u,u-1}(b, b').
  double raise(HalfInteger u, int branch, int lower_branch) const;
  /// [S-]_{u,u+1}(b, b').
  double lower(HalfInteger u, int branch, int upper_branch) const;

  const std::map<TransitionKey, double>& raise_elements() const { return raise_; }
  const std::map<TransitionKey, double>& lower_elements() const { return lower_; }
  const std::vector<PolaritonSector>& sectors() const { return sectors_; }
  const PolaritonSector& sector(HalfInteger u) const;

 private:
  friend TransitionMatrices transition_matrices(const LatticeSpec&, const CavitySpec&,
                                                std::optional<HalfInteger>);
  HalfInteger u_min_;
  HalfInteger u_max_;
  std::vector<PolaritonSector> sectors_;
  std::map<TransitionKey, double> raise_;
  std::map<TransitionKey, double> lower_;
};

/// Default upper sector: u_max = -r + 4.
HalfInteger default_u_max(const LatticeSpec& lattice);

TransitionMatrices transition_matrices(const LatticeSpec& lattice, const CavitySpec& cavity,
                                       std::optional<HalfInteger> u_max = std::nullopt);

/// [S+] between the ground polariton (u = -r) and `branch` of the first
/// excited sector (u = -r + 1). Branch 0 is the lowest.
double first_excited_transition(const LatticeSpec& lattice, const CavitySpec& cavity,
                                int branch = 0);

}  // namespace qlat
