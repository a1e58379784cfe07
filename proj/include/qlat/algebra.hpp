#pragma once

#include <compare>
#include <string>
#include <vector>

namespace qlat {

/// Integer or half-integer quantum number stored as twice its value, so that
/// spin projections and excitation numbers of odd-N chains compare exactly.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static constexpr HalfInteger from_int(int value) { return HalfInteger(2 * value); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr HalfInteger operator+(HalfInteger o) const { return HalfInteger(twice_ + o.twice_); }
  constexpr HalfInteger operator-(HalfInteger o) const { return HalfInteger(twice_ - o.twice_); }
  constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }
  constexpr HalfInteger operator+(int n) const { return HalfInteger(twice_ + 2 * n); }
  constexpr HalfInteger operator-(int n) const { return HalfInteger(twice_ - 2 * n); }
  constexpr auto operator<=>(const HalfInteger&) const = default;

  std::string to_string() const;

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Qubit chain layout: N qubits at relative spacing ell = 2 L_q / lambda_C,
/// all with level spacing omega_q (GHz).
class LatticeSpec {
 public:
  LatticeSpec(int n_qubits, double relative_spacing, double omega_q);

  int n_qubits() const { return n_qubits_; }
  double relative_spacing() const { return relative_spacing_; }
  double omega_q() const { return omega_q_; }

  /// Cooperation number r = N/2.
  HalfInteger r() const { return HalfInteger::from_twice(n_qubits_); }
  /// Radiation wave number at the qubit frequency (hbar = c = 1).
  double k_q() const { return omega_q_; }

 private:
  int n_qubits_;
  double relative_spacing_;
  double omega_q_;
};

/// Single cavity mode and its maximal qubit coupling, both in GHz.
class CavitySpec {
 public:
  CavitySpec(double omega_c, double eta);

  double omega_c() const { return omega_c_; }
  double eta() const { return eta_; }
  /// Cavity photon momentum k0 = 2 pi / lambda_C, numerically equal to omega_c.
  double k0() const { return omega_c_; }
  double wavelength() const;
  double detuning(const LatticeSpec& lattice) const { return omega_c_ - lattice.omega_q(); }

 private:
  double omega_c_;
  double eta_;
};

struct CouplingProfileSpec {
  /// Entry j is cos(j pi ell).
  std::vector<double> coupling_weights;
};

/// f = 1/2 + (1/4N) [1 + sin((2N-1) pi ell) / sin(pi ell)], in (0, 1].
double deformation_factor(const LatticeSpec& lattice);

CouplingProfileSpec coupling_weights(const LatticeSpec& lattice);

}  // namespace qlat
