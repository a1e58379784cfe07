#include "qlat/algebra.hpp"

#include <cmath>
#include <numbers>

#include "qlat/errors.hpp"

namespace qlat {

using std::numbers::pi;

std::string HalfInteger::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

LatticeSpec::LatticeSpec(int n_qubits, double relative_spacing, double omega_q)
    : n_qubits_(n_qubits), relative_spacing_(relative_spacing), omega_q_(omega_q) {
  if (n_qubits < 1) throw DomainError("n_qubits must be >= 1");
  if (!(relative_spacing >= 0.0 && relative_spacing <= 1.0))
    throw DomainError("relative_spacing must lie in [0, 1]");
  if (!(omega_q > 0.0) || !std::isfinite(omega_q)) throw DomainError("omega_q must be > 0");
}

CavitySpec::CavitySpec(double omega_c, double eta) : omega_c_(omega_c), eta_(eta) {
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw DomainError("omega_c must be > 0");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("eta must be >= 0");
}

double CavitySpec::wavelength() const { return 2.0 * pi / omega_c_; }

double deformation_factor(const LatticeSpec& lattice) {
  const int n = lattice.n_qubits();
  // f(ell) = f(1 - ell); folding onto [0, 1/2] keeps sin(pi ell) away from the
  // rounding floor near ell = 1.
  double ell = lattice.relative_spacing();
  if (ell > 0.5) ell = 1.0 - ell;

  const double odd = 2.0 * n - 1.0;
  const double s = std::sin(pi * ell);
  double ratio;
  if (std::abs(s) < 1e-9) {
    ratio = odd * std::cos(odd * pi * ell) / std::cos(pi * ell);
  } else {
    ratio = std::sin(odd * pi * ell) / s;
  }
  return 0.5 + (1.0 + ratio) / (4.0 * n);
}

CouplingProfileSpec coupling_weights(const LatticeSpec& lattice) {
  CouplingProfileSpec out;
  out.coupling_weights.reserve(lattice.n_qubits());
  for (int j = 0; j < lattice.n_qubits(); ++j)
    out.coupling_weights.push_back(std::cos(j * pi * lattice.relative_spacing()));
  return out;
}

}  // namespace qlat
