#include "qlat/polariton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qlat/errors.hpp"

namespace qlat {

namespace {

// Fix the overall sign so the first non-negligible entry (lowest photon number)
// is positive.
void apply_sign_gauge(Eigen::Ref<Eigen::VectorXd> column) {
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (std::abs(column[i]) > 1e-12) {
      if (column[i] < 0.0) column = -column;
      return;
    }
  }
}

// sqrt(f (r - m)(r + m + 1)): amplitude of S+ on |r, m>.
double raising_amplitude(double f, HalfInteger r, HalfInteger m) {
  const double a = (r - m).value() * (r + m + 1).value();
  return std::sqrt(f * std::max(a, 0.0));
}

}  // namespace

SectorBasis::SectorBasis(HalfInteger r, HalfInteger u) : r_(r), u_(u) {
  if ((u.twice() + r.twice()) % 2 != 0)
    throw DomainError("excitation number u = " + u.to_string() +
                      " is incompatible with r = " + r.to_string());
  if (u < -r) throw DomainError("empty sector: u = " + u.to_string() + " < -r");
  const int n_lo = std::max(0, (u.twice() - r.twice()) / 2);
  const int n_hi = (u.twice() + r.twice()) / 2;
  for (int n = n_lo; n <= n_hi; ++n) entries_.push_back({n, u - n});
}

HalfInteger ground_excitation(const LatticeSpec& lattice) { return -lattice.r(); }

Eigen::MatrixXd build_sector_hamiltonian(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         HalfInteger u) {
  const SectorBasis basis(lattice.r(), u);
  const double f = deformation_factor(lattice);
  const int dim = basis.dimension();
  const auto& e = basis.entries();

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    h(i, i) = lattice.omega_q() * e[i].m.value() + cavity.omega_c() * e[i].n;
  // S+ a takes (n+1, m) to (n, m+1).
  for (int i = 0; i + 1 < dim; ++i) {
    const SectorEntry& upper = e[i + 1];
    const double v = cavity.eta() * std::sqrt(static_cast<double>(upper.n)) *
                     raising_amplitude(f, basis.r(), upper.m);
    h(i, i + 1) = v;
    h(i + 1, i) = v;
  }
  return h;
}

PolaritonSector diagonalize_sector(const LatticeSpec& lattice, const CavitySpec& cavity,
                                   HalfInteger u) {
  SectorBasis basis(lattice.r(), u);
  const Eigen::MatrixXd h = build_sector_hamiltonian(lattice, cavity, u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw ComputationError("eigen-solver failed in sector u = " + u.to_string());

  Eigen::MatrixXd vectors = solver.eigenvectors();
  const Eigen::VectorXd values = solver.eigenvalues();
  if (!values.allFinite() || !vectors.allFinite())
    throw ComputationError("non-finite eigenpairs in sector u = " + u.to_string());
  for (Eigen::Index b = 0; b < vectors.cols(); ++b) {
    vectors.col(b).normalize();
    apply_sign_gauge(vectors.col(b));
  }

  Eigen::VectorXd stark = values.array() - u.value() * lattice.omega_q();
  return PolaritonSector{std::move(basis), values, std::move(vectors), std::move(stark)};
}

namespace {

// All descending index sets {j_1 > j_2 > ...} in [0, top] with j_{k+1} <= j_k - 2,
// accumulated per set size q: out[q] += prod_k term(j_k).
void accumulate_descending_sets(int top, double product, int depth,
                                const std::vector<double>& term, std::vector<double>& out) {
  out[depth] += product;
  for (int j = top; j >= 0; --j)
    accumulate_descending_sets(j - 2, product * term[j], depth + 1, term, out);
}

}  // namespace

Eigen::VectorXd closed_form_coefficients(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         HalfInteger u, double epsilon) {
  const HalfInteger r = lattice.r();
  const SectorBasis basis(r, u);
  if (u > r)
    throw DomainError("closed form needs a sector starting at n = 0 (u <= r); got u = " +
                      u.to_string());
  const int dim = basis.dimension();
  const double detuning = cavity.detuning(lattice);
  const double eta = cavity.eta();
  const double f = deformation_factor(lattice);
  const double rpu = (r + u).value();
  const double rmu1 = (r - u).value() + 1.0;

  Eigen::VectorXd c(dim);
  if (eta == 0.0) {
    // Decoupled: the branch is a single bare state with n * detuning = eps.
    int hit = -1;
    for (int n = 0; n < dim; ++n) {
      if (std::abs(epsilon - n * detuning) <= 1e-12 * (1.0 + std::abs(epsilon))) {
        if (hit >= 0) throw DegenerateDetuningError("degenerate bare energies at eta = 0");
        hit = n;
      }
    }
    if (hit < 0) throw DomainError("epsilon is not a bare sector energy at eta = 0");
    c.setZero();
    c[hit] = 1.0;
    return c;
  }

  const double tol = 1e-12 * (1.0 + std::abs(epsilon) + dim * std::abs(detuning));
  std::vector<double> term(std::max(dim - 1, 0), 0.0);
  for (int j = 0; j + 1 < dim; ++j) {
    const double d0 = epsilon - j * detuning;
    const double d1 = epsilon - (j + 1) * detuning;
    if (std::abs(d0) < tol || std::abs(d1) < tol)
      throw DegenerateDetuningError("closed-form denominator eps - j*detuning vanishes at j = " +
                                    std::to_string(std::abs(d0) < tol ? j : j + 1));
    term[j] = -eta * eta * (j + 1) * (rpu - j) * (rmu1 + j) / (d0 * d1);
  }

  double numerator = 1.0;   // prod_{j<n} (eps - j detuning)
  double pochhammer = 1.0;  // n! (r+u)^(falling n) (r-u+1)^(rising n)
  for (int n = 0; n < dim; ++n) {
    if (n > 0) {
      numerator *= epsilon - (n - 1) * detuning;
      pochhammer *= n * (rpu - (n - 1)) * (rmu1 + (n - 1));
    }
    std::vector<double> by_q(n / 2 + 1, 0.0);
    accumulate_descending_sets(n - 2, 1.0, 0, term, by_q);
    double nested = 0.0;
    for (int q = 0; q <= n / 2; ++q) nested += std::pow(f, q - 0.5 * n) * by_q[q];
    c[n] = numerator / std::sqrt(pochhammer) * nested / std::pow(eta, n);
  }

  const double norm = c.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ComputationError("closed-form coefficients are not normalizable");
  c /= norm;
  apply_sign_gauge(c);
  return c;
}

Eigen::VectorXd closed_form_coefficients(const LatticeSpec& lattice, const CavitySpec& cavity,
                                         HalfInteger u, int branch) {
  const PolaritonSector sector = diagonalize_sector(lattice, cavity, u);
  if (branch < 0 || branch >= sector.branches())
    throw DomainError("branch index out of range for sector u = " + u.to_string());
  if (cavity.eta() == 0.0) {
    const int dim = sector.basis.dimension();
    const double detuning = cavity.detuning(lattice);
    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return a * detuning < b * detuning; });
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    c[order[branch]] = 1.0;
    return c;
  }
  return closed_form_coefficients(lattice, cavity, u, sector.stark_splittings[branch]);
}

HalfInteger default_u_max(const LatticeSpec& lattice) { return -lattice.r() + 4; }

const PolaritonSector& TransitionMatrices::sector(HalfInteger u) const {
  if (u < u_min_ || u > u_max_) throw DomainError("sector u = " + u.to_string() + " not computed");
  return sectors_[(u - u_min_).twice() / 2];
}

double TransitionMatrices::raise(HalfInteger u, int branch, int lower_branch) const {
  const auto it = raise_.find({u.twice(), branch, lower_branch});
  if (it == raise_.end())
    throw DomainError("no [S+] element for u = " + u.to_string() + " -> u - 1 with these branches");
  return it->second;
}

double TransitionMatrices::lower(HalfInteger u, int branch, int upper_branch) const {
  const auto it = lower_.find({u.twice(), branch, upper_branch});
  if (it == lower_.end())
    throw DomainError("no [S-] element for u = " + u.to_string() + " -> u + 1 with these branches");
  return it->second;
}

namespace {

// sum_n c_n^(upper,b) c_n^(lower,b') sqrt(f (r + m)(r - m + 1)), m the spin
// projection in the upper sector.
double ladder_element(const PolaritonSector& upper, int b, const PolaritonSector& lower, int b2,
                      double f) {
  const HalfInteger r = upper.basis.r();
  const int up0 = upper.basis.n_min();
  const int lo0 = lower.basis.n_min();
  double sum = 0.0;
  for (const SectorEntry& e : upper.basis.entries()) {
    const int li = e.n - lo0;
    if (li < 0 || li >= lower.basis.dimension()) continue;
    const double amp = std::sqrt(f * std::max((r + e.m).value() * (r - e.m + 1).value(), 0.0));
    sum += upper.coefficients(e.n - up0, b) * lower.coefficients(li, b2) * amp;
  }
  return sum;
}

// sum_n c_n^(lower,b) c_n^(upper,b') sqrt(f (r - m)(r + m + 1)), m the spin
// projection in the lower sector.
double lowering_element(const PolaritonSector& lower, int b, const PolaritonSector& upper, int b2,
                        double f) {
  const HalfInteger r = lower.basis.r();
  const int lo0 = lower.basis.n_min();
  const int up0 = upper.basis.n_min();
  double sum = 0.0;
  for (const SectorEntry& e : lower.basis.entries()) {
    const int ui = e.n - up0;
    if (ui < 0 || ui >= upper.basis.dimension()) continue;
    const double amp = std::sqrt(f * std::max((r - e.m).value() * (r + e.m + 1).value(), 0.0));
    sum += lower.coefficients(e.n - lo0, b) * upper.coefficients(ui, b2) * amp;
  }
  return sum;
}

}  // namespace

TransitionMatrices transition_matrices(const LatticeSpec& lattice, const CavitySpec& cavity,
                                       std::optional<HalfInteger> u_max) {
  TransitionMatrices out;
  out.u_min_ = ground_excitation(lattice);
  out.u_max_ = u_max.value_or(default_u_max(lattice));
  if (out.u_max_ < out.u_min_) throw DomainError("u_max below the ground sector");
  if ((out.u_max_ - out.u_min_).twice() % 2 != 0)
    throw DomainError("u_max must differ from -r by an integer");

  for (HalfInteger u = out.u_min_; u <= out.u_max_; u = u + 1)
    out.sectors_.push_back(diagonalize_sector(lattice, cavity, u));

  const double f = deformation_factor(lattice);
  for (std::size_t s = 1; s < out.sectors_.size(); ++s) {
    const PolaritonSector& upper = out.sectors_[s];
    const PolaritonSector& lower = out.sectors_[s - 1];
    for (int b = 0; b < upper.branches(); ++b) {
      for (int b2 = 0; b2 < lower.branches(); ++b2) {
        out.raise_[{upper.basis.u().twice(), b, b2}] = ladder_element(upper, b, lower, b2, f);
        out.lower_[{lower.basis.u().twice(), b2, b}] = lowering_element(lower, b2, upper, b, f);
      }
    }
  }
  return out;
}

double first_excited_transition(const LatticeSpec& lattice, const CavitySpec& cavity,
                                int branch) {
  const HalfInteger u0 = ground_excitation(lattice);
  const PolaritonSector ground = diagonalize_sector(lattice, cavity, u0);
  const PolaritonSector excited = diagonalize_sector(lattice, cavity, u0 + 1);
  if (branch < 0 || branch >= excited.branches())
    throw DomainError("first excited sector has " + std::to_string(excited.branches()) +
                      " branches; got index " + std::to_string(branch));
  return ladder_element(excited, branch, ground, 0, deformation_factor(lattice));
}

}  // namespace qlat
