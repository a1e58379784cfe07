#include "qlat/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "qlat/dynamics.hpp"
#include "qlat/errors.hpp"
#include "qlat/polariton.hpp"

namespace qlat {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = i + 1 == count ? stop : start + (stop - start) * i / (count - 1);
  return v;
}

void SweepConfig::validate() const {
  auto check_grid = [](const GridSpec& g, const char* name) {
    if (g.count < 2) throw DomainError(std::string(name) + " grid needs at least 2 points");
    if (!(g.stop > g.start)) throw DomainError(std::string(name) + " grid range is not ordered");
  };
  // Construct the specs for their own domain checks.
  const LatticeSpec lattice(n_qubits, ell, omega_q);
  const CavitySpec cavity(omega_c, eta);
  (void)lattice;
  (void)cavity;
  if (threads < 0) throw DomainError("--threads must be >= 0");
  if (branch < 0 || branch > 1) throw DomainError("--branch must be 0 or 1");
  check_grid(k_grid, "k");
  check_grid(ell_grid, "ell");
  check_grid(omega_q_grid, "omega-q");
  if (ell_grid.start < 0.0 || ell_grid.stop > 1.0) throw DomainError("ell grid must lie in [0, 1]");
  if (!(omega_q_grid.start > 0.0)) throw DomainError("omega-q grid must be positive");
  if (axis != "ell" && axis != "omega-q") throw DomainError("--axis must be ell or omega-q");
  if (sectors < 1) throw DomainError("--sectors must be >= 1");
  if (modes < 1) throw DomainError("--modes must be >= 1");
  if (!(bandwidth > 0.0)) throw DomainError("--bandwidth must be positive");
  if (!(rate_scale >= 0.0)) throw DomainError("--rate-scale must be nonnegative");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw DomainError("--t-final and --dt must be positive");
  if (record_stride < 1) throw DomainError("--record-stride must be >= 1");
  if (!(fit_end > fit_start)) throw DomainError("fit window is empty");
}

namespace {

// Row results land in per-index slots; the caller emits them in order.
template <typename Row, typename F>
std::vector<Row> parallel_rows(std::size_t count, int threads, F&& fn) {
  std::vector<Row> rows(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        rows[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::size_t n = threads > 0 ? static_cast<std::size_t>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  n = std::max<std::size_t>(1, std::min(n, count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path_ == "-") return;
    file_.open(path_, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!file_) throw IoError("cannot open output file '" + path_ + "' for writing");
  }

  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

  void close() {
    stream().flush();
    if (!stream()) throw IoError("failed writing '" + path_ + "'");
    if (path_ != "-") file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
};

using Table = std::vector<std::vector<double>>;

void emit_table(Sink& sink, OutputFormat format, const std::vector<std::string>& header,
                const Table& rows) {
  std::ostream& os = sink.stream();
  if (format == OutputFormat::csv) {
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
      os << '\n';
    }
  } else {
    ordered_json doc = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json obj = ordered_json::object();
      for (std::size_t c = 0; c < row.size(); ++c) obj[header[c]] = row[c];
      doc.push_back(std::move(obj));
    }
    os << doc.dump(1) << '\n';
  }
  sink.close();
}

LatticeSpec lattice_of(const SweepConfig& c) { return LatticeSpec(c.n_qubits, c.ell, c.omega_q); }
CavitySpec cavity_of(const SweepConfig& c) { return CavitySpec(c.omega_c, c.eta); }

}  // namespace

void run_chi_sweep(const SweepConfig& config) {
  config.validate();
  Sink sink(config.out);
  const LatticeSpec lattice = lattice_of(config);
  const CavitySpec cavity = cavity_of(config);
  const std::vector<double> ls = transform_indices(lattice.n_qubits());
  const std::vector<double> ks = config.k_grid.values();

  const Table rows = parallel_rows<std::vector<double>>(
      ls.size() * ks.size(), config.threads, [&](std::size_t i) {
        const std::size_t p = i / ks.size();
        const double k = ks[i % ks.size()];
        const complex c = chi(lattice, cavity, ls[p], k);
        return std::vector<double>{static_cast<double>(p), ls[p], k, c.real(), c.imag(),
                                   std::abs(c), std::arg(c)};
      });
  emit_table(sink, config.format,
             {"l_index", "l_value", "omega_k_ghz", "re_chi", "im_chi", "abs_chi", "arg_chi_rad"},
             rows);
}

void run_decay_sweep(const SweepConfig& config) {
  config.validate();
  Sink sink(config.out);
  const CavitySpec cavity = cavity_of(config);
  const bool by_ell = config.axis == "ell";
  const std::vector<double> axis = by_ell ? config.ell_grid.values() : config.omega_q_grid.values();
  std::vector<int> branches{config.branch};
  if (config.both_branches) branches = {0, 1};

  const Table rows = parallel_rows<std::vector<double>>(
      axis.size() * branches.size(), config.threads, [&](std::size_t i) {
        const int branch = branches[i / axis.size()];
        const double x = axis[i % axis.size()];
        const LatticeSpec lattice(config.n_qubits, by_ell ? x : config.ell,
                                  by_ell ? config.omega_q : x);
        const DecayResult d = decay_rate(lattice, cavity, branch, config.prefactor);
        std::vector<double> row{lattice.relative_spacing(), lattice.omega_q(), d.s_at_kq,
                                d.s_at_zero, d.gamma_normalized};
        if (d.gamma_physical) row.push_back(*d.gamma_physical);
        if (config.both_branches) row.push_back(branch);
        return row;
      });

  std::vector<std::string> header{"ell", "omega_q_ghz", "s_kq_abs", "s_zero_abs",
                                  "gamma_normalized"};
  if (config.prefactor) header.push_back("gamma_physical_ghz");
  if (config.both_branches) header.push_back("branch");
  emit_table(sink, config.format, header, rows);
}

void run_spectrum(const SweepConfig& config) {
  config.validate();
  Sink sink(config.out);
  const LatticeSpec lattice = lattice_of(config);
  const CavitySpec cavity = cavity_of(config);
  const HalfInteger u_max = ground_excitation(lattice) + (config.sectors - 1);
  const TransitionMatrices tm = transition_matrices(lattice, cavity, u_max);

  ordered_json doc;
  doc["n_qubits"] = lattice.n_qubits();
  doc["ell"] = lattice.relative_spacing();
  doc["omega_q_ghz"] = lattice.omega_q();
  doc["omega_c_ghz"] = cavity.omega_c();
  doc["eta_ghz"] = cavity.eta();
  doc["deformation_factor"] = deformation_factor(lattice);
  ordered_json sectors = ordered_json::array();
  for (const PolaritonSector& s : tm.sectors()) {
    const HalfInteger u = s.basis.u();
    ordered_json sec;
    sec["u"] = u.value();
    ordered_json basis = ordered_json::array();
    for (const SectorEntry& e : s.basis.entries()) basis.push_back({{"n", e.n}, {"m", e.m.value()}});
    sec["basis"] = basis;
    ordered_json branches = ordered_json::array();
    for (int b = 0; b < s.branches(); ++b) {
      ordered_json br;
      br["branch"] = b;
      br["omega_ghz"] = s.eigenvalues[b];
      br["epsilon_ghz"] = s.stark_splittings[b];
      std::vector<double> coeffs(s.coefficients.rows());
      for (Eigen::Index i = 0; i < s.coefficients.rows(); ++i) coeffs[i] = s.coefficients(i, b);
      br["coefficients"] = coeffs;
      ordered_json raise = ordered_json::array();
      if (u > tm.u_min())
        for (int b2 = 0; b2 < tm.sector(u - 1).branches(); ++b2)
          raise.push_back({{"lower_branch", b2}, {"value", tm.raise(u, b, b2)}});
      br["s_plus_from_lower"] = raise;
      ordered_json lower = ordered_json::array();
      if (u < tm.u_max())
        for (int b2 = 0; b2 < tm.sector(u + 1).branches(); ++b2)
          lower.push_back({{"upper_branch", b2}, {"value", tm.lower(u, b, b2)}});
      br["s_minus_from_upper"] = lower;
      branches.push_back(std::move(br));
    }
    sec["branches"] = branches;
    sectors.push_back(std::move(sec));
  }
  doc["sectors"] = sectors;
  sink.stream() << doc.dump(1) << '\n';
  sink.close();
}

void run_dynamics(const SweepConfig& config) {
  config.validate();
  Sink sink(config.out);
  std::optional<Sink> summary_sink;
  if (config.out != "-") summary_sink.emplace(config.out + ".summary.json");

  const LatticeSpec lattice = lattice_of(config);
  const CavitySpec cavity = cavity_of(config);
  const double element = first_excited_transition(lattice, cavity, config.branch);
  const BathSpec bath =
      normalized_bath(lattice, cavity, config.modes, config.bandwidth, config.rate_scale);
  DynamicsOptions options;
  options.record_stride = config.record_stride;
  if (config.per_l) options.per_l_elements.assign(lattice.n_qubits(), element);
  const AmplitudeTrajectory traj =
      integrate_amplitudes(lattice, cavity, bath, element, config.t_final, config.dt, options);

  Table rows;
  rows.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double a2 = std::norm(traj.alpha[i]);
    const double b2 = traj.beta.col(static_cast<Eigen::Index>(i)).squaredNorm();
    rows.push_back({traj.times[i], traj.alpha[i].real(), traj.alpha[i].imag(), a2, b2,
                    std::abs(a2 + b2 - 1.0)});
  }
  emit_table(sink, config.format,
             {"t_ns", "re_alpha", "im_alpha", "alpha_sq", "beta_total_sq", "norm_residual"}, rows);

  const DecayResult analytic = decay_rate(lattice, cavity, config.branch);
  ordered_json summary;
  summary["rate_scale"] = config.rate_scale;
  summary["modes"] = config.modes;
  summary["bandwidth_ghz"] = config.bandwidth;
  summary["transition_element"] = element;
  if (bath.mode_frequencies.size() > 1)
    summary["gamma_golden_rule"] = golden_rule_rate(lattice, cavity, bath, element);
  try {
    summary["gamma_fit"] = fit_decay(traj, {config.fit_start, config.fit_end});
  } catch (const ComputationError& e) {
    summary["gamma_fit"] = nullptr;
    summary["fit_error"] = e.what();
  }
  summary["gamma_analytic"] = config.rate_scale * analytic.gamma_normalized;
  if (summary_sink) {
    summary_sink->stream() << summary.dump() << '\n';
    summary_sink->close();
  } else {
    std::cerr << summary.dump() << '\n';
  }
}

ValidationReport run_validate(const SweepConfig& config) {
  Sink sink(config.out);
  ValidationReport report = validation_suite(config.seed);
  sink.stream() << report.to_json() << '\n';
  sink.close();
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity polaritons in a quasi-lattice of qubits: spectra, radiation and dynamics"};
  app.set_config("--config", "", "Plain key=value file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  app.fallthrough();

  SweepConfig cfg;
  std::string format = "csv";
  std::optional<double> omega_q;
  app.add_option("--n", cfg.n_qubits, "Number of qubits N")->capture_default_str();
  app.add_option("--ell", cfg.ell, "Relative spacing 2 L_q / lambda_C")->capture_default_str();
  app.add_option("--omega-q", omega_q, "Qubit frequency in GHz (default: omega-c)");
  app.add_option("--omega-c", cfg.omega_c, "Cavity frequency in GHz")->capture_default_str();
  app.add_option("--eta", cfg.eta, "Maximal qubit-cavity coupling in GHz")->capture_default_str();
  app.add_option("--out", cfg.out, "Output path, '-' for stdout")->capture_default_str();
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.threads, "Worker threads, 0 = hardware")->capture_default_str();
  app.add_option("--branch", cfg.branch, "Polariton branch of the first excited sector")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for randomized validation draws")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "Sector eigenvalues, coefficients and transition elements (JSON)");
  spectrum->add_option("--sectors", cfg.sectors, "Number of sectors from u = -r")->capture_default_str();

  auto* chi_sweep = app.add_subcommand("chi-sweep", "chi_l(k) over a frequency grid");
  chi_sweep->add_option("--k-min", cfg.k_grid.start, "First omega_k in GHz")->capture_default_str();
  chi_sweep->add_option("--k-max", cfg.k_grid.stop, "Last omega_k in GHz")->capture_default_str();
  chi_sweep->add_option("--k-count", cfg.k_grid.count, "Grid points")->capture_default_str();

  auto* decay = app.add_subcommand("decay-sweep", "Normalized decay rate over ell or omega_q");
  decay->add_option("--axis", cfg.axis, "ell or omega-q")->capture_default_str();
  decay->add_option("--ell-min", cfg.ell_grid.start)->capture_default_str();
  decay->add_option("--ell-max", cfg.ell_grid.stop)->capture_default_str();
  decay->add_option("--ell-count", cfg.ell_grid.count)->capture_default_str();
  decay->add_option("--omega-q-min", cfg.omega_q_grid.start)->capture_default_str();
  decay->add_option("--omega-q-max", cfg.omega_q_grid.stop)->capture_default_str();
  decay->add_option("--omega-q-count", cfg.omega_q_grid.count)->capture_default_str();
  decay->add_flag("--both-branches", cfg.both_branches, "Emit rows for branches 0 and 1");
  std::optional<double> mu, epsilon_d, area;
  auto* mu_opt = decay->add_option("--mu", mu, "Dipole moment (enables gamma_physical)");
  auto* eps_opt = decay->add_option("--epsilon-d", epsilon_d, "Dielectric constant");
  auto* area_opt = decay->add_option("--area", area, "Resonator cross-section");
  mu_opt->needs(eps_opt)->needs(area_opt);
  eps_opt->needs(mu_opt);
  area_opt->needs(mu_opt);

  auto* dynamics = app.add_subcommand("dynamics", "Amplitude dynamics against a flat discretized bath");
  dynamics->add_option("--modes", cfg.modes)->capture_default_str();
  dynamics->add_option("--bandwidth", cfg.bandwidth, "Bath bandwidth in GHz")->capture_default_str();
  dynamics->add_option("--rate-scale", cfg.rate_scale, "Normalized prefactor p")->capture_default_str();
  dynamics->add_option("--t-final", cfg.t_final, "ns")->capture_default_str();
  dynamics->add_option("--dt", cfg.dt, "ns")->capture_default_str();
  dynamics->add_option("--record-stride", cfg.record_stride)->capture_default_str();
  dynamics->add_option("--fit-start", cfg.fit_start, "ns")->capture_default_str();
  dynamics->add_option("--fit-end", cfg.fit_end, "ns")->capture_default_str();
  dynamics->add_flag("--per-l", cfg.per_l, "Couple through the per-l sum instead of s(k)");

  auto* validate = app.add_subcommand("validate", "Run the invariant suite; exit 1 on any hard failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  cfg.omega_q = omega_q.value_or(cfg.omega_c);
  cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (mu) cfg.prefactor = PrefactorInputs{*mu, *epsilon_d, *area};

  try {
    if (*spectrum) {
      cfg.command = "spectrum";
      run_spectrum(cfg);
    } else if (*chi_sweep) {
      cfg.command = "chi-sweep";
      run_chi_sweep(cfg);
    } else if (*decay) {
      cfg.command = "decay-sweep";
      run_decay_sweep(cfg);
    } else if (*dynamics) {
      cfg.command = "dynamics";
      run_dynamics(cfg);
    } else if (*validate) {
      cfg.command = "validate";
      const ValidationReport report = run_validate(cfg);
      if (!report.passed()) {
        err << "validation failed\n";
        return 1;
      }
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "invalid arguments: " << e.what() << '\n';
    return 2;
  } catch (const IntegrationError& e) {
    err << "integration aborted at t = " << format_double(e.time_ns()) << " ns: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qlat
