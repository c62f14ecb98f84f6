#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmech/brackets.hpp"
#include "pmech/dw_field.hpp"
#include "pmech/dynamics.hpp"
#include "pmech/io.hpp"
#include "pmech/kernels.hpp"
#include "pmech/representations.hpp"
#include "pmech/verify.hpp"

namespace pmech::cli {

namespace {

using json = nlohmann::json;
using brackets::Observable;
using io::format_double;

constexpr double kPi = std::numbers::pi;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Outputs {
  std::string json_path;
  std::string csv_path;

  void add_to(CLI::App* app) {
    app->add_option("--json", json_path, "write the JSON report here");
    app->add_option("--csv", csv_path, "write CSV data here ('-' for stdout)");
  }
};

// Collects CSV text and writes it to a file or the summary stream.
void emit_csv(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

void emit_json(const std::string& path, const json& report) {
  if (!path.empty()) io::write_file(path, report.dump(2) + "\n");
}

clifford::Normalization parse_normalization(const std::string& s) {
  return s == "literal" ? clifford::Normalization::Literal : clifford::Normalization::Standard;
}

std::string monomial_name(const poly::Exponents& e, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += names[i];
    if (e[i] > 1) s += '^' + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------------------

struct BracketsOptions {
  std::string f, g;
  std::size_t n = 1;
  double hbar = 0.0;
  Outputs out;

  json config() const { return {{"f", f}, {"g", g}, {"n", n}, {"hbar", hbar}}; }
};

int run_brackets(const BracketsOptions& o, std::ostream& out) {
  const auto f = Observable::parse(o.f, o.n), g = Observable::parse(o.g, o.n);
  const auto names = f.variable_names();
  const auto pb = brackets::poisson_bracket(f, g);
  const auto ub = brackets::ub_bracket_poly(f, g);
  const auto at = brackets::ub_bracket_at(f, g, o.hbar);
  const auto diff = at - pb.at_lambda(0.0);
  const auto text = [&](const poly::RealPolynomial& p) { return p.is_zero() ? std::string("0") : poly::format_polynomial(p, names); };
  const std::string pb_s = pb.is_zero() ? "0" : pb.to_string();
  const std::string ub_s = ub.is_zero() ? "0" : ub.to_string();

  out << "poisson: " << pb_s << "\n"
      << "moyal (formal, h = hbar/(4 pi)): " << ub_s << "\n"
      << "moyal at hbar=" << format_double(o.hbar) << ": " << text(at) << "\n"
      << "difference: " << text(diff) << "\n"
      << "difference coefficient norm: " << format_double(poly::coefficient_norm(diff)) << "\n";

  json r = io::report_envelope("brackets", o.config());
  r["poisson"] = pb_s;
  r["moyal_formal"] = ub_s;
  r["moyal"] = text(at);
  r["difference"] = text(diff);
  r["difference_norm"] = poly::coefficient_norm(diff);
  r["lambda"] = brackets::lambda_of_hbar(o.hbar);
  emit_json(o.out.json_path, r);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct OscillatorOptions {
  std::string hamiltonian = "(p^2 + q^2)/2";
  std::size_t n = 1;
  std::string mode = "classical";
  std::vector<double> q0{1.0};
  std::vector<double> p0{0.0};
  std::vector<double> hbar{1.0};
  double t_end = 2 * kPi;
  double dt = 1e-3;
  std::string integrator = "rk4";
  std::string observable = "q";
  int truncation = 0;
  std::size_t record_every = 100;
  Outputs out;

  json config() const {
    return {{"hamiltonian", hamiltonian}, {"n", n},           {"mode", mode},
            {"q0", q0},                   {"p0", p0},         {"hbar", hbar},
            {"t_end", t_end},             {"dt", dt},         {"integrator", integrator},
            {"observable", observable},   {"truncation", truncation}, {"record_every", record_every}};
  }
};

int run_oscillator(const OscillatorOptions& o, std::ostream& out) {
  const dynamics::HamiltonianSpec spec{Observable::parse(o.hamiltonian, o.n)};
  json r = io::report_envelope("oscillator", o.config());
  std::ostringstream csv;
  io::CsvWriter w(csv);
  const std::optional<int> trunc = o.truncation > 0 ? std::optional<int>(o.truncation) : std::nullopt;

  if (o.mode == "classical") {
    if (o.q0.size() != o.n || o.p0.size() != o.n) throw ConfigError("--q0/--p0 need one value per degree of freedom");
    const auto integ = o.integrator == "leapfrog" ? dynamics::Integrator::Leapfrog : dynamics::Integrator::RK4;
    const auto tr = dynamics::evolve_classical(spec, o.q0, o.p0, o.t_end, o.dt, integ, o.record_every);
    std::vector<std::string> head{"t"};
    const auto names = spec.H.variable_names();
    for (std::size_t j = 0; j < 2 * o.n; ++j) head.push_back(names[j]);
    head.push_back("H");
    w.row(head);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      std::vector<double> row{tr.times[k]};
      row.insert(row.end(), tr.q[k].begin(), tr.q[k].end());
      row.insert(row.end(), tr.p[k].begin(), tr.p[k].end());
      row.push_back(tr.energy[k]);
      w.row(row);
    }
    out << "integrator: " << dynamics::to_string(integ) << "\n"
        << "t = " << format_double(tr.times.back()) << "\n";
    for (std::size_t j = 0; j < o.n; ++j)
      out << names[j] << " = " << format_double(tr.q.back()[j]) << ", " << names[o.n + j] << " = "
          << format_double(tr.p.back()[j]) << "\n";
    out << "max energy drift: " << format_double(tr.max_energy_drift) << "\n";
    r["final"] = {{"t", tr.times.back()}, {"q", tr.q.back()}, {"p", tr.p.back()}};
    r["max_energy_drift"] = tr.max_energy_drift;
  } else if (o.mode == "moyal") {
    const auto f0 = Observable::parse(o.observable, o.n);
    bool header = false;
    json runs = json::array();
    for (double hb : o.hbar) {
      const auto tr = dynamics::evolve_observable_moyal(spec, f0, hb, o.t_end, o.dt, trunc, o.record_every);
      const auto names = spec.H.variable_names();
      if (!header) {
        std::vector<std::string> head{"hbar", "t"};
        for (const auto& e : tr.basis) head.push_back(monomial_name(e, names));
        w.row(head);
        header = true;
      }
      for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::vector<double> row{hb, tr.times[k]};
        row.insert(row.end(), tr.coefficients[k].begin(), tr.coefficients[k].end());
        w.row(row);
      }
      auto snap = tr.snapshot(tr.times.size() - 1);
      std::vector<std::string> snames(names.begin(), names.begin() + static_cast<long>(2 * o.n));
      const std::string s = snap.is_zero() ? "0" : poly::format_polynomial(snap, snames);
      out << "hbar=" << format_double(hb) << " f(" << format_double(tr.times.back()) << ") = " << s << "\n";
      runs.push_back({{"hbar", hb}, {"t", tr.times.back()}, {"f", s}, {"truncation", tr.truncation}});
    }
    r["runs"] = runs;
  } else {
    const auto f0 = Observable::parse(o.observable, o.n);
    const auto tab = dynamics::moyal_vs_poisson_gap(spec, f0, o.hbar, o.t_end, o.dt, trunc);
    w.row(std::vector<std::string>{"hbar", "gap", "truncation_change"});
    for (std::size_t i = 0; i < tab.hbar.size(); ++i) {
      w.row(std::vector<double>{tab.hbar[i], tab.gap[i], tab.truncation_change[i]});
      out << "hbar=" << format_double(tab.hbar[i]) << " gap=" << format_double(tab.gap[i])
          << " truncation_change=" << format_double(tab.truncation_change[i]) << "\n";
    }
    if (tab.slope) out << "log-log slope: " << format_double(*tab.slope) << "\n";
    r["hbar"] = tab.hbar;
    r["gap"] = tab.gap;
    r["truncation_change"] = tab.truncation_change;
    r["slope"] = tab.slope ? json(*tab.slope) : json(nullptr);
  }
  emit_csv(o.out.csv_path, csv.str(), out);
  emit_json(o.out.json_path, r);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct KleinGordonOptions {
  std::string mass = "1";
  std::vector<int> metric{1, -1};
  std::string normalization = "standard";
  std::string lagrangian;
  std::string lattice;
  double dt = 0.0;
  std::vector<double> k{2.0};
  bool pulse = false;
  int periods = 1;
  double length = 20.0;
  double width = 1.0;
  double periods_run = 10.0;
  double dispersion_tol = 0.01;
  double energy_tol = 1e-6;
  double variance_tol = 1e-10;
  double pulse_tol = 0.01;
  bool reference = false;
  std::string field_csv;
  std::string dispersion_csv;
  Outputs out;

  json config() const {
    return {{"mass", mass},
            {"metric", metric},
            {"normalization", normalization},
            {"lagrangian", lagrangian},
            {"lattice", lattice},
            {"dt", dt},
            {"k", k},
            {"pulse", pulse},
            {"periods", periods},
            {"length", length},
            {"width", width},
            {"periods_run", periods_run},
            {"dispersion_tol", dispersion_tol},
            {"energy_tol", energy_tol},
            {"variance_tol", variance_tol},
            {"pulse_tol", pulse_tol},
            {"reference", reference}};
  }
};

std::pair<std::size_t, std::size_t> parse_lattice(const std::string& s) {
  if (s.empty()) return {0, 0};
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("--lattice expects N0xN1");
  try {
    std::size_t a = std::stoul(s.substr(0, x)), b = std::stoul(s.substr(x + 1));
    if (a < 2 || b < 3) throw ConfigError("--lattice needs N0 >= 2 and N1 >= 3");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError("--lattice expects N0xN1");
  }
}

void write_field_csv(std::ostringstream& os, const dw::IntegrationResult& run, double h, double tag) {
  io::CsvWriter w(os);
  const std::size_t nx = run.state.lattice.shape[1];
  for (std::size_t t = 0; t < run.times.size(); ++t)
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t s = t * nx + i;
      w.row(std::vector<double>{tag, run.times[t], h * static_cast<double>(i), run.state.q[s], run.state.p[0][s],
                                run.state.p[1][s]});
    }
}

json reduction_json(const dw::ReductionReport& rep) {
  json comps = json::array();
  for (const auto& c : rep.components)
    comps.push_back({{"name", c.name},
                     {"kappa", c.kappa ? json(*c.kappa) : json(nullptr)},
                     {"kappa_expected", c.kappa_expected},
                     {"ratio_variance", c.ratio_variance},
                     {"max_residual", c.max_residual},
                     {"sites_used", c.sites_used}});
  return {{"components", comps}, {"kappa_q", rep.kappa_q ? json(*rep.kappa_q) : json(nullptr)},
          {"max_ratio_variance", rep.max_ratio_variance()}};
}

void print_reduction(std::ostream& out, const std::string& label, const dw::ReductionReport& rep) {
  out << "reduction (" << label << "):\n";
  for (const auto& c : rep.components)
    out << "  " << c.name << ": kappa=" << (c.kappa ? format_double(*c.kappa) : std::string("n/a"))
        << " expected=" << format_double(c.kappa_expected) << " variance=" << format_double(c.ratio_variance)
        << " max_residual=" << format_double(c.max_residual) << "\n";
}

int run_kleingordon(const KleinGordonOptions& o, std::ostream& out) {
  if (o.metric.size() != 2) throw ConfigError("kleingordon runs in 1+1 dimensions: --metric needs two entries");
  const auto metric = clifford::make_metric(o.metric, parse_normalization(o.normalization));
  const Rational m = parse_rational(o.mass);
  const auto L = o.lagrangian.empty() ? dw::LagrangianSpec::free_scalar(metric, m * m)
                                      : dw::LagrangianSpec::parse(o.lagrangian, metric);
  const auto leg = dw::dw_legendre(L);
  const auto& H = leg.hamiltonian;
  const auto form = dw::klein_gordon_form(H);
  const double c0 = form.c[0], c1 = form.c[1];
  const double m2 = form.force.size() > 1 ? form.force[1] : 0.0;
  const auto [n0, n1] = parse_lattice(o.lattice);

  out << "L = " << L.to_string() << "\nH = " << H.to_string() << "\n";
  json r = io::report_envelope("kleingordon", o.config());
  r["lagrangian"] = L.to_string();
  r["hamiltonian"] = H.to_string();
  bool ok = true;
  std::ostringstream series, field, disp;
  io::CsvWriter sw(series), dw_(disp);

  if (o.pulse) {
    const std::size_t nx = n1 ? n1 : 256;
    const double h = o.length / static_cast<double>(nx);
    const double dt = o.dt > 0 ? o.dt : 0.5 * h;
    const double x0 = 0.5 * o.length, s2 = o.width * o.width;
    dw::CauchyData data;
    data.h = h;
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = h * static_cast<double>(i) - x0;
      const double q = std::exp(-x * x / (2 * s2));
      data.q.push_back(q);
      data.q_dot.push_back(x / s2 * q);  // right-moving: q_t = -q_x
    }
    dw::IntegrationOptions io_opt{dt, n0 ? n0 - 1 : static_cast<std::size_t>(std::ceil(0.5 * o.length / dt)),
                                  o.reference};
    const auto run = dw::integrate_dw(H, data, io_opt);
    sw.row(std::vector<std::string>{"t_half", "energy"});
    for (std::size_t s = 0; s < run.energy.size(); ++s) sw.row(std::vector<double>{(s + 0.5) * dt, run.energy[s]});
    field << "tag,t,u1,q,p0,p1\r\n";
    write_field_csv(field, run, h, 0.0);
    out << "pulse: sites=" << nx << " h=" << format_double(h) << " dt=" << format_double(dt)
        << " steps=" << io_opt.steps << "\n"
        << "energy drift: " << format_double(run.max_energy_drift) << "\n";
    ok = ok && run.max_energy_drift <= o.energy_tol;
    json pr = {{"sites", nx}, {"h", h}, {"dt", dt}, {"steps", io_opt.steps},
               {"energy_drift", run.max_energy_drift}, {"constraint_residual", run.constraint_residual}};
    if (m2 == 0.0 && std::abs(c0 * c1 + 1.0) < 1e-15) {
      const double T = run.times.back();
      double err = 0.0;
      const std::size_t last = run.times.size() - 1;
      for (std::size_t i = 0; i < nx; ++i) {
        double x = h * static_cast<double>(i) - x0 - T;
        x -= o.length * std::round(x / o.length);
        err = std::max(err, std::abs(run.state.q[last * nx + i] - std::exp(-x * x / (2 * s2))));
      }
      out << "d'Alembert error at t=" << format_double(T) << ": " << format_double(err) << "\n";
      pr["dalembert_error"] = err;
      ok = ok && err <= o.pulse_tol;
    }
    r["pulse"] = pr;
  } else {
    dw_.row(std::vector<std::string>{"k", "k_h", "omega_measured", "omega_exact", "omega_discrete", "rel_error"});
    sw.row(std::vector<std::string>{"k", "t_half", "energy"});
    field << "k,t,u1,q,p0,p1\r\n";
    json rows = json::array();
    for (double k : o.k) {
      if (!(k > 0)) throw ConfigError("--k must be positive");
      const double w2 = c0 * (m2 - k * k / c1);
      if (!(w2 > 0)) throw ConfigError("mode k has no real frequency for this Hamiltonian");
      const double w = std::sqrt(w2);
      const double box = 2 * kPi * o.periods / k;
      const std::size_t nx = n1 ? n1 : 64;
      const double h = box / static_cast<double>(nx);
      const double dt = o.dt > 0 ? o.dt : 0.5 * h;
      dw::CauchyData data;
      data.h = h;
      for (std::size_t i = 0; i < nx; ++i) {
        data.q.push_back(std::cos(k * h * static_cast<double>(i)));
        data.q_dot.push_back(w * std::sin(k * h * static_cast<double>(i)));
      }
      const std::size_t steps =
          n0 ? n0 - 1 : static_cast<std::size_t>(std::ceil(o.periods_run * 2 * kPi / w / dt));
      const auto run = dw::integrate_dw(H, data, {dt, steps, o.reference});
      const double wm = dw::measure_frequency(run, static_cast<std::size_t>(o.periods));
      const double wd = dw::discrete_frequency(k, m2, dt, h, c0, c1);
      const double rel = std::abs(wm - w) / w;
      dw_.row(std::vector<double>{k, k * h, wm, w, wd, rel});
      for (std::size_t s = 0; s < run.energy.size(); ++s) sw.row(std::vector<double>{k, (s + 0.5) * dt, run.energy[s]});
      write_field_csv(field, run, h, k);

      const auto exact = dw::plane_wave_state(H, k, 12, nx, dt, o.periods);
      const auto rep = dw::verify_field_reduction(H, exact);
      const auto rep_num = dw::verify_field_reduction(H, run.state);

      out << "k=" << format_double(k) << " kh=" << format_double(k * h) << " omega=" << format_double(wm)
          << " exact=" << format_double(w) << " discrete=" << format_double(wd)
          << " rel_error=" << format_double(rel) << "\n"
          << "  energy drift: " << format_double(run.max_energy_drift)
          << "  constraint residual: " << format_double(run.constraint_residual) << "\n";
      print_reduction(out, "exact plane wave", rep);
      print_reduction(out, "lattice solution", rep_num);

      const bool row_ok = rel <= o.dispersion_tol && run.max_energy_drift <= o.energy_tol &&
                          rep.max_ratio_variance() <= o.variance_tol;
      ok = ok && row_ok;
      rows.push_back({{"k", k},
                      {"k_h", k * h},
                      {"sites", nx},
                      {"dt", dt},
                      {"steps", steps},
                      {"omega_measured", wm},
                      {"omega_exact", w},
                      {"omega_discrete", wd},
                      {"rel_error", rel},
                      {"energy_drift", run.max_energy_drift},
                      {"constraint_residual", run.constraint_residual},
                      {"reduction_exact", reduction_json(rep)},
                      {"reduction_lattice", reduction_json(rep_num)},
                      {"passed", row_ok}});
    }
    r["dispersion"] = rows;
  }
  r["passed"] = ok;
  out << (ok ? "all checks passed" : "CHECK FAILED") << "\n";
  emit_csv(o.out.csv_path, series.str(), out);
  emit_csv(o.field_csv, field.str(), out);
  emit_csv(o.dispersion_csv, disp.str(), out);
  emit_json(o.out.json_path, r);
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct FockOptions {
  double hbar = 1.0;
  std::vector<std::string> grid;
  std::string scheme = "spectral";
  std::string state = "vacuum";
  std::vector<double> shift{0.5, -0.4};
  double tol = 1e-8;
  std::string dump;
  Outputs out;

  json config() const {
    return {{"hbar", hbar}, {"grid", grid}, {"scheme", scheme}, {"state", state},
            {"shift", shift}, {"tol", tol}, {"dump", dump}};
  }
};

grid::Axis parse_axis(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("--grid expects q_min,q_max,N");
  try {
    grid::Axis a{std::stod(parts[0]), std::stod(parts[1]), std::stoul(parts[2])};
    a.validate();
    return a;
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("bad --grid value: ") + e.what());
  }
}

int run_fock(const FockOptions& o, std::ostream& out) {
  if (!(o.hbar > 0)) throw ConfigError("--hbar must be positive for the Fock test");
  if (o.grid.size() > 2) throw ConfigError("--grid is given once per axis (q then p)");
  const grid::Axis qa = o.grid.empty() ? grid::Axis::centered(6.0, 256) : parse_axis(o.grid[0]);
  const grid::Axis pa = o.grid.size() == 2 ? parse_axis(o.grid[1]) : qa;
  const auto scheme =
      o.scheme == "fd4" ? grid::DerivativeScheme::FiniteDifference4 : grid::DerivativeScheme::Spectral;
  if (o.shift.size() != 2) throw ConfigError("--shift expects x,y");

  grid::PhaseGrid f;
  bool expect_member = true;
  if (o.state == "vacuum") {
    f = representations::vacuum(o.hbar, qa, pa);
  } else if (o.state == "coherent") {
    f = representations::coherent_state(o.hbar, {0.0, {o.shift[0]}, {o.shift[1]}}, qa, pa);
  } else {
    f = representations::vacuum(o.hbar, qa, pa);
    for (std::size_t i = 0; i < f.rows(); ++i)
      for (std::size_t j = 0; j < f.cols(); ++j) f(i, j) *= qa.at(i);
    expect_member = false;
  }
  const double res = representations::fock_residual(o.hbar, f, scheme);
  const double rel = res / grid::l2_norm(f);
  const bool member = rel <= o.tol;
  const bool ok = member == expect_member;
  out << "state: " << o.state << "\n"
      << "grid: q [" << format_double(qa.min) << ", " << format_double(qa.max) << ") x " << qa.n << ", p ["
      << format_double(pa.min) << ", " << format_double(pa.max) << ") x " << pa.n << "\n"
      << "residual: " << format_double(res) << " (relative " << format_double(rel) << ")\n"
      << "in Fock space: " << (member ? "yes" : "no") << "\n";

  if (!o.dump.empty()) {
    std::ofstream bin(o.dump, std::ios::binary);
    if (!bin) throw io::IoError("cannot open " + o.dump);
    io::write_grid_binary(bin, f);
  }
  std::ostringstream csv;
  io::write_grid_csv(csv, representations::dbar(o.hbar, f, scheme));
  emit_csv(o.out.csv_path, csv.str(), out);

  json r = io::report_envelope("fock", o.config());
  r["residual"] = res;
  r["relative_residual"] = rel;
  r["in_fock_space"] = member;
  r["passed"] = ok;
  emit_json(o.out.json_path, r);
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = verify::SuiteOptions{}.seed;
  std::size_t grid_n = 256;
  std::size_t trials = 1000;
  std::string normalization = "standard";
  Outputs out;

  json config() const {
    return {{"suites", suites}, {"seed", seed}, {"grid_n", grid_n}, {"trials", trials},
            {"normalization", normalization}};
  }
};

int run_verify(const VerifyOptions& o, std::ostream& out) {
  verify::SuiteOptions so;
  so.seed = o.seed;
  so.grid_n = o.grid_n;
  so.random_trials = o.trials;
  so.normalization = parse_normalization(o.normalization);
  std::vector<std::string> names;
  for (const auto& s : o.suites) {
    if (s == "all") {
      names = verify::suite_names();
      break;
    }
    const auto& known = verify::suite_names();
    if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite '" + s + "'");
    names.push_back(s);
  }
  std::vector<verify::CheckResult> results;
  for (const auto& n : names) {
    auto part = verify::run_suite(n, so);
    for (const auto& c : part) {
      out << (c.passed ? "PASS" : "FAIL") << "  " << c.suite << ": " << c.name
          << "  measured=" << format_double(c.measured) << " tol=" << format_double(c.tolerance);
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << "\n";
    }
    results.insert(results.end(), part.begin(), part.end());
  }
  std::size_t failed = 0;
  json arr = json::array();
  for (const auto& c : results) {
    failed += c.passed ? 0 : 1;
    arr.push_back(verify::to_json(c));
  }
  out << results.size() - failed << "/" << results.size() << " checks passed\n";
  json r = io::report_envelope("verify", o.config());
  r["checks"] = arr;
  r["failed"] = failed;
  emit_json(o.out.json_path, r);

  std::ostringstream csv;
  io::CsvWriter w(csv);
  w.row(std::vector<std::string>{"suite", "name", "passed", "measured", "tolerance", "detail"});
  for (const auto& c : results)
    w.row(std::vector<std::string>{c.suite, c.name, c.passed ? "true" : "false", format_double(c.measured),
                                   format_double(c.tolerance), c.detail});
  emit_csv(o.out.csv_path, csv.str(), out);
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

void apply_threads(int flag) {
  int threads = flag;
  if (threads <= 0) {
    if (const char* env = std::getenv("PMECH_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 0) throw ConfigError("PMECH_THREADS must be a non-negative integer");
      threads = static_cast<int>(v);
    }
  }
  kernels::set_threads(threads);
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-mechanics toolkit: brackets, oscillator dynamics, Klein-Gordon lattices, Fock tests, invariants"};
  app.name("pmech");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "TOML configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: PMECH_THREADS or the runtime default)");

  const auto poly_check = CLI::Validator(
      [](std::string& s) { return s.empty() ? std::string("empty polynomial") : std::string(); }, "POLY");

  BracketsOptions bo;
  auto* br = app.add_subcommand("brackets", "Poisson and Moyal brackets of two polynomials");
  br->add_option("--f", bo.f, "first polynomial")->required()->check(poly_check);
  br->add_option("--g", bo.g, "second polynomial")->required()->check(poly_check);
  br->add_option("--n", bo.n, "degrees of freedom")->capture_default_str()->check(CLI::Range(1, 8));
  br->add_option("--hbar", bo.hbar, "Planck constant for the numeric Moyal bracket")->capture_default_str();
  bo.out.add_to(br);

  OscillatorOptions oo;
  auto* osc = app.add_subcommand("oscillator", "classical trajectories and Moyal observable evolution");
  osc->add_option("--hamiltonian", oo.hamiltonian, "H(q, p), may contain h")->capture_default_str();
  osc->add_option("--n", oo.n, "degrees of freedom")->capture_default_str()->check(CLI::Range(1, 8));
  osc->add_option("--mode", oo.mode, "classical | moyal | gap")
      ->capture_default_str()
      ->check(CLI::IsMember({"classical", "moyal", "gap"}));
  osc->add_option("--q0", oo.q0, "initial positions")->delimiter(',')->capture_default_str();
  osc->add_option("--p0", oo.p0, "initial momenta")->delimiter(',')->capture_default_str();
  osc->add_option("--hbar", oo.hbar, "Planck constants (moyal, gap)")->delimiter(',')->capture_default_str();
  osc->add_option("--t-end", oo.t_end, "final time")->capture_default_str()->check(CLI::PositiveNumber);
  osc->add_option("--dt", oo.dt, "time step")->capture_default_str()->check(CLI::PositiveNumber);
  osc->add_option("--integrator", oo.integrator, "rk4 | leapfrog")
      ->capture_default_str()
      ->check(CLI::IsMember({"rk4", "leapfrog"}));
  osc->add_option("--observable", oo.observable, "initial observable f0 (moyal, gap)")->capture_default_str();
  osc->add_option("--truncation", oo.truncation, "monomial degree cutoff for deg H > 2 (0: none)")
      ->capture_default_str();
  osc->add_option("--record-every", oo.record_every, "record every k-th step (0: ends only)")->capture_default_str();
  oo.out.add_to(osc);

  KleinGordonOptions ko;
  auto* kg = app.add_subcommand("kleingordon", "DW scalar field on a 1+1 lattice");
  kg->add_option("--mass", ko.mass, "mass m (rational)")->capture_default_str();
  kg->add_option("--metric", ko.metric, "metric signs")->delimiter(',')->capture_default_str();
  kg->add_option("--normalization", ko.normalization, "standard | literal")
      ->capture_default_str()
      ->check(CLI::IsMember({"standard", "literal"}));
  kg->add_option("--lagrangian", ko.lagrangian, "L(q, v0, v1); default: free scalar of the given mass");
  kg->add_option("--lattice", ko.lattice, "N0xN1: time slices x spatial sites");
  kg->add_option("--dt", ko.dt, "time step (default h/2)");
  kg->add_option("--k", ko.k, "plane-wave wavenumbers")->delimiter(',')->capture_default_str();
  kg->add_flag("--pulse", ko.pulse, "evolve a right-moving Gaussian pulse instead of plane waves");
  kg->add_option("--periods", ko.periods, "wavelengths per periodic box")->capture_default_str()->check(CLI::PositiveNumber);
  kg->add_option("--length", ko.length, "box length for --pulse")->capture_default_str()->check(CLI::PositiveNumber);
  kg->add_option("--width", ko.width, "pulse width")->capture_default_str()->check(CLI::PositiveNumber);
  kg->add_option("--periods-run", ko.periods_run, "temporal periods to integrate")->capture_default_str();
  kg->add_option("--dispersion-tol", ko.dispersion_tol)->capture_default_str();
  kg->add_option("--energy-tol", ko.energy_tol)->capture_default_str();
  kg->add_option("--variance-tol", ko.variance_tol)->capture_default_str();
  kg->add_option("--pulse-tol", ko.pulse_tol)->capture_default_str();
  kg->add_flag("--reference", ko.reference, "use the serial reference kernel");
  kg->add_option("--field-csv", ko.field_csv, "write every lattice site here");
  kg->add_option("--dispersion-csv", ko.dispersion_csv, "write the dispersion table here");
  ko.out.add_to(kg);

  FockOptions fo;
  auto* fk = app.add_subcommand("fock", "Cauchy-Riemann residuals of phase-space states");
  fk->add_option("--hbar", fo.hbar)->capture_default_str();
  fk->add_option("--grid", fo.grid, "q_min,q_max,N (give twice for q then p)")->expected(1, 2)->allow_extra_args(false);
  fk->add_option("--scheme", fo.scheme, "spectral | fd4")
      ->capture_default_str()
      ->check(CLI::IsMember({"spectral", "fd4"}));
  fk->add_option("--state", fo.state, "vacuum | coherent | q-vacuum")
      ->capture_default_str()
      ->check(CLI::IsMember({"vacuum", "coherent", "q-vacuum"}));
  fk->add_option("--shift", fo.shift, "x,y of the coherent state")->delimiter(',')->capture_default_str();
  fk->add_option("--tol", fo.tol, "relative residual threshold for membership")->capture_default_str();
  fk->add_option("--dump", fo.dump, "binary grid dump of the state");
  fo.out.add_to(fk);

  VerifyOptions vo;
  auto* vf = app.add_subcommand("verify", "invariant suites");
  vf->add_option("--suite", vo.suites, "suite names or 'all'")->delimiter(',')->capture_default_str();
  vf->add_option("--seed", vo.seed)->capture_default_str();
  vf->add_option("--grid-n", vo.grid_n, "phase-space grid size")->capture_default_str()->check(CLI::Range(16, 4096));
  vf->add_option("--trials", vo.trials, "random trials per exact check")->capture_default_str();
  vf->add_option("--normalization", vo.normalization, "standard | literal")
      ->capture_default_str()
      ->check(CLI::IsMember({"standard", "literal"}));
  vo.out.add_to(vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pmech: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    apply_threads(threads);
    if (br->parsed()) return run_brackets(bo, out);
    if (osc->parsed()) return run_oscillator(oo, out);
    if (kg->parsed()) return run_kleingordon(ko, out);
    if (fk->parsed()) return run_fock(fo, out);
    return run_verify(vo, out);
  } catch (const ConfigError& e) {
    err << "pmech: configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const dynamics::TruncationRequired& e) {
    err << "pmech: configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const io::IoError& e) {
    err << "pmech: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const dynamics::BlowUp& e) {
    err << "pmech: numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "pmech: invalid input: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "pmech: numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

}  // namespace pmech::cli
