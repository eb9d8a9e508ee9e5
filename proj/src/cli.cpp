#include "kscars/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "kscars/algebra.hpp"
#include "kscars/analytic.hpp"
#include "kscars/basis.hpp"
#include "kscars/dynamics.hpp"
#include "kscars/fitting.hpp"
#include "kscars/io.hpp"
#include "kscars/lanczos.hpp"
#include "kscars/operators.hpp"
#include "kscars/plot.hpp"

namespace kscars {

namespace fs = std::filesystem;
using json = nlohmann::json;

int exit_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Size: return kExitSize;
    case ErrorKind::InvalidState: return kExitInvalidState;
    case ErrorKind::Configuration: return kExitConfiguration;
    case ErrorKind::Precondition: return kExitPrecondition;
    case ErrorKind::Domain: return kExitDomain;
    case ErrorKind::Convergence: return kExitConvergence;
    case ErrorKind::Io: return kExitIo;
  }
  return kExitInternal;
}

namespace {

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string model = "pxp";
  int n_sites = 16;
  std::string state = "Z2";
  int kmax = kDefaultKmax;
  double b_tol = kDefaultBTol;
  double lambda = 0.0;
  bool lambda_set = false;
  double chi = 0.0;
  double tmax = 20.0;
  double dt = 0.01;
  std::string method = "tri";
  std::string out_dir;
  bool store_vectors = false;
};

constexpr double kPerturbationStrength = 0.108;
constexpr const char* kGenericState = "0010100100100010";

fs::path output_dir(const RunConfig& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return fs::current_path();
}

/// "a:s:b" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    require(!s.empty() && end == s.c_str() + s.size() && std::isfinite(v),
            ErrorKind::Configuration, "malformed number '" + s + "' in '" + spec + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    require(parts.size() == 3, ErrorKind::Configuration, "range must be start:step:stop");
    const double a = number(parts[0]), s = number(parts[1]), b = number(parts[2]);
    require(s > 0 && b >= a, ErrorKind::Configuration, "range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / s + 1e-9));
    require(count < 10'000'000, ErrorKind::Configuration, "range too long");
    for (long k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * s);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  require(!out.empty(), ErrorKind::Configuration, "empty range '" + spec + "'");
  return out;
}

std::vector<int> parse_sizes(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_range(spec)) {
    require(v == std::round(v), ErrorKind::Configuration, "system sizes must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');)
    if (!p.empty()) out.push_back(p);
  return out;
}

OperatorSpec operator_spec(const RunConfig& c) {
  OperatorSpec spec;
  spec.model = parse_model(c.model);
  spec.lambda = c.lambda;
  if (spec.model == Model::PXPPerturbed && !c.lambda_set) spec.lambda = kPerturbationStrength;
  spec.chi = c.chi;
  validate(spec);
  require(is_hamiltonian(spec.model), ErrorKind::Configuration,
          "model '" + c.model + "' is a ladder operator, not a Hamiltonian");
  return spec;
}

struct Prepared {
  BasisPtr basis;
  SparseOperator h;
  StateVector v0;
};

Prepared prepare(const RunConfig& c) {
  const OperatorSpec spec = operator_spec(c);
  auto basis = build_basis(c.n_sites, required_constraint(spec.model));
  auto h = build_operator(basis, spec);
  auto v0 = product_state(basis, c.state);
  return {basis, std::move(h), std::move(v0)};
}

json header(const std::string& kind) {
  return json{{"schema_version", kSchemaVersion}, {"generated_by", std::string(generated_by())},
              {"kind", kind}};
}

void write_json(const fs::path& p, const json& j) { write_text_atomic(p, j.dump(2) + "\n"); }

std::string tag(const RunConfig& c) {
  return c.model + "_N" + std::to_string(c.n_sites) + "_" + c.state;
}

std::vector<double> iota(std::size_t n, double start = 0.0) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = start + static_cast<double>(k);
  return v;
}

// ---------------------------------------------------------------------------
// building blocks shared by subcommands
// ---------------------------------------------------------------------------

CsvTable lanczos_table(const TridiagonalData& tri) {
  CsvTable t;
  const auto bn = tri.b_by_index();
  t.add_column("n", iota(tri.a.size()));
  t.add_column("a_n", tri.a);
  t.add_column("b_n", bn);
  return t;
}

EvolutionSeries evolve(const Prepared& p, const RunConfig& c, TridiagonalData* tri_out = nullptr) {
  require(c.method == "tri" || c.method == "full", ErrorKind::Configuration,
          "method must be 'tri' or 'full'");
  const bool full = c.method == "full";
  TridiagonalData tri = run_lanczos(p.h, p.v0, c.kmax, c.b_tol, full);
  const auto grid = uniform_grid(c.tmax, c.dt);
  EvolutionSeries s = full ? evolve_full(p.h, p.v0, grid, tri) : evolve_tridiagonal(tri, grid);
  if (tri_out) *tri_out = std::move(tri);
  return s;
}

CsvTable series_table(const EvolutionSeries& s, bool amplitudes) {
  CsvTable t;
  t.add_column("t", s.time);
  t.add_column("complexity", s.complexity);
  t.add_column("entropy", s.entropy);
  t.add_column("fidelity_abs", s.fidelity_abs);
  t.add_column("leakage", s.leakage);
  if (amplitudes) {
    for (int n = 0; n < s.krylov_dim(); ++n) {
      std::vector<double> col(s.time.size());
      for (std::size_t i = 0; i < col.size(); ++i)
        col[i] = std::abs(s.psi(static_cast<Eigen::Index>(i), n));
      t.add_column("abs_psi_" + std::to_string(n), std::move(col));
    }
  }
  return t;
}

struct SizeFit {
  DeformationFit fit;
  Su2Fit su2;
  std::vector<double> b;
};

SizeFit fit_size(const std::string& model, int n, double lambda, bool lambda_set, bool table_window,
                 double b_tol) {
  RunConfig c;
  c.model = model;
  c.n_sites = n;
  c.lambda = lambda;
  c.lambda_set = lambda_set;
  c.b_tol = b_tol;
  const FitWindow w = table_window ? FitWindow::table(n) : FitWindow::standard(n);
  c.kmax = w.upper + 1;
  const Prepared p = prepare(c);
  const TridiagonalData tri = run_lanczos(p.h, p.v0, c.kmax, c.b_tol, false);
  SizeFit out;
  out.b = tri.b_by_index();
  require(out.b.size() > static_cast<std::size_t>(w.upper), ErrorKind::Precondition,
          "Krylov space closed before n = " + std::to_string(w.upper) + " at N = " +
              std::to_string(n));
  out.fit = fit_q_alpha(out.b, n, w);
  out.su2 = fit_alpha_su2(out.b, n, w);
  return out;
}

std::vector<SizeFit> fit_sizes(const std::string& model, const std::vector<int>& sizes, double lambda,
                               bool lambda_set, bool table_window, double b_tol, int jobs) {
  std::vector<SizeFit> out(sizes.size());
  std::vector<std::exception_ptr> errors(sizes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < sizes.size();) {
      try {
        out[k] = fit_size(model, sizes[k], lambda, lambda_set, table_window, b_tol);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(sizes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

json regression_json(const RegressionSummary& r) {
  json pts = json::array();
  for (const auto& [x, y] : r.points) pts.push_back({x, y});
  return json{{"slope", r.slope},         {"intercept", r.intercept},
              {"q_infinity", r.q_infinity}, {"r_squared", r.r_squared},
              {"std_error", r.std_error},   {"points", pts}};
}

void emit_figure(const fs::path& dir, const std::string& stem, const CsvTable& t, PlotSpec spec,
                 std::ostream& out) {
  write_text_atomic(dir / (stem + ".csv"), t.to_string());
  write_text_atomic(dir / (stem + ".svg"), render_svg(t, spec));
  out << (dir / (stem + ".csv")).string() << "\n" << (dir / (stem + ".svg")).string() << "\n";
}

std::vector<double> abs_column(const EvolutionSeries& s, int n) {
  std::vector<double> col(s.time.size(), std::nan(""));
  if (n < s.krylov_dim())
    for (std::size_t i = 0; i < col.size(); ++i)
      col[i] = std::abs(s.psi(static_cast<Eigen::Index>(i), n));
  return col;
}

// ---------------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------------

struct FigureOptions {
  int figure = 0;
  int n_sites = 16;
  int kmax = kDefaultKmax;
  double tmax = -1.0;
  double dt = 0.01;
  double lambda = kPerturbationStrength;
  std::string sizes;
  int jobs = 1;
};

RunConfig figure_config(const FigureOptions& f, const std::string& model, const std::string& state,
                        const std::string& method, double tmax_default) {
  RunConfig c;
  c.model = model;
  c.n_sites = f.n_sites;
  c.state = state;
  c.kmax = f.kmax;
  c.method = method;
  c.tmax = f.tmax > 0 ? f.tmax : tmax_default;
  c.dt = f.dt;
  if (model == "pxp1") {
    c.lambda = f.lambda;
    c.lambda_set = true;
  }
  return c;
}

void figure_1(const fs::path& dir, std::ostream& out) {
  CsvTable t;
  std::vector<double> n;
  for (int k = 0; k <= 300; ++k) n.push_back(k * 0.01);
  t.add_column("n", n);
  const std::pair<double, const char*> curves[] = {{1.0, "b_q1"}, {0.9, "b_q0.9"}, {0.5, "b_q0.5"}};
  for (const auto& [q, name] : curves) {
    AnalyticParams p;
    p.j = 1.0;
    p.q = q;
    std::vector<double> b;
    for (double x : n) b.push_back(lanczos_suq2_continuous(x, p));
    t.add_column(name, std::move(b));
  }
  emit_figure(dir, "fig1", t, {"b_n for j = 1", "n", {"b_q1", "b_q0.9", "b_q0.5"}, {}, "n", "b_n"}, out);
}

void figure_2(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  RunConfig c = figure_config(f, "param", "Z2", "tri", 2.0 * M_PI);
  c.kmax = std::max(f.kmax, f.n_sites + 4);
  const Prepared p = prepare(c);
  const TridiagonalData tri = run_lanczos(p.h, p.v0, c.kmax, c.b_tol, false);
  const int n = f.n_sites;
  CsvTable a;
  std::vector<double> idx, num, exact;
  const auto b = tri.b_by_index();
  for (int k = 0; k <= n + 1; ++k) {
    idx.push_back(k);
    num.push_back(k < static_cast<int>(b.size()) ? b[static_cast<std::size_t>(k)] : 0.0);
    exact.push_back(std::sqrt(static_cast<double>(k) * (n + 1 - k)));
  }
  a.add_column("n", idx);
  a.add_column("b_n", num);
  a.add_column("b_n_exact", exact);
  emit_figure(dir, "fig2a", a, {"paramagnetic b_n", "n", {"b_n_exact"}, {"b_n"}, "n", "b_n"}, out);

  const auto s = evolve_tridiagonal(tri, uniform_grid(c.tmax, c.dt));
  CsvTable bt;
  std::vector<double> ce;
  for (double t : s.time) ce.push_back(n * std::sin(t) * std::sin(t));
  bt.add_column("t", s.time);
  bt.add_column("complexity", s.complexity);
  bt.add_column("complexity_exact", ce);
  emit_figure(dir, "fig2b", bt, {"paramagnetic C(t)", "t", {"complexity", "complexity_exact"}, {}, "t", "C(t)"},
              out);
}

void figure_3(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  const int n = f.n_sites;
  const int kmax = std::max(f.kmax, n + 2);
  RunConfig cz = figure_config(f, "pxp", "Z2", "tri", 0);
  cz.kmax = kmax;
  RunConfig cg = cz;
  cg.state = n == 16 ? kGenericState : "Z3";
  const Prepared pz = prepare(cz), pg = prepare(cg);
  const auto bz = run_lanczos(pz.h, pz.v0, kmax, cz.b_tol).b_by_index();
  const auto bg = run_lanczos(pg.h, pg.v0, kmax, cg.b_tol).b_by_index();
  const FitWindow w = FitWindow::table(n);
  const auto fq = fit_q_alpha(bz, n, w);
  const auto f1 = fit_alpha_su2(bz, n, w);
  CsvTable t;
  std::vector<double> idx, z, g, lq, l1;
  AnalyticParams pq;
  pq.j = n / 2.0;
  pq.q = fq.q_hat;
  pq.alpha = fq.alpha_hat;
  AnalyticParams p1 = pq;
  p1.q = 1.0;
  p1.alpha = f1.alpha_hat;
  for (int k = 0; k < kmax; ++k) {
    idx.push_back(k);
    z.push_back(k < static_cast<int>(bz.size()) ? bz[static_cast<std::size_t>(k)] : std::nan(""));
    g.push_back(k < static_cast<int>(bg.size()) ? bg[static_cast<std::size_t>(k)] : std::nan(""));
    lq.push_back(k <= n + 1 ? lanczos_suq2(k, pq) : std::nan(""));
    l1.push_back(k <= n + 1 ? lanczos_suq2(k, p1) : std::nan(""));
  }
  t.add_column("n", idx);
  t.add_column("b_z2", z);
  t.add_column("b_generic", g);
  t.add_column("b_suq2_fit", lq);
  t.add_column("b_su2_fit", l1);
  emit_figure(dir, "fig3", t, {"PXP b_n, N = " + std::to_string(n), "n", {"b_suq2_fit", "b_su2_fit"},
                                {"b_z2", "b_generic"}, "n", "b_n"},
              out);
}

void figure_4(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  const auto sizes = parse_sizes(f.sizes.empty() ? "12:2:20" : f.sizes);
  const auto fits = fit_sizes("pxp", sizes, 0.0, false, true, kDefaultBTol, f.jobs);
  std::vector<DeformationFit> df;
  for (const auto& s : fits) df.push_back(s.fit);
  const auto r = extrapolate_q(df);
  CsvTable t;
  std::vector<double> ns, inv, q, a, line;
  for (const auto& d : df) {
    ns.push_back(d.n_sites);
    inv.push_back(1.0 / d.n_sites);
    q.push_back(d.q_hat);
    a.push_back(d.alpha_hat);
    line.push_back(r.intercept + r.slope / d.n_sites);
  }
  t.add_column("N", ns);
  t.add_column("inv_N", inv);
  t.add_column("q", q);
  t.add_column("alpha", a);
  t.add_column("q_regression", line);
  emit_figure(dir, "fig4", t, {"q versus 1/N", "inv_N", {"q_regression"}, {"q"}, "1/N", "q"}, out);
  json j = header("regression");
  j["regression"] = regression_json(r);
  write_json(dir / "fig4.json", j);
  out << (dir / "fig4.json").string() << "\n";
}

void figure_5(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  RunConfig cz = figure_config(f, "pxp", "Z2", "full", 20.0);
  RunConfig cg = cz;
  cg.state = f.n_sites == 16 ? kGenericState : "Z3";
  const auto sz = evolve(prepare(cz), cz);
  const auto sg = evolve(prepare(cg), cg);
  CsvTable a;
  a.add_column("t", sz.time);
  a.add_column("fidelity_z2", sz.fidelity_abs);
  a.add_column("fidelity_generic", sg.fidelity_abs);
  emit_figure(dir, "fig5a", a, {"PXP fidelity", "t", {"fidelity_z2", "fidelity_generic"}, {}, "t", "|psi_0|"},
              out);
  CsvTable b;
  b.add_column("t", sz.time);
  std::vector<std::string> cols;
  for (int n = 0; n <= 4; ++n) {
    cols.push_back("abs_psi_" + std::to_string(n));
    b.add_column(cols.back(), abs_column(sz, n));
  }
  emit_figure(dir, "fig5b", b, {"PXP |psi_n|, Z2", "t", cols, {}, "t", "|psi_n|"}, out);
}

void figure_6(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  const auto sizes = parse_sizes(f.sizes.empty() ? "12:2:18" : f.sizes);
  const auto fits = fit_sizes("pxp1", sizes, f.lambda, true, false, kDefaultBTol, f.jobs);
  int nmax = 0;
  for (int n : sizes) nmax = std::max(nmax, n);
  CsvTable t;
  t.add_column("n", iota(static_cast<std::size_t>(nmax) + 2));
  std::vector<std::string> lines, dots;
  json j = header("perturbed_fits");
  j["lambda"] = f.lambda;
  j["fits"] = json::array();
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const int n = sizes[k];
    std::vector<double> b(static_cast<std::size_t>(nmax) + 2, std::nan("")), l = b;
    AnalyticParams p;
    p.j = n / 2.0;
    p.alpha = fits[k].su2.alpha_hat;
    for (int m = 0; m <= n + 1; ++m) {
      b[static_cast<std::size_t>(m)] = fits[k].b[static_cast<std::size_t>(m)];
      l[static_cast<std::size_t>(m)] = lanczos_su2(m, p).second;
    }
    dots.push_back("b_N" + std::to_string(n));
    lines.push_back("su2_N" + std::to_string(n));
    t.add_column(dots.back(), b);
    t.add_column(lines.back(), l);
    j["fits"].push_back({{"N", n},
                         {"alpha_su2", fits[k].su2.alpha_hat},
                         {"residual_su2", fits[k].su2.residual},
                         {"q", fits[k].fit.q_hat},
                         {"alpha", fits[k].fit.alpha_hat},
                         {"residual", fits[k].fit.residual}});
  }
  emit_figure(dir, "fig6", t, {"perturbed PXP b_n", "n", lines, dots, "n", "b_n"}, out);
  write_json(dir / "fig6.json", j);
  out << (dir / "fig6.json").string() << "\n";
}

void figure_7(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  RunConfig cz = figure_config(f, "pxp", "Z2", "tri", 20.0);
  RunConfig cg = cz;
  cg.state = f.n_sites == 16 ? kGenericState : "Z3";
  const auto tz = evolve(prepare(cz), cz);
  const auto tg = evolve(prepare(cg), cg);
  cz.method = cg.method = "full";
  const auto fz = evolve(prepare(cz), cz);
  const auto fg = evolve(prepare(cg), cg);
  CsvTable t;
  t.add_column("t", tz.time);
  t.add_column("complexity_z2", tz.complexity);
  t.add_column("complexity_generic", tg.complexity);
  t.add_column("complexity_bound_z2", complexity_with_leakage(fz));
  t.add_column("complexity_bound_generic", complexity_with_leakage(fg));
  t.add_column("leakage_z2", fz.leakage);
  t.add_column("leakage_generic", fg.leakage);
  emit_figure(dir, "fig7", t, {"PXP complexity", "t",
                                {"complexity_z2", "complexity_generic", "complexity_bound_z2",
                                 "complexity_bound_generic"},
                                {}, "t", "C(t)"},
              out);
}

void figure_8(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  RunConfig cz = figure_config(f, "pxp1", "Z2", "full", 20.0);
  RunConfig cg = cz;
  cg.state = f.n_sites == 16 ? kGenericState : "Z3";
  const auto sz = evolve(prepare(cz), cz);
  const auto sg = evolve(prepare(cg), cg);
  const auto fit = fit_size("pxp1", f.n_sites, f.lambda, true, false, kDefaultBTol);
  AnalyticParams p;
  p.j = f.n_sites / 2.0;
  p.alpha = fit.su2.alpha_hat;
  std::vector<double> exact;
  for (double t : sz.time) exact.push_back(std::abs(su2_wavefunction(0, t, p)));
  CsvTable a;
  a.add_column("t", sz.time);
  a.add_column("fidelity_z2", sz.fidelity_abs);
  a.add_column("fidelity_su2", exact);
  a.add_column("fidelity_generic", sg.fidelity_abs);
  emit_figure(dir, "fig8a", a,
              {"perturbed PXP fidelity", "t", {"fidelity_z2", "fidelity_su2", "fidelity_generic"}, {}, "t",
               "|psi_0|"},
              out);
  CsvTable b;
  b.add_column("t", sz.time);
  std::vector<std::string> cols;
  for (int n = 0; n <= 4; ++n) {
    cols.push_back("abs_psi_" + std::to_string(n));
    b.add_column(cols.back(), abs_column(sz, n));
  }
  emit_figure(dir, "fig8b", b, {"perturbed PXP |psi_n|, Z2", "t", cols, {}, "t", "|psi_n|"}, out);
}

void figure_9(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  RunConfig c0 = figure_config(f, "pxp", "Z2", "tri", 20.0);
  RunConfig c1 = figure_config(f, "pxp1", "Z2", "tri", 20.0);
  const auto s0 = evolve(prepare(c0), c0);
  const auto s1 = evolve(prepare(c1), c1);
  CsvTable t;
  t.add_column("t", s0.time);
  t.add_column("complexity_pxp", s0.complexity);
  t.add_column("complexity_pxp1", s1.complexity);
  emit_figure(dir, "fig9", t, {"Z2 complexity", "t", {"complexity_pxp", "complexity_pxp1"}, {}, "t", "C(t)"},
              out);
}

void figure_10(const FigureOptions& f, const fs::path& dir, std::ostream& out) {
  RunConfig c = figure_config(f, "param", "Z2", "tri", M_PI);
  c.kmax = std::max(f.kmax, f.n_sites + 4);
  c.dt = std::min(f.dt, 0.005);
  const auto s = evolve(prepare(c), c);
  AnalyticParams p;
  p.j = f.n_sites / 2.0;
  CsvTable a;
  a.add_column("t", s.time);
  std::vector<std::string> cols;
  for (int n = 0; n < s.krylov_dim(); ++n) {
    cols.push_back("abs_psi_" + std::to_string(n));
    a.add_column(cols.back(), abs_column(s, n));
  }
  emit_figure(dir, "fig10a", a, {"paramagnetic |psi_n|", "t", cols, {}, "t", "|psi_n|"}, out);
  std::vector<double> exact;
  for (double t : s.time) exact.push_back(su2_entropy(t, p));
  CsvTable b;
  b.add_column("t", s.time);
  b.add_column("entropy", s.entropy);
  b.add_column("entropy_exact", exact);
  emit_figure(dir, "fig10b", b, {"paramagnetic Krylov entropy", "t", {"entropy", "entropy_exact"}, {}, "t",
                                  "S_K"},
              out);
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--model", c.model, "param | pxp | pxp1 | pxp-chi")->capture_default_str();
  sub->add_option("--n", c.n_sites, "number of sites")->capture_default_str();
  sub->add_option("--state", c.state, "Z2, Z2Prime, Z3, Z4 or a bitstring")->capture_default_str();
  sub->add_option("--kmax", c.kmax, "maximum Krylov dimension")->capture_default_str();
  sub->add_option("--b-tol", c.b_tol, "relative termination threshold")->capture_default_str();
  sub->add_option("--lambda", c.lambda, "perturbation strength (pxp1 default 0.108)")
      ->each([&c](const std::string&) { c.lambda_set = true; });
  sub->add_option("--chi", c.chi, "transverse field (pxp-chi)")->capture_default_str();
  sub->add_option("--out-dir", c.out_dir, "artifact directory");
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto report_error = [&err](const std::string& kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}, {"exit_status", code}}.dump() << "\n";
    return code;
  };

  CLI::App app{"Krylov complexity of constrained spin chains", "kscars"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(generated_by()));

  RunConfig cfg;
  bool list_states = false;
  std::string constraint = "pxp";
  auto* basis_cmd = app.add_subcommand("basis", "enumerate a basis");
  basis_cmd->add_option("--n", cfg.n_sites, "number of sites")->required();
  basis_cmd->add_option("--constraint", constraint, "full | pxp")->capture_default_str();
  basis_cmd->add_flag("--list", list_states, "print one bitstring per line");

  auto* lanczos_cmd = app.add_subcommand("lanczos", "Lanczos coefficients");
  add_common(lanczos_cmd, cfg);
  lanczos_cmd->add_flag("--store-vectors", cfg.store_vectors, "keep the Krylov vectors");

  bool amplitudes = false;
  auto* evolve_cmd = app.add_subcommand("evolve", "time evolution in the Krylov basis");
  add_common(evolve_cmd, cfg);
  evolve_cmd->add_option("--tmax", cfg.tmax)->capture_default_str();
  evolve_cmd->add_option("--dt", cfg.dt)->capture_default_str();
  evolve_cmd->add_option("--method", cfg.method, "tri | full")->capture_default_str();
  evolve_cmd->add_flag("--amplitudes", amplitudes, "add |psi_n| columns");

  std::string what, grid = "0:0.01:6.283185307179586";
  AnalyticParams ap;
  auto* analytic_cmd = app.add_subcommand("analytic", "closed-form reference values");
  analytic_cmd->add_option("--what", what, "bn-su2 | bn-suq2 | psi | complexity")->required();
  analytic_cmd->add_option("--j", ap.j)->required();
  analytic_cmd->add_option("--alpha", ap.alpha)->capture_default_str();
  analytic_cmd->add_option("--q", ap.q)->capture_default_str();
  analytic_cmd->add_option("--eta0", ap.eta0)->capture_default_str();
  analytic_cmd->add_option("--delta", ap.delta)->capture_default_str();
  analytic_cmd->add_option("--grid", grid, "start:step:stop over n or t")->capture_default_str();
  analytic_cmd->add_option("--out-dir", cfg.out_dir);

  std::string window = "table";
  auto* fit_cmd = app.add_subcommand("fit", "fit (q, alpha) to Lanczos coefficients");
  add_common(fit_cmd, cfg);
  fit_cmd->add_option("--window", window, "table | standard")->capture_default_str();

  std::string sizes = "12:2:20";
  int jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "fit over several sizes and extrapolate q");
  add_common(sweep_cmd, cfg);
  sweep_cmd->add_option("--sizes", sizes, "start:step:stop or a,b,c")->capture_default_str();
  sweep_cmd->add_option("--jobs", jobs, "concurrent sizes")->capture_default_str();
  sweep_cmd->add_option("--window", window, "table | standard")->capture_default_str();

  std::string family = "pxp";
  auto* algebra_cmd = app.add_subcommand("algebra", "commutator identity residuals");
  algebra_cmd->add_option("--n", cfg.n_sites)->required();
  algebra_cmd->add_option("--family", family, "param | pxp | pxp1")->capture_default_str();
  algebra_cmd->add_option("--lambda", cfg.lambda)->each([&cfg](const std::string&) {
    cfg.lambda_set = true;
  });
  algebra_cmd->add_option("--out-dir", cfg.out_dir);

  std::string csv_path, svg_path, x_col, y_cols, scatter_cols, title, x_label, y_label;
  auto* plot_cmd = app.add_subcommand("plot", "render CSV columns as SVG");
  plot_cmd->add_option("--csv", csv_path)->required();
  plot_cmd->add_option("--x", x_col)->required();
  plot_cmd->add_option("--y", y_cols, "comma-separated line columns");
  plot_cmd->add_option("--scatter", scatter_cols, "comma-separated marker columns");
  plot_cmd->add_option("--title", title);
  plot_cmd->add_option("--x-label", x_label);
  plot_cmd->add_option("--y-label", y_label);
  plot_cmd->add_option("--output", svg_path)->required();

  FigureOptions fo;
  auto* repro_cmd = app.add_subcommand("reproduce", "data and SVG for one figure");
  repro_cmd->add_option("--figure", fo.figure, "1..10")->required()->check(CLI::Range(1, 10));
  repro_cmd->add_option("--n", fo.n_sites)->capture_default_str();
  repro_cmd->add_option("--kmax", fo.kmax)->capture_default_str();
  repro_cmd->add_option("--tmax", fo.tmax);
  repro_cmd->add_option("--dt", fo.dt)->capture_default_str();
  repro_cmd->add_option("--lambda", fo.lambda)->capture_default_str();
  repro_cmd->add_option("--sizes", fo.sizes);
  repro_cmd->add_option("--jobs", fo.jobs)->capture_default_str();
  repro_cmd->add_option("--out-dir", cfg.out_dir);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << generated_by() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kExitUsage);
  }

  try {
    const fs::path dir = output_dir(cfg);
    if (basis_cmd->parsed()) {
      const auto b = build_basis(cfg.n_sites, parse_constraint(constraint));
      out << b->size() << "\n";
      if (list_states)
        for (Mask m : b->states()) out << b->to_bitstring(m) << "\n";
    } else if (lanczos_cmd->parsed()) {
      const Prepared p = prepare(cfg);
      const auto tri = run_lanczos(p.h, p.v0, cfg.kmax, cfg.b_tol, cfg.store_vectors);
      json j = header("lanczos");
      j.update({{"model", cfg.model},
                {"N", cfg.n_sites},
                {"state", cfg.state},
                {"K", tri.krylov_dim},
                {"terminated_naturally", tri.terminated_naturally},
                {"b_tol", cfg.b_tol},
                {"kmax", cfg.kmax}});
      const std::string stem = "lanczos_" + tag(cfg);
      write_text_atomic(dir / (stem + ".csv"), lanczos_table(tri).to_string());
      write_json(dir / (stem + ".json"), j);
      if (cfg.store_vectors) {
        CsvTable v;
        for (int n = 0; n < tri.krylov_dim; ++n) {
          std::vector<double> col(static_cast<std::size_t>(tri.krylov_vectors.rows()));
          for (std::size_t i = 0; i < col.size(); ++i)
            col[i] = tri.krylov_vectors(static_cast<Eigen::Index>(i), n).real();
          v.add_column("k_" + std::to_string(n), std::move(col));
        }
        write_text_atomic(dir / (stem + "_vectors.csv"), v.to_string());
      }
      out << j.dump() << "\n";
    } else if (evolve_cmd->parsed()) {
      const Prepared p = prepare(cfg);
      const auto s = evolve(p, cfg);
      const std::string stem = "evolve_" + tag(cfg) + "_" + cfg.method;
      json j = header("evolution");
      j.update({{"model", cfg.model}, {"N", cfg.n_sites}, {"state", cfg.state}, {"K", s.krylov_dim()},
                {"method", cfg.method}, {"tmax", cfg.tmax}, {"dt", cfg.dt}, {"points", s.time.size()}});
      write_text_atomic(dir / (stem + ".csv"), series_table(s, amplitudes).to_string());
      write_json(dir / (stem + ".json"), j);
      out << j.dump() << "\n";
    } else if (analytic_cmd->parsed()) {
      const auto g = parse_range(grid);
      CsvTable t;
      if (what == "bn-su2") {
        std::vector<double> n, a, b;
        for (double x : g) {
          require(x == std::round(x), ErrorKind::Domain, "bn-su2 needs integer n");
          const auto [an, bn] = lanczos_su2(static_cast<int>(x), ap);
          n.push_back(x);
          a.push_back(an);
          b.push_back(bn);
        }
        t.add_column("n", n);
        t.add_column("a_n", a);
        t.add_column("b_n", b);
      } else if (what == "bn-suq2") {
        std::vector<double> b;
        for (double x : g)
          b.push_back(x == std::round(x) ? lanczos_suq2(static_cast<int>(x), ap)
                                         : lanczos_suq2_continuous(x, ap));
        t.add_column("n", g);
        t.add_column("b_n", b);
      } else if (what == "psi") {
        t.add_column("t", g);
        for (int n = 0; n <= ap.two_j(); ++n) {
          std::vector<double> col;
          for (double x : g) col.push_back(std::abs(su2_wavefunction(n, x, ap)));
          t.add_column("abs_psi_" + std::to_string(n), std::move(col));
        }
      } else if (what == "complexity") {
        std::vector<double> c, e;
        for (double x : g) {
          c.push_back(su2_complexity(x, ap));
          e.push_back(su2_entropy(x, ap));
        }
        t.add_column("t", g);
        t.add_column("complexity", c);
        t.add_column("entropy", e);
      } else {
        fail(ErrorKind::Configuration, "unknown --what '" + what + "'");
      }
      const fs::path p = dir / ("analytic_" + what + ".csv");
      write_text_atomic(p, t.to_string());
      out << p.string() << "\n";
    } else if (fit_cmd->parsed()) {
      require(window == "table" || window == "standard", ErrorKind::Configuration,
              "window must be 'table' or 'standard'");
      require(cfg.model == "pxp" || cfg.model == "pxp1", ErrorKind::Configuration,
              "fit supports models pxp and pxp1");
      const auto r = fit_size(cfg.model, cfg.n_sites, cfg.lambda, cfg.lambda_set, window == "table",
                              cfg.b_tol);
      json j = header("fit");
      j.update({{"model", cfg.model},
                {"N", cfg.n_sites},
                {"q", r.fit.q_hat},
                {"alpha", r.fit.alpha_hat},
                {"residual", r.fit.residual},
                {"fit_range", {r.fit.fit_range.lower, r.fit.fit_range.upper}},
                {"alpha_su2", r.su2.alpha_hat},
                {"residual_su2", r.su2.residual}});
      write_json(dir / ("fit_" + cfg.model + "_N" + std::to_string(cfg.n_sites) + ".json"), j);
      out << j.dump() << "\n";
    } else if (sweep_cmd->parsed()) {
      require(window == "table" || window == "standard", ErrorKind::Configuration,
              "window must be 'table' or 'standard'");
      require(cfg.model == "pxp" || cfg.model == "pxp1", ErrorKind::Configuration,
              "sweep supports models pxp and pxp1");
      require(jobs >= 1, ErrorKind::Configuration, "--jobs must be >= 1");
      const auto ns = parse_sizes(sizes);
      const auto fits =
          fit_sizes(cfg.model, ns, cfg.lambda, cfg.lambda_set, window == "table", cfg.b_tol, jobs);
      std::vector<DeformationFit> df;
      CsvTable t;
      std::vector<double> cn, ci, cq, ca;
      for (const auto& f : fits) {
        df.push_back(f.fit);
        cn.push_back(f.fit.n_sites);
        ci.push_back(1.0 / f.fit.n_sites);
        cq.push_back(f.fit.q_hat);
        ca.push_back(f.fit.alpha_hat);
      }
      t.add_column("N", cn);
      t.add_column("inv_N", ci);
      t.add_column("q", cq);
      t.add_column("alpha", ca);
      json j = header("sweep");
      j["model"] = cfg.model;
      j["regression"] = regression_json(extrapolate_q(df));
      write_text_atomic(dir / ("sweep_" + cfg.model + ".csv"), t.to_string());
      write_json(dir / ("sweep_" + cfg.model + ".json"), j);
      out << j.dump() << "\n";
    } else if (algebra_cmd->parsed()) {
      const AlgebraFamily fam = parse_family(family);
      double lambda = cfg.lambda;
      if (fam == AlgebraFamily::PXP1 && !cfg.lambda_set) lambda = kPerturbationStrength;
      const auto basis = build_basis(
          cfg.n_sites, fam == AlgebraFamily::Paramagnetic ? Constraint::Full
                                                          : Constraint::NoAdjacentExcitationsPeriodic);
      const auto reports = check_su2_identities(basis, fam, lambda);
      std::string csv = "identity_name,residual,relative_residual\n";
      for (const auto& r : reports)
        csv += r.identity_name + "," + format_double(r.residual_frobenius) + "," +
               format_double(r.relative_residual) + "\n";
      write_text_atomic(dir / ("algebra_" + family + "_N" + std::to_string(cfg.n_sites) + ".csv"), csv);
      out << csv;
    } else if (plot_cmd->parsed()) {
      const CsvTable t = CsvTable::parse(read_text(csv_path));
      PlotSpec spec{title, x_col, split_list(y_cols), split_list(scatter_cols), x_label, y_label};
      write_text_atomic(svg_path, render_svg(t, spec));
      out << svg_path << "\n";
    } else if (repro_cmd->parsed()) {
      require(fo.jobs >= 1, ErrorKind::Configuration, "--jobs must be >= 1");
      switch (fo.figure) {
        case 1: figure_1(dir, out); break;
        case 2: figure_2(fo, dir, out); break;
        case 3: figure_3(fo, dir, out); break;
        case 4: figure_4(fo, dir, out); break;
        case 5: figure_5(fo, dir, out); break;
        case 6: figure_6(fo, dir, out); break;
        case 7: figure_7(fo, dir, out); break;
        case 8: figure_8(fo, dir, out); break;
        case 9: figure_9(fo, dir, out); break;
        case 10: figure_10(fo, dir, out); break;
      }
    }
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.kind())), e.what(), exit_status(e.kind()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kExitInternal);
  }
  return kExitOk;
}

}  // namespace kscars
