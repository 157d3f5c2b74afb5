#include "sldg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "sldg/remap_ops.hpp"

namespace sldg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::pair<double, double> resolve(const RunConfig& cfg) {
  auto [eps, tf] = problem_defaults(cfg.problem);
  if (!std::isnan(cfg.eps)) eps = cfg.eps;
  if (!std::isnan(cfg.t_final)) tf = cfg.t_final;
  return {eps, tf};
}

template <class Field, class Stepper>
void time_loop(Field& u, double t_final, double dt, int max_steps, Stepper& stepper, RunLog* log) {
  const double mass0 = total_mass(u);
  if (log) {
    log->dt = dt;
    log->history.push_back({0.0, mass0, l2_norm(u)});
  }
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  double t = 0.0;
  int steps = 0;
  for (long s = 0; s < n_steps; ++s) {
    if (max_steps >= 0 && steps >= max_steps) break;
    const bool last = s + 1 == n_steps;
    const double h = last ? t_final - static_cast<double>(s) * dt : dt;
    stepper.step(u.coeffs(), t, h);
    ++steps;
    t = last ? t_final : static_cast<double>(s + 1) * dt;
    u.time = t;
    if (log) {
      const double m = total_mass(u);
      log->history.push_back({t, m, l2_norm(u)});
      log->max_mass_drift = std::max(log->max_mass_drift, std::abs(m - mass0));
    }
  }
  if (log) {
    log->steps = steps;
    log->t_end = t;
    log->iterations = stepper.stats().iterations;
  }
}

}  // namespace

Field1D solve_1d(const Problem1D& p, int n, const RunConfig& cfg, RunLog* log) {
  Mesh1D mesh(p.xa, p.xb, n);
  Field1D u = project(p.initial, mesh, cfg.k);
  const auto ldg = assemble_ldg_1d(mesh, cfg.k, cfg.flux, p.bc);
  RemapCache1D remap(mesh, cfg.k, p.velocity, p.bc);
  SourceProjector source;
  if (p.source)
    source = [&](double t) {
      return project([&](double x) { return p.source(x, t); }, mesh, cfg.k).coeffs();
    };
  DirkStepper stepper(tableau::by_name(cfg.tableau), p.eps, ldg, remap, cfg.solver, source);
  time_loop(u, p.t_final, cfl_to_dt(cfg.cfl, mesh, p.velocity), cfg.max_steps, stepper, log);
  return u;
}

Field2D solve_2d(const Problem2D& p, int n, const RunConfig& cfg, RunLog* log) {
  Mesh2D mesh(p.xa, p.xb, n, p.ya, p.yb, n);
  Field2D u = project(p.initial, mesh, cfg.k);
  const auto ldg = assemble_ldg_2d(mesh, cfg.k, cfg.flux, cfg.flux, p.bc);
  RemapCache2D remap(mesh, cfg.k, p.velocity, cfg.mode, p.bc);
  SourceProjector source;
  if (p.source)
    source = [&](double t) {
      return project([&](double x, double y) { return p.source(x, y, t); }, mesh, cfg.k).coeffs();
    };
  DirkStepper stepper(tableau::by_name(cfg.tableau), p.eps, ldg, remap, cfg.solver, source);
  time_loop(u, p.t_final, cfl_to_dt(cfg.cfl, mesh, p.velocity), cfg.max_steps, stepper, log);
  return u;
}

//------------------------------------------------------------------------------

bool StudyTable::all_ok() const {
  for (const auto& r : rows)
    if (!r.ok) return false;
  return true;
}

double convergence_order(double e_prev, double e_cur, double key_prev, double key_cur) {
  if (!(e_prev > 0.0) || !(e_cur > 0.0) || key_prev == key_cur) return kUnset;
  return std::log(e_prev / e_cur) / std::log(key_cur / key_prev);
}

double fitted_slope(const std::vector<double>& keys, const std::vector<double>& errs) {
  const std::size_t n = keys.size();
  if (n < 2 || errs.size() != n) return kUnset;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(keys[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? kUnset : (n * sxy - sx * sy) / den;
}

namespace {

// Errors of one run at the requested mesh/CFL; `reference` evaluates the
// comparison solution at the final time.
struct Evaluated {
  ErrorNorms errors;
  double drift = 0.0;
};

Evaluated run_and_measure(const RunConfig& cfg, int n, const std::function<double(double, double)>* ref1,
                          const std::function<double(double, double, double)>* ref2, bool mean) {
  auto [eps, tf] = resolve(cfg);
  RunLog log;
  Evaluated out;
  if (!is_problem_2d(cfg.problem)) {
    auto p = make_problem_1d(cfg.problem, eps, tf);
    auto u = solve_1d(p, n, cfg, &log);
    const auto& exact = ref1 ? *ref1 : p.exact;
    out.errors = norms(u, [&](double x) { return exact(x, log.t_end); });
    if (mean) out.errors = domain_mean(out.errors, p.xb - p.xa);
  } else {
    auto p = make_problem_2d(cfg.problem, eps, tf);
    auto u = solve_2d(p, n, cfg, &log);
    const auto& exact = ref2 ? *ref2 : p.exact;
    out.errors = norms(u, [&](double x, double y) { return exact(x, y, log.t_end); });
    if (mean) out.errors = domain_mean(out.errors, (p.xb - p.xa) * (p.yb - p.ya));
  }
  out.drift = log.max_mass_drift;
  return out;
}

// Reference solution as a space-time callable (time ignored).
struct Reference {
  std::shared_ptr<Field1D> f1;
  std::shared_ptr<Field2D> f2;
  std::function<double(double, double)> g1;
  std::function<double(double, double, double)> g2;
};

Reference make_reference(const RunConfig& cfg, int n) {
  auto [eps, tf] = resolve(cfg);
  Reference r;
  if (!is_problem_2d(cfg.problem)) {
    r.f1 = std::make_shared<Field1D>(solve_1d(make_problem_1d(cfg.problem, eps, tf), n, cfg));
    r.g1 = [f = r.f1](double x, double) { return f->eval(x); };
  } else {
    r.f2 = std::make_shared<Field2D>(solve_2d(make_problem_2d(cfg.problem, eps, tf), n, cfg));
    r.g2 = [f = r.f2](double x, double y, double) { return f->eval(x, y); };
  }
  return r;
}

bool has_exact(const RunConfig& cfg) {
  auto [eps, tf] = resolve(cfg);
  if (!is_problem_2d(cfg.problem)) return static_cast<bool>(make_problem_1d(cfg.problem, eps, tf).exact);
  return static_cast<bool>(make_problem_2d(cfg.problem, eps, tf).exact);
}

void fill_orders(StudyTable& t) {
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& a = t.rows[i - 1];
    auto& b = t.rows[i];
    if (!a.ok || !b.ok) continue;
    b.orders.l1 = convergence_order(a.errors.l1, b.errors.l1, a.key, b.key);
    b.orders.l2 = convergence_order(a.errors.l2, b.errors.l2, a.key, b.key);
    b.orders.linf = convergence_order(a.errors.linf, b.errors.linf, a.key, b.key);
  }
}

}  // namespace

StudyTable run_spatial_study(const StudyConfig& cfg) {
  for (std::size_t i = 1; i < cfg.meshes.size(); ++i)
    if (cfg.meshes[i] < cfg.meshes[i - 1]) throw std::invalid_argument("mesh list must be non-decreasing");
  Reference ref;
  const bool supplied = cfg.reference_1d || cfg.reference_2d;
  const bool exact = has_exact(cfg.run) && cfg.reference_mesh <= 0 && !supplied;
  if (cfg.reference_1d) {
    ref.g1 = [f = cfg.reference_1d](double x, double) { return f->eval(x); };
  } else if (cfg.reference_2d) {
    ref.g2 = [f = cfg.reference_2d](double x, double y, double) { return f->eval(x, y); };
  } else if (!exact) {
    if (cfg.reference_mesh <= 0) throw std::invalid_argument("problem has no exact solution: set a reference mesh");
    ref = make_reference(cfg.run, cfg.reference_mesh);
  }
  StudyTable table;
  table.key_name = "mesh";
  for (int n : cfg.meshes) {
    ResultRow row;
    row.key = n;
    const auto t0 = Clock::now();
    try {
      auto ev = run_and_measure(cfg.run, n, ref.g1 ? &ref.g1 : nullptr, ref.g2 ? &ref.g2 : nullptr, cfg.mean_norms);
      row.errors = ev.errors;
      row.mass_drift = ev.drift;
      row.ok = std::isfinite(ev.errors.l1) && std::isfinite(ev.errors.linf);
      if (!row.ok) row.message = "non-finite error on mesh " + std::to_string(n);
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = "mesh " + std::to_string(n) + ": " + e.what();
    }
    row.seconds = seconds_since(t0);
    table.rows.push_back(row);
  }
  fill_orders(table);
  return table;
}

StudyTable run_temporal_study(const StudyConfig& cfg) {
  if (cfg.meshes.empty() || cfg.cfls.empty()) throw std::invalid_argument("temporal study needs a mesh and CFL list");
  const int n = cfg.meshes.front();
  Reference ref;
  if (!std::isnan(cfg.reference_cfl)) {
    RunConfig rc = cfg.run;
    rc.cfl = cfg.reference_cfl;
    ref = make_reference(rc, n);
  } else if (!has_exact(cfg.run)) {
    throw std::invalid_argument("problem has no exact solution: set a reference CFL");
  }
  StudyTable table;
  table.key_name = "cfl";
  for (double cfl : cfg.cfls) {
    ResultRow row;
    row.key = cfl;
    RunConfig rc = cfg.run;
    rc.cfl = cfl;
    const auto t0 = Clock::now();
    try {
      auto ev = run_and_measure(rc, n, ref.g1 ? &ref.g1 : nullptr, ref.g2 ? &ref.g2 : nullptr, cfg.mean_norms);
      row.errors = ev.errors;
      row.mass_drift = ev.drift;
      row.ok = std::isfinite(ev.errors.l1);
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = "cfl " + format_number(cfl) + ": " + e.what();
    }
    row.seconds = seconds_since(t0);
    table.rows.push_back(row);
  }
  fill_orders(table);
  std::vector<std::size_t> idx(table.rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return table.rows[a].key > table.rows[b].key; });
  std::vector<double> keys, errs;
  for (std::size_t i = 0; i < idx.size() && static_cast<int>(keys.size()) < cfg.fit_points; ++i) {
    const auto& r = table.rows[idx[i]];
    if (!r.ok) continue;
    keys.push_back(r.key);
    errs.push_back(r.errors.l1);
  }
  table.slope = fitted_slope(keys, errs);
  return table;
}

//------------------------------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

void close_out(std::ofstream& f, const std::filesystem::path& path) {
  f.close();
  if (!f) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

void write_table_csv(const StudyTable& table, const std::filesystem::path& path, bool with_timing) {
  auto f = open_out(path);
  f << table.key_name << ",L1,L1_order,L2,L2_order,Linf,Linf_order,seconds\n";
  for (const auto& r : table.rows) {
    f << (table.key_name == "mesh" ? std::to_string(static_cast<long>(r.key)) : format_number(r.key)) << ','
      << (r.ok ? format_number(r.errors.l1) : "") << ',' << format_number(r.orders.l1) << ','
      << (r.ok ? format_number(r.errors.l2) : "") << ',' << format_number(r.orders.l2) << ','
      << (r.ok ? format_number(r.errors.linf) : "") << ',' << format_number(r.orders.linf) << ','
      << format_number(with_timing ? r.seconds : 0.0) << '\n';
  }
  close_out(f, path);
}

void write_table_gnuplot(const StudyTable& table, const std::filesystem::path& csv,
                         const std::filesystem::path& script, const std::string& title) {
  auto f = open_out(script);
  f << "# gnuplot script\n"
    << "set datafile separator ','\n"
    << "set logscale xy\n"
    << "set key left top autotitle columnhead\n"
    << "set title '" << title << "'\n"
    << "set xlabel '" << (table.key_name == "mesh" ? "N" : "CFL") << "'\n"
    << "set ylabel 'error'\n"
    << "set terminal pngcairo size 800,600\n"
    << "set output '" << script.stem().string() << ".png'\n"
    << "plot '" << csv.filename().string() << "' using 1:2 with linespoints title 'L1', \\\n"
    << "     '' using 1:4 with linespoints title 'L2', \\\n"
    << "     '' using 1:6 with linespoints title 'Linf'\n";
  close_out(f, script);
}

void write_history_csv(const RunLog& log, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "t,mass,l2\n";
  for (const auto& h : log.history)
    f << format_number(h.t) << ',' << format_number(h.mass) << ',' << format_number(h.l2) << '\n';
  close_out(f, path);
}

QualitativeResult run_qualitative(const QualitativeConfig& cfg, const std::filesystem::path& out_dir) {
  auto [eps, tf] = resolve(cfg.run);
  QualitativeResult res;
  const int np = std::max(2, cfg.plot_points);
  auto add = [&](const std::filesystem::path& p) { res.files.push_back(p); };

  if (!is_problem_2d(cfg.run.problem)) {
    auto p = make_problem_1d(cfg.run.problem, eps, tf);
    auto u0 = project(p.initial, Mesh1D(p.xa, p.xb, cfg.mesh), cfg.run.k);
    auto u = solve_1d(p, cfg.mesh, cfg.run, &res.log);
    const auto path = out_dir / "snapshot.csv";
    auto f = open_out(path);
    f << "x,u0,u\n";
    for (int i = 0; i < np; ++i) {
      const double x = p.xa + (p.xb - p.xa) * (i + 0.5) / np;
      f << format_number(x) << ',' << format_number(u0.eval(x)) << ',' << format_number(u.eval(x)) << '\n';
    }
    close_out(f, path);
    add(path);
    const auto gp = out_dir / "snapshot.gp";
    auto g = open_out(gp);
    g << "# gnuplot script\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 800,500\n"
      << "set output 'snapshot.png'\n"
      << "set xlabel 'x'\n"
      << "plot 'snapshot.csv' using 1:2 with lines title 't = 0', \\\n"
      << "     'snapshot.csv' using 1:3 with lines title 't = " << format_number(res.log.t_end) << "'\n";
    close_out(g, gp);
    add(gp);
  } else {
    auto p = make_problem_2d(cfg.run.problem, eps, tf);
    auto u0 = project(p.initial, Mesh2D(p.xa, p.xb, cfg.mesh, p.ya, p.yb, cfg.mesh), cfg.run.k);
    auto u = solve_2d(p, cfg.mesh, cfg.run, &res.log);
    auto grid = [&](const Field2D& fld, const std::string& name) {
      const auto path = out_dir / name;
      auto f = open_out(path);
      f << "x,y,u\n";
      for (int iy = 0; iy < np; ++iy) {
        const double y = p.ya + (p.yb - p.ya) * (iy + 0.5) / np;
        for (int ix = 0; ix < np; ++ix) {
          const double x = p.xa + (p.xb - p.xa) * (ix + 0.5) / np;
          f << format_number(x) << ',' << format_number(y) << ',' << format_number(fld.eval(x, y)) << '\n';
        }
        f << '\n';  // blank line between scan rows for gnuplot pm3d
      }
      close_out(f, path);
      add(path);
    };
    grid(u0, "snapshot_initial.csv");
    grid(u, "snapshot_final.csv");
    for (double cx : cfg.cut_x) {
      const auto path = out_dir / ("cut_x_" + format_number(cx) + ".csv");
      auto f = open_out(path);
      f << "y,u\n";
      for (int i = 0; i < np; ++i) {
        const double y = p.ya + (p.yb - p.ya) * (i + 0.5) / np;
        f << format_number(y) << ',' << format_number(u.eval(cx, y)) << '\n';
      }
      close_out(f, path);
      add(path);
    }
    for (double cy : cfg.cut_y) {
      const auto path = out_dir / ("cut_y_" + format_number(cy) + ".csv");
      auto f = open_out(path);
      f << "x,u\n";
      for (int i = 0; i < np; ++i) {
        const double x = p.xa + (p.xb - p.xa) * (i + 0.5) / np;
        f << format_number(x) << ',' << format_number(u.eval(x, cy)) << '\n';
      }
      close_out(f, path);
      add(path);
    }
    const auto gp = out_dir / "snapshot.gp";
    auto f = open_out(gp);
    f << "# gnuplot script\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 1200,500\n"
      << "set output 'snapshot.png'\n"
      << "set multiplot layout 1,2\n"
      << "set key autotitle columnhead\nset view map\nset size ratio -1\n"
      << "set title 'initial'\nsplot 'snapshot_initial.csv' using 1:2:3 with pm3d notitle\n"
      << "set title 't = " << format_number(res.log.t_end) << "'\n"
      << "splot 'snapshot_final.csv' using 1:2:3 with pm3d notitle\n"
      << "unset multiplot\n";
    close_out(f, gp);
    add(gp);
  }
  const auto hist = out_dir / "history.csv";
  write_history_csv(res.log, hist);
  add(hist);
  return res;
}

}  // namespace sldg
