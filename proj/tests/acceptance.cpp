// Acceptance runner. `sldg_acceptance` runs every criterion; `sldg_acceptance N`
// runs criterion N only. One PASS/FAIL line per criterion, details indented.
// Exit status is 0 only when every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sldg/bench.hpp"
#include "sldg/problems.hpp"
#include "sldg/timeint.hpp"
#include "sldg/verify.hpp"

using namespace sldg;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void require(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  o.details.push_back((ok ? "ok   " : "FAIL ") + what);
}

std::string table_line(const StudyTable& t) {
  std::string s;
  for (const auto& r : t.rows)
    s += fmt(" %g:L1=%.3e/L2=%.3e(%.2f)", r.key, r.errors.l1, r.errors.l2, r.orders.l2);
  return s;
}

//------------------------------------------------------------------------------

// Spatial study on 1D problem `id`, meshes 10..160, k = 0..2.
Outcome spatial_1d(const char* id, double order_tol, double k2_min_order, double l1_target) {
  Outcome o;
  for (int k = 0; k <= 2; ++k) {
    StudyConfig cfg;
    cfg.run.problem = id;
    cfg.run.k = k;
    cfg.run.tableau = "dirk4";
    cfg.run.cfl = 1.0;
    cfg.meshes = {10, 20, 40, 80, 160};
    cfg.mean_norms = true;
    auto t = run_spatial_study(cfg);
    o.details.push_back(fmt("k=%d", k) + table_line(t));
    require(o, t.all_ok(), fmt("k=%d all runs converged", k));
    const double last = t.rows.back().orders.l2;
    if (k == 2 && k2_min_order > 0.0)
      require(o, last >= k2_min_order, fmt("k=2 last L2 order %.3f >= %.2f", last, k2_min_order));
    else
      require(o, std::abs(last - (k + 1)) <= order_tol,
              fmt("k=%d last L2 order %.3f within %.2f of %d", k, last, order_tol, k + 1));
    if (k == 2 && l1_target > 0.0) {
      const double e = t.rows.back().errors.l1;
      require(o, e <= 3.0 * l1_target && e >= l1_target / 3.0,
              fmt("k=2 N=160 mean L1 %.3e within factor 3 of %.2e", e, l1_target));
    }
  }
  return o;
}

Outcome criterion1() { return spatial_1d("advect1d", 0.25, 0.0, 5.10e-8); }

Outcome criterion2() { return spatial_1d("varcoef1d", 0.3, 2.75, 0.0); }

Outcome criterion3() {
  Outcome o;
  std::vector<double> cfls;
  for (int i = 0; i <= 11; ++i) cfls.push_back(1.1 + i);
  const std::pair<const char*, int> tabs[] = {{"dirk2", 2}, {"dirk3", 3}, {"dirk4", 4}};
  for (const char* id : {"advect1d", "varcoef1d"}) {
    for (auto [tab, p] : tabs) {
      StudyConfig cfg;
      cfg.run.problem = id;
      cfg.run.k = 2;
      cfg.run.tableau = tab;
      cfg.meshes = {200};
      cfg.cfls = cfls;
      cfg.fit_points = 4;
      cfg.mean_norms = true;
      auto t = run_temporal_study(cfg);
      require(o, t.all_ok(), fmt("%s %s all runs converged", id, tab));
      require(o, std::abs(t.slope - p) <= 0.3,
              fmt("%s %s fitted L1 slope %.3f within 0.3 of %d", id, tab, t.slope, p));
    }
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int k = 1; k <= 2; ++k) {
    StudyConfig cfg;
    cfg.run.problem = "advect2d";
    cfg.run.k = k;
    cfg.run.tableau = "dirk4";
    cfg.run.cfl = 1.0;
    cfg.meshes = {20, 40, 80};
    cfg.mean_norms = true;
    auto t = run_spatial_study(cfg);
    o.details.push_back(fmt("k=%d", k) + table_line(t));
    require(o, t.all_ok(), fmt("k=%d all runs converged", k));
    const double last = t.rows.back().orders.l2;
    require(o, std::abs(last - (k + 1)) <= 0.25, fmt("k=%d last L2 order %.3f within 0.25 of %d", k, last, k + 1));
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  StudyConfig cfg;
  cfg.run.problem = "rotation2d";
  cfg.run.k = 2;
  cfg.run.tableau = "dirk4";
  cfg.run.cfl = 10.0;
  cfg.meshes = {20, 40, 60};
  cfg.mean_norms = true;
  auto t = run_spatial_study(cfg);
  o.details.push_back("k=2" + table_line(t));
  bool bounded = t.all_ok();
  for (const auto& r : t.rows) bounded = bounded && r.errors.linf < 1.0;
  require(o, bounded, "all runs converged with bounded errors");
  const double last = t.rows.back().orders.l1;
  require(o, std::abs(last - 3.0) <= 0.4, fmt("last L1 order %.3f within 0.4 of 3", last));
  return o;
}

Outcome criterion6() {
  Outcome o;
  RunConfig run;
  run.problem = "swirl2d";
  run.k = 2;
  run.tableau = "dirk4";
  run.cfl = 1.0;
  run.mode = RemapMode::QC;
  auto [eps, t_final] = problem_defaults("swirl2d");
  auto p = make_problem_2d("swirl2d", eps, t_final);
  // One QC reference shared by both studies.
  auto ref = std::make_shared<const Field2D>(solve_2d(p, 150, run));

  StudyTable tables[2];
  const RemapMode modes[2] = {RemapMode::Quad, RemapMode::QC};
  for (int i = 0; i < 2; ++i) {
    StudyConfig cfg;
    cfg.run = run;
    cfg.run.mode = modes[i];
    cfg.meshes = {20, 60, 100};
    cfg.reference_2d = ref;
    cfg.mean_norms = true;
    tables[i] = run_spatial_study(cfg);
    o.details.push_back((i == 0 ? "quad" : "qc  ") + table_line(tables[i]));
    require(o, tables[i].all_ok(), fmt("%s all runs converged", i == 0 ? "quad" : "qc"));
  }
  const auto& q = tables[0].rows.back();
  const auto& c = tables[1].rows.back();
  require(o, c.errors.l1 <= q.errors.l1 && c.errors.l2 <= q.errors.l2 && c.errors.linf <= q.errors.linf,
          fmt("QC errors <= quad errors at 100^2 (L1 %.3e vs %.3e)", c.errors.l1, q.errors.l1));
  for (int i = 0; i < 2; ++i) {
    const auto& r = tables[i].rows.back();
    require(o, r.orders.l1 >= 3.0 && r.orders.l2 >= 3.0,
            fmt("%s finest-pair orders L1 %.3f, L2 %.3f >= 3", i == 0 ? "quad" : "qc", r.orders.l1, r.orders.l2));
  }
  // Soft: reported, does not gate.
  const bool soft = q.errors.l1 <= 5.0 * 3.00e-7 && q.errors.l1 >= 3.00e-7 / 5.0 && c.errors.l1 <= 5.0 * 2.48e-7 &&
                    c.errors.l1 >= 2.48e-7 / 5.0;
  o.details.push_back(fmt("soft %s 100^2 mean L1 quad %.3e (3.00e-07), qc %.3e (2.48e-07) within factor 5",
                          soft ? "ok  " : "miss", q.errors.l1, c.errors.l1));
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto drift = [](double tol) {
    RunConfig run;
    run.problem = "advect2d";
    run.k = 0;
    run.tableau = "dirk4";
    run.cfl = 10.0;
    run.t_final = 1e6;  // stop by step count
    run.max_steps = 100;
    run.solver.tol = tol;
    auto [eps, t] = problem_defaults("advect2d");
    auto p = make_problem_2d("advect2d", eps, run.t_final);
    RunLog log;
    solve_2d(p, 40, run, &log);
    return std::pair{log.max_mass_drift, log.steps};
  };
  auto [d12, steps] = drift(1e-12);
  auto [d10, s10] = drift(1e-10);
  auto [d14, s14] = drift(1e-14);
  require(o, steps == 100 && s10 == 100 && s14 == 100, "100 steps taken at every tolerance");
  require(o, d12 <= 1e-9, fmt("tau=1e-12 max mass drift %.3e <= 1e-9", d12));
  require(o, d10 > d14, fmt("drift(1e-10) %.3e > drift(1e-14) %.3e", d10, d14));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const int n = 40, k = 2;
  auto p = make_problem_1d("advect1d", 0.1, 1.0);
  Mesh1D mesh(p.xa, p.xb, n);
  auto op = assemble_ldg_1d(mesh, k);
  RemapCache1D cache(mesh, k, p.velocity);
  DirkStepper stepper(tableau::backward_euler(), p.eps, op, cache, LinearSolverConfig{});
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(op.size());
  for (double& c : u) c = dist(rng);
  const double dt = cfl_to_dt(5.0, mesh, p.velocity);
  double prev = std::sqrt(mass_dot(op.mass, u, u)), worst = -1e300;
  bool monotone = true;
  for (int s = 0; s < 100; ++s) {
    stepper.step(u, s * dt, dt);
    const double cur = std::sqrt(mass_dot(op.mass, u, u));
    worst = std::max(worst, cur - prev);
    monotone = monotone && cur <= prev + 1e-12;
    prev = cur;
  }
  require(o, monotone, fmt("||u^{n+1}|| <= ||u^n|| + 1e-12 over 100 steps (max increase %.3e)", worst));
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto t0 = Clock::now();
  auto checks = verify::run_all();
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  int passed = 0;
  for (const auto& c : checks) {
    if (c.passed)
      ++passed;
    else
      o.details.push_back(fmt("FAIL %s/%s value %.3e tol %.3e", c.suite.c_str(), c.name.c_str(), c.value, c.tolerance));
  }
  require(o, passed == static_cast<int>(checks.size()), fmt("%d/%zu property checks passed", passed, checks.size()));
  require(o, secs < 60.0, fmt("suite runtime %.1f s < 60 s", secs));
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"spatial order, 1D constant coefficient", criterion1},
      {"spatial order, 1D variable coefficient", criterion2},
      {"temporal orders of DIRK2/3/4", criterion3},
      {"spatial order, 2D constant coefficient", criterion4},
      {"large-CFL 2D rotation", criterion5},
      {"QC versus quadrilateral upstream cells", criterion6},
      {"mass conservation versus GMRES tolerance", criterion7},
      {"L2 stability of backward Euler", criterion8},
      {"property suites", criterion9},
  };
  std::vector<int> selected;
  if (argc > 1) {
    const int c = std::atoi(argv[1]);
    if (c < 1 || c > static_cast<int>(all.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], all.size());
      return 2;
    }
    selected.push_back(c);
  } else {
    for (int i = 1; i <= static_cast<int>(all.size()); ++i) selected.push_back(i);
  }

  bool ok = true;
  for (int c : selected) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = all[c - 1].run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.details.push_back(std::string("FAIL exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c, all[c - 1].title, secs);
    for (const auto& d : out.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    ok = ok && out.pass;
  }
  return ok ? 0 : 1;
}
