#include "sldg/remap2d.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace sldg {

Curve Curve::line(Point2 p, Point2 q) {
  Curve c;
  c.a = p;
  c.b = q - p;
  c.c = {0.0, 0.0};
  return c;
}

Curve Curve::through(Point2 p0, Point2 pm, Point2 p1) {
  Curve c;
  c.a = p0;
  c.b = 4.0 * pm - 3.0 * p0 - p1;
  c.c = 2.0 * p0 + 2.0 * p1 - 4.0 * pm;
  c.quadratic = true;
  return c;
}

namespace {

constexpr double kSnap = 1e-12;       // relative to the mesh size
constexpr double kBoundaryTol = 1e-10;
constexpr double kJoinTol = 1e-9;
constexpr double kSliver = 1e-14;     // relative to the cell area

// Solutions of c tau^2 + b tau + r = 0 strictly inside (t0, t1).
void roots_in(double c, double b, double r, double t0, double t1, std::vector<double>& out) {
  const double margin = kSnap * (t1 - t0);
  auto keep = [&](double t) {
    if (t > t0 + margin && t < t1 - margin) out.push_back(t);
  };
  const double scale = std::abs(b) + std::abs(r);
  if (std::abs(c) <= 1e-14 * scale || c == 0.0) {
    if (b != 0.0) keep(-r / b);
    return;
  }
  // Near-tangent roots are kept as two cuts: the curve value at either is
  // insensitive to the root error, while the vertex may sit off the line.
  const double disc = b * b - 4.0 * c * r;
  if (disc < 0.0) return;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  keep(q / c);
  if (q != 0.0) keep(r / q);
}

double comp(Point2 p, int axis) { return axis == 0 ? p.x : p.y; }

// Grid-line crossings of curve component `axis` with lines origin + i h.
void grid_crossings(const Curve& cv, int axis, double origin, double h, std::vector<double>& out) {
  const double a = comp(cv.a, axis), b = comp(cv.b, axis), c = comp(cv.c, axis);
  double lo = std::min(comp(cv.start(), axis), comp(cv.end(), axis));
  double hi = std::max(comp(cv.start(), axis), comp(cv.end(), axis));
  if (c != 0.0) {
    double ts = -b / (2.0 * c);
    if (ts > cv.t0 && ts < cv.t1) {
      double v = comp(cv.at(ts), axis);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const long i0 = static_cast<long>(std::ceil((lo - origin) / h - kSnap));
  const long i1 = static_cast<long>(std::floor((hi - origin) / h + kSnap));
  for (long i = i0; i <= i1; ++i) {
    double g = origin + static_cast<double>(i) * h;
    roots_in(c, b, a - g, cv.t0, cv.t1, out);
  }
}

double snap_to_grid(double v, double origin, double h, double rel = kSnap) {
  double g = origin + std::nearbyint((v - origin) / h) * h;
  return std::abs(v - g) <= rel * h ? g : v;
}

Point2 snap_point(Point2 p, const Mesh2D& mesh, double rel = kSnap) {
  return {snap_to_grid(p.x, mesh.x().xa(), mesh.dx(), rel), snap_to_grid(p.y, mesh.y().xa(), mesh.dy(), rel)};
}

struct Piece {
  Curve curve;
  Point2 start, end;
  bool start_on_bd = false, end_on_bd = false;
  double s_start = 0.0, s_end = 0.0;
  bool used = false;
};

// Unwrapped cell index along one axis for a piece that does not cross any
// grid line of that axis in its interior.
long piece_cell_axis(const Curve& cv, int axis, double origin, double h) {
  double best = -1.0, best_v = 0.0;
  for (double f : {0.25, 0.5, 0.75}) {
    double v = comp(cv.at(cv.t0 + f * (cv.t1 - cv.t0)), axis);
    double r = (v - origin) / h;
    double d = std::abs(r - std::nearbyint(r));
    if (d > best) {
      best = d;
      best_v = v;
    }
  }
  if (best > kBoundaryTol) return static_cast<long>(std::floor((best_v - origin) / h));
  // The piece runs along a grid line: the region lies on its left.
  double tm = 0.5 * (cv.t0 + cv.t1);
  Point2 d = cv.deriv(tm);
  double left_normal = axis == 0 ? -d.y : d.x;
  long g = static_cast<long>(std::nearbyint((comp(cv.at(tm), axis) - origin) / h));
  return left_normal > 0.0 ? g : g - 1;
}

// Largest coordinate spread over a few samples of the curve.
double piece_extent(const Curve& cv) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    Point2 p = cv.at(cv.t0 + f * (cv.t1 - cv.t0));
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  return std::max(x_hi - x_lo, y_hi - y_lo);
}

struct Rect {
  double x0, y0, x1, y1, tol;
  double dx() const { return x1 - x0; }
  double dy() const { return y1 - y0; }
  double perimeter() const { return 2.0 * (dx() + dy()); }

  bool on_boundary(Point2 p) const {
    bool in_x = p.x >= x0 - tol && p.x <= x1 + tol;
    bool in_y = p.y >= y0 - tol && p.y <= y1 + tol;
    return (in_x && (std::abs(p.y - y0) <= tol || std::abs(p.y - y1) <= tol)) ||
           (in_y && (std::abs(p.x - x0) <= tol || std::abs(p.x - x1) <= tol));
  }

  // Counterclockwise arc-length coordinate from the lower-left corner.
  double coord(Point2 p) const {
    if (std::abs(p.y - y0) <= tol && p.x < x1 - tol) return std::max(0.0, p.x - x0);
    if (std::abs(p.x - x1) <= tol && p.y < y1 - tol) return dx() + std::max(0.0, p.y - y0);
    if (std::abs(p.y - y1) <= tol && p.x > x0 + tol) return dx() + dy() + std::max(0.0, x1 - p.x);
    return 2.0 * dx() + dy() + std::clamp(y1 - p.y, 0.0, dy());
  }

  Point2 corner(int i) const {
    switch (i) {
      case 0: return {x0, y0};
      case 1: return {x1, y0};
      case 2: return {x1, y1};
      default: return {x0, y1};
    }
  }
  double corner_coord(int i) const {
    switch (i) {
      case 0: return 0.0;
      case 1: return dx();
      case 2: return dx() + dy();
      default: return 2.0 * dx() + dy();
    }
  }

  double ccw_distance(double from, double to) const {
    const double per = perimeter();
    double d = std::fmod(to - from + per, per);
    if (d < 0.0) d += per;
    if (d > per - tol) d = 0.0;
    return d;
  }

  Point2 point_at(double s) const {
    if (s <= dx()) return {x0 + s, y0};
    if (s <= dx() + dy()) return {x1, y0 + (s - dx())};
    if (s <= 2.0 * dx() + dy()) return {x1 - (s - dx() - dy()), y1};
    return {x0, y1 - (s - 2.0 * dx() - dy())};
  }

  // Straight segments along the boundary from p (coord sp) to q (coord sq).
  // Points up to tol off the boundary are first connected to their
  // projections, so the Green integral sees no slanted shortcut.
  void walk(Point2 p, double sp, Point2 q, double sq, std::vector<Curve>& out) const {
    auto link = [&out](Point2 a, Point2 b) {
      if (a.x != b.x || a.y != b.y) out.push_back(Curve::line(a, b));
    };
    const double d = ccw_distance(sp, sq);
    if (d <= tol) {
      link(p, q);
      return;
    }
    std::vector<std::pair<double, int>> stops;
    for (int i = 0; i < 4; ++i) {
      double dc = ccw_distance(sp, corner_coord(i));
      if (dc > 0.0 && dc < d) stops.emplace_back(dc, i);  // a corner just past p or q still matters
    }
    std::sort(stops.begin(), stops.end());
    Point2 cur = point_at(sp);
    link(p, cur);
    for (auto [dc, i] : stops) {
      link(cur, corner(i));
      cur = corner(i);
    }
    const Point2 qs = point_at(sq);
    link(cur, qs);
    link(qs, q);
  }
};

// Winding number of a closed curve chain about p (half-open crossing rule).
int winding_number(const std::vector<Curve>& loop, Point2 p) {
  int wn = 0;
  for (const auto& cv : loop) {
    std::vector<double> cuts{cv.t0};
    if (cv.c.y != 0.0) {
      double ts = -cv.b.y / (2.0 * cv.c.y);
      if (ts > cv.t0 && ts < cv.t1) cuts.push_back(ts);
    }
    cuts.push_back(cv.t1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double ta = cuts[i], tb = cuts[i + 1];
      double ya = cv.at(ta).y, yb = cv.at(tb).y;
      int dir = 0;
      if (ya <= p.y && p.y < yb) dir = 1;
      else if (yb <= p.y && p.y < ya) dir = -1;
      if (dir == 0) continue;
      // Monotone in y on [ta, tb]: bisect for the crossing.
      double lo = ta, hi = tb;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double ym = cv.at(mid).y;
        if ((ym < p.y) == (dir > 0)) lo = mid;
        else hi = mid;
      }
      if (cv.at(0.5 * (lo + hi)).x > p.x) wn += dir;
    }
  }
  return wn;
}

std::vector<std::array<int, 2>> monomials(int k) {
  std::vector<std::array<int, 2>> out;
  for (int m = 0; m < Basis2D(k).dim(); ++m) out.push_back(Basis2D::degrees(m));
  return out;
}

bool segments_cross(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  auto orient = [](Point2 a, Point2 b, Point2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); };
  double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

std::vector<Curve> UpstreamCell2D::boundary() const {
  std::vector<Curve> out;
  if (mode == RemapMode::QC) {
    for (int e = 0; e < 4; ++e) out.push_back(Curve::through(feet[e], feet[4 + e], feet[(e + 1) % 4]));
  } else {
    for (int e = 0; e < 4; ++e) out.push_back(Curve::line(feet[e], feet[(e + 1) % 4]));
  }
  return out;
}

double OverlapRegion::area() const { return region_moments(*this, 0).c[0][0]; }

double upstream_area(const UpstreamCell2D& up) {
  const auto& q = gauss_rule(3);
  double area = 0.0;
  for (const auto& cv : up.boundary())
    for (std::size_t i = 0; i < q.size(); ++i) {
      double t = cv.t0 + (q.nodes[i] + 0.5) * (cv.t1 - cv.t0);
      Point2 p = cv.at(t), d = cv.deriv(t);
      area += q.weights[i] * (cv.t1 - cv.t0) * 0.5 * (p.x * d.y - p.y * d.x);
    }
  return area;
}

UpstreamCell2D build_upstream_2d(const Mesh2D& mesh, int j, double t_end, double t_start, const VelocityField2D& v,
                                 int k, RemapMode mode, int substeps, Boundary bc) {
  Basis2D basis(k);
  UpstreamCell2D up;
  up.cell = j;
  up.k = k;
  up.mode = mode;
  up.t_end = t_end;
  up.t_start = t_start;

  const VertexPattern pattern =
      (mode == RemapMode::Quad && k <= 1) ? VertexPattern::Corners : VertexPattern::Nine;
  for (const auto& tp : trace_cell_vertices(mesh, j, t_end, t_start, v, pattern, substeps)) {
    up.sources.push_back(tp.end);
    up.feet.push_back(tp.foot);
  }

  auto compute_bbox = [&] {
    std::array<double, 4> bb{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& cv : up.boundary()) {
      std::vector<double> ts{cv.t0, cv.t1};
      if (cv.c.x != 0.0) ts.push_back(std::clamp(-cv.b.x / (2.0 * cv.c.x), cv.t0, cv.t1));
      if (cv.c.y != 0.0) ts.push_back(std::clamp(-cv.b.y / (2.0 * cv.c.y), cv.t0, cv.t1));
      for (double t : ts) {
        Point2 p = cv.at(t);
        bb[0] = std::min(bb[0], p.x);
        bb[1] = std::max(bb[1], p.x);
        bb[2] = std::min(bb[2], p.y);
        bb[3] = std::max(bb[3], p.y);
      }
    }
    return bb;
  };

  up.bbox = compute_bbox();
  if (bc == Boundary::Periodic) {
    const double cx = 0.5 * (up.bbox[0] + up.bbox[1]), cy = 0.5 * (up.bbox[2] + up.bbox[3]);
    const double lx = mesh.x().length(), ly = mesh.y().length();
    up.shift = {-std::floor((cx - mesh.x().xa()) / lx) * lx, -std::floor((cy - mesh.y().xa()) / ly) * ly};
    for (auto& f : up.feet) f = f + up.shift;
  }
  // Feet within the join tolerance of a grid line are moved onto it, so no
  // split piece can end at a point that is neither on a line nor joinable.
  for (auto& f : up.feet) f = snap_point(f, mesh, kJoinTol);
  up.bbox = compute_bbox();

  // Reject tangled upstream cells.
  const auto& f = up.feet;
  if (segments_cross(f[0], f[1], f[2], f[3]) || segments_cross(f[1], f[2], f[3], f[0]))
    throw GeometryError("upstream cell " + std::to_string(j) + " is self-intersecting");
  if (!(upstream_area(up) > 0.0))
    throw GeometryError("upstream cell " + std::to_string(j) + " has non-positive area");

  Point2 centroid{0.0, 0.0};
  for (int i = 0; i < 4; ++i) centroid = centroid + 0.25 * f[i];
  up.origin = centroid;
  up.sx = mesh.dx();
  up.sy = mesh.dy();

  const auto mono = monomials(k);
  const int npts = static_cast<int>(up.feet.size());
  const int dim = basis.dim();
  Eigen::MatrixXd a(npts, dim), rhs(npts, dim);
  const Point2 c = mesh.center(j);
  for (int i = 0; i < npts; ++i) {
    double s = (up.feet[i].x - up.origin.x) / up.sx;
    double t = (up.feet[i].y - up.origin.y) / up.sy;
    double xi = (up.sources[i].x - c.x) / mesh.dx();
    double eta = (up.sources[i].y - c.y) / mesh.dy();
    for (int p = 0; p < dim; ++p) {
      a(i, p) = std::pow(s, mono[p][0]) * std::pow(t, mono[p][1]);
      rhs(i, p) = basis.value(p, xi, eta);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < dim) throw GeometryError("upstream cell " + std::to_string(j) + ": degenerate feet for the fit");
  Eigen::MatrixXd sol = qr.solve(rhs);
  up.ls_residual = (a * sol - rhs).cwiseAbs().maxCoeff();
  up.tests.assign(dim, Poly2{});
  for (int m = 0; m < dim; ++m)
    for (int p = 0; p < dim; ++p) up.tests[m].c[mono[p][0]][mono[p][1]] = sol(p, m);
  return up;
}

std::vector<OverlapRegion> clip_upstream(const UpstreamCell2D& up, const Mesh2D& mesh, Boundary bc) {
  const double xa = mesh.x().xa(), ya = mesh.y().xa();
  const double dx = mesh.dx(), dy = mesh.dy();
  const double h = std::min(dx, dy);

  const long ix_lo = static_cast<long>(std::floor((up.bbox[0] - xa) / dx));
  const long ix_hi = static_cast<long>(std::floor((up.bbox[1] - xa) / dx));
  const long iy_lo = static_cast<long>(std::floor((up.bbox[2] - ya) / dy));
  const long iy_hi = static_cast<long>(std::floor((up.bbox[3] - ya) / dy));
  if (ix_hi - ix_lo >= 4L * mesh.nx() || iy_hi - iy_lo >= 4L * mesh.ny())
    throw GeometryError("upstream cell " + std::to_string(up.cell) + " spans more than the domain");

  // Split every boundary curve at grid-line crossings and bin the pieces.
  using Key = std::pair<long, long>;  // (iy, ix), unwrapped
  std::map<Key, std::vector<Piece>> bins;
  for (const auto& cv : up.boundary()) {
    std::vector<double> cuts;
    grid_crossings(cv, 0, xa, dx, cuts);
    grid_crossings(cv, 1, ya, dy, cuts);
    cuts.push_back(cv.t0);
    cuts.push_back(cv.t1);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> uniq;
    for (double t : cuts)
      if (uniq.empty() || t - uniq.back() > kSnap) uniq.push_back(t);
    uniq.back() = cv.t1;
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
      Piece pc;
      pc.curve = cv.sub(uniq[i], uniq[i + 1]);
      pc.start = snap_point(pc.curve.start(), mesh);
      pc.end = snap_point(pc.curve.end(), mesh);
      if (piece_extent(pc.curve) <= kJoinTol * h) continue;  // overshoot of a tangency
      long cx = piece_cell_axis(pc.curve, 0, xa, dx);
      long cy = piece_cell_axis(pc.curve, 1, ya, dy);
      bins[{cy, cx}].push_back(pc);
    }
  }

  std::vector<OverlapRegion> out;
  auto emit = [&](long cx, long cy, std::vector<Curve> loop) {
    if (bc == Boundary::Zero && (cx < 0 || cx >= mesh.nx() || cy < 0 || cy >= mesh.ny())) return;
    OverlapRegion r;
    r.ix = static_cast<int>(cx);
    r.iy = static_cast<int>(cy);
    r.background = mesh.index(mesh.x().wrap(cx), mesh.y().wrap(cy));
    r.x0 = xa + static_cast<double>(cx) * dx;
    r.y0 = ya + static_cast<double>(cy) * dy;
    r.dx = dx;
    r.dy = dy;
    r.boundary = std::move(loop);
    double area = r.area();
    if (area < -kBoundaryTol * mesh.cell_area())
      throw GeometryError("negative overlap area for upstream cell " + std::to_string(up.cell));
    if (area <= kSliver * mesh.cell_area()) return;
    out.push_back(std::move(r));
  };

  for (auto& [key, pieces] : bins) {
    const auto [cy, cx] = key;
    // Endpoints of a piece binned by the along-line rule may sit up to ~7x
    // kBoundaryTol off the line, so membership uses the looser join tolerance.
    Rect rect{xa + cx * dx, ya + cy * dy, xa + (cx + 1) * dx, ya + (cy + 1) * dy, kJoinTol * h};
    for (auto& pc : pieces) {
      pc.start_on_bd = rect.on_boundary(pc.start);
      pc.end_on_bd = rect.on_boundary(pc.end);
      if (pc.start_on_bd) pc.s_start = rect.coord(pc.start);
      if (pc.end_on_bd) pc.s_end = rect.coord(pc.end);
    }
    const double join = kJoinTol * h;
    for (std::size_t i0 = 0; i0 < pieces.size(); ++i0) {
      if (pieces[i0].used) continue;
      std::vector<Curve> loop;
      std::size_t cur = i0;
      for (std::size_t guard = 0;; ++guard) {
        if (guard > 4 * pieces.size() + 8)
          throw GeometryError("overlap chaining did not close for upstream cell " + std::to_string(up.cell));
        pieces[cur].used = true;
        loop.push_back(pieces[cur].curve);
        const Piece& pc = pieces[cur];
        // Direct join first: a piece that starts where this one ends.
        std::size_t next = pieces.size();
        double best = join;
        for (std::size_t c = 0; c < pieces.size(); ++c) {
          if (pieces[c].used && c != i0) continue;
          Point2 d = pieces[c].start - pc.end;
          double dist = std::hypot(d.x, d.y);
          if (dist < best || (dist <= best && c == i0)) {
            best = dist;
            next = c;
          }
        }
        if (next == pieces.size()) {
          if (!pc.end_on_bd)
            throw GeometryError("overlap chaining broke inside a cell for upstream cell " + std::to_string(up.cell));
          double best_d = std::numeric_limits<double>::infinity();
          for (std::size_t c = 0; c < pieces.size(); ++c) {
            if (!pieces[c].start_on_bd || (pieces[c].used && c != i0)) continue;
            double d = rect.ccw_distance(pc.s_end, pieces[c].s_start);
            // Prefer closing the loop on ties.
            if (d < best_d - rect.tol || (d <= best_d + rect.tol && c == i0)) {
              best_d = d;
              next = c;
            }
          }
          if (next == pieces.size())
            throw GeometryError("overlap chaining found no re-entry for upstream cell " + std::to_string(up.cell));
          rect.walk(pc.end, pc.s_end, pieces[next].start, pieces[next].s_start, loop);
        } else if (best > 0.0) {
          // Bridge the gap; skipping it drops ~gap * width from the Green integral.
          loop.push_back(Curve::line(pc.end, pieces[next].start));
        }
        if (next == i0) break;
        cur = next;
      }
      emit(cx, cy, std::move(loop));
    }
  }

  // Background cells entirely covered by the upstream cell.
  const auto outer = up.boundary();
  for (long cy = iy_lo; cy <= iy_hi; ++cy)
    for (long cx = ix_lo; cx <= ix_hi; ++cx) {
      if (bins.count({cy, cx})) continue;
      Point2 centre{xa + (cx + 0.5) * dx, ya + (cy + 0.5) * dy};
      if (winding_number(outer, centre) == 0) continue;
      Rect rect{xa + cx * dx, ya + cy * dy, xa + (cx + 1) * dx, ya + (cy + 1) * dy, 0.0};
      std::vector<Curve> loop;
      for (int i = 0; i < 4; ++i) loop.push_back(Curve::line(rect.corner(i), rect.corner((i + 1) % 4)));
      emit(cx, cy, std::move(loop));
    }

  std::stable_sort(out.begin(), out.end(), [](const OverlapRegion& a, const OverlapRegion& b) {
    return std::tie(a.background, a.iy, a.ix) < std::tie(b.background, b.iy, b.ix);
  });
  return out;
}

Poly2 region_moments(const OverlapRegion& region, int max_degree) {
  if (max_degree < 0 || max_degree > Poly2::kMaxDeg) throw std::invalid_argument("region_moments: degree out of range");
  Poly2 mom;
  const int n_line = max_degree / 2 + 2;
  const int n_quad = max_degree + 4;
  const double xc = region.xc(), yc = region.yc();
  std::array<double, Poly2::kMaxDeg + 2> anchor{};
  for (int a = 0; a <= max_degree; ++a) anchor[a] = std::pow(-0.5, a + 1) / (a + 1);
  for (const auto& cv : region.boundary) {
    const auto& q = gauss_rule(cv.quadratic ? n_quad : n_line);
    const double len = cv.t1 - cv.t0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      double t = cv.t0 + (q.nodes[i] + 0.5) * len;
      Point2 p = cv.at(t);
      double ydot = cv.deriv(t).y;
      if (ydot == 0.0) continue;
      double w = q.weights[i] * len * ydot * region.dx;
      double xi = (p.x - xc) / region.dx, eta = (p.y - yc) / region.dy;
      double xp = xi;  // xi^{a+1}
      for (int a = 0; a <= max_degree; ++a) {
        double qa = xp / (a + 1) - anchor[a];
        double ep = 1.0;
        for (int b = 0; a + b <= max_degree; ++b) {
          mom.c[a][b] += w * qa * ep;
          ep *= eta;
        }
        xp *= xi;
      }
    }
  }
  return mom;
}

double green_integral(const OverlapRegion& region, const Poly2& integrand) {
  const int d = integrand.degree();
  if (d < 0) return 0.0;
  const Poly2 mom = region_moments(region, d);
  double s = 0.0;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b) s += integrand.c[a][b] * mom.c[a][b];
  return s;
}

std::vector<double> region_weights(const UpstreamCell2D& up, const OverlapRegion& region) {
  const int dim = Basis2D(up.k).dim();
  const Poly2 mom = region_moments(region, 2 * up.k);
  const double ds = (region.xc() - up.origin.x) / up.sx;
  const double dt = (region.yc() - up.origin.y) / up.sy;
  const double rx = region.dx / up.sx, ry = region.dy / up.sy;
  std::vector<double> w(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int m = 0; m < dim; ++m) {
    // Psi*_m in background-local coordinates: s = ds + rx xi, t = dt + ry eta.
    Poly2 shifted = up.tests[m].translated(ds, dt);
    Poly2 tm;
    for (int a = 0; a <= Poly2::kMaxDeg; ++a)
      for (int b = 0; b <= Poly2::kMaxDeg; ++b) tm.c[a][b] = shifted.c[a][b] * std::pow(rx, a) * std::pow(ry, b);
    for (int n = 0; n < dim; ++n) {
      Poly2 integrand = tm * basis_poly(n);
      double s = 0.0;
      for (int a = 0; a <= 2 * up.k; ++a)
        for (int b = 0; a + b <= 2 * up.k; ++b) s += integrand.c[a][b] * mom.c[a][b];
      w[m * dim + n] = s;
    }
  }
  return w;
}

std::vector<double> remap_term1_2d(const Field2D& u, const UpstreamCell2D& up, Boundary bc) {
  if (u.degree() != up.k) throw std::invalid_argument("remap_term1_2d: field and upstream degree differ");
  const int dim = u.dim();
  std::vector<double> loads(dim, 0.0);
  for (const auto& r : clip_upstream(up, u.mesh(), bc)) {
    auto w = region_weights(up, r);
    auto c = u.cell(r.background);
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) loads[m] += w[m * dim + n] * c[n];
  }
  return loads;
}

}  // namespace sldg
