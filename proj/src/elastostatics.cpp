#include "ehencky/elastostatics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ehencky/errors.hpp"

namespace ehencky {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Columns are the reference (or deformed) edge vectors x1 - x0 and x2 - x0.
Mat2 edge_matrix(const std::vector<Vec2>& pts, const std::array<int, 3>& tri) {
  const Vec2& a = pts[tri[0]];
  const Vec2& b = pts[tri[1]];
  const Vec2& c = pts[tri[2]];
  return {b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y};
}

// Shape-function gradients (rows of Dm^{-1}, and minus their sum for node 0).
std::array<std::array<double, 2>, 3> shape_gradients(const Mat2& dm_inv) {
  return {{{-dm_inv.a11 - dm_inv.a21, -dm_inv.a12 - dm_inv.a22},
           {dm_inv.a11, dm_inv.a12},
           {dm_inv.a21, dm_inv.a22}}};
}

std::vector<char> dirichlet_mask(const MeshState& m) {
  std::vector<char> mask(m.nodes.size(), 0);
  for (int i : m.boundary_nodes) {
    mask[static_cast<std::size_t>(i)] = 1;
  }
  return mask;
}

double dot(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i].x * b[i].x + a[i].y * b[i].y;
  }
  return s;
}

}  // namespace

MeshState build_rect_mesh(int nx, int ny, double width, double height) {
  if (nx < 1 || ny < 1 || !(width > 0.0) || !(height > 0.0)) {
    throw DomainError("build_rect_mesh: need nx, ny >= 1 and positive extents");
  }
  MeshState m;
  const int stride = nx + 1;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.nodes.push_back({width * i / nx, height * j / ny});
      if (i == 0 || j == 0 || i == nx || j == ny) {
        m.boundary_nodes.push_back(j * stride + i);
      }
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = j * stride + i;
      const int n10 = n00 + 1;
      const int n01 = n00 + stride;
      const int n11 = n01 + 1;
      m.triangles.push_back({n00, n10, n11});
      m.triangles.push_back({n00, n11, n01});
    }
  }
  m.deformed = m.nodes;
  return m;
}

double reference_area(const MeshState& m, std::size_t t) {
  return 0.5 * edge_matrix(m.nodes, m.triangles[t]).det();
}

Mat2 element_gradient(const MeshState& m, std::size_t t) {
  const Mat2 dm = edge_matrix(m.nodes, m.triangles[t]);
  const Mat2 ds = edge_matrix(m.deformed, m.triangles[t]);
  return ds * inverse(dm);
}

double min_element_det(const MeshState& m) {
  double out = kInf;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    out = std::min(out, element_gradient(m, t).det());
  }
  return out;
}

double total_energy(const MaterialParams& p, const MeshState& m) {
  double sum = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const EnergyValue w = energy(p, element_gradient(m, t));
    if (!w.is_finite()) {
      return kInf;
    }
    sum += reference_area(m, t) * w.value;
  }
  return sum;
}

std::vector<Vec2> energy_gradient(const MaterialParams& p, const MeshState& m) {
  std::vector<Vec2> g(m.nodes.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    const Mat2 dm_inv = inverse(edge_matrix(m.nodes, tri));
    const Mat2 f = edge_matrix(m.deformed, tri) * dm_inv;
    if (!energy(p, f).is_finite()) {
      throw InadmissibleState("energy_gradient: element with det F <= 0 or overflowing energy");
    }
    const Mat2 s = pk1_stress(p, f);
    const double area = reference_area(m, t);
    const auto grads = shape_gradients(dm_inv);
    // dI/dx_a = area * S1 grad N_a.
    for (int a = 0; a < 3; ++a) {
      const auto f_a = s * grads[static_cast<std::size_t>(a)];
      Vec2& ga = g[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
      ga.x += area * f_a[0];
      ga.y += area * f_a[1];
    }
  }
  for (int i : m.boundary_nodes) {
    g[static_cast<std::size_t>(i)] = {};
  }
  return g;
}

BoundaryMap affine_map(const Mat2& f0) {
  return [f0](const Vec2& x) {
    const auto y = f0 * std::array<double, 2>{x.x, x.y};
    return Vec2{y[0], y[1]};
  };
}

bool apply_dirichlet(MeshState& m, const BoundaryMap& phi0) {
  const auto mask = dirichlet_mask(m);
  // Least-squares fit phi0(X) ~ A X + b over the boundary nodes; normal equations in (X, Y, 1).
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> atx{};
  std::array<double, 3> aty{};
  for (int i : m.boundary_nodes) {
    const Vec2& x = m.nodes[static_cast<std::size_t>(i)];
    const Vec2 y = phi0(x);
    m.deformed[static_cast<std::size_t>(i)] = y;
    const std::array<double, 3> row{x.x, x.y, 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        ata[r][c] += row[r] * row[c];
      }
      atx[r] += row[r] * y.x;
      aty[r] += row[r] * y.y;
    }
  }
  auto solve3 = [](std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
          piv = r;
        }
      }
      std::swap(a[col], a[piv]);
      std::swap(b[col], b[piv]);
      for (int r = col + 1; r < 3; ++r) {
        const double f = a[r][col] / a[col][col];
        for (int c = col; c < 3; ++c) {
          a[r][c] -= f * a[col][c];
        }
        b[r] -= f * b[col];
      }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
      double s = b[r];
      for (int c = r + 1; c < 3; ++c) {
        s -= a[r][c] * x[c];
      }
      x[r] = s / a[r][r];
    }
    return x;
  };
  const auto cx = solve3(ata, atx);
  const auto cy = solve3(ata, aty);
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (!mask[i]) {
      const Vec2& x = m.nodes[i];
      m.deformed[i] = {cx[0] * x.x + cx[1] * x.y + cx[2], cy[0] * x.x + cy[1] * x.y + cy[2]};
    }
  }
  if (min_element_det(m) > 0.0) {
    return true;
  }
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (!mask[i]) {
      m.deformed[i] = m.nodes[i];
    }
  }
  return false;
}

namespace {

// Energy change from `from` to `to`. Once the change is too small for the difference of the two
// totals to resolve, it is taken as the integral of the directional derivative along the segment
// (three-point Gauss-Legendre), which is accurate relative to the change itself.
double energy_change(const MaterialParams& p, const MeshState& from, const MeshState& to, double e_from,
                     double e_to, MeshState& work) {
  const double plain = e_to - e_from;
  if (std::abs(plain) > 1e-10 * (1.0 + std::abs(e_from))) {
    return plain;
  }
  static constexpr std::array<double, 3> kNodes{0.1127016653792583, 0.5, 0.8872983346207417};
  static constexpr std::array<double, 3> kWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double change = 0.0;
  for (std::size_t q = 0; q < 3; ++q) {
    for (std::size_t i = 0; i < from.deformed.size(); ++i) {
      const Vec2& a = from.deformed[i];
      const Vec2& b = to.deformed[i];
      work.deformed[i] = {a.x + kNodes[q] * (b.x - a.x), a.y + kNodes[q] * (b.y - a.y)};
    }
    if (!std::isfinite(total_energy(p, work))) {
      return plain;
    }
    const std::vector<Vec2> g = energy_gradient(p, work);
    for (std::size_t i = 0; i < g.size(); ++i) {
      change += kWeights[q] * (g[i].x * (to.deformed[i].x - from.deformed[i].x) +
                               g[i].y * (to.deformed[i].y - from.deformed[i].y));
    }
  }
  return change;
}

}  // namespace

SolveResult minimize(const MaterialParams& p, MeshState m, const SolveOptions& opts) {
  SolveResult res;
  double e = total_energy(p, m);
  if (!std::isfinite(e)) {
    throw InadmissibleState("minimize: initial state has infinite energy");
  }
  res.initial_energy = e;
  res.min_element_det = min_element_det(m);
  if (opts.record_history) {
    res.energy_history.push_back(e);
  }

  std::vector<Vec2> g = energy_gradient(p, m);
  double gnorm = std::sqrt(dot(g, g));
  std::vector<Vec2> prev_x;
  std::vector<Vec2> prev_g;
  double alpha = gnorm > 0.0 ? 1e-2 / gnorm : 1.0;
  MeshState trial = m;
  MeshState work = m;

  res.status = SolveStatus::max_iterations;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    if (gnorm <= opts.tol * (1.0 + std::abs(e))) {
      res.status = SolveStatus::converged;
      break;
    }
    if (!prev_x.empty()) {
      // Barzilai-Borwein length s.s / s.y as the first trial.
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t i = 0; i < m.deformed.size(); ++i) {
        const double sx = m.deformed[i].x - prev_x[i].x;
        const double syy = m.deformed[i].y - prev_x[i].y;
        ss += sx * sx + syy * syy;
        sy += sx * (g[i].x - prev_g[i].x) + syy * (g[i].y - prev_g[i].y);
      }
      if (sy > 0.0 && std::isfinite(ss / sy)) {
        alpha = ss / sy;
      } else {
        alpha *= 2.0;
      }
    }
    const double slope = -gnorm * gnorm;
    bool accepted = false;
    double change = 0.0;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      for (std::size_t i = 0; i < m.deformed.size(); ++i) {
        trial.deformed[i] = {m.deformed[i].x - alpha * g[i].x, m.deformed[i].y - alpha * g[i].y};
      }
      const double e_trial = total_energy(p, trial);
      if (!std::isfinite(e_trial)) {
        alpha *= opts.backtrack;
        continue;
      }
      change = energy_change(p, m, trial, e, e_trial, work);
      if (change <= opts.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      res.status = SolveStatus::no_descent;
      break;
    }
    prev_x = m.deformed;
    prev_g = g;
    std::swap(m.deformed, trial.deformed);
    e += change;
    res.min_element_det = std::min(res.min_element_det, min_element_det(m));
    if (opts.record_history) {
      res.energy_history.push_back(e);
    }
    g = energy_gradient(p, m);
    gnorm = std::sqrt(dot(g, g));
  }
  if (res.status == SolveStatus::max_iterations && gnorm <= opts.tol * (1.0 + std::abs(e))) {
    res.status = SolveStatus::converged;
  }
  res.iterations = it;
  res.final_energy = total_energy(p, m);
  res.gradient_norm = gnorm;
  res.deformed = std::move(m);
  return res;
}

void write_mesh(std::ostream& out, const MeshState& m) {
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    const Vec2& x = m.nodes[i];
    const Vec2& y = m.deformed[i];
    out << "node " << x.x << ' ' << x.y << ' ' << y.x - x.x << ' ' << y.y - x.y << '\n';
  }
  for (const auto& t : m.triangles) {
    out << "tri " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out.precision(old_precision);
}

MeshState read_mesh(std::istream& in) {
  MeshState m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) {
      continue;
    }
    if (tag == "node") {
      double x = 0, y = 0, u = 0, v = 0;
      if (!(ls >> x >> y >> u >> v)) {
        throw Error("read_mesh: malformed node on line " + std::to_string(lineno));
      }
      m.nodes.push_back({x, y});
      m.deformed.push_back({x + u, y + v});
    } else if (tag == "tri") {
      std::array<int, 3> t{};
      if (!(ls >> t[0] >> t[1] >> t[2])) {
        throw Error("read_mesh: malformed tri on line " + std::to_string(lineno));
      }
      for (int idx : t) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= m.nodes.size()) {
          throw Error("read_mesh: node index out of range on line " + std::to_string(lineno));
        }
      }
      m.triangles.push_back(t);
    } else {
      throw Error("read_mesh: unknown record '" + tag + "' on line " + std::to_string(lineno));
    }
  }
  if (!m.nodes.empty()) {
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (const Vec2& x : m.nodes) {
      x0 = std::min(x0, x.x);
      x1 = std::max(x1, x.x);
      y0 = std::min(y0, x.y);
      y1 = std::max(y1, x.y);
    }
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      const Vec2& x = m.nodes[i];
      if (x.x == x0 || x.x == x1 || x.y == y0 || x.y == y1) {
        m.boundary_nodes.push_back(static_cast<int>(i));
      }
    }
  }
  return m;
}

std::string solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::no_descent:
      return "no_descent";
    case SolveStatus::max_iterations:
      return "max_iterations";
  }
  return "unknown";
}

}  // namespace ehencky
