#include "shapeopt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

double signed_area(const std::vector<Vec2>& nodes) {
  double a = 0.0;
  const std::size_t n = nodes.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2& p = nodes[j];
    const Vec2& q = nodes[(j + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const Vec2 r = p2 - p1;
  const Vec2 s = q2 - q1;
  const double rxs = cross(r, s);
  const Vec2 qp = q1 - p1;
  if (std::abs(rxs) < 1e-30) return false;  // parallel, ignore degenerate overlap
  const double t = cross(qp, s) / rxs;
  const double u = cross(qp, r) / rxs;
  return t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0;
}

void check_simple_polygon(const std::vector<Vec2>& nodes) {
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (segments_intersect(nodes[i], nodes[(i + 1) % n], nodes[j],
                             nodes[(j + 1) % n]))
        throw SelfIntersectionError("surface self-intersects between segments " +
                                    std::to_string(i) + " and " + std::to_string(j));
    }
  }
}

}  // namespace

Vec2 SurfaceCurve::centroid() const {
  // area centroid of the enclosed polygon
  double a = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t n = nodes.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2& p = nodes[j];
    const Vec2& q = nodes[(j + 1) % n];
    const double w = p.x * q.y - q.x * p.y;
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  a *= 0.5;
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

SurfaceCurve make_surface(std::vector<Vec2> nodes, bool check_simple) {
  if (nodes.size() < 3) throw MeshError("surface needs at least 3 nodes");
  if (signed_area(nodes) < 0.0) std::reverse(nodes.begin(), nodes.end());
  if (check_simple) check_simple_polygon(nodes);

  SurfaceCurve s;
  const std::size_t n = nodes.size();
  s.nodes = std::move(nodes);
  s.seg_len.resize(n);
  s.xi1.resize(n);
  s.normals.resize(n);
  s.tangents.resize(n);

  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    s.xi1[j] = acc;
    s.seg_len[j] = (s.nodes[(j + 1) % n] - s.nodes[j]).norm();
    acc += s.seg_len[j];
  }
  s.perimeter = acc;

  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 t = (s.nodes[(j + 1) % n] - s.nodes[(j + n - 1) % n]).normalized();
    s.tangents[j] = t;
    s.normals[j] = {t.y, -t.x};  // rotate by -90 deg: outward for CCW curves
  }
  return s;
}

SurfaceCurve make_circle(double radius, std::size_t n, Vec2 center) {
  std::vector<Vec2> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
    nodes[j] = {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
  }
  SurfaceCurve s = make_surface(std::move(nodes), false);
  // exact circle metric, no discretization wobble in normals
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
    s.normals[j] = {std::cos(th), std::sin(th)};
    s.tangents[j] = {-std::sin(th), std::cos(th)};
  }
  return s;
}

SurfaceCurve perturb_surface(const SurfaceCurve& surface, const SurfaceField& alpha,
                             double eps) {
  const std::size_t n = surface.size();
  if (alpha.size() != n)
    throw MeshError("perturbation field length does not match surface");

  std::shared_ptr<const SurfaceCurve::PerturbBase> base = surface.pbase;
  std::vector<double> delta = surface.delta;
  if (!base) {
    auto b = std::make_shared<SurfaceCurve::PerturbBase>();
    b->nodes = surface.nodes;
    b->normals = surface.normals;
    base = std::move(b);
    delta.assign(n, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) delta[j] += eps * alpha[j];

  std::vector<Vec2> nodes(n);
  for (std::size_t j = 0; j < n; ++j)
    nodes[j] = base->nodes[j] + delta[j] * base->normals[j];

  SurfaceCurve out = make_surface(std::move(nodes), true);
  out.pbase = base;
  out.delta = std::move(delta);
  return out;
}

SurfaceField fourier_mode(const SurfaceCurve& surface, double omega, double shift) {
  SurfaceField f(surface.size());
  f.seg_len = surface.seg_len;
  for (std::size_t j = 0; j < surface.size(); ++j)
    f[j] = std::cos(omega * surface.xi1[j] + shift);
  return f;
}

double obstacle_volume(const SurfaceCurve& surface) {
  return std::abs(signed_area(surface.nodes));
}

SurfaceCurve reparametrize_uniform(const SurfaceCurve& surface) {
  const std::size_t n = surface.size();
  const double h = surface.perimeter / static_cast<double>(n);
  std::vector<Vec2> out(n);
  out[0] = surface.nodes[0];
  std::size_t seg = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double target = h * static_cast<double>(i);
    while (seg + 1 < n && surface.xi1[seg + 1] <= target) ++seg;
    const double local = target - surface.xi1[seg];
    const Vec2 a = surface.nodes[seg];
    const Vec2 b = surface.nodes[(seg + 1) % n];
    const double len = surface.seg_len[seg];
    out[i] = a + (local / len) * (b - a);
  }
  return make_surface(std::move(out), false);
}

namespace {

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

void check_jacobians(const OGridMesh& mesh) {
  for (const auto& t : mesh.tris) {
    const Vec2 a = mesh.nodes[t[0]];
    const Vec2 b = mesh.nodes[t[1]];
    const Vec2 c = mesh.nodes[t[2]];
    const double jac = cross(b - a, c - a);
    if (!(jac > 0.0))
      throw TangledCellError("tangled cell: non-positive Jacobian " +
                             std::to_string(jac));
  }
}

}  // namespace

OGridMesh build_ogrid(const SurfaceCurve& surface, std::size_t n_rings, double r_far,
                      double stretch) {
  const std::size_t n = surface.size();
  if (n_rings < 8) throw MeshError("build_ogrid: need at least 8 rings");
  if (stretch < 1.0) throw MeshError("build_ogrid: stretch ratio must be >= 1");

  const Vec2 c = surface.centroid();
  double r_bound = 0.0;
  for (const Vec2& p : surface.nodes) r_bound = std::max(r_bound, (p - c).norm());
  if (r_far < 2.0 * r_bound)
    throw MeshError("build_ogrid: farfield radius below 2x obstacle bounding radius");

  // geometric distribution tau_m in [0, 1] with spacing ratio `stretch`
  std::vector<double> tau(n_rings);
  if (stretch == 1.0) {
    for (std::size_t m = 0; m < n_rings; ++m)
      tau[m] = static_cast<double>(m) / static_cast<double>(n_rings - 1);
  } else {
    const double denom = std::pow(stretch, static_cast<double>(n_rings - 1)) - 1.0;
    for (std::size_t m = 0; m < n_rings; ++m)
      tau[m] = (std::pow(stretch, static_cast<double>(m)) - 1.0) / denom;
  }

  // the near-wall layers leave along the surface normal, then the extrusion
  // direction blends into the radial ray within about one obstacle radius so
  // that converging normals over concave stretches never get to cross
  const double d_blend = 0.75 * r_bound;

  OGridMesh mesh;
  mesh.surface = surface;
  mesh.n_rings = n_rings;
  mesh.farfield_radius = r_far;
  mesh.stretch = stretch;
  mesh.nodes.resize(n * n_rings);
  mesh.wall_dist.assign(n * n_rings, 0.0);

  double h1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 x = surface.nodes[j];
    const Vec2 nrm = surface.normals[j];
    const Vec2 ray = (x - c).normalized();
    const double reach = r_far - (x - c).norm();
    if (reach <= 0.0) throw MeshError("build_ogrid: surface outside farfield circle");
    for (std::size_t m = 0; m < n_rings; ++m) {
      const double w = smoothstep(tau[m] * reach / d_blend);
      const Vec2 dir = ((1.0 - w) * nrm + w * ray).normalized();
      mesh.nodes[mesh.node_index(j, m)] = x + (tau[m] * reach) * dir;
    }
    h1 += tau[1] * reach;
  }
  mesh.first_layer_height = h1 / static_cast<double>(n);

  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t m = 1; m < n_rings; ++m) {
      acc += (mesh.nodes[mesh.node_index(j, m)] - mesh.nodes[mesh.node_index(j, m - 1)])
                 .norm();
      mesh.wall_dist[mesh.node_index(j, m)] = acc;
    }
  }

  mesh.tris.reserve(2 * n * (n_rings - 1));
  for (std::size_t m = 0; m + 1 < n_rings; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      const int a = static_cast<int>(mesh.node_index(j, m));
      const int b = static_cast<int>(mesh.node_index((j + 1) % n, m));
      const int d = static_cast<int>(mesh.node_index((j + 1) % n, m + 1));
      const int e = static_cast<int>(mesh.node_index(j, m + 1));
      mesh.tris.push_back({a, d, b});
      mesh.tris.push_back({a, e, d});
    }
  }

  check_jacobians(mesh);
  return mesh;
}

OGridMesh regenerate_mesh(const OGridMesh& mesh, const SurfaceCurve& new_surface) {
  if (new_surface.size() != mesh.surface.size())
    throw MeshError("regenerate_mesh: surface node count changed");
  return build_ogrid(new_surface, mesh.n_rings, mesh.farfield_radius, mesh.stretch);
}

}  // namespace shapeopt
