#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "shapeopt/surface_field.hpp"

namespace shapeopt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    const double n = norm();
    return {x / n, y / n};
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Closed, simple polyline with metric data. Node ordering is
/// counter-clockwise; normals point into the fluid (away from the
/// obstacle). xi1 is the cumulative arclength of node j, xi1[0] = 0.
struct SurfaceCurve {
  std::vector<Vec2> nodes;
  std::vector<double> seg_len;   // s_j = |x_{j+1} - x_j|, periodic
  std::vector<double> xi1;       // cumulative arclength per node
  std::vector<Vec2> normals;     // unit, outward (into the fluid)
  std::vector<Vec2> tangents;    // unit, CCW
  double perimeter = 0.0;

  // Perturbations are applied from a stored base so that +eps/-eps probes
  // are exact mirrors and chained perturbations do not drift.
  struct PerturbBase {
    std::vector<Vec2> nodes;
    std::vector<Vec2> normals;
  };
  std::shared_ptr<const PerturbBase> pbase;  // null unless produced by perturb_surface
  std::vector<double> delta;                 // accumulated normal offset from pbase

  std::size_t size() const { return nodes.size(); }
  Vec2 centroid() const;
};

/// Builds metric data from raw node positions. Reverses the ordering if
/// the polygon is clockwise so the -90 degree tangent rotation yields
/// outward normals. Throws SelfIntersectionError when check_simple.
SurfaceCurve make_surface(std::vector<Vec2> nodes, bool check_simple = true);

SurfaceCurve make_circle(double radius, std::size_t n, Vec2 center = {0.0, 0.0});

/// node_j <- node_j + eps * alpha_j * normal_j, metric recomputed.
SurfaceCurve perturb_surface(const SurfaceCurve& surface, const SurfaceField& alpha,
                             double eps);

/// alpha_j = cos(omega * xi1_j + shift)
SurfaceField fourier_mode(const SurfaceCurve& surface, double omega, double shift);

/// Positive shoelace area enclosed by the surface.
double obstacle_volume(const SurfaceCurve& surface);

/// Resamples the curve to N nodes at (approximately) uniform arclength,
/// keeping node 0 fixed. Node count is preserved.
SurfaceCurve reparametrize_uniform(const SurfaceCurve& surface);

/// Body-fitted periodic O-grid. Ring 0 coincides with the surface nodes;
/// xi2-lines leave the wall exactly along the surface normal and blend to
/// radial rays towards the farfield circle. Node (j, m) = nodes[m * N + j].
struct OGridMesh {
  SurfaceCurve surface;
  std::size_t n_rings = 0;       // radial rings including ring 0
  double farfield_radius = 0.0;
  double stretch = 1.0;
  double first_layer_height = 0.0;
  std::vector<Vec2> nodes;                 // n_rings * N
  std::vector<std::array<int, 3>> tris;    // CCW triangles
  std::vector<double> wall_dist;           // distance to ring 0 along xi2-line

  std::size_t n_surface() const { return surface.size(); }
  std::size_t node_index(std::size_t j, std::size_t m) const {
    return m * surface.size() + j;
  }
  std::size_t n_nodes() const { return nodes.size(); }
  bool on_wall(std::size_t idx) const { return idx < surface.size(); }
  bool on_farfield(std::size_t idx) const {
    return idx >= (n_rings - 1) * surface.size();
  }
};

/// Extrudes an O-grid from the surface to the farfield circle of radius
/// r_far around the obstacle centroid. Radial spacing is geometric with
/// the given ratio. Throws TangledCellError when a cell Jacobian turns
/// non-positive.
OGridMesh build_ogrid(const SurfaceCurve& surface, std::size_t n_rings, double r_far,
                      double stretch);

/// Full re-extrusion with the settings of an existing mesh.
OGridMesh regenerate_mesh(const OGridMesh& mesh, const SurfaceCurve& new_surface);

}  // namespace shapeopt
