#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace wlab {

using Vec2 = Eigen::Vector2d;

enum class Shape { Disk, Ellipse, Annulus, Polygon, PerturbedDisk, TranslatedDisk };

std::string_view to_string(Shape shape);
std::optional<Shape> parse_shape(std::string_view name);

/// A cos(k theta + phase) term of a perturbed disk's polar radius.
struct FourierMode {
  int k = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Generating description of a 2D test domain.
///  disk            radius, center
///  ellipse         semi_a, semi_b, center
///  annulus         inner_radius, radius, center
///  polygon         vertices (counter-clockwise or clockwise)
///  perturbed-disk  radius * (1 + sum amplitude cos(k theta + phase)), center
///  translated-disk radius, center
struct DomainSpec {
  Shape shape = Shape::Disk;
  double radius = 1.0;
  double inner_radius = 0.0;
  double semi_a = 1.0;
  double semi_b = 1.0;
  std::vector<Vec2> vertices;
  std::vector<FourierMode> perturbation;
  Vec2 center = Vec2::Zero();
  double h = 0.1;

  /// Throws std::invalid_argument for degenerate or unsupported parameters.
  void validate() const;
  std::string describe() const;

  /// Polar radius of a star-shaped boundary about center (disk-like shapes).
  double boundary_radius(double theta) const;
  /// Largest |x| over the closure.
  double max_distance_from_origin() const;
  /// Moves a point near the boundary onto the analytic boundary. Identity for
  /// polygons.
  Vec2 project_to_boundary(const Vec2& p) const;
};

/// Conforming, counter-clockwise P1 triangulation.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_nodes;  // sorted
  std::string domain_tag;
  std::optional<DomainSpec> domain;  // analytic boundary, when known

  double signed_area(int tri) const;
  double area() const;
  double max_node_distance() const;
  /// Longest and shortest edge.
  std::pair<double, double> edge_length_range() const;

  /// Orientation (area >= 1e-14), conformity and boundary-set checks.
  /// Returns an empty string when valid, else the first problem found.
  std::string check() const;
};

/// Throws std::invalid_argument for an invalid spec, including a
/// self-intersecting polygon.
Mesh generate_mesh(const DomainSpec& spec);

/// Splits every triangle into four through its edge midpoints; boundary
/// midpoints are moved to the analytic boundary when one is attached.
Mesh refine(const Mesh& mesh);

/// Nodes on edges used by exactly one triangle.
std::vector<int> boundary_nodes_of(int node_count,
                                   const std::vector<std::array<int, 3>>& triangles);

/// Text format:
///   WSLMESH 1
///   <nodes> <triangles> <boundary>
///   x y            (per node, 17 significant digits)
///   i j k          (per triangle, zero-based)
///   b              (per boundary node)
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace wlab
