#include "wlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace wlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  const auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

double polygon_signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

void orient_ccw(Mesh& m) {
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    if (m.signed_area(static_cast<int>(t)) < 0) std::swap(m.triangles[t][1], m.triangles[t][2]);
  }
}

// Conforming ring mesh between radii r_0 < ... < r_m (r_0 may be 0, giving a
// center node). Every ring holds a multiple of 8 nodes starting at angle 0,
// so the triangulation is invariant under rotation by pi/4.
Mesh ring_mesh(const std::vector<double>& radii, const std::vector<int>& counts) {
  Mesh m;
  std::vector<int> first(radii.size());
  for (std::size_t r = 0; r < radii.size(); ++r) {
    first[r] = static_cast<int>(m.nodes.size());
    if (radii[r] == 0.0) {
      m.nodes.emplace_back(0.0, 0.0);
      continue;
    }
    for (int j = 0; j < counts[r]; ++j) {
      const double th = 2.0 * kPi * j / counts[r];
      m.nodes.emplace_back(radii[r] * std::cos(th), radii[r] * std::sin(th));
    }
  }
  for (std::size_t r = 0; r + 1 < radii.size(); ++r) {
    const int nb = counts[r + 1];
    const int B = first[r + 1];
    if (radii[r] == 0.0) {
      for (int j = 0; j < nb; ++j) m.triangles.push_back({first[r], B + j, B + (j + 1) % nb});
      continue;
    }
    const int na = counts[r];
    const int A = first[r];
    int i = 0, j = 0;
    while (i < na || j < nb) {
      // Exact integer comparison of the next angles 2pi(i+1)/na and 2pi(j+1)/nb.
      const bool advance_inner =
          j == nb || (i < na && static_cast<long>(i + 1) * nb <= static_cast<long>(j + 1) * na);
      if (advance_inner) {
        m.triangles.push_back({A + i % na, B + j % nb, A + (i + 1) % na});
        ++i;
      } else {
        m.triangles.push_back({A + i % na, B + j % nb, B + (j + 1) % nb});
        ++j;
      }
    }
  }
  orient_ccw(m);
  return m;
}

Mesh unit_disk_mesh(double h) {
  const int rings = std::max(2, static_cast<int>(std::ceil(1.0 / h - 1e-9)));
  std::vector<double> radii{0.0};
  std::vector<int> counts{1};
  for (int i = 1; i <= rings; ++i) {
    radii.push_back(static_cast<double>(i) / rings);
    counts.push_back(8 * i);
  }
  return ring_mesh(radii, counts);
}

Mesh annulus_mesh(double r_in, double r_out, double h) {
  const int rings = std::max(1, static_cast<int>(std::ceil((r_out - r_in) / h - 1e-9)));
  std::vector<double> radii;
  std::vector<int> counts;
  for (int i = 0; i <= rings; ++i) {
    const double r = r_in + (r_out - r_in) * i / rings;
    radii.push_back(r);
    counts.push_back(8 * std::max(1, static_cast<int>(std::lround(2.0 * kPi * r / (8.0 * h)))));
  }
  return ring_mesh(radii, counts);
}

// Ear clipping of a simple counter-clockwise polygon.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& v) {
  std::vector<int> idx(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> tris;
  int guard = 0;
  while (idx.size() > 3) {
    if (++guard > 100000) throw std::invalid_argument("ear clipping failed (degenerate polygon)");
    bool clipped = false;
    // Prefer the ear with the best minimum angle for better shaped triangles.
    int best = -1;
    double best_quality = -1.0;
    const std::size_t k = idx.size();
    for (std::size_t i = 0; i < k; ++i) {
      const int a = idx[(i + k - 1) % k], b = idx[i], c = idx[(i + 1) % k];
      if (orient(v[a], v[b], v[c]) <= 0) continue;
      bool empty = true;
      for (std::size_t j = 0; j < k && empty; ++j) {
        const int p = idx[j];
        if (p == a || p == b || p == c) continue;
        if (orient(v[a], v[b], v[p]) >= 0 && orient(v[b], v[c], v[p]) >= 0 &&
            orient(v[c], v[a], v[p]) >= 0)
          empty = false;
      }
      if (!empty) continue;
      const double la = (v[b] - v[c]).norm(), lb = (v[c] - v[a]).norm(), lc = (v[a] - v[b]).norm();
      const double quality = 2.0 * orient(v[a], v[b], v[c]) / std::pow(std::max({la, lb, lc}), 2);
      if (quality > best_quality) {
        best_quality = quality;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      const std::size_t i = static_cast<std::size_t>(best);
      tris.push_back({idx[(i + k - 1) % k], idx[i], idx[(i + 1) % k]});
      idx.erase(idx.begin() + best);
      clipped = true;
    }
    if (!clipped) throw std::invalid_argument("ear clipping found no ear (self-intersecting polygon?)");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) -
                     (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady) +
                     (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  return det > 1e-14;
}

// Lawson edge flips towards the Delaunay triangulation of the same points.
void lawson_flips(Mesh& m) {
  for (int sweep = 0; sweep < 1000; ++sweep) {
    bool flipped = false;
    std::unordered_map<std::uint64_t, std::vector<int>> owners;
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
      for (int e = 0; e < 3; ++e)
        owners[edge_key(m.triangles[t][e], m.triangles[t][(e + 1) % 3])].push_back(static_cast<int>(t));
    std::vector<std::uint64_t> keys;
    for (const auto& [k, v] : owners) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (auto key : keys) {
      const auto& tv = owners[key];
      if (tv.size() != 2) continue;
      const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
      auto& t1 = m.triangles[tv[0]];
      auto& t2 = m.triangles[tv[1]];
      const auto other = [&](const std::array<int, 3>& t) {
        for (int x : t)
          if (x != a && x != b) return x;
        return -1;
      };
      const int c = other(t1), d = other(t2);
      if (c < 0 || d < 0) continue;
      // Triangle (a, b, c) ccw order for the in-circle test.
      int p = a, q = b;
      if (orient(m.nodes[p], m.nodes[q], m.nodes[c]) < 0) std::swap(p, q);
      if (!in_circumcircle(m.nodes[p], m.nodes[q], m.nodes[c], m.nodes[d])) continue;
      // The flip must keep both new triangles valid (convex quadrilateral).
      if (orient(m.nodes[c], m.nodes[d], m.nodes[p]) * orient(m.nodes[c], m.nodes[d], m.nodes[q]) >= 0)
        continue;
      t1 = {c, d, p};
      t2 = {d, c, q};
      orient_ccw(m);
      flipped = true;
      break;  // edge ownership changed; rebuild
    }
    if (!flipped) return;
  }
}

double perturbation_factor(const DomainSpec& s, double theta) {
  double r = 1.0;
  for (const auto& mode : s.perturbation) r += mode.amplitude * std::cos(mode.k * theta + mode.phase);
  return r;
}

}  // namespace

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Disk: return "disk";
    case Shape::Ellipse: return "ellipse";
    case Shape::Annulus: return "annulus";
    case Shape::Polygon: return "polygon";
    case Shape::PerturbedDisk: return "perturbed-disk";
    case Shape::TranslatedDisk: return "translated-disk";
  }
  return "unknown";
}

std::optional<Shape> parse_shape(std::string_view name) {
  for (auto s : {Shape::Disk, Shape::Ellipse, Shape::Annulus, Shape::Polygon,
                 Shape::PerturbedDisk, Shape::TranslatedDisk}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void DomainSpec::validate() const {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(h > 0.0 && std::isfinite(h), "mesh size h must be positive");
  require(center.allFinite(), "domain center must be finite");
  switch (shape) {
    case Shape::Disk:
    case Shape::TranslatedDisk:
      require(radius > 0.0, "disk radius must be positive");
      break;
    case Shape::Ellipse:
      require(semi_a > 0.0 && semi_b > 0.0, "ellipse semi-axes must be positive");
      break;
    case Shape::Annulus:
      require(inner_radius > 0.0 && radius > inner_radius, "annulus needs 0 < inner_radius < radius");
      break;
    case Shape::PerturbedDisk: {
      require(radius > 0.0, "perturbed-disk radius must be positive");
      for (const auto& m : perturbation) require(m.k >= 1, "perturbation modes need k >= 1");
      double lo = 1e300;
      for (int i = 0; i < 4096; ++i) lo = std::min(lo, perturbation_factor(*this, 2 * kPi * i / 4096));
      require(lo > 0.2, "perturbation too large: boundary must stay star-shaped with radius > 0.2 R");
      break;
    }
    case Shape::Polygon: {
      require(vertices.size() >= 3, "polygon needs at least 3 vertices");
      require(std::abs(polygon_signed_area(vertices)) > 1e-12, "polygon has zero area");
      const std::size_t k = vertices.size();
      for (std::size_t i = 0; i < k; ++i) {
        require(vertices[i].allFinite(), "polygon vertices must be finite");
        for (std::size_t j = i + 1; j < k; ++j) {
          if (j == i + 1 || (i == 0 && j == k - 1)) continue;
          require(!segments_intersect(vertices[i], vertices[(i + 1) % k], vertices[j],
                                      vertices[(j + 1) % k]),
                  "polygon is self-intersecting");
        }
      }
      break;
    }
  }
}

std::string DomainSpec::describe() const {
  std::ostringstream out;
  out << to_string(shape) << "(";
  switch (shape) {
    case Shape::Disk:
    case Shape::TranslatedDisk: out << "R=" << radius; break;
    case Shape::Ellipse: out << "a=" << semi_a << ",b=" << semi_b; break;
    case Shape::Annulus: out << "r=" << inner_radius << ",R=" << radius; break;
    case Shape::PerturbedDisk:
      out << "R=" << radius;
      for (const auto& m : perturbation) out << ",eps" << m.k << "=" << m.amplitude;
      break;
    case Shape::Polygon: out << vertices.size() << " vertices"; break;
  }
  if (shape != Shape::Polygon && center.squaredNorm() > 0)
    out << ",center=(" << center.x() << "," << center.y() << ")";
  out << ",h=" << h << ")";
  return out.str();
}

double DomainSpec::boundary_radius(double theta) const {
  switch (shape) {
    case Shape::Disk:
    case Shape::TranslatedDisk:
    case Shape::Annulus: return radius;
    case Shape::Ellipse: {
      const double c = std::cos(theta) / semi_a, s = std::sin(theta) / semi_b;
      return 1.0 / std::sqrt(c * c + s * s);
    }
    case Shape::PerturbedDisk: return radius * perturbation_factor(*this, theta);
    case Shape::Polygon: break;
  }
  throw std::logic_error("boundary_radius is undefined for polygons");
}

double DomainSpec::max_distance_from_origin() const {
  if (shape == Shape::Polygon) {
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, v.norm());
    return r;
  }
  if (shape == Shape::Disk || shape == Shape::TranslatedDisk || shape == Shape::Annulus)
    return center.norm() + radius;
  double r = 0.0;
  constexpr int samples = 8192;
  for (int i = 0; i < samples; ++i) {
    const double th = 2 * kPi * i / samples;
    r = std::max(r, (center + boundary_radius(th) * Vec2(std::cos(th), std::sin(th))).norm());
  }
  // Sampling undershoots by at most the chord sagitta.
  return r * (1.0 + 1e-6);
}

Vec2 DomainSpec::project_to_boundary(const Vec2& p) const {
  const Vec2 d = p - center;
  switch (shape) {
    case Shape::Disk:
    case Shape::TranslatedDisk: return center + radius * d.normalized();
    case Shape::Annulus: {
      const double r = d.norm();
      const double target = std::abs(r - inner_radius) < std::abs(r - radius) ? inner_radius : radius;
      return center + target * d / r;
    }
    case Shape::Ellipse: {
      Vec2 q(d.x() / semi_a, d.y() / semi_b);
      q.normalize();
      return center + Vec2(semi_a * q.x(), semi_b * q.y());
    }
    case Shape::PerturbedDisk: {
      const double th = std::atan2(d.y(), d.x());
      return center + boundary_radius(th) * Vec2(std::cos(th), std::sin(th));
    }
    case Shape::Polygon: return p;
  }
  return p;
}

double Mesh::signed_area(int tri) const {
  const auto& t = triangles[tri];
  return 0.5 * orient(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += signed_area(static_cast<int>(t));
  return a;
}

double Mesh::max_node_distance() const {
  double r = 0.0;
  for (const auto& p : nodes) r = std::max(r, p.norm());
  return r;
}

std::pair<double, double> Mesh::edge_length_range() const {
  double lo = 1e300, hi = 0.0;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) {
      const double l = (nodes[t[e]] - nodes[t[(e + 1) % 3]]).norm();
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  return {lo, hi};
}

std::vector<int> boundary_nodes_of(int node_count, const std::vector<std::array<int, 3>>& triangles) {
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
  std::vector<char> flag(node_count, 0);
  for (const auto& [k, c] : count) {
    if (c != 1) continue;
    flag[k >> 32] = 1;
    flag[k & 0xffffffffu] = 1;
  }
  std::vector<int> out;
  for (int i = 0; i < node_count; ++i)
    if (flag[i]) out.push_back(i);
  return out;
}

std::string Mesh::check() const {
  std::ostringstream err;
  const int nn = static_cast<int>(nodes.size());
  std::vector<char> used(nn, 0);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int v : triangles[t]) {
      if (v < 0 || v >= nn) {
        err << "triangle " << t << " references missing node " << v;
        return err.str();
      }
      used[v] = 1;
    }
    const double a = signed_area(static_cast<int>(t));
    if (!(a >= 1e-14)) {
      err << "triangle " << t << " has signed area " << a;
      return err.str();
    }
  }
  for (int i = 0; i < nn; ++i)
    if (!used[i]) {
      err << "node " << i << " belongs to no triangle";
      return err.str();
    }
  // Directed edges: a shared edge must be traversed once in each direction.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) {
      const auto key = std::make_pair(t[e], t[(e + 1) % 3]);
      if (++directed[key] > 1) {
        err << "edge (" << key.first << "," << key.second << ") used twice in the same direction";
        return err.str();
      }
    }
  std::vector<std::pair<int, int>> boundary_edges;
  for (const auto& [k, c] : directed)
    if (!directed.count({k.second, k.first})) boundary_edges.push_back(k);
  std::vector<char> on_boundary(nn, 0);
  for (const auto& [a, b] : boundary_edges) on_boundary[a] = on_boundary[b] = 1;
  std::vector<int> expected;
  for (int i = 0; i < nn; ++i)
    if (on_boundary[i]) expected.push_back(i);
  if (expected != boundary_nodes) return "boundary_nodes differs from the nodes on unshared edges";
  // Hanging nodes: no boundary node may sit inside a boundary edge.
  for (const auto& [a, b] : boundary_edges) {
    const Vec2 pa = nodes[a], pb = nodes[b];
    const double len2 = (pb - pa).squaredNorm();
    for (int v : expected) {
      if (v == a || v == b) continue;
      const Vec2 pv = nodes[v];
      const double s = (pv - pa).dot(pb - pa) / len2;
      if (s <= 1e-9 || s >= 1 - 1e-9) continue;
      if (std::abs(orient(pa, pb, pv)) <= 1e-12 * len2) {
        err << "hanging node " << v << " on edge (" << a << "," << b << ")";
        return err.str();
      }
    }
  }
  return {};
}

Mesh generate_mesh(const DomainSpec& spec) {
  spec.validate();
  Mesh m;
  switch (spec.shape) {
    case Shape::Disk:
    case Shape::TranslatedDisk: {
      m = unit_disk_mesh(spec.h / spec.radius);
      for (auto& p : m.nodes) p = spec.center + spec.radius * p;
      break;
    }
    case Shape::Ellipse: {
      m = unit_disk_mesh(spec.h / std::max(spec.semi_a, spec.semi_b));
      for (auto& p : m.nodes) p = spec.center + Vec2(spec.semi_a * p.x(), spec.semi_b * p.y());
      break;
    }
    case Shape::PerturbedDisk: {
      double peak = 0.0;
      for (int i = 0; i < 4096; ++i) peak = std::max(peak, perturbation_factor(spec, 2 * kPi * i / 4096));
      m = unit_disk_mesh(spec.h / (spec.radius * peak));
      for (auto& p : m.nodes) {
        const double th = std::atan2(p.y(), p.x());
        const double r = p.norm();
        p = spec.center + r * spec.boundary_radius(th) * Vec2(std::cos(th), std::sin(th));
      }
      break;
    }
    case Shape::Annulus: {
      m = annulus_mesh(spec.inner_radius, spec.radius, spec.h);
      for (auto& p : m.nodes) p += spec.center;
      break;
    }
    case Shape::Polygon: {
      std::vector<Vec2> v = spec.vertices;
      if (polygon_signed_area(v) < 0) std::reverse(v.begin(), v.end());
      m.nodes = v;
      m.triangles = ear_clip(v);
      orient_ccw(m);
      lawson_flips(m);
      m.boundary_nodes = boundary_nodes_of(static_cast<int>(m.nodes.size()), m.triangles);
      const double longest = m.edge_length_range().second;
      const int levels = std::max(0, static_cast<int>(std::ceil(std::log2(longest / spec.h) - 1e-12)));
      for (int i = 0; i < levels; ++i) m = refine(m);
      break;
    }
  }
  m.domain = spec;
  m.domain_tag = spec.describe();
  m.boundary_nodes = boundary_nodes_of(static_cast<int>(m.nodes.size()), m.triangles);
  return m;
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.nodes = mesh.nodes;
  out.domain = mesh.domain;
  out.domain_tag = mesh.domain_tag;
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
  std::unordered_map<std::uint64_t, int> midpoint;
  const bool project = mesh.domain && mesh.domain->shape != Shape::Polygon;
  const auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
    if (project && count[key] == 1) p = mesh.domain->project_to_boundary(p);
    const int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(p);
    midpoint.emplace(key, id);
    return id;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  out.boundary_nodes = boundary_nodes_of(static_cast<int>(out.nodes.size()), out.triangles);
  return out;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "WSLMESH 1\n";
  out << mesh.nodes.size() << ' ' << mesh.triangles.size() << ' ' << mesh.boundary_nodes.size() << '\n';
  out << std::setprecision(17);
  for (const auto& p : mesh.nodes) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (int b : mesh.boundary_nodes) out << b << '\n';
}

Mesh read_mesh(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "WSLMESH" || version != 1)
    throw std::runtime_error("not a WSLMESH 1 file");
  long nn = 0, nt = 0, nb = 0;
  if (!(in >> nn >> nt >> nb) || nn < 3 || nt < 1 || nb < 0)
    throw std::runtime_error("bad WSLMESH counts line");
  Mesh m;
  m.nodes.resize(nn);
  for (auto& p : m.nodes) {
    double x, y;
    if (!(in >> x >> y)) throw std::runtime_error("truncated node list");
    p = Vec2(x, y);
  }
  m.triangles.resize(nt);
  for (auto& t : m.triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw std::runtime_error("truncated triangle list");
    for (int v : t)
      if (v < 0 || v >= nn) throw std::runtime_error("triangle references a missing node");
  }
  m.boundary_nodes.resize(nb);
  for (auto& b : m.boundary_nodes) {
    if (!(in >> b)) throw std::runtime_error("truncated boundary list");
    if (b < 0 || b >= nn) throw std::runtime_error("boundary index out of range");
  }
  m.domain_tag = "mesh-file";
  return m;
}

void save_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path);
  write_mesh(out, mesh);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read mesh file " + path);
  Mesh m = read_mesh(in);
  m.domain_tag = "mesh-file:" + path;
  return m;
}

}  // namespace wlab
