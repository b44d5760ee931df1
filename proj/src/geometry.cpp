#include "hiereval/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace hiereval {

void validate_ring(const Ring& ring) {
  if (ring.vertices.size() < 3) throw GeometryError("ring needs at least 3 vertices");
  const size_t n = ring.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = ring.vertices[i];
    const Point& b = ring.vertices[(i + 1) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw GeometryError("non-finite vertex");
    if (a.x == b.x && a.y == b.y) throw GeometryError("repeated consecutive vertex");
  }
}

double signed_area(const Ring& ring) {
  const size_t n = ring.vertices.size();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = ring.vertices[i];
    const Point& b = ring.vertices[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

double perimeter(const Ring& ring) {
  const size_t n = ring.vertices.size();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = ring.vertices[i];
    const Point& b = ring.vertices[(i + 1) % n];
    acc += std::hypot(b.x - a.x, b.y - a.y);
  }
  return acc;
}

namespace {

// Strict even-odd crossing test against a single ring with a +x ray.
bool point_in_ring(const Ring& ring, double px, double py) {
  const size_t n = ring.vertices.size();
  bool inside = false;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = ring.vertices[i];
    const Point& b = ring.vertices[(i + 1) % n];
    if ((a.y > py) != (b.y > py)) {
      const double xint = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
      if (xint > px) inside = !inside;
    }
  }
  return inside;
}

bool segments_properly_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  auto orient = [](const Point& a, const Point& b, const Point& c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

bool rings_cross(const Ring& a, const Ring& b) {
  const size_t na = a.vertices.size();
  const size_t nb = b.vertices.size();
  for (size_t i = 0; i < na; ++i) {
    const Point& p1 = a.vertices[i];
    const Point& p2 = a.vertices[(i + 1) % na];
    for (size_t j = 0; j < nb; ++j) {
      const Point& q1 = b.vertices[j];
      const Point& q2 = b.vertices[(j + 1) % nb];
      if (segments_properly_cross(p1, p2, q1, q2)) return true;
    }
  }
  return false;
}

// A ring with vanishing area contains nothing and is contained by parity of
// an arbitrary vertex; use the first vertex as the probe point.
bool ring_contains_ring(const Ring& outer, const Ring& inner) {
  const Point& probe = inner.vertices.front();
  return point_in_ring(outer, probe.x, probe.y);
}

}  // namespace

bool point_in_region(const Region& region, double px, double py) {
  bool inside = false;
  for (const Ring& ring : region.rings) {
    if (point_in_ring(ring, px, py)) inside = !inside;
  }
  return inside;
}

NestingInfo analyze_nesting(const Region& region) {
  if (region.rings.empty()) throw GeometryError("empty region");
  const size_t n = region.rings.size();
  for (const Ring& r : region.rings) validate_ring(r);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (rings_cross(region.rings[i], region.rings[j]))
        throw GeometryError("crossing rings");

  NestingInfo info;
  info.depth.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i != j && ring_contains_ring(region.rings[j], region.rings[i])) ++info.depth[i];
    }
  }
  for (int d : info.depth) {
    if (d % 2 == 0)
      ++info.polygon_count;
    else
      ++info.hole_count;
  }
  return info;
}

int count_holes(const Region& region) { return analyze_nesting(region).hole_count; }

int polygon_count(const Region& region) { return analyze_nesting(region).polygon_count; }

double region_area(const Region& region) {
  const NestingInfo info = analyze_nesting(region);
  double area = 0.0;
  for (size_t i = 0; i < region.rings.size(); ++i) {
    const double a = std::abs(signed_area(region.rings[i]));
    area += (info.depth[i] % 2 == 0) ? a : -a;
  }
  return area;
}

double region_perimeter(const Region& region) {
  double acc = 0.0;
  for (const Ring& r : region.rings) acc += perimeter(r);
  return acc;
}

double boundary_complexity(const Region& region) {
  const double area = region_area(region);
  const double perim = region_perimeter(region);
  if (perim <= 0.0) throw GeometryError("zero perimeter");
  if (area <= 0.0) throw GeometryError("non-positive area");
  const double q = 4.0 * std::numbers::pi * area / (perim * perim);
  return std::clamp(q, 0.0, 1.0);
}

double extent(const Region& region) {
  const double area = region_area(region);
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const Ring& r : region.rings) {
    for (const Point& p : r.vertices) {
      xmin = std::min(xmin, p.x);
      ymin = std::min(ymin, p.y);
      xmax = std::max(xmax, p.x);
      ymax = std::max(ymax, p.y);
    }
  }
  const double bbox_area = (xmax - xmin) * (ymax - ymin);
  if (bbox_area <= 0.0) throw GeometryError("zero bounding-box area");
  if (area <= 0.0) throw GeometryError("non-positive area");
  return area / bbox_area;
}

std::vector<Region> split_polygons(const Region& region) {
  const NestingInfo info = analyze_nesting(region);
  const size_t n = region.rings.size();
  std::vector<Region> polygons;
  std::vector<size_t> outer_index(n, SIZE_MAX);
  for (size_t i = 0; i < n; ++i) {
    if (info.depth[i] % 2 == 0) {
      outer_index[i] = polygons.size();
      polygons.push_back(Region{{region.rings[i]}});
    }
  }
  // Attach each hole to the even-depth ring that immediately contains it:
  // the containing ring with depth exactly one less.
  for (size_t i = 0; i < n; ++i) {
    if (info.depth[i] % 2 == 0) continue;
    for (size_t j = 0; j < n; ++j) {
      if (j == i || info.depth[j] != info.depth[i] - 1) continue;
      if (ring_contains_ring(region.rings[j], region.rings[i])) {
        polygons[outer_index[j]].rings.push_back(region.rings[i]);
        break;
      }
    }
  }
  return polygons;
}

double mean_boundary_complexity(const Region& region) {
  const std::vector<Region> polys = split_polygons(region);
  double acc = 0.0;
  for (const Region& p : polys) acc += boundary_complexity(p);
  return acc / static_cast<double>(polys.size());
}

double mean_extent(const Region& region) {
  const std::vector<Region> polys = split_polygons(region);
  double acc = 0.0;
  for (const Region& p : polys) acc += extent(p);
  return acc / static_cast<double>(polys.size());
}

}  // namespace hiereval
