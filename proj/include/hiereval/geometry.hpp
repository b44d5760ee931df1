#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hiereval {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Closed polygonal ring. The edge from back() to front() is implicit.
struct Ring {
  std::vector<Point> vertices;
};

// Multi-ring region filled with the even-odd rule. Holes and disconnected
// pieces are both expressed as additional rings.
struct Region {
  std::vector<Ring> rings;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signed shoelace area (positive for counter-clockwise rings in a y-down
// raster frame the sign is irrelevant; callers take |.| where needed).
double signed_area(const Ring& ring);

double perimeter(const Ring& ring);

// Geometric area of the region under the even-odd rule, assuming rings are
// pairwise non-crossing: sum of |area| at even nesting depth minus odd depth.
double region_area(const Region& region);

double region_perimeter(const Region& region);

// Isoperimetric quotient 4*pi*A / P^2, clamped to [0,1].
// Throws GeometryError on zero perimeter or non-positive area.
double boundary_complexity(const Region& region);

// Area divided by the axis-aligned bounding-box area of all vertices.
double extent(const Region& region);

// Even-odd point-in-region test with a +x ray and strict crossings.
bool point_in_region(const Region& region, double px, double py);

// Nesting-depth decomposition. Rings at even depth are outer polygons, odd
// depth are holes. Requires pairwise non-crossing rings.
struct NestingInfo {
  std::vector<int> depth;  // per ring
  int polygon_count = 0;
  int hole_count = 0;
};
NestingInfo analyze_nesting(const Region& region);

int count_holes(const Region& region);
int polygon_count(const Region& region);

// Splits a region into its connected polygons (one outer ring plus the holes
// nested directly inside it). Used for per-polygon descriptor averages.
std::vector<Region> split_polygons(const Region& region);

// Per-polygon means of the two shape descriptors over split_polygons().
double mean_boundary_complexity(const Region& region);
double mean_extent(const Region& region);

void validate_ring(const Ring& ring);

}  // namespace hiereval
