#include "hiereval/mask.hpp"

#include <algorithm>
#include <numeric>

namespace hiereval {

BitMask::BitMask(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw MaskError("mask dimensions must be positive");
  bits_.assign(static_cast<size_t>(width) * height, 0);
}

void BitMask::set(int row, int col, bool value) {
  std::uint8_t& cell = bits_[static_cast<size_t>(row) * width_ + col];
  area_ += static_cast<std::int64_t>(value) - static_cast<std::int64_t>(cell != 0);
  cell = value ? 1 : 0;
}

SizeBucket size_bucket(std::int64_t area) {
  if (area < kSmallMaxArea) return SizeBucket::Small;
  if (area < kMediumMaxArea) return SizeBucket::Medium;
  return SizeBucket::Large;
}

const char* size_bucket_name(SizeBucket b) {
  switch (b) {
    case SizeBucket::Small: return "small";
    case SizeBucket::Medium: return "medium";
    case SizeBucket::Large: return "large";
  }
  return "?";
}

BitMask rasterize(const Region& region, int width, int height) {
  BitMask mask(width, height);
  std::vector<double> xints;
  for (int row = 0; row < height; ++row) {
    const double py = row + 0.5;
    xints.clear();
    for (const Ring& ring : region.rings) {
      const size_t n = ring.vertices.size();
      for (size_t i = 0; i < n; ++i) {
        const Point& a = ring.vertices[i];
        const Point& b = ring.vertices[(i + 1) % n];
        if ((a.y > py) != (b.y > py)) {
          xints.push_back(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
        }
      }
    }
    if (xints.empty()) continue;
    std::sort(xints.begin(), xints.end());
    // A pixel center is inside iff an odd number of crossings lie strictly
    // to its right.
    size_t k = 0;  // crossings at or left of the current center
    for (int col = 0; col < width; ++col) {
      const double px = col + 0.5;
      while (k < xints.size() && !(xints[k] > px)) ++k;
      if ((xints.size() - k) % 2 == 1) mask.set(row, col, true);
    }
  }
  return mask;
}

namespace {
void require_same_dims(const BitMask& a, const BitMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw MaskError("mask dimension mismatch");
}
}  // namespace

std::int64_t intersection_count(const BitMask& a, const BitMask& b) {
  require_same_dims(a, b);
  std::int64_t n = 0;
  const auto& ba = a.bits();
  const auto& bb = b.bits();
  for (size_t i = 0; i < ba.size(); ++i) n += ba[i] & bb[i];
  return n;
}

std::int64_t union_count(const BitMask& a, const BitMask& b) {
  require_same_dims(a, b);
  std::int64_t n = 0;
  const auto& ba = a.bits();
  const auto& bb = b.bits();
  for (size_t i = 0; i < ba.size(); ++i) n += ba[i] | bb[i];
  return n;
}

double iou(const BitMask& a, const BitMask& b) {
  const std::int64_t u = union_count(a, b);
  if (u == 0) return 1.0;  // agreement on absence
  return static_cast<double>(intersection_count(a, b)) / static_cast<double>(u);
}

double containment_ratio(const BitMask& child, const BitMask& parent) {
  if (child.area() == 0) throw MaskError("containment ratio undefined for empty child");
  return static_cast<double>(intersection_count(child, parent)) /
         static_cast<double>(child.area());
}

double coverage(const BitMask& child, const BitMask& container) {
  require_same_dims(child, container);
  if (container.area() == 0) throw MaskError("coverage undefined for empty container");
  return static_cast<double>(child.area()) / static_cast<double>(container.area());
}

double image_coverage(const BitMask& mask) {
  return static_cast<double>(mask.area()) /
         (static_cast<double>(mask.width()) * static_cast<double>(mask.height()));
}

BBox bbox_from_mask(const BitMask& mask) {
  if (mask.area() == 0) throw MaskError("bbox undefined for empty mask");
  BBox box{mask.width(), mask.height(), -1, -1};
  for (int row = 0; row < mask.height(); ++row) {
    for (int col = 0; col < mask.width(); ++col) {
      if (!mask.get(row, col)) continue;
      box.x_min = std::min(box.x_min, col);
      box.y_min = std::min(box.y_min, row);
      box.x_max = std::max(box.x_max, col);
      box.y_max = std::max(box.y_max, row);
    }
  }
  return box;
}

BitMask boxes_to_mask(const std::vector<BBox>& boxes, int width, int height) {
  BitMask mask(width, height);
  for (const BBox& box : boxes) {
    const int x0 = std::max(box.x_min, 0);
    const int y0 = std::max(box.y_min, 0);
    const int x1 = std::min(box.x_max, width - 1);
    const int y1 = std::min(box.y_max, height - 1);
    for (int row = y0; row <= y1; ++row)
      for (int col = x0; col <= x1; ++col) mask.set(row, col, true);
  }
  return mask;
}

BitMask mask_from_bbox(const BBox& box, int width, int height) {
  return boxes_to_mask({box}, width, height);
}

std::vector<std::int64_t> rle_encode(const BitMask& mask) {
  std::vector<std::int64_t> runs;
  const auto& bits = mask.bits();
  std::uint8_t current = 0;  // RLE starts with the zero run
  std::int64_t run = 0;
  for (std::uint8_t bit : bits) {
    if (bit == current) {
      ++run;
    } else {
      runs.push_back(run);
      current = bit;
      run = 1;
    }
  }
  runs.push_back(run);
  return runs;
}

BitMask rle_decode(const std::vector<std::int64_t>& runs, int width, int height) {
  BitMask mask(width, height);
  const std::int64_t total = static_cast<std::int64_t>(width) * height;
  std::int64_t pos = 0;
  bool value = false;
  for (std::int64_t run : runs) {
    if (run < 0) throw MaskError("negative RLE run");
    if (value) {
      for (std::int64_t i = 0; i < run; ++i) {
        const std::int64_t p = pos + i;
        if (p >= total) throw MaskError("RLE runs exceed width*height");
        mask.set(static_cast<int>(p / width), static_cast<int>(p % width), true);
      }
    }
    pos += run;
    value = !value;
  }
  if (pos != total) throw MaskError("RLE runs do not sum to width*height");
  return mask;
}

}  // namespace hiereval
