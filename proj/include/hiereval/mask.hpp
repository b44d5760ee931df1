#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hiereval/geometry.hpp"

namespace hiereval {

struct MaskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary raster with exact integer pixel counts.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t area() const { return area_; }
  bool empty() const { return area_ == 0; }

  bool get(int row, int col) const { return bits_[static_cast<size_t>(row) * width_ + col] != 0; }
  void set(int row, int col, bool value);

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const BitMask& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::int64_t area_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Inclusive integer pixel box.
struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  bool operator==(const BBox&) const = default;
};

enum class SizeBucket { Small, Medium, Large };

// COCO thresholds, lower-inclusive.
inline constexpr std::int64_t kSmallMaxArea = 32 * 32;   // 1024
inline constexpr std::int64_t kMediumMaxArea = 96 * 96;  // 9216

SizeBucket size_bucket(std::int64_t area);
const char* size_bucket_name(SizeBucket b);

// Scanline even-odd rasterization sampled at pixel centers (col + 0.5,
// row + 0.5) with a strict +x crossing rule. Bit-exact with a per-pixel
// point-in-region test using the same rule.
BitMask rasterize(const Region& region, int width, int height);

std::int64_t intersection_count(const BitMask& a, const BitMask& b);
std::int64_t union_count(const BitMask& a, const BitMask& b);

// |a n b| / |a u b|; 1.0 when both masks are empty.
double iou(const BitMask& a, const BitMask& b);

// |child n parent| / |child|. Throws on empty child.
double containment_ratio(const BitMask& child, const BitMask& parent);

// |child| / |container|. Throws on empty container.
double coverage(const BitMask& child, const BitMask& container);

// |mask| / (width * height).
double image_coverage(const BitMask& mask);

BBox bbox_from_mask(const BitMask& mask);

// Union of filled boxes, clipped to the image bounds.
BitMask boxes_to_mask(const std::vector<BBox>& boxes, int width, int height);

BitMask mask_from_bbox(const BBox& box, int width, int height);

// Row-major RLE: alternating run lengths starting with the zero-run (which
// may be 0). Runs must sum to width*height.
std::vector<std::int64_t> rle_encode(const BitMask& mask);
BitMask rle_decode(const std::vector<std::int64_t>& runs, int width, int height);

}  // namespace hiereval
