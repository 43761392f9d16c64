#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qsteg {

// 16-bit grayscale raster of raw photon counts, row-major.
class RawImage {
 public:
  static constexpr int kBitDepth = 16;
  static constexpr uint32_t kMaxValue = 65535;

  RawImage() = default;
  RawImage(size_t width, size_t height);
  RawImage(size_t width, size_t height, std::vector<uint16_t> pixels);

  size_t width() const { return width_; }
  size_t height() const { return height_; }
  size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  uint16_t operator[](size_t i) const { return pixels_[i]; }
  uint16_t& operator[](size_t i) { return pixels_[i]; }
  uint16_t at(size_t x, size_t y) const { return pixels_[y * width_ + x]; }
  uint16_t& at(size_t x, size_t y) { return pixels_[y * width_ + x]; }

  std::span<const uint16_t> pixels() const { return pixels_; }
  std::span<uint16_t> pixels() { return pixels_; }

  bool SameShape(const RawImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const RawImage&, const RawImage&) = default;

 private:
  size_t width_ = 0;
  size_t height_ = 0;
  std::vector<uint16_t> pixels_;
};

// Throws kDimensionMismatch naming `what` when shapes differ.
void RequireSameShape(const RawImage& a, const RawImage& b, const char* what);

// Binary PGM: "P5", width, height, maxval 65535, big-endian samples.
// Header tokens may be separated by any whitespace and '#' comments; exactly
// one whitespace byte separates maxval from the raster.
RawImage ReadPgm16(std::span<const uint8_t> bytes);

// Canonical form "P5\n<w> <h>\n65535\n" followed by the raster.
std::vector<uint8_t> WritePgm16(const RawImage& img);

RawImage LoadPgm16(const std::string& path);
void SavePgm16(const RawImage& img, const std::string& path);

std::vector<uint8_t> ReadFileBytes(const std::string& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void WriteFileAtomic(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace qsteg
