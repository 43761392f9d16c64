#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qsteg/codec.hpp"
#include "qsteg/image.hpp"

namespace qsteg {

// Pixels below this count are treated as unlit and left out of the default
// mask, along with saturated ones.
inline constexpr uint16_t kDarkThreshold = 16;

struct StegoParams {
  size_t block_pixels = 1;
  // Empty means every pixel is usable; otherwise one flag per pixel.
  std::vector<uint8_t> usable_mask;
};

struct DecodedBits {
  BitVector bits;
  size_t raw_mismatch_count = 0;  // pixels with S != K
};

// Excludes pixels of K that are saturated (== full_well) or dark.
std::vector<uint8_t> DefaultMask(const RawImage& key, uint32_t full_well);

size_t UsableCount(const RawImage& img, const StegoParams& params);

// floor(usable / g).
size_t BitCapacity(const RawImage& img, const StegoParams& params);

// Each message bit owns g consecutive usable pixels in row-major order; a 0
// copies the group from the key, a 1 from the cover. Everything else comes
// from the key.
RawImage Embed(const RawImage& key, const RawImage& cover,
               std::span<const uint8_t> bits, const StegoParams& params);

// A group decodes to 1 if any of its pixels differs from the key.
DecodedBits Extract(const RawImage& stego, const RawImage& key,
                    const StegoParams& params);

// Fraction of usable pixels where the two images agree.
double CollisionRate(const RawImage& a, const RawImage& b,
                     std::span<const uint8_t> usable_mask = {});

// sum_k Poisson(k; lambda)^2: probability that two independent captures of a
// pixel with mean lambda give the same count.
double ExpectedCollisionRate(double lambda);

}  // namespace qsteg
