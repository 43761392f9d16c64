#include "qsteg/stego.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

void CheckParams(const RawImage& img, const StegoParams& params) {
  if (params.block_pixels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "block_pixels must be >= 1");
  }
  if (!params.usable_mask.empty() && params.usable_mask.size() != img.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "usable mask has " + std::to_string(params.usable_mask.size()) +
                    " entries for " + std::to_string(img.size()) + " pixels");
  }
}

bool Usable(const StegoParams& params, size_t i) {
  return params.usable_mask.empty() || params.usable_mask[i] != 0;
}

}  // namespace

std::vector<uint8_t> DefaultMask(const RawImage& key, uint32_t full_well) {
  std::vector<uint8_t> mask(key.size());
  for (size_t i = 0; i < key.size(); ++i) {
    mask[i] = key[i] != full_well && key[i] >= kDarkThreshold;
  }
  return mask;
}

size_t UsableCount(const RawImage& img, const StegoParams& params) {
  CheckParams(img, params);
  if (params.usable_mask.empty()) return img.size();
  return static_cast<size_t>(
      std::count_if(params.usable_mask.begin(), params.usable_mask.end(),
                    [](uint8_t m) { return m != 0; }));
}

size_t BitCapacity(const RawImage& img, const StegoParams& params) {
  return UsableCount(img, params) / params.block_pixels;
}

RawImage Embed(const RawImage& key, const RawImage& cover,
               std::span<const uint8_t> bits, const StegoParams& params) {
  RequireSameShape(key, cover, "embed");
  const size_t capacity = BitCapacity(key, params);
  if (bits.size() != capacity) {
    throw Error(ErrorCode::kInvalidArgument,
                "message has " + std::to_string(bits.size()) +
                    " bits, image capacity is " + std::to_string(capacity));
  }
  RawImage stego = key;
  size_t slot = 0;
  for (size_t i = 0; i < key.size(); ++i) {
    if (!Usable(params, i)) continue;
    const size_t bit = slot++ / params.block_pixels;
    if (bit >= capacity) break;
    if (bits[bit]) stego[i] = cover[i];
  }
  return stego;
}

DecodedBits Extract(const RawImage& stego, const RawImage& key,
                    const StegoParams& params) {
  RequireSameShape(stego, key, "extract");
  const size_t capacity = BitCapacity(key, params);
  DecodedBits out{BitVector(capacity, 0), 0};
  size_t slot = 0;
  for (size_t i = 0; i < key.size(); ++i) {
    const bool differs = stego[i] != key[i];
    out.raw_mismatch_count += differs;
    if (!Usable(params, i)) continue;
    const size_t bit = slot++ / params.block_pixels;
    if (bit < capacity && differs) out.bits[bit] = 1;
  }
  return out;
}

double CollisionRate(const RawImage& a, const RawImage& b,
                     std::span<const uint8_t> usable_mask) {
  RequireSameShape(a, b, "collision_rate");
  if (!usable_mask.empty() && usable_mask.size() != a.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "usable mask size mismatch");
  }
  size_t equal = 0;
  size_t total = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!usable_mask.empty() && !usable_mask[i]) continue;
    ++total;
    equal += a[i] == b[i];
  }
  if (total == 0) {
    throw Error(ErrorCode::kInsufficientSamples, "no usable pixels");
  }
  return static_cast<double>(equal) / static_cast<double>(total);
}

double ExpectedCollisionRate(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  }
  if (lambda == 0.0) return 1.0;
  const double spread = 12.0 * std::sqrt(lambda);
  const double lo = std::max(0.0, std::floor(lambda - spread));
  const double hi = std::max(40.0, std::ceil(lambda + spread));
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  for (double k = lo; k <= hi; k += 1.0) {
    const double log_pmf = k * log_lambda - lambda - std::lgamma(k + 1.0);
    sum += std::exp(2.0 * log_pmf);
  }
  return sum;
}

}  // namespace qsteg
