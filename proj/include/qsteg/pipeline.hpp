#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "qsteg/camera.hpp"
#include "qsteg/codec.hpp"
#include "qsteg/image.hpp"
#include "qsteg/stego.hpp"

namespace qsteg {

// Parameters shared out of band between Alice and Bob, besides K itself.
struct ProtocolParams {
  int parity_symbols = kDefaultParitySymbols;
  uint64_t mixing_seed = 0;
  size_t block_pixels = 1;
  uint32_t full_well = kDefaultFullWell;
};

// Stego parameters both sides derive from K: default mask plus group size.
StegoParams DeriveStegoParams(const RawImage& key, const ProtocolParams& params);

// Fills in capacity_bits and checks the coded payload fits.
MessagePlan PlanMessage(const RawImage& key, std::span<const uint8_t> payload,
                        const ProtocolParams& params);

// Largest payload in bytes that fits K under these parameters.
size_t MessageCapacity(const RawImage& key, const ProtocolParams& params);

// Alice: RS-encode, shuffle into byte slots, pad to capacity, pick pixels.
RawImage EmbedMessage(const RawImage& key, const RawImage& cover,
                      std::span<const uint8_t> payload,
                      const ProtocolParams& params);

// Bob: compare with K, undo the shuffle, correct and verify.
Bytes ExtractMessage(const RawImage& stego, const RawImage& key,
                     const ProtocolParams& params);

}  // namespace qsteg
