#include "qsteg/pipeline.hpp"

#include <string>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

std::vector<uint32_t> SlotPermutation(size_t capacity_bits, uint64_t seed) {
  const size_t slots = capacity_bits / 8;
  if (slots == 0) {
    throw Error(ErrorCode::kCapacityExceeded,
                "key image has no room for a single byte slot");
  }
  return MixingPermutation(slots, seed);
}

// The code constructor is the single place that range-checks parity.
void ValidateParity(int parity_symbols) { (void)ReedSolomon(parity_symbols); }

}  // namespace

StegoParams DeriveStegoParams(const RawImage& key, const ProtocolParams& params) {
  if (params.block_pixels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "block_pixels must be >= 1");
  }
  return StegoParams{params.block_pixels, DefaultMask(key, params.full_well)};
}

MessagePlan PlanMessage(const RawImage& key, std::span<const uint8_t> payload,
                        const ProtocolParams& params) {
  const StegoParams sp = DeriveStegoParams(key, params);
  MessagePlan plan;
  plan.payload.assign(payload.begin(), payload.end());
  plan.parity_symbols = params.parity_symbols;
  plan.mixing_seed = params.mixing_seed;
  plan.block_pixels = params.block_pixels;
  plan.capacity_bits = BitCapacity(key, sp);
  const size_t coded_bits = 8 * CodedLength(payload.size(), params.parity_symbols);
  if (coded_bits > plan.capacity_bits) {
    throw Error(ErrorCode::kCapacityExceeded,
                "message too large: needs " + std::to_string(coded_bits) +
                    " bits, image carries " + std::to_string(plan.capacity_bits));
  }
  return plan;
}

size_t MessageCapacity(const RawImage& key, const ProtocolParams& params) {
  const StegoParams sp = DeriveStegoParams(key, params);
  ValidateParity(params.parity_symbols);
  return MaxPayloadForCapacity(BitCapacity(key, sp) / 8, params.parity_symbols);
}

RawImage EmbedMessage(const RawImage& key, const RawImage& cover,
                      std::span<const uint8_t> payload,
                      const ProtocolParams& params) {
  RequireSameShape(key, cover, "embed");
  const MessagePlan plan = PlanMessage(key, payload, params);
  const Bytes coded = RsEncode(plan.payload, plan.parity_symbols);
  const auto perm = SlotPermutation(plan.capacity_bits, plan.mixing_seed);
  const BitVector bits = Scatter(coded, perm, plan.capacity_bits, plan.mixing_seed);
  return Embed(key, cover, bits, DeriveStegoParams(key, params));
}

Bytes ExtractMessage(const RawImage& stego, const RawImage& key,
                     const ProtocolParams& params) {
  RequireSameShape(stego, key, "extract");
  const StegoParams sp = DeriveStegoParams(key, params);
  ValidateParity(params.parity_symbols);
  const DecodedBits decoded = Extract(stego, key, sp);
  const auto perm = SlotPermutation(decoded.bits.size(), params.mixing_seed);
  return DecodeScattered(decoded.bits, perm, params.parity_symbols);
}

}  // namespace qsteg
