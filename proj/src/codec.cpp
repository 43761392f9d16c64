#include "qsteg/codec.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <zlib.h>

#include "qsteg/error.hpp"
#include "qsteg/splitmix.hpp"

namespace qsteg {

namespace {

// "filler-1": keeps the filler stream apart from the shuffle stream.
constexpr uint64_t kFillerDomain = 0x66696C6C65722D31ull;

void PutBe32(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t GetBe32(std::span<const uint8_t> p) {
  return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) |
         (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

size_t DataPerBlock(int parity) { return kRsBlockLength - parity; }

}  // namespace

uint32_t Crc32(std::span<const uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths.
  size_t done = 0;
  while (done < bytes.size()) {
    const size_t chunk = std::min<size_t>(bytes.size() - done, 1u << 30);
    crc = crc32(crc, bytes.data() + done, static_cast<uInt>(chunk));
    done += chunk;
  }
  return static_cast<uint32_t>(crc);
}

size_t CodedLength(size_t payload_size, int parity_symbols) {
  const size_t framed = payload_size + kFrameHeaderBytes;
  const size_t k = DataPerBlock(parity_symbols);
  return framed + (framed + k - 1) / k * parity_symbols;
}

size_t MaxPayloadForCapacity(size_t capacity_bytes, int parity_symbols) {
  const size_t k = DataPerBlock(parity_symbols);
  const size_t full = capacity_bytes / kRsBlockLength;
  const size_t rest = capacity_bytes % kRsBlockLength;
  size_t data = full * k;
  if (rest > static_cast<size_t>(parity_symbols)) data += rest - parity_symbols;
  return data > kFrameHeaderBytes ? data - kFrameHeaderBytes : 0;
}

Bytes RsEncode(std::span<const uint8_t> payload, int parity_symbols) {
  const ReedSolomon rs(parity_symbols);
  if (payload.size() > 0xFFFFFFFFull - kFrameHeaderBytes) {
    throw Error(ErrorCode::kInvalidArgument, "payload too large to frame");
  }
  Bytes framed;
  framed.reserve(payload.size() + kFrameHeaderBytes);
  PutBe32(framed, static_cast<uint32_t>(payload.size()));
  PutBe32(framed, Crc32(payload));
  framed.insert(framed.end(), payload.begin(), payload.end());

  const size_t k = DataPerBlock(parity_symbols);
  Bytes coded;
  coded.reserve(CodedLength(payload.size(), parity_symbols));
  for (size_t off = 0; off < framed.size(); off += k) {
    const auto block =
        std::span<const uint8_t>(framed).subspan(off, std::min(k, framed.size() - off));
    coded.insert(coded.end(), block.begin(), block.end());
    const Bytes parity = rs.Parity(block);
    coded.insert(coded.end(), parity.begin(), parity.end());
  }
  return coded;
}

Bytes RsDecode(std::span<const uint8_t> coded, int parity_symbols) {
  const ReedSolomon rs(parity_symbols);
  Bytes framed;
  framed.reserve(coded.size());
  size_t off = 0;
  size_t index = 0;
  while (off < coded.size()) {
    const size_t len = std::min<size_t>(kRsBlockLength, coded.size() - off);
    if (len <= static_cast<size_t>(parity_symbols)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "coded length inconsistent with RS blocking");
    }
    Bytes block(coded.begin() + off, coded.begin() + off + len);
    if (rs.Correct(block) < 0) {
      throw Error(ErrorCode::kUncorrectableBlock,
                  "uncorrectable RS block " + std::to_string(index));
    }
    framed.insert(framed.end(), block.begin(), block.end() - parity_symbols);
    off += len;
    ++index;
  }
  if (framed.size() < kFrameHeaderBytes) {
    throw Error(ErrorCode::kCrcMismatch, "decoded frame shorter than its header");
  }
  const uint32_t length = GetBe32(framed);
  const uint32_t crc = GetBe32(std::span<const uint8_t>(framed).subspan(4));
  if (length != framed.size() - kFrameHeaderBytes) {
    throw Error(ErrorCode::kCrcMismatch,
                "frame length field " + std::to_string(length) +
                    " does not match decoded size " +
                    std::to_string(framed.size() - kFrameHeaderBytes));
  }
  Bytes payload(framed.begin() + kFrameHeaderBytes, framed.end());
  if (Crc32(payload) != crc) {
    throw Error(ErrorCode::kCrcMismatch, "payload CRC-32 mismatch");
  }
  return payload;
}

std::vector<uint32_t> MixingPermutation(size_t slot_count, uint64_t mixing_seed) {
  if (slot_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "slot_count must be >= 1");
  }
  if (slot_count > 0xFFFFFFFFull) {
    throw Error(ErrorCode::kInvalidArgument, "slot_count exceeds 2^32 - 1");
  }
  std::vector<uint32_t> perm(slot_count);
  for (size_t i = 0; i < slot_count; ++i) perm[i] = static_cast<uint32_t>(i);
  SplitMix64 rng(mixing_seed);
  for (size_t i = slot_count - 1; i > 0; --i) {
    const size_t j = rng.Below(i + 1);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

BitVector Scatter(std::span<const uint8_t> coded,
                  std::span<const uint32_t> perm, size_t capacity_bits,
                  uint64_t mixing_seed) {
  const size_t slots = capacity_bits / 8;
  if (perm.size() != slots) {
    throw Error(ErrorCode::kInvalidArgument,
                "permutation size " + std::to_string(perm.size()) +
                    " does not match " + std::to_string(slots) + " byte slots");
  }
  if (coded.size() > slots) {
    throw Error(ErrorCode::kCapacityExceeded,
                "message too large: " + std::to_string(coded.size()) +
                    " coded bytes, capacity " + std::to_string(slots));
  }
  BitVector bits(capacity_bits, 0);
  std::vector<bool> occupied(slots, false);
  for (size_t b = 0; b < coded.size(); ++b) {
    const size_t slot = perm[b];
    occupied[slot] = true;
    for (int k = 0; k < 8; ++k) bits[slot * 8 + k] = (coded[b] >> (7 - k)) & 1;
  }

  SplitMix64 filler(mixing_seed ^ kFillerDomain);
  uint64_t word = 0;
  int left = 0;
  for (size_t pos = 0; pos < capacity_bits; ++pos) {
    if (pos / 8 < slots && occupied[pos / 8]) continue;
    if (left == 0) {
      word = filler.Next();
      left = 64;
    }
    bits[pos] = static_cast<uint8_t>(word >> 63);
    word <<= 1;
    --left;
  }
  return bits;
}

Bytes Gather(std::span<const uint8_t> bits, std::span<const uint32_t> perm,
             size_t coded_length) {
  if (coded_length > perm.size() || bits.size() < 8 * perm.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "bit vector too short for " + std::to_string(coded_length) +
                    " coded bytes");
  }
  Bytes out(coded_length);
  for (size_t b = 0; b < coded_length; ++b) {
    const size_t base = size_t{perm[b]} * 8;
    uint8_t v = 0;
    for (int k = 0; k < 8; ++k) v = static_cast<uint8_t>((v << 1) | (bits[base + k] & 1));
    out[b] = v;
  }
  return out;
}

Bytes DecodeScattered(std::span<const uint8_t> bits,
                      std::span<const uint32_t> perm, int parity_symbols) {
  const ReedSolomon rs(parity_symbols);
  const size_t slots = perm.size();
  std::optional<Error> last_error;

  auto attempt = [&](size_t framed) -> std::optional<Bytes> {
    const size_t coded = CodedLength(framed - kFrameHeaderBytes, parity_symbols);
    if (coded > slots) return std::nullopt;
    try {
      return RsDecode(Gather(bits, perm, coded), parity_symbols);
    } catch (const Error& e) {
      last_error = e;
      return std::nullopt;
    }
  };

  // Walk the leading blocks. At each offset the block is either the last one
  // (any admissible length) or a full non-final block.
  Bytes prefix;
  size_t offset = 0;
  while (offset + parity_symbols < slots) {
    const size_t window = std::min<size_t>(kRsBlockLength, slots - offset);
    const Bytes head = Gather(bits, perm, offset + window);
    const auto tail = std::span<const uint8_t>(head).subspan(offset);

    for (size_t len = window; len > static_cast<size_t>(parity_symbols); --len) {
      const size_t framed = prefix.size() + len - parity_symbols;
      if (framed < kFrameHeaderBytes) break;
      Bytes block(tail.begin(), tail.begin() + len);
      if (rs.Correct(block) < 0) continue;
      Bytes candidate = prefix;
      candidate.insert(candidate.end(), block.begin(), block.end() - parity_symbols);
      if (GetBe32(candidate) + kFrameHeaderBytes != framed) continue;
      if (auto payload = attempt(framed)) return *payload;
    }

    if (window < static_cast<size_t>(kRsBlockLength)) break;
    Bytes block(tail.begin(), tail.end());
    if (rs.Correct(block) < 0) break;
    prefix.insert(prefix.end(), block.begin(), block.end() - parity_symbols);
    offset += kRsBlockLength;
    if (prefix.size() >= kFrameHeaderBytes) {
      const size_t framed = size_t{GetBe32(prefix)} + kFrameHeaderBytes;
      if (framed > prefix.size()) {
        if (auto payload = attempt(framed)) return *payload;
      }
      break;
    }
  }
  if (last_error) throw *last_error;
  throw Error(ErrorCode::kUncorrectableBlock,
              "no decodable RS frame found in extracted bits");
}

}  // namespace qsteg
