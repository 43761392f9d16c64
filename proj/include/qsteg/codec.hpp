#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qsteg {

using Bytes = std::vector<uint8_t>;

// One bit per element, each 0 or 1.
using BitVector = std::vector<uint8_t>;

inline constexpr int kRsBlockLength = 255;
inline constexpr int kDefaultParitySymbols = 8;
// [len: u32 BE][crc32: u32 BE]
inline constexpr size_t kFrameHeaderBytes = 8;

// Everything Alice and Bob share apart from the key image.
struct MessagePlan {
  Bytes payload;
  int parity_symbols = kDefaultParitySymbols;
  uint64_t mixing_seed = 0;
  size_t capacity_bits = 0;
  size_t block_pixels = 1;
};

// GF(2^8) arithmetic over x^8+x^4+x^3+x^2+1 with generator 2.
namespace gf256 {
uint8_t Add(uint8_t a, uint8_t b);
uint8_t Mul(uint8_t a, uint8_t b);
uint8_t Div(uint8_t a, uint8_t b);
uint8_t Pow(uint8_t a, int n);
uint8_t Inverse(uint8_t a);
uint8_t Exp(int n);  // alpha^n
int Log(uint8_t a);  // a must be nonzero
}  // namespace gf256

// Systematic Reed-Solomon code with `parity` check symbols, generator roots
// alpha^0 .. alpha^(parity-1). Blocks shorter than 255 are shortened codes.
class ReedSolomon {
 public:
  explicit ReedSolomon(int parity);

  int parity() const { return parity_; }

  // Returns only the parity bytes for `data` (length <= 255 - parity).
  Bytes Parity(std::span<const uint8_t> data) const;

  // Corrects `block` (data followed by parity) in place. Returns the number
  // of corrected symbols, or -1 if the block is beyond correction.
  int Correct(std::span<uint8_t> block) const;

  // Syndromes S_j = block(alpha^j), j = 0..parity-1.
  std::vector<uint8_t> Syndromes(std::span<const uint8_t> block) const;

 private:
  int parity_;
  std::vector<uint8_t> generator_;  // monic, highest degree first
};

uint32_t Crc32(std::span<const uint8_t> bytes);

// Frames payload as [len][crc32][payload], splits into blocks of
// 255 - parity data bytes (last one shorter) and appends parity per block.
Bytes RsEncode(std::span<const uint8_t> payload, int parity_symbols);

// Inverse of RsEncode. Throws kUncorrectableBlock or kCrcMismatch.
Bytes RsDecode(std::span<const uint8_t> coded, int parity_symbols);

// Coded length RsEncode produces for a payload of `payload_size` bytes.
size_t CodedLength(size_t payload_size, int parity_symbols);

// Largest payload whose coded form fits in `capacity_bytes`.
size_t MaxPayloadForCapacity(size_t capacity_bytes, int parity_symbols);

// Fisher-Yates shuffle of 0..slot_count-1 driven by splitmix64(seed).
std::vector<uint32_t> MixingPermutation(size_t slot_count, uint64_t mixing_seed);

// Byte b of `coded` goes to byte slot perm[b] (MSB first). All other bit
// positions receive keyed filler. perm covers capacity_bits / 8 slots.
BitVector Scatter(std::span<const uint8_t> coded,
                  std::span<const uint32_t> perm, size_t capacity_bits,
                  uint64_t mixing_seed);

// Reads the first coded_length bytes back out of their slots.
Bytes Gather(std::span<const uint8_t> bits, std::span<const uint32_t> perm,
             size_t coded_length);

// Bob's side when the coded length is not known in advance: finds the first
// block by trying every admissible length, reads the frame header, then
// gathers and decodes the full stream.
Bytes DecodeScattered(std::span<const uint8_t> bits,
                      std::span<const uint32_t> perm, int parity_symbols);

}  // namespace qsteg
