#include <array>
#include <string>

#include "qsteg/codec.hpp"
#include "qsteg/error.hpp"

namespace qsteg {

namespace {

constexpr unsigned kPrimitivePoly = 0x11D;

struct Tables {
  std::array<uint8_t, 512> exp{};
  std::array<int, 256> log{};

  constexpr Tables() {
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 0x100) x ^= kPrimitivePoly;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    log[0] = -1;
  }
};

constexpr Tables kTables;

// Polynomials are stored highest degree first, as on the wire.
uint8_t EvalHighFirst(std::span<const uint8_t> poly, uint8_t x) {
  uint8_t y = 0;
  for (uint8_t c : poly) y = gf256::Mul(y, x) ^ c;
  return y;
}

// Lowest degree first.
uint8_t EvalLowFirst(std::span<const uint8_t> poly, uint8_t x) {
  uint8_t y = 0;
  for (size_t i = poly.size(); i-- > 0;) y = gf256::Mul(y, x) ^ poly[i];
  return y;
}

}  // namespace

namespace gf256 {

uint8_t Add(uint8_t a, uint8_t b) { return a ^ b; }

uint8_t Mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

uint8_t Div(uint8_t a, uint8_t b) {
  if (b == 0) throw Error(ErrorCode::kInvalidArgument, "GF(256) division by zero");
  if (a == 0) return 0;
  return kTables.exp[(kTables.log[a] + 255 - kTables.log[b]) % 255];
}

uint8_t Pow(uint8_t a, int n) {
  if (a == 0) return n == 0 ? 1 : 0;
  int e = (kTables.log[a] * (n % 255)) % 255;
  if (e < 0) e += 255;
  return kTables.exp[e];
}

uint8_t Inverse(uint8_t a) { return Div(1, a); }

uint8_t Exp(int n) {
  n %= 255;
  if (n < 0) n += 255;
  return kTables.exp[n];
}

int Log(uint8_t a) {
  if (a == 0) throw Error(ErrorCode::kInvalidArgument, "log of zero in GF(256)");
  return kTables.log[a];
}

}  // namespace gf256

ReedSolomon::ReedSolomon(int parity) : parity_(parity) {
  if (parity < 2 || parity > 254 || parity % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "parity_symbols must be even and in [2, 254], got " +
                    std::to_string(parity));
  }
  // g(x) = prod_{i<parity} (x - alpha^i)
  generator_ = {1};
  for (int i = 0; i < parity; ++i) {
    std::vector<uint8_t> next(generator_.size() + 1, 0);
    const uint8_t root = gf256::Exp(i);
    for (size_t j = 0; j < generator_.size(); ++j) {
      next[j] ^= generator_[j];
      next[j + 1] ^= gf256::Mul(generator_[j], root);
    }
    generator_ = std::move(next);
  }
}

Bytes ReedSolomon::Parity(std::span<const uint8_t> data) const {
  if (data.size() + parity_ > kRsBlockLength) {
    throw Error(ErrorCode::kInvalidArgument, "RS block data too long");
  }
  // Remainder of data(x) * x^parity divided by g(x), by synthetic division.
  Bytes remainder(parity_, 0);
  for (uint8_t d : data) {
    const uint8_t factor = d ^ remainder[0];
    std::copy(remainder.begin() + 1, remainder.end(), remainder.begin());
    remainder.back() = 0;
    if (factor != 0) {
      for (int j = 0; j < parity_; ++j) {
        remainder[j] ^= gf256::Mul(generator_[j + 1], factor);
      }
    }
  }
  return remainder;
}

std::vector<uint8_t> ReedSolomon::Syndromes(std::span<const uint8_t> block) const {
  std::vector<uint8_t> s(parity_);
  for (int j = 0; j < parity_; ++j) s[j] = EvalHighFirst(block, gf256::Exp(j));
  return s;
}

int ReedSolomon::Correct(std::span<uint8_t> block) const {
  const int n = static_cast<int>(block.size());
  if (n <= parity_ || n > kRsBlockLength) return -1;

  const auto synd = Syndromes(block);
  bool clean = true;
  for (uint8_t s : synd) clean = clean && s == 0;
  if (clean) return 0;

  // Berlekamp-Massey; polynomials lowest degree first.
  std::vector<uint8_t> locator{1}, prev{1};
  int errors = 0;
  int shift = 1;
  uint8_t prev_discrepancy = 1;
  for (int r = 0; r < parity_; ++r) {
    uint8_t d = synd[r];
    for (int i = 1; i <= errors && i < static_cast<int>(locator.size()); ++i) {
      d ^= gf256::Mul(locator[i], synd[r - i]);
    }
    if (d == 0) {
      ++shift;
      continue;
    }
    const uint8_t coef = gf256::Div(d, prev_discrepancy);
    std::vector<uint8_t> updated = locator;
    if (updated.size() < prev.size() + shift) updated.resize(prev.size() + shift, 0);
    for (size_t i = 0; i < prev.size(); ++i) {
      updated[i + shift] ^= gf256::Mul(coef, prev[i]);
    }
    if (2 * errors <= r) {
      prev = locator;
      errors = r + 1 - errors;
      prev_discrepancy = d;
      shift = 1;
    } else {
      ++shift;
    }
    locator = std::move(updated);
  }
  while (locator.size() > 1 && locator.back() == 0) locator.pop_back();
  const int degree = static_cast<int>(locator.size()) - 1;
  if (degree != errors || 2 * errors > parity_) return -1;

  // Chien search: byte at index i has locator X = alpha^(n-1-i).
  std::vector<int> positions;
  for (int i = 0; i < n; ++i) {
    if (EvalLowFirst(locator, gf256::Exp(-(n - 1 - i))) == 0) positions.push_back(i);
  }
  if (static_cast<int>(positions.size()) != errors) return -1;

  // Forney: e = X * Omega(X^-1) / Lambda'(X^-1), with Omega = S * Lambda mod x^parity.
  std::vector<uint8_t> omega(parity_, 0);
  for (int i = 0; i < parity_; ++i) {
    for (int j = 0; j <= degree && j <= i; ++j) {
      omega[i] ^= gf256::Mul(synd[i - j], locator[j]);
    }
  }
  std::vector<uint8_t> derivative(degree, 0);
  for (int i = 1; i <= degree; i += 2) derivative[i - 1] = locator[i];

  for (int pos : positions) {
    const uint8_t x = gf256::Exp(n - 1 - pos);
    const uint8_t x_inv = gf256::Inverse(x);
    const uint8_t denom = EvalLowFirst(derivative, x_inv);
    if (denom == 0) return -1;
    block[pos] ^= gf256::Mul(x, gf256::Div(EvalLowFirst(omega, x_inv), denom));
  }

  for (uint8_t s : Syndromes(block)) {
    if (s != 0) return -1;
  }
  return errors;
}

}  // namespace qsteg
