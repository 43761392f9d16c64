#include "qsteg/error.hpp"
#include "qsteg/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <unistd.h>

namespace qsteg {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kUnsupportedBitDepth: return "unsupported bit depth";
    case ErrorCode::kTruncatedData: return "truncated pixel data";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kCapacityExceeded: return "capacity exceeded";
    case ErrorCode::kUncorrectableBlock: return "uncorrectable block";
    case ErrorCode::kCrcMismatch: return "crc mismatch";
    case ErrorCode::kMissingCalibration: return "missing calibration";
    case ErrorCode::kInsufficientSamples: return "insufficient samples";
  }
  return "unknown error";
}

RawImage::RawImage(size_t width, size_t height)
    : RawImage(width, height, std::vector<uint16_t>(width * height, 0)) {}

RawImage::RawImage(size_t width, size_t height, std::vector<uint16_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions must be >= 1");
  }
  if (pixels_.size() != width * height) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel count does not match width x height");
  }
}

void RequireSameShape(const RawImage& a, const RawImage& b, const char* what) {
  if (!a.SameShape(b)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": images differ in size (" +
                    std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()) + ")");
  }
}

namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and comments, then parses one unsigned decimal token.
  uint64_t NextNumber(const char* name) {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedHeader,
                  std::string("malformed header: expected ") + name);
    }
    uint64_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFull) {
        throw Error(ErrorCode::kMalformedHeader,
                    std::string("malformed header: ") + name + " too large");
      }
      ++pos_;
    }
    return value;
  }

  void ExpectMagic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '5') {
      throw Error(ErrorCode::kMalformedHeader,
                  "malformed header: missing P5 magic");
    }
    pos_ = 2;
  }

  // The single whitespace byte that ends the header.
  void ExpectRasterSeparator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedHeader,
                  "malformed header: maxval must be followed by whitespace");
    }
    ++pos_;
  }

  size_t position() const { return pos_; }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace

RawImage ReadPgm16(std::span<const uint8_t> bytes) {
  HeaderScanner scan(bytes);
  scan.ExpectMagic();
  const uint64_t width = scan.NextNumber("width");
  const uint64_t height = scan.NextNumber("height");
  const uint64_t maxval = scan.NextNumber("maxval");
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kMalformedHeader,
                "malformed header: zero image dimension");
  }
  if (maxval != RawImage::kMaxValue) {
    throw Error(ErrorCode::kUnsupportedBitDepth,
                "unsupported bit depth: maxval " + std::to_string(maxval) +
                    " (only 65535 is accepted)");
  }
  scan.ExpectRasterSeparator();

  const size_t count = static_cast<size_t>(width * height);
  const size_t offset = scan.position();
  if (bytes.size() - offset < 2 * count) {
    throw Error(ErrorCode::kTruncatedData,
                "truncated pixel data: expected " + std::to_string(2 * count) +
                    " bytes, found " + std::to_string(bytes.size() - offset));
  }
  std::vector<uint16_t> pixels(count);
  const uint8_t* p = bytes.data() + offset;
  for (size_t i = 0; i < count; ++i) {
    pixels[i] = static_cast<uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
  }
  return RawImage(width, height, std::move(pixels));
}

std::vector<uint8_t> WritePgm16(const RawImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n65535\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + 2 * img.size());
  for (uint16_t v : img.pixels()) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v & 0xFF));
  }
  return out;
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  return bytes;
}

void WriteFileAtomic(const std::string& path, std::span<const uint8_t> bytes) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot create " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw Error(ErrorCode::kIo, "write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::kIo, "cannot rename onto " + path);
  }
}

RawImage LoadPgm16(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  return ReadPgm16(bytes);
}

void SavePgm16(const RawImage& img, const std::string& path) {
  WriteFileAtomic(path, WritePgm16(img));
}

}  // namespace qsteg
