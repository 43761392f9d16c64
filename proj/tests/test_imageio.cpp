#include <doctest.h>

#include <filesystem>
#include <string>

#include "qsteg/error.hpp"
#include "qsteg/image.hpp"
#include "qsteg/report.hpp"
#include "test_util.hpp"

using namespace qsteg;
using qsteg::testing::RandomBytes;

namespace {

std::vector<uint8_t> Raw(const std::string& s) { return {s.begin(), s.end()}; }

ErrorCode CodeOf(const std::vector<uint8_t>& bytes) {
  try {
    ReadPgm16(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("read_pgm16 decodes a single big-endian sample") {
  auto bytes = Raw("P5\n1 1\n65535\n");
  bytes.push_back(0x00);
  bytes.push_back(0x2A);
  const RawImage img = ReadPgm16(bytes);
  CHECK(img.width() == 1);
  CHECK(img.height() == 1);
  CHECK(img[0] == 42);
}

TEST_CASE("write_pgm16 emits the canonical header and big-endian samples") {
  const RawImage zero(1, 1, {0});
  auto expected = Raw("P5\n1 1\n65535\n");
  expected.push_back(0);
  expected.push_back(0);
  CHECK(WritePgm16(zero) == expected);

  const RawImage two(2, 1, {1, 256});
  const auto out = WritePgm16(two);
  const std::vector<uint8_t> samples(out.end() - 4, out.end());
  CHECK(samples == std::vector<uint8_t>{0x00, 0x01, 0x01, 0x00});
}

TEST_CASE("header parsing tolerates comments and arbitrary whitespace") {
  auto bytes = Raw("P5 # made by hand\n  3\t1 # width height\n65535\n");
  for (uint8_t b : {0, 1, 0, 2, 0xFF, 0xFF}) bytes.push_back(b);
  const RawImage img = ReadPgm16(bytes);
  CHECK(img.width() == 3);
  CHECK(img[0] == 1);
  CHECK(img[1] == 2);
  CHECK(img[2] == 65535);
}

TEST_CASE("format errors are reported distinctly") {
  CHECK(CodeOf(Raw("P2\n1 1\n65535\n\0\0")) == ErrorCode::kMalformedHeader);
  CHECK(CodeOf(Raw("P5\n1\n")) == ErrorCode::kMalformedHeader);
  CHECK(CodeOf(Raw("P5\n0 1\n65535\n")) == ErrorCode::kMalformedHeader);
  CHECK(CodeOf(Raw("P5\nx 1\n65535\n")) == ErrorCode::kMalformedHeader);
  CHECK(CodeOf(Raw("P5\n1 1\n255\n\x01")) == ErrorCode::kUnsupportedBitDepth);
  CHECK(CodeOf(Raw("P5\n2 2\n65535\n\x01\x02\x03")) == ErrorCode::kTruncatedData);
}

TEST_CASE("write then read is the identity on random images") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const size_t w = 1 + seed % 7;
    const size_t h = 1 + (seed * 5) % 11;
    const auto bytes = RandomBytes(2 * w * h, seed);
    std::vector<uint16_t> px(w * h);
    for (size_t i = 0; i < px.size(); ++i) px[i] = static_cast<uint16_t>(bytes[2 * i] << 8 | bytes[2 * i + 1]);
    const RawImage img(w, h, px);
    const auto encoded = WritePgm16(img);
    CHECK(ReadPgm16(encoded) == img);
    CHECK(WritePgm16(ReadPgm16(encoded)) == encoded);
  }
}

TEST_CASE("files are replaced atomically and round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "qsteg_imageio_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "img.pgm").string();
  const RawImage img(3, 2, {0, 1, 2, 65535, 4, 5});
  SavePgm16(img, path);
  CHECK(LoadPgm16(path) == img);
  size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(LoadPgm16((dir / "missing.pgm").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("image construction rejects inconsistent sizes") {
  CHECK_THROWS_AS(RawImage(2, 2, std::vector<uint16_t>(3)), Error);
  CHECK_THROWS_AS(RequireSameShape(RawImage(2, 2), RawImage(2, 3), "test"), Error);
}

TEST_CASE("report documents are canonical") {
  AnalysisReport r;
  r.kl_bits = 0.0;
  r.chi2_pvalue = 0.25;
  r.sample_sizes["kl_bits"] = 100;
  r.sample_sizes["chi2_pvalue"] = 100;
  const std::string doc = WriteReport(r);
  CHECK(doc.find("kl_bits = 0.0\n") != std::string::npos);
  CHECK(doc.find("autocorr_max = na\n") != std::string::npos);
  CHECK(doc.find('\r') == std::string::npos);
  CHECK(WriteReport(r) == doc);

  AnalysisReport other;
  other.kl_bits = 0.0;
  other.chi2_pvalue = 0.25;
  other.sample_sizes["chi2_pvalue"] = 100;
  other.sample_sizes["kl_bits"] = 100;
  CHECK(WriteReport(other) == doc);
  CHECK(doc.find("sample_size.chi2_pvalue") < doc.find("sample_size.kl_bits"));

  CHECK(FormatReal(1.0) == "1.0");
  CHECK(FormatReal(0.123456789123) == "0.123456789");
  CHECK(FormatReal(1e-12) == "1e-12");
}
