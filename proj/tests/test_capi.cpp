#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qsteg.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qsteg_capi_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

qs_scene_spec Flat(uint32_t w, uint32_t h, double mean) {
  return qs_scene_spec{w, h, QS_SCENE_FLAT, mean};
}

}  // namespace

TEST_CASE("status names and defaults") {
  CHECK(std::strcmp(qs_status_name(QS_OK), "ok") == 0);
  CHECK(std::strcmp(qs_status_name(QS_ERR_DECODE), "decode failure") == 0);
  CHECK(std::strlen(qs_version()) > 0);
  qs_protocol_params p;
  qs_protocol_params_default(&p);
  CHECK(p.parity_symbols == 8);
  CHECK(p.block_pixels == 1);
  CHECK(p.full_well == 50000);
  qs_sensor_config s;
  qs_sensor_config_default(&s);
  CHECK(s.full_well == 50000);
  qs_scene_pattern pat;
  CHECK(qs_parse_scene_pattern("gradient", &pat) == QS_OK);
  CHECK(pat == QS_SCENE_GRADIENT);
  CHECK(qs_parse_scene_pattern("nope", &pat) == QS_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(qs_last_error()) > 0);
}

TEST_CASE("images through the C interface") {
  const uint16_t px[] = {1, 2, 3, 65535, 0, 42};
  qs_image* img = nullptr;
  REQUIRE(qs_image_from_pixels(3, 2, px, &img) == QS_OK);
  CHECK(qs_image_width(img) == 3);
  CHECK(qs_image_height(img) == 2);
  CHECK(std::memcmp(qs_image_pixels(img), px, sizeof px) == 0);

  TempDir dir;
  const std::string path = dir / "a.pgm";
  REQUIRE(qs_image_write_pgm(img, path.c_str()) == QS_OK);
  qs_image* back = nullptr;
  REQUIRE(qs_image_read_pgm(path.c_str(), &back) == QS_OK);
  CHECK(std::memcmp(qs_image_pixels(back), px, sizeof px) == 0);
  qs_image_free(back);
  qs_image_free(img);

  std::ofstream(dir / "bad.pgm") << "P5\n1 1\n255\n\x01";
  qs_image* none = nullptr;
  CHECK(qs_image_read_pgm((dir / "bad.pgm").c_str(), &none) == QS_ERR_FORMAT);
  CHECK(none == nullptr);
  CHECK(qs_image_read_pgm((dir / "missing.pgm").c_str(), &none) == QS_ERR_IO);
  CHECK(qs_image_create(0, 3, &none) == QS_ERR_INVALID_ARGUMENT);
  CHECK(qs_image_read_pgm(nullptr, &none) == QS_ERR_INVALID_ARGUMENT);
  qs_image_free(nullptr);
}

TEST_CASE("message round trip and wrong key") {
  const qs_scene_spec scene = Flat(128, 128, 10000);
  qs_sensor_config sensor;
  qs_sensor_config_default(&sensor);
  sensor.seed = 4;
  qs_image *k = nullptr, *c = nullptr, *wrong = nullptr;
  REQUIRE(qs_capture_pair(&scene, &sensor, &k, &c) == QS_OK);
  REQUIRE(qs_capture(&scene, &sensor, 2, &wrong) == QS_OK);

  qs_protocol_params params;
  qs_protocol_params_default(&params);
  size_t cap = 0;
  REQUIRE(qs_message_capacity(k, &params, &cap) == QS_OK);
  CHECK(cap > 1000);

  const std::string msg = "meet me under the old oak at dawn";
  qs_image* s = nullptr;
  REQUIRE(qs_embed_message(k, c, reinterpret_cast<const uint8_t*>(msg.data()), msg.size(),
                           &params, &s) == QS_OK);
  uint8_t* out = nullptr;
  size_t len = 0;
  REQUIRE(qs_extract_message(s, k, &params, &out, &len) == QS_OK);
  CHECK(std::string(reinterpret_cast<char*>(out), len) == msg);
  qs_buffer_free(out);

  out = nullptr;
  CHECK(qs_extract_message(s, wrong, &params, &out, &len) == QS_ERR_DECODE);
  CHECK(out == nullptr);

  std::vector<uint8_t> big(cap + 1, 7);
  qs_image* none = nullptr;
  CHECK(qs_embed_message(k, c, big.data(), big.size(), &params, &none) == QS_ERR_CAPACITY);
  params.parity_symbols = 3;
  CHECK(qs_embed_message(k, c, big.data(), 1, &params, &none) == QS_ERR_INVALID_ARGUMENT);
  CHECK(none == nullptr);

  qs_image* odd = nullptr;
  REQUIRE(qs_image_create(4, 4, &odd) == QS_OK);
  qs_protocol_params_default(&params);
  CHECK(qs_extract_message(s, odd, &params, &out, &len) == QS_ERR_DIMENSION);

  for (qs_image* img : {k, c, wrong, s, odd}) qs_image_free(img);
}

TEST_CASE("analysis through the C interface") {
  TempDir dir;
  const qs_scene_spec scene = Flat(128, 128, 100);
  qs_sensor_config sensor;
  qs_sensor_config_default(&sensor);
  const std::string cal_path = dir / "cal.txt";
  CHECK(qs_calibrate(&scene, &sensor, 20, 1, (dir / "small.txt").c_str()) == QS_OK);
  REQUIRE(qs_calibrate(&scene, &sensor, 100, 1, cal_path.c_str()) == QS_OK);

  qs_calibration* small = nullptr;
  REQUIRE(qs_calibration_load((dir / "small.txt").c_str(), &small) == QS_OK);
  qs_calibration* cal = nullptr;
  REQUIRE(qs_calibration_load(cal_path.c_str(), &cal) == QS_OK);

  sensor.seed = 77;
  qs_image *k = nullptr, *c = nullptr, *lsb = nullptr;
  REQUIRE(qs_capture_pair(&scene, &sensor, &k, &c) == QS_OK);
  REQUIRE(qs_lsb_embed_random(c, 5, &lsb) == QS_OK);

  qs_report* r = nullptr;
  CHECK(qs_ward_test(c, k, small, &r) == QS_ERR_CALIBRATION);
  CHECK(qs_ward_test(c, k, nullptr, &r) == QS_ERR_CALIBRATION);
  REQUIRE(qs_ward_test(c, k, cal, &r) == QS_OK);
  CHECK(qs_report_kl_bits(r) >= 0.0);
  CHECK(qs_report_chi2_pvalue(r) > 0.0);
  REQUIRE(qs_report_write(r, (dir / "report.txt").c_str()) == QS_OK);
  qs_report_free(r);

  REQUIRE(qs_ward_test(lsb, nullptr, cal, &r) == QS_OK);
  CHECK(qs_report_is_suspicious(r) == 1);
  qs_report_free(r);

  REQUIRE(qs_write_histogram_pair_csv(c, lsb, 1, (dir / "a.csv").c_str(),
                                      (dir / "b.csv").c_str()) == QS_OK);
  std::ifstream a(dir / "a.csv"), b(dir / "b.csv");
  std::string la, lb;
  std::getline(a, la);
  CHECK(la == "bin_low,bin_high,count");
  size_t rows_a = 0, rows_b = 0;
  while (std::getline(a, la)) ++rows_a;
  std::getline(b, lb);
  while (std::getline(b, lb)) ++rows_b;
  CHECK(rows_a == rows_b);

  std::ofstream(dir / "junk.txt") << "qsteg-calibration v9\n";
  qs_calibration* junk = nullptr;
  CHECK(qs_calibration_load((dir / "junk.txt").c_str(), &junk) == QS_ERR_FORMAT);

  for (qs_image* img : {k, c, lsb}) qs_image_free(img);
  qs_calibration_free(cal);
  qs_calibration_free(small);
}

TEST_CASE("whole-file writes") {
  TempDir dir;
  const uint8_t data[] = {1, 2, 3};
  REQUIRE(qs_write_file((dir / "x.bin").c_str(), data, 3) == QS_OK);
  CHECK(fs::file_size(dir / "x.bin") == 3);
  CHECK(qs_write_file((dir / "no/such/dir/x.bin").c_str(), data, 3) == QS_ERR_IO);
}
