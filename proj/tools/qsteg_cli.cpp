// qsteg command-line tool. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or format error,
// 3 decode failure, 4 suspicious verdict with --fail-on-suspicious.

#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsteg.h"

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitDecode = 3,
  kExitSuspicious = 4,
};

struct ImageDeleter {
  void operator()(qs_image* p) const { qs_image_free(p); }
};
struct CalibrationDeleter {
  void operator()(qs_calibration* p) const { qs_calibration_free(p); }
};
struct ReportDeleter {
  void operator()(qs_report* p) const { qs_report_free(p); }
};
using ImagePtr = std::unique_ptr<qs_image, ImageDeleter>;
using CalibrationPtr = std::unique_ptr<qs_calibration, CalibrationDeleter>;
using ReportPtr = std::unique_ptr<qs_report, ReportDeleter>;

// Thrown to unwind with a specific exit code after printing a message.
struct Exit {
  int code;
};

int ExitFor(qs_status status) {
  switch (status) {
    case QS_OK: return kExitOk;
    case QS_ERR_INVALID_ARGUMENT:
    case QS_ERR_CAPACITY: return kExitUsage;
    case QS_ERR_DECODE: return kExitDecode;
    default: return kExitIo;
  }
}

void Check(qs_status status, const std::string& context) {
  if (status == QS_OK) return;
  std::fprintf(stderr, "qsteg: %s: %s (%s)\n", context.c_str(), qs_last_error(),
               qs_status_name(status));
  throw Exit{ExitFor(status)};
}

ImagePtr ReadImage(const std::string& path) {
  qs_image* img = nullptr;
  Check(qs_image_read_pgm(path.c_str(), &img), "reading " + path);
  return ImagePtr(img);
}

std::vector<uint8_t> ReadMessage(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "qsteg: cannot open %s\n", path.c_str());
    throw Exit{kExitIo};
  }
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

struct SceneFlags {
  uint32_t width = 512;
  uint32_t height = 512;
  std::string pattern = "flat";
  double mean_level = 10000.0;
  qs_sensor_config sensor{};

  void Register(CLI::App* cmd) {
    qs_sensor_config_default(&sensor);
    cmd->add_option("--width", width, "Image width in pixels")->check(CLI::PositiveNumber);
    cmd->add_option("--height", height, "Image height in pixels")->check(CLI::PositiveNumber);
    cmd->add_option("--pattern", pattern, "Scene: flat, gradient or pcb")
        ->check(CLI::IsMember({"flat", "gradient", "pcb"}));
    cmd->add_option("--mean-level", mean_level, "Mean photon count")->check(CLI::NonNegativeNumber);
    cmd->add_option("--full-well", sensor.full_well, "Full-well capacity (electrons)")
        ->check(CLI::Range(1u, 65535u));
    cmd->add_option("--read-noise-sigma", sensor.read_noise_sigma, "Gaussian read noise")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--exposure-jitter-fraction", sensor.exposure_jitter_fraction,
                    "Per-capture exposure jitter bound")
        ->check(CLI::Range(0.0, 0.999999));
    cmd->add_option("--seed", sensor.seed, "Simulation seed");
  }

  qs_scene_spec Scene() const {
    qs_scene_spec spec{width, height, QS_SCENE_FLAT, mean_level};
    Check(qs_parse_scene_pattern(pattern.c_str(), &spec.pattern), "scene pattern");
    return spec;
  }
};

struct PlanFlags {
  qs_protocol_params params{};

  void Register(CLI::App* cmd) {
    qs_protocol_params_default(&params);
    cmd->add_option("--parity-symbols", params.parity_symbols, "RS parity bytes per 255-byte block")
        ->check(CLI::Range(2u, 254u));
    cmd->add_option("--mixing-seed", params.mixing_seed, "Seed of the byte-slot shuffle");
    cmd->add_option("--block-pixels", params.block_pixels, "Pixels per message bit")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--full-well", params.full_well, "Saturation level excluded from use")
        ->check(CLI::Range(1u, 65535u));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shot-noise key/cover steganography toolkit"};
  app.require_subcommand(1);

  // capture
  SceneFlags capture_scene;
  std::string key_out, cover_out;
  auto* capture = app.add_subcommand("capture", "Simulate the key and cover photographs");
  capture_scene.Register(capture);
  capture->add_option("--key-out", key_out, "Key image output (PGM)")->required();
  capture->add_option("--cover-out", cover_out, "Cover image output (PGM)")->required();

  // embed
  PlanFlags embed_plan;
  std::string embed_key, embed_cover, embed_message, embed_out;
  auto* embed = app.add_subcommand("embed", "Hide a message by choosing pixels from K or C");
  embed_plan.Register(embed);
  embed->add_option("--key", embed_key, "Key image (PGM)")->required();
  embed->add_option("--cover", embed_cover, "Cover image (PGM)")->required();
  embed->add_option("--message", embed_message, "Message file (raw bytes)")->required();
  embed->add_option("--out", embed_out, "Stego image output (PGM)")->required();

  // extract
  PlanFlags extract_plan;
  std::string extract_stego, extract_key, extract_out;
  auto* extract = app.add_subcommand("extract", "Recover a message with the key image");
  extract_plan.Register(extract);
  extract->add_option("--stego", extract_stego, "Stego image (PGM)")->required();
  extract->add_option("--key", extract_key, "Key image (PGM)")->required();
  extract->add_option("--out", extract_out, "Recovered message output")->required();

  // analyze
  std::string analyze_image, analyze_reference, analyze_calibration, analyze_out;
  bool fail_on_suspicious = false;
  auto* analyze = app.add_subcommand("analyze", "Run the steganalysis battery on an image");
  analyze->add_option("--image", analyze_image, "Image under test (PGM)")->required();
  analyze->add_option("--reference", analyze_reference,
                      "Second capture of the scene, enables pair statistics");
  analyze->add_option("--calibration", analyze_calibration, "Calibration file")->required();
  analyze->add_option("--out", analyze_out, "Report output")->required();
  analyze->add_flag("--fail-on-suspicious", fail_on_suspicious,
                    "Exit with status 4 when the verdict is suspicious");

  // demo-lsb
  std::string lsb_image, lsb_out, lsb_hist_original, lsb_hist_embedded;
  uint64_t lsb_seed = 0;
  uint32_t lsb_bin_width = 1;
  auto* demo = app.add_subcommand("demo-lsb", "LSB-replacement baseline with histogram dumps");
  demo->add_option("--image", lsb_image, "Input image (PGM)")->required();
  demo->add_option("--seed", lsb_seed, "Seed of the embedded random bits");
  demo->add_option("--out", lsb_out, "LSB-embedded image output (PGM)")->required();
  demo->add_option("--hist-original", lsb_hist_original, "Histogram CSV of the input")->required();
  demo->add_option("--hist-embedded", lsb_hist_embedded, "Histogram CSV of the output")->required();
  demo->add_option("--bin-width", lsb_bin_width, "Histogram bin width")->check(CLI::PositiveNumber);

  // calibrate
  SceneFlags cal_scene;
  uint32_t cal_trials = 100;
  uint32_t cal_bin_width = 1;
  std::string cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "Build detector null distributions");
  cal_scene.Register(calibrate);
  calibrate->add_option("--trials", cal_trials, "Number of clean capture pairs")
      ->check(CLI::PositiveNumber);
  calibrate->add_option("--bin-width", cal_bin_width, "Histogram bin width")
      ->check(CLI::PositiveNumber);
  calibrate->add_option("--out", cal_out, "Calibration file output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*capture) {
      const qs_scene_spec scene = capture_scene.Scene();
      qs_image* k = nullptr;
      qs_image* c = nullptr;
      Check(qs_capture_pair(&scene, &capture_scene.sensor, &k, &c), "capture");
      ImagePtr key(k), cover(c);
      Check(qs_image_write_pgm(key.get(), key_out.c_str()), "writing " + key_out);
      Check(qs_image_write_pgm(cover.get(), cover_out.c_str()), "writing " + cover_out);
    } else if (*embed) {
      ImagePtr key = ReadImage(embed_key);
      ImagePtr cover = ReadImage(embed_cover);
      const auto message = ReadMessage(embed_message);
      qs_image* s = nullptr;
      Check(qs_embed_message(key.get(), cover.get(), message.data(), message.size(),
                             &embed_plan.params, &s),
            "embed");
      ImagePtr stego(s);
      Check(qs_image_write_pgm(stego.get(), embed_out.c_str()), "writing " + embed_out);
    } else if (*extract) {
      ImagePtr stego = ReadImage(extract_stego);
      ImagePtr key = ReadImage(extract_key);
      uint8_t* buf = nullptr;
      size_t len = 0;
      Check(qs_extract_message(stego.get(), key.get(), &extract_plan.params, &buf, &len),
            "extract");
      std::unique_ptr<uint8_t, void (*)(uint8_t*)> owned(buf, qs_buffer_free);
      Check(qs_write_file(extract_out.c_str(), owned.get(), len), "writing " + extract_out);
    } else if (*analyze) {
      ImagePtr img = ReadImage(analyze_image);
      ImagePtr reference;
      if (!analyze_reference.empty()) reference = ReadImage(analyze_reference);
      qs_calibration* cal_raw = nullptr;
      Check(qs_calibration_load(analyze_calibration.c_str(), &cal_raw),
            "reading " + analyze_calibration);
      CalibrationPtr cal(cal_raw);
      qs_report* rep_raw = nullptr;
      Check(qs_ward_test(img.get(), reference.get(), cal.get(), &rep_raw), "analyze");
      ReportPtr report(rep_raw);
      Check(qs_report_write(report.get(), analyze_out.c_str()), "writing " + analyze_out);
      const bool suspicious = qs_report_is_suspicious(report.get()) != 0;
      std::printf("verdict: %s\n", suspicious ? "suspicious" : "clean");
      if (suspicious && fail_on_suspicious) return kExitSuspicious;
    } else if (*demo) {
      ImagePtr img = ReadImage(lsb_image);
      qs_image* out_raw = nullptr;
      Check(qs_lsb_embed_random(img.get(), lsb_seed, &out_raw), "demo-lsb");
      ImagePtr out(out_raw);
      Check(qs_image_write_pgm(out.get(), lsb_out.c_str()), "writing " + lsb_out);
      Check(qs_write_histogram_pair_csv(img.get(), out.get(), lsb_bin_width,
                                        lsb_hist_original.c_str(), lsb_hist_embedded.c_str()),
            "writing histograms");
    } else if (*calibrate) {
      const qs_scene_spec scene = cal_scene.Scene();
      Check(qs_calibrate(&scene, &cal_scene.sensor, cal_trials, cal_bin_width, cal_out.c_str()),
            "calibrate");
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitOk;
}
