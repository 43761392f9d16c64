#include "qsteg.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qsteg/camera.hpp"
#include "qsteg/error.hpp"
#include "qsteg/image.hpp"
#include "qsteg/pipeline.hpp"
#include "qsteg/splitmix.hpp"
#include "qsteg/statcheck.hpp"

struct qs_image {
  qsteg::RawImage img;
};

struct qs_calibration {
  qsteg::Calibration cal;
};

struct qs_report {
  qsteg::AnalysisReport report;
};

namespace {

thread_local std::string g_last_error;

qs_status StatusFor(qsteg::ErrorCode code) {
  using qsteg::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return QS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return QS_ERR_DIMENSION;
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kUnsupportedBitDepth:
    case ErrorCode::kTruncatedData: return QS_ERR_FORMAT;
    case ErrorCode::kIo: return QS_ERR_IO;
    case ErrorCode::kCapacityExceeded: return QS_ERR_CAPACITY;
    case ErrorCode::kUncorrectableBlock:
    case ErrorCode::kCrcMismatch: return QS_ERR_DECODE;
    case ErrorCode::kMissingCalibration: return QS_ERR_CALIBRATION;
    case ErrorCode::kInsufficientSamples: return QS_ERR_INVALID_ARGUMENT;
  }
  return QS_ERR_INTERNAL;
}

qs_status Fail(qs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
qs_status Guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return QS_OK;
  } catch (const qsteg::Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(QS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(QS_ERR_INTERNAL, e.what());
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw qsteg::Error(qsteg::ErrorCode::kInvalidArgument, what);
}

qsteg::SceneRadiance SceneFrom(const qs_scene_spec* s) {
  Require(s != nullptr, "scene is NULL");
  qsteg::ScenePattern pattern;
  switch (s->pattern) {
    case QS_SCENE_FLAT: pattern = qsteg::ScenePattern::kFlat; break;
    case QS_SCENE_GRADIENT: pattern = qsteg::ScenePattern::kGradient; break;
    case QS_SCENE_PCB: pattern = qsteg::ScenePattern::kPcb; break;
    default: throw qsteg::Error(qsteg::ErrorCode::kInvalidArgument, "unknown scene pattern");
  }
  return qsteg::MakeScene(s->width, s->height, pattern, s->mean_level);
}

qsteg::SensorConfig SensorFrom(const qs_sensor_config* s) {
  Require(s != nullptr, "sensor config is NULL");
  qsteg::SensorConfig c;
  c.full_well = s->full_well;
  c.read_noise_sigma = s->read_noise_sigma;
  c.exposure_jitter_fraction = s->exposure_jitter_fraction;
  c.seed = s->seed;
  c.Validate();
  return c;
}

qsteg::ProtocolParams ParamsFrom(const qs_protocol_params* p) {
  Require(p != nullptr, "protocol params are NULL");
  Require(p->parity_symbols <= 254, "parity_symbols must be <= 254");
  qsteg::ProtocolParams out;
  out.parity_symbols = static_cast<int>(p->parity_symbols);
  out.mixing_seed = p->mixing_seed;
  out.block_pixels = p->block_pixels;
  out.full_well = p->full_well;
  return out;
}

qs_image* Wrap(qsteg::RawImage img) { return new qs_image{std::move(img)}; }

std::string SceneClass(const qs_scene_spec* s) {
  const char* names[] = {"flat", "gradient", "pcb"};
  const char* name = (s->pattern >= 0 && s->pattern <= 2) ? names[s->pattern] : "flat";
  return std::string(name) + ":" + std::to_string(s->width) + "x" +
         std::to_string(s->height) + ":" + qsteg::FormatReal(s->mean_level);
}

}  // namespace

extern "C" {

const char* qs_version(void) { return "1.0.0"; }

const char* qs_last_error(void) { return g_last_error.c_str(); }

const char* qs_status_name(qs_status status) {
  switch (status) {
    case QS_OK: return "ok";
    case QS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QS_ERR_IO: return "i/o error";
    case QS_ERR_FORMAT: return "format error";
    case QS_ERR_DIMENSION: return "dimension mismatch";
    case QS_ERR_CAPACITY: return "capacity exceeded";
    case QS_ERR_DECODE: return "decode failure";
    case QS_ERR_CALIBRATION: return "calibration error";
    case QS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qs_sensor_config_default(qs_sensor_config* out) {
  if (out == nullptr) return;
  out->full_well = qsteg::kDefaultFullWell;
  out->read_noise_sigma = 0.0;
  out->exposure_jitter_fraction = 0.0;
  out->seed = 0;
}

void qs_protocol_params_default(qs_protocol_params* out) {
  if (out == nullptr) return;
  out->parity_symbols = qsteg::kDefaultParitySymbols;
  out->mixing_seed = 0;
  out->block_pixels = 1;
  out->full_well = qsteg::kDefaultFullWell;
}

qs_status qs_parse_scene_pattern(const char* name, qs_scene_pattern* out) {
  return Guard([&] {
    Require(name != nullptr && out != nullptr, "NULL argument");
    switch (qsteg::ParseScenePattern(name)) {
      case qsteg::ScenePattern::kFlat: *out = QS_SCENE_FLAT; break;
      case qsteg::ScenePattern::kGradient: *out = QS_SCENE_GRADIENT; break;
      case qsteg::ScenePattern::kPcb: *out = QS_SCENE_PCB; break;
    }
  });
}

qs_status qs_image_create(uint32_t width, uint32_t height, qs_image** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle is NULL");
    *out = Wrap(qsteg::RawImage(width, height));
  });
}

qs_status qs_image_from_pixels(uint32_t width, uint32_t height,
                               const uint16_t* pixels, qs_image** out) {
  return Guard([&] {
    Require(out != nullptr && pixels != nullptr, "NULL argument");
    const size_t n = size_t{width} * height;
    *out = Wrap(qsteg::RawImage(width, height, std::vector<uint16_t>(pixels, pixels + n)));
  });
}

void qs_image_free(qs_image* img) { delete img; }

uint32_t qs_image_width(const qs_image* img) {
  return img ? static_cast<uint32_t>(img->img.width()) : 0;
}

uint32_t qs_image_height(const qs_image* img) {
  return img ? static_cast<uint32_t>(img->img.height()) : 0;
}

const uint16_t* qs_image_pixels(const qs_image* img) {
  return img ? img->img.pixels().data() : nullptr;
}

qs_status qs_image_read_pgm(const char* path, qs_image** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "NULL argument");
    *out = Wrap(qsteg::LoadPgm16(path));
  });
}

qs_status qs_image_write_pgm(const qs_image* img, const char* path) {
  return Guard([&] {
    Require(img != nullptr && path != nullptr, "NULL argument");
    qsteg::SavePgm16(img->img, path);
  });
}

qs_status qs_capture(const qs_scene_spec* scene, const qs_sensor_config* sensor,
                     uint64_t capture_index, qs_image** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle is NULL");
    *out = Wrap(qsteg::Capture(SceneFrom(scene), SensorFrom(sensor), capture_index));
  });
}

qs_status qs_capture_pair(const qs_scene_spec* scene, const qs_sensor_config* sensor,
                          qs_image** key_out, qs_image** cover_out) {
  return Guard([&] {
    Require(key_out != nullptr && cover_out != nullptr, "output handle is NULL");
    auto [key, cover] = qsteg::CapturePair(SceneFrom(scene), SensorFrom(sensor));
    *key_out = Wrap(std::move(key));
    *cover_out = Wrap(std::move(cover));
  });
}

qs_status qs_message_capacity(const qs_image* key, const qs_protocol_params* params,
                              size_t* bytes_out) {
  return Guard([&] {
    Require(key != nullptr && bytes_out != nullptr, "NULL argument");
    *bytes_out = qsteg::MessageCapacity(key->img, ParamsFrom(params));
  });
}

qs_status qs_embed_message(const qs_image* key, const qs_image* cover,
                           const uint8_t* message, size_t length,
                           const qs_protocol_params* params, qs_image** stego_out) {
  return Guard([&] {
    Require(key != nullptr && cover != nullptr && stego_out != nullptr, "NULL argument");
    Require(message != nullptr || length == 0, "message is NULL");
    const std::span<const uint8_t> payload(message, length);
    *stego_out = Wrap(qsteg::EmbedMessage(key->img, cover->img, payload, ParamsFrom(params)));
  });
}

qs_status qs_extract_message(const qs_image* stego, const qs_image* key,
                             const qs_protocol_params* params,
                             uint8_t** message_out, size_t* length_out) {
  return Guard([&] {
    Require(stego != nullptr && key != nullptr && message_out != nullptr &&
                length_out != nullptr,
            "NULL argument");
    const qsteg::Bytes msg = qsteg::ExtractMessage(stego->img, key->img, ParamsFrom(params));
    auto* buf = static_cast<uint8_t*>(std::malloc(std::max<size_t>(msg.size(), 1)));
    if (buf == nullptr) throw std::bad_alloc();
    std::copy(msg.begin(), msg.end(), buf);
    *message_out = buf;
    *length_out = msg.size();
  });
}

void qs_buffer_free(uint8_t* buffer) { std::free(buffer); }

qs_status qs_lsb_embed_random(const qs_image* img, uint64_t seed, qs_image** out) {
  return Guard([&] {
    Require(img != nullptr && out != nullptr, "NULL argument");
    qsteg::SplitMix64 rng(seed);
    qsteg::BitVector bits(img->img.size());
    for (size_t i = 0; i < bits.size(); i += 64) {
      const uint64_t word = rng.Next();
      for (size_t j = 0; j < 64 && i + j < bits.size(); ++j) bits[i + j] = (word >> j) & 1;
    }
    *out = Wrap(qsteg::LsbEmbed(img->img, bits));
  });
}

qs_status qs_write_histogram_pair_csv(const qs_image* a, const qs_image* b,
                                      uint32_t bin_width, const char* path_a,
                                      const char* path_b) {
  return Guard([&] {
    Require(a != nullptr && b != nullptr && path_a != nullptr && path_b != nullptr,
            "NULL argument");
    Require(bin_width >= 1, "bin_width must be >= 1");
    const auto ha = qsteg::MakeHistogram(a->img, qsteg::Region::Whole(a->img), bin_width);
    const auto hb = qsteg::MakeHistogram(b->img, qsteg::Region::Whole(b->img), bin_width);
    const int64_t low = std::min(ha.low, hb.low);
    const int64_t high = std::max(ha.bin_high(ha.counts.size() - 1),
                                  hb.bin_high(hb.counts.size() - 1));
    const size_t bins = static_cast<size_t>((high - low) / bin_width);
    const auto fa = qsteg::MakeHistogramFixed(a->img, qsteg::Region::Whole(a->img), low,
                                              bin_width, bins);
    const auto fb = qsteg::MakeHistogramFixed(b->img, qsteg::Region::Whole(b->img), low,
                                              bin_width, bins);
    const std::string ca = qsteg::HistogramCsv(fa);
    const std::string cb = qsteg::HistogramCsv(fb);
    qsteg::WriteFileAtomic(path_a, {reinterpret_cast<const uint8_t*>(ca.data()), ca.size()});
    qsteg::WriteFileAtomic(path_b, {reinterpret_cast<const uint8_t*>(cb.data()), cb.size()});
  });
}

qs_status qs_calibrate(const qs_scene_spec* scene, const qs_sensor_config* sensor,
                       uint32_t trials, uint32_t bin_width, const char* path) {
  return Guard([&] {
    Require(path != nullptr, "path is NULL");
    const auto cal = qsteg::Calibrate(SceneFrom(scene), SensorFrom(sensor), trials,
                                      bin_width, SceneClass(scene));
    const std::string text = qsteg::SerializeCalibration(cal);
    qsteg::WriteFileAtomic(path, {reinterpret_cast<const uint8_t*>(text.data()), text.size()});
  });
}

qs_status qs_calibration_load(const char* path, qs_calibration** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "NULL argument");
    const auto bytes = qsteg::ReadFileBytes(path);
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    *out = new qs_calibration{qsteg::ParseCalibration(text)};
  });
}

void qs_calibration_free(qs_calibration* cal) { delete cal; }

qs_status qs_ward_test(const qs_image* img, const qs_image* reference,
                       const qs_calibration* cal, qs_report** out) {
  return Guard([&] {
    Require(img != nullptr && out != nullptr, "NULL argument");
    if (cal == nullptr) {
      throw qsteg::Error(qsteg::ErrorCode::kMissingCalibration, "no calibration supplied");
    }
    *out = new qs_report{qsteg::WardTest(img->img, cal->cal,
                                         reference ? &reference->img : nullptr)};
  });
}

int qs_report_is_suspicious(const qs_report* report) {
  return report && report->report.verdict == qsteg::Verdict::kSuspicious;
}

double qs_report_kl_bits(const qs_report* report) {
  return report ? report->report.kl_bits : 0.0;
}

double qs_report_chi2_pvalue(const qs_report* report) {
  return report ? report->report.chi2_pvalue : 1.0;
}

qs_status qs_report_write(const qs_report* report, const char* path) {
  return Guard([&] {
    Require(report != nullptr && path != nullptr, "NULL argument");
    const std::string text = qsteg::WriteReport(report->report);
    qsteg::WriteFileAtomic(path, {reinterpret_cast<const uint8_t*>(text.data()), text.size()});
  });
}

void qs_report_free(qs_report* report) { delete report; }

qs_status qs_write_file(const char* path, const uint8_t* data, size_t length) {
  return Guard([&] {
    Require(path != nullptr && (data != nullptr || length == 0), "NULL argument");
    qsteg::WriteFileAtomic(path, {data, length});
  });
}

}  // extern "C"
