#include "qsteg/camera.hpp"

#include <cmath>
#include <string>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

constexpr size_t kPcbBlock = 16;
constexpr double kPcbCopperLevel = 1.5 * kDefaultFullWell;
constexpr double kNormalApproxThreshold = 60.0;

// Stream keys; the exposure stream is separated from the pixel streams.
constexpr uint64_t kExposureDomain = 0x6A09E667F3BCC909ull;

uint64_t CaptureKey(uint64_t seed, uint64_t capture_index) {
  return SplitMixFinalize(seed ^ SplitMixFinalize(capture_index + kSplitMixIncrement));
}

// Inverse normal CDF by Acklam's rational approximation (relative error
// below 1.2e-9), fed by one uniform in (0, 1). One draw per variate keeps
// every pixel's stream consumption fixed, and the central branch avoids
// transcendental calls.
double StandardNormal(SplitMix64& rng) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  const double p = (static_cast<double>(rng.Next() >> 11) + 0.5) * 0x1.0p-53;
  if (p < kLow || p > 1.0 - kLow) {
    const double q = std::sqrt(-2.0 * std::log(p < kLow ? p : 1.0 - p));
    const double x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                     ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    return p < kLow ? x : -x;
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

ScenePattern ParseScenePattern(std::string_view name) {
  if (name == "flat") return ScenePattern::kFlat;
  if (name == "gradient") return ScenePattern::kGradient;
  if (name == "pcb") return ScenePattern::kPcb;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scene pattern '" + std::string(name) + "'");
}

std::string_view ScenePatternName(ScenePattern pattern) {
  switch (pattern) {
    case ScenePattern::kFlat: return "flat";
    case ScenePattern::kGradient: return "gradient";
    case ScenePattern::kPcb: return "pcb";
  }
  return "flat";
}

void SensorConfig::Validate() const {
  if (full_well == 0 || full_well > RawImage::kMaxValue) {
    throw Error(ErrorCode::kInvalidArgument,
                "full_well must be in [1, 65535]");
  }
  if (!(read_noise_sigma >= 0.0) || !std::isfinite(read_noise_sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "read_noise_sigma must be >= 0");
  }
  if (!(exposure_jitter_fraction >= 0.0 && exposure_jitter_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "exposure_jitter_fraction must be in [0, 1)");
  }
}

SceneRadiance MakeScene(size_t width, size_t height, ScenePattern pattern,
                        double mean_level) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kInvalidArgument, "scene dimensions must be >= 1");
  }
  if (!(mean_level >= 0.0) || !std::isfinite(mean_level)) {
    throw Error(ErrorCode::kInvalidArgument, "mean_level must be >= 0");
  }
  SceneRadiance scene{width, height, std::vector<double>(width * height)};
  for (size_t y = 0; y < height; ++y) {
    for (size_t x = 0; x < width; ++x) {
      double level = mean_level;
      switch (pattern) {
        case ScenePattern::kFlat:
          break;
        case ScenePattern::kGradient:
          level = width == 1 ? mean_level
                             : 2.0 * mean_level * static_cast<double>(x) /
                                   static_cast<double>(width - 1);
          break;
        case ScenePattern::kPcb: {
          const size_t bx = x / kPcbBlock;
          const size_t by = y / kPcbBlock;
          if ((bx + 2 * by) % 7 == 0) {
            level = kPcbCopperLevel;
          } else if ((3 * bx + by) % 11 == 4) {
            level = 0.0;
          }
          break;
        }
      }
      scene.lambda[y * width + x] = level;
    }
  }
  return scene;
}

uint32_t SamplePoisson(double mean, SplitMix64& rng) {
  if (mean <= 0.0) return 0;
  if (mean < kNormalApproxThreshold) {
    const double limit = std::exp(-mean);
    uint32_t k = 0;
    double product = rng.Uniform();
    while (product > limit) {
      ++k;
      product *= rng.Uniform();
    }
    return k;
  }
  const double v = std::round(mean + std::sqrt(mean) * StandardNormal(rng));
  if (v <= 0.0) return 0;
  if (v >= 4294967295.0) return 0xFFFFFFFFu;
  return static_cast<uint32_t>(v);
}

double ExposureFactor(const SensorConfig& sensor, uint64_t capture_index) {
  if (sensor.exposure_jitter_fraction == 0.0) return 1.0;
  SplitMix64 rng(CaptureKey(sensor.seed, capture_index) ^ kExposureDomain);
  const double u = rng.Uniform();
  return 1.0 + sensor.exposure_jitter_fraction * (2.0 * u - 1.0);
}

RawImage CaptureWithExposure(const SceneRadiance& scene,
                             const SensorConfig& sensor,
                             uint64_t capture_index, double exposure) {
  sensor.Validate();
  if (scene.width == 0 || scene.height == 0 ||
      scene.lambda.size() != scene.width * scene.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scene radiance does not match its dimensions");
  }
  if (!(exposure >= 0.0) || !std::isfinite(exposure)) {
    throw Error(ErrorCode::kInvalidArgument, "exposure must be >= 0");
  }

  const uint64_t key = CaptureKey(sensor.seed, capture_index);
  const double full_well = sensor.full_well;
  RawImage img(scene.width, scene.height);
  for (size_t i = 0; i < scene.lambda.size(); ++i) {
    SplitMix64 rng(SplitMixFinalize(key + i * kSplitMixIncrement));
    double count = SamplePoisson(exposure * scene.lambda[i], rng);
    if (sensor.read_noise_sigma > 0.0) {
      count += std::round(sensor.read_noise_sigma * StandardNormal(rng));
    }
    if (count < 0.0) count = 0.0;
    if (count > full_well) count = full_well;
    img[i] = static_cast<uint16_t>(count);
  }
  return img;
}

RawImage Capture(const SceneRadiance& scene, const SensorConfig& sensor,
                 uint64_t capture_index) {
  sensor.Validate();
  return CaptureWithExposure(scene, sensor, capture_index,
                             ExposureFactor(sensor, capture_index));
}

std::pair<RawImage, RawImage> CapturePair(const SceneRadiance& scene,
                                          const SensorConfig& sensor) {
  return {Capture(scene, sensor, 0), Capture(scene, sensor, 1)};
}

}  // namespace qsteg
