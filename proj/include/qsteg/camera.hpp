#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qsteg/image.hpp"
#include "qsteg/splitmix.hpp"

namespace qsteg {

inline constexpr uint32_t kDefaultFullWell = 50000;

enum class ScenePattern { kFlat, kGradient, kPcb };

ScenePattern ParseScenePattern(std::string_view name);
std::string_view ScenePatternName(ScenePattern pattern);

// Expected photon count per pixel, row-major.
struct SceneRadiance {
  size_t width = 0;
  size_t height = 0;
  std::vector<double> lambda;
};

struct SensorConfig {
  uint32_t full_well = kDefaultFullWell;
  double read_noise_sigma = 0.0;
  // Each capture is exposed for a factor drawn uniformly from [1-f, 1+f].
  double exposure_jitter_fraction = 0.0;
  uint64_t seed = 0;

  void Validate() const;
};

// flat: every pixel at mean_level.
// gradient: linear ramp from 0 at the first column to 2*mean_level at the
//   last one.
// pcb: 16x16 blocks of copper (1.5x the default full well, saturates),
//   board (mean_level) and unlit pads (0).
SceneRadiance MakeScene(size_t width, size_t height, ScenePattern pattern,
                        double mean_level);

// Multiplicative exposure factor used for a given capture.
double ExposureFactor(const SensorConfig& sensor, uint64_t capture_index);

// One exposure of the scene. Pixel i depends only on (seed, capture_index, i)
// so the result does not depend on evaluation order.
RawImage Capture(const SceneRadiance& scene, const SensorConfig& sensor,
                 uint64_t capture_index);

// Same as Capture but with an explicit exposure factor instead of the jitter
// draw.
RawImage CaptureWithExposure(const SceneRadiance& scene,
                             const SensorConfig& sensor,
                             uint64_t capture_index, double exposure);

// Key (capture 0) and cover (capture 1) of the same scene.
std::pair<RawImage, RawImage> CapturePair(const SceneRadiance& scene,
                                          const SensorConfig& sensor);

// Poisson variate driven by a caller-supplied stream: Knuth's product method
// below mean 60, rounded normal approximation above.
uint32_t SamplePoisson(double mean, SplitMix64& rng);

}  // namespace qsteg
