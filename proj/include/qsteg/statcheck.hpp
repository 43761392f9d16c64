#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsteg/camera.hpp"
#include "qsteg/codec.hpp"
#include "qsteg/image.hpp"
#include "qsteg/report.hpp"

namespace qsteg {

inline constexpr double kDefaultKlSmoothing = 0.5;
inline constexpr size_t kDefaultMaxLag = 8;
inline constexpr size_t kMinCalibrationTrials = 100;
inline constexpr size_t kMinAttackPixels = 10000;

struct Region {
  size_t x = 0;
  size_t y = 0;
  size_t width = 0;
  size_t height = 0;

  size_t area() const { return width * height; }
  static Region Whole(const RawImage& img) { return {0, 0, img.width(), img.height()}; }
};

// Contiguous bins [low + i*bin_width, low + (i+1)*bin_width).
struct Histogram {
  int64_t low = 0;
  uint32_t bin_width = 1;
  std::vector<uint64_t> counts;
  uint64_t total = 0;

  int64_t bin_low(size_t i) const { return low + static_cast<int64_t>(i) * bin_width; }
  int64_t bin_high(size_t i) const { return bin_low(i) + bin_width; }
  bool SameBinning(const Histogram& o) const {
    return low == o.low && bin_width == o.bin_width && counts.size() == o.counts.size();
  }
};

// Bins span the values present in the region, aligned to multiples of
// bin_width.
Histogram MakeHistogram(const RawImage& img, const Region& region, uint32_t bin_width);

// Fixed binning; values outside the range land in the first or last bin.
Histogram MakeHistogramFixed(const RawImage& img, const Region& region,
                             int64_t low, uint32_t bin_width, size_t bins);

// "bin_low,bin_high,count" rows under a header line.
std::string HistogramCsv(const Histogram& h);

// Relative entropy in bits between two probability vectors. Terms with p == 0
// contribute nothing; q must be positive wherever p is.
double KlDivergence(std::span<const double> p, std::span<const double> q);

// Adds `smoothing` to every bin of both histograms before normalizing.
double KlDivergence(const Histogram& p, const Histogram& q, double smoothing);

// Replaces the least significant bit of pixel i with bits[i].
RawImage LsbEmbed(const RawImage& img, std::span<const uint8_t> bits);

// Autocorrelation of D = K - C along rows at lags 0..max_lag, pooled over
// rows. Entry 0 is 1 by construction.
std::vector<double> Autocorrelation(const RawImage& key, const RawImage& cover,
                                    size_t max_lag);

// RMS of (K - C) / sqrt(K + C) over pixels with K + C >= 16. Pure shot noise
// gives 1.
double NormalizedDeviation(const RawImage& key, const RawImage& cover);

struct PairsOfValuesResult {
  // Probability, under the clean hypothesis, of pairs (2k, 2k+1) at least as
  // equalized as observed. Small values indicate LSB replacement.
  double p_value = 0.5;
  double z_score = 0.0;
  // Classic statistic against fully equalized pairs, with its degrees of
  // freedom and upper-tail probability.
  double equalization_chi2 = 0.0;
  size_t dof = 0;
  double embedding_probability = 0.0;
  size_t pairs_used = 0;
  size_t samples = 0;
};

// Pairs-of-values attack. Each pair's expected imbalance under a clean image
// is predicted from the neighbouring pair totals, which LSB replacement does
// not change; the observed imbalances are projected onto that prediction.
PairsOfValuesResult ChiSquareAttack(const RawImage& img, const Region& region);

// Null samples for each statistic, drawn from clean simulated captures.
struct Calibration {
  static constexpr int kVersion = 1;

  std::string scene_class;
  size_t trials = 0;
  size_t max_lag = kDefaultMaxLag;
  double kl_smoothing = kDefaultKlSmoothing;
  Histogram reference;  // pooled over the calibration covers
  uint64_t pixels_per_image = 0;

  std::vector<double> kl_bits;
  std::vector<double> chi2_pvalue;
  std::vector<double> autocorr_max;
  std::vector<double> norm_dev;
};

// Linear-interpolated sample quantile, q in [0, 1].
double Quantile(std::vector<double> values, double q);

Calibration Calibrate(const SceneRadiance& scene, const SensorConfig& sensor,
                      size_t trials, uint32_t bin_width,
                      std::string scene_class);

std::string SerializeCalibration(const Calibration& cal);
Calibration ParseCalibration(std::string_view text);

// Runs the detector battery against calibrated 99th-percentile thresholds.
// The reference enables the pair statistics (autocorrelation and normalized
// deviation); pass nullptr when the warden has only the image.
AnalysisReport WardTest(const RawImage& img, const Calibration& cal,
                        const RawImage* reference = nullptr);

}  // namespace qsteg
