#include "qsteg/statcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

void CheckRegion(const RawImage& img, const Region& r) {
  if (r.width == 0 || r.height == 0 || r.x + r.width > img.width() ||
      r.y + r.height > img.height()) {
    throw Error(ErrorCode::kInvalidArgument, "region out of bounds");
  }
}

template <typename F>
void ForEachInRegion(const RawImage& img, const Region& r, F&& f) {
  for (size_t y = r.y; y < r.y + r.height; ++y) {
    for (size_t x = r.x; x < r.x + r.width; ++x) f(img.at(x, y));
  }
}

int64_t FloorTo(int64_t v, int64_t step) {
  return v >= 0 ? v / step * step : -((-v + step - 1) / step) * step;
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Pair statistics need every pair total in the 5-pair window at least this
// large for the log-ratio prediction to be stable.
constexpr double kMinPairTotal = 10.0;

}  // namespace

Histogram MakeHistogram(const RawImage& img, const Region& region,
                        uint32_t bin_width) {
  CheckRegion(img, region);
  if (bin_width == 0) throw Error(ErrorCode::kInvalidArgument, "bin_width must be >= 1");
  uint16_t lo = 0xFFFF;
  uint16_t hi = 0;
  ForEachInRegion(img, region, [&](uint16_t v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  });
  const int64_t low = FloorTo(lo, bin_width);
  const size_t bins = static_cast<size_t>((hi - low) / bin_width + 1);
  return MakeHistogramFixed(img, region, low, bin_width, bins);
}

Histogram MakeHistogramFixed(const RawImage& img, const Region& region,
                             int64_t low, uint32_t bin_width, size_t bins) {
  CheckRegion(img, region);
  if (bin_width == 0 || bins == 0) {
    throw Error(ErrorCode::kInvalidArgument, "histogram needs >= 1 bin of width >= 1");
  }
  Histogram h{low, bin_width, std::vector<uint64_t>(bins, 0), 0};
  const int64_t last = static_cast<int64_t>(bins) - 1;
  ForEachInRegion(img, region, [&](uint16_t v) {
    const int64_t offset = static_cast<int64_t>(v) - low;
    const int64_t bin = offset < 0 ? 0 : std::min<int64_t>(offset / bin_width, last);
    ++h.counts[bin];
  });
  h.total = region.area();
  return h;
}

std::string HistogramCsv(const Histogram& h) {
  std::string out = "bin_low,bin_high,count\n";
  for (size_t i = 0; i < h.counts.size(); ++i) {
    out += std::to_string(h.bin_low(i)) + "," + std::to_string(h.bin_high(i)) +
           "," + std::to_string(h.counts[i]) + "\n";
  }
  return out;
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kInvalidArgument, "binning mismatch");
  }
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log2(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative residue for equal inputs.
  return std::max(sum, 0.0);
}

double KlDivergence(const Histogram& p, const Histogram& q, double smoothing) {
  if (!p.SameBinning(q)) {
    throw Error(ErrorCode::kInvalidArgument, "binning mismatch");
  }
  if (!(smoothing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing must be > 0");
  }
  const size_t n = p.counts.size();
  const double p_norm = static_cast<double>(p.total) + smoothing * n;
  const double q_norm = static_cast<double>(q.total) + smoothing * n;
  std::vector<double> pp(n), qq(n);
  for (size_t i = 0; i < n; ++i) {
    pp[i] = (p.counts[i] + smoothing) / p_norm;
    qq[i] = (q.counts[i] + smoothing) / q_norm;
  }
  return KlDivergence(pp, qq);
}

RawImage LsbEmbed(const RawImage& img, std::span<const uint8_t> bits) {
  if (bits.size() != img.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "LSB embedding needs one bit per pixel (" +
                    std::to_string(img.size()) + "), got " +
                    std::to_string(bits.size()));
  }
  RawImage out = img;
  for (size_t i = 0; i < img.size(); ++i) {
    out[i] = static_cast<uint16_t>((img[i] & ~1u) | (bits[i] & 1u));
  }
  return out;
}

std::vector<double> Autocorrelation(const RawImage& key, const RawImage& cover,
                                    size_t max_lag) {
  RequireSameShape(key, cover, "autocorrelation");
  if (max_lag >= key.width()) {
    throw Error(ErrorCode::kInvalidArgument, "max_lag must be < image width");
  }
  const size_t w = key.width();
  const size_t h = key.height();
  std::vector<double> d(key.size());
  for (size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<double>(key[i]) - static_cast<double>(cover[i]);
  }
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
  for (double& v : d) v -= mean;
  double var = 0.0;
  for (double v : d) var += v * v;
  var /= d.size();

  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  if (var == 0.0) return rho;
  for (size_t lag = 1; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (size_t y = 0; y < h; ++y) {
      const double* row = d.data() + y * w;
      for (size_t x = 0; x + lag < w; ++x) acc += row[x] * row[x + lag];
    }
    rho[lag] = acc / static_cast<double>(h * (w - lag)) / var;
  }
  return rho;
}

double NormalizedDeviation(const RawImage& key, const RawImage& cover) {
  RequireSameShape(key, cover, "normalized_deviation");
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < key.size(); ++i) {
    const double total = static_cast<double>(key[i]) + static_cast<double>(cover[i]);
    if (total < 16.0) continue;
    const double diff = static_cast<double>(key[i]) - static_cast<double>(cover[i]);
    sum += diff * diff / total;
    ++n;
  }
  if (n == 0) {
    throw Error(ErrorCode::kInsufficientSamples,
                "no pixels with K + C >= 16 for normalized deviation");
  }
  return std::sqrt(sum / n);
}

PairsOfValuesResult ChiSquareAttack(const RawImage& img, const Region& region) {
  CheckRegion(img, region);
  if (region.area() < kMinAttackPixels) {
    throw Error(ErrorCode::kInsufficientSamples,
                "pairs-of-values attack needs >= 10000 pixels, region has " +
                    std::to_string(region.area()));
  }
  Histogram hist = MakeHistogram(img, region, 1);
  // Align so bins 2k and 2k+1 form the pairs.
  if (hist.low % 2 != 0) {
    hist = MakeHistogramFixed(img, region, hist.low - 1, 1, hist.counts.size() + 1);
  }
  if (hist.counts.size() % 2 != 0) hist.counts.push_back(0);

  const size_t m = hist.counts.size() / 2;
  std::vector<double> total(m), diff(m);
  for (size_t k = 0; k < m; ++k) {
    const double even = static_cast<double>(hist.counts[2 * k]);
    const double odd = static_cast<double>(hist.counts[2 * k + 1]);
    total[k] = even + odd;
    diff[k] = even - odd;
  }

  PairsOfValuesResult out;
  out.samples = region.area();

  double numerator = 0.0;
  double variance = 0.0;
  for (size_t k = 2; k + 2 < m; ++k) {
    bool dense = true;
    for (size_t j = k - 2; j <= k + 2; ++j) dense = dense && total[j] >= kMinPairTotal;
    if (!dense) continue;
    // Local log-slope of the density across the pair, from pair totals only.
    const double slope = std::log(total[k + 1] / total[k - 1]) / 4.0;
    const double slope_far = std::log(total[k + 2] / total[k - 2]) / 8.0;
    const double t = std::tanh(slope / 2.0);
    const double predicted = -total[k] * t;
    const double weight = -total[k] * std::tanh(slope_far / 2.0);
    const double var_diff = total[k] * (1.0 - t * t);
    const double var_pred =
        total[k] * total[k] / 4.0 * (1.0 / total[k + 1] + 1.0 / total[k - 1]) / 16.0;
    numerator += weight * (diff[k] - predicted);
    variance += weight * weight * (var_diff + var_pred);
    ++out.pairs_used;
  }
  if (variance > 0.0) {
    out.z_score = numerator / std::sqrt(variance);
    out.p_value = NormalCdf(out.z_score);
  }

  size_t cells = 0;
  for (size_t k = 0; k < m; ++k) {
    if (total[k] < kMinPairTotal) continue;
    const double expected = total[k] / 2.0;
    const double dev = hist.counts[2 * k] - expected;
    out.equalization_chi2 += dev * dev / expected;
    ++cells;
  }
  if (cells >= 2) {
    out.dof = cells - 1;
    out.embedding_probability =
        boost::math::gamma_q(out.dof / 2.0, out.equalization_chi2 / 2.0);
  }
  return out;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientSamples, "quantile of empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

}  // namespace qsteg
