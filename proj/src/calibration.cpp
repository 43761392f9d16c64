#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "qsteg/error.hpp"
#include "qsteg/splitmix.hpp"
#include "qsteg/statcheck.hpp"

namespace qsteg {

namespace {

constexpr uint64_t kCalibrationDomain = 0x63616C6962726174ull;  // "calibrat"
constexpr double kNullQuantile = 0.99;
constexpr const char* kMagic = "qsteg-calibration";

double MaxAbsLag(const std::vector<double>& rho) {
  double m = 0.0;
  for (size_t i = 1; i < rho.size(); ++i) m = std::max(m, std::abs(rho[i]));
  return m;
}

std::string Exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void WriteSamples(std::ostringstream& out, const char* name,
                  const std::vector<double>& values) {
  out << "null." << name << ' ' << values.size();
  for (double v : values) out << ' ' << Exact(v);
  out << '\n';
}

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedHeader, "malformed calibration file: " + what);
}

}  // namespace

Calibration Calibrate(const SceneRadiance& scene, const SensorConfig& sensor,
                      size_t trials, uint32_t bin_width, std::string scene_class) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (bin_width == 0) throw Error(ErrorCode::kInvalidArgument, "bin_width must be >= 1");
  SensorConfig cal_sensor = sensor;
  cal_sensor.seed = SplitMixFinalize(sensor.seed ^ kCalibrationDomain);

  // Pass 1 fixes the reference binning from the covers' value range.
  uint16_t lo = 0xFFFF, hi = 0;
  for (size_t t = 0; t < trials; ++t) {
    const RawImage cover = Capture(scene, cal_sensor, 2 * t + 1);
    const auto [mn, mx] = std::minmax_element(cover.pixels().begin(), cover.pixels().end());
    lo = std::min(lo, *mn);
    hi = std::max(hi, *mx);
  }
  const int64_t low = lo / bin_width * bin_width;
  const size_t bins = (hi - low) / bin_width + 1;

  Calibration cal;
  cal.scene_class = std::move(scene_class);
  cal.trials = trials;
  cal.pixels_per_image = scene.width * scene.height;
  cal.reference = Histogram{low, bin_width, std::vector<uint64_t>(bins, 0), 0};

  std::vector<Histogram> key_hists;
  key_hists.reserve(trials);
  const Region whole{0, 0, scene.width, scene.height};
  for (size_t t = 0; t < trials; ++t) {
    const RawImage key = Capture(scene, cal_sensor, 2 * t);
    const RawImage cover = Capture(scene, cal_sensor, 2 * t + 1);
    const Histogram ch = MakeHistogramFixed(cover, whole, low, bin_width, bins);
    for (size_t i = 0; i < bins; ++i) cal.reference.counts[i] += ch.counts[i];
    cal.reference.total += ch.total;
    key_hists.push_back(MakeHistogramFixed(key, whole, low, bin_width, bins));

    cal.chi2_pvalue.push_back(ChiSquareAttack(key, whole).p_value);
    if (cal.max_lag < key.width()) {
      cal.autocorr_max.push_back(MaxAbsLag(Autocorrelation(key, cover, cal.max_lag)));
    }
    try {
      cal.norm_dev.push_back(NormalizedDeviation(key, cover));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientSamples) throw;
    }
  }
  for (const auto& h : key_hists) {
    cal.kl_bits.push_back(KlDivergence(h, cal.reference, cal.kl_smoothing));
  }
  return cal;
}

std::string SerializeCalibration(const Calibration& cal) {
  std::ostringstream out;
  out << kMagic << " v" << Calibration::kVersion << '\n';
  out << "scene " << (cal.scene_class.empty() ? "-" : cal.scene_class) << '\n';
  out << "trials " << cal.trials << '\n';
  out << "pixels_per_image " << cal.pixels_per_image << '\n';
  out << "max_lag " << cal.max_lag << '\n';
  out << "kl_smoothing " << Exact(cal.kl_smoothing) << '\n';
  out << "reference " << cal.reference.low << ' ' << cal.reference.bin_width << ' '
      << cal.reference.counts.size();
  for (uint64_t c : cal.reference.counts) out << ' ' << c;
  out << '\n';
  WriteSamples(out, "kl_bits", cal.kl_bits);
  WriteSamples(out, "chi2_pvalue", cal.chi2_pvalue);
  WriteSamples(out, "autocorr_max", cal.autocorr_max);
  WriteSamples(out, "norm_dev", cal.norm_dev);
  return out.str();
}

Calibration ParseCalibration(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic, version;
  if (!(in >> magic >> version) || magic != kMagic) Malformed("missing header");
  if (version != "v" + std::to_string(Calibration::kVersion)) {
    Malformed("unsupported version " + version);
  }

  Calibration cal;
  bool have_reference = false;
  std::string key;
  while (in >> key) {
    if (key == "scene") {
      if (!(in >> cal.scene_class)) Malformed("scene");
    } else if (key == "trials") {
      if (!(in >> cal.trials)) Malformed("trials");
    } else if (key == "pixels_per_image") {
      if (!(in >> cal.pixels_per_image)) Malformed("pixels_per_image");
    } else if (key == "max_lag") {
      if (!(in >> cal.max_lag)) Malformed("max_lag");
    } else if (key == "kl_smoothing") {
      if (!(in >> cal.kl_smoothing) || !(cal.kl_smoothing > 0)) Malformed("kl_smoothing");
    } else if (key == "reference") {
      size_t bins = 0;
      if (!(in >> cal.reference.low >> cal.reference.bin_width >> bins) ||
          cal.reference.bin_width == 0 || bins == 0) {
        Malformed("reference");
      }
      cal.reference.counts.resize(bins);
      cal.reference.total = 0;
      for (auto& c : cal.reference.counts) {
        if (!(in >> c)) Malformed("reference counts");
        cal.reference.total += c;
      }
      have_reference = true;
    } else if (key.rfind("null.", 0) == 0) {
      const std::string name = key.substr(5);
      std::vector<double>* target = nullptr;
      if (name == "kl_bits") target = &cal.kl_bits;
      else if (name == "chi2_pvalue") target = &cal.chi2_pvalue;
      else if (name == "autocorr_max") target = &cal.autocorr_max;
      else if (name == "norm_dev") target = &cal.norm_dev;
      else Malformed("unknown statistic " + name);
      size_t n = 0;
      if (!(in >> n)) Malformed(key);
      target->resize(n);
      for (double& v : *target) {
        if (!(in >> v)) Malformed(key + " samples");
      }
    } else {
      Malformed("unknown field " + key);
    }
  }
  if (!have_reference) Malformed("missing reference histogram");
  if (cal.scene_class == "-") cal.scene_class.clear();
  return cal;
}

AnalysisReport WardTest(const RawImage& img, const Calibration& cal,
                        const RawImage* reference) {
  if (cal.trials < kMinCalibrationTrials || cal.kl_bits.size() < kMinCalibrationTrials ||
      cal.chi2_pvalue.size() < kMinCalibrationTrials || cal.reference.counts.empty()) {
    throw Error(ErrorCode::kMissingCalibration,
                "calibration must hold >= 100 clean trials, has " +
                    std::to_string(cal.trials));
  }
  if (img.size() != cal.pixels_per_image) {
    throw Error(ErrorCode::kDimensionMismatch,
                "image has " + std::to_string(img.size()) +
                    " pixels, calibration scene has " +
                    std::to_string(cal.pixels_per_image));
  }
  const Region whole = Region::Whole(img);
  AnalysisReport r;
  r.kl_smoothing = cal.kl_smoothing;

  const Histogram h = MakeHistogramFixed(img, whole, cal.reference.low,
                                         cal.reference.bin_width,
                                         cal.reference.counts.size());
  r.kl_bits = KlDivergence(h, cal.reference, cal.kl_smoothing);
  r.kl_threshold = Quantile(cal.kl_bits, kNullQuantile);
  r.sample_sizes["kl_bits"] = img.size();
  if (r.kl_bits > r.kl_threshold) r.flagged.push_back("kl_bits");

  const PairsOfValuesResult pov = ChiSquareAttack(img, whole);
  r.chi2_pvalue = pov.p_value;
  r.chi2_threshold = Quantile(cal.chi2_pvalue, 1.0 - kNullQuantile);
  r.sample_sizes["chi2_pvalue"] = pov.samples;
  if (r.chi2_pvalue < r.chi2_threshold) r.flagged.push_back("chi2_pvalue");

  if (reference != nullptr) {
    RequireSameShape(img, *reference, "ward_test reference");
    if (!cal.autocorr_max.empty() && cal.max_lag < img.width()) {
      const auto rho = Autocorrelation(img, *reference, cal.max_lag);
      r.autocorr.assign(rho.begin() + 1, rho.end());
      r.autocorr_max = MaxAbsLag(rho);
      r.autocorr_threshold = Quantile(cal.autocorr_max, kNullQuantile);
      r.sample_sizes["autocorr"] = img.size();
      if (*r.autocorr_max > *r.autocorr_threshold) r.flagged.push_back("autocorr");
    }
    if (!cal.norm_dev.empty()) {
      r.norm_dev = NormalizedDeviation(img, *reference);
      r.norm_dev_threshold = Quantile(cal.norm_dev, kNullQuantile);
      r.sample_sizes["norm_dev"] = img.size();
      if (*r.norm_dev > *r.norm_dev_threshold) r.flagged.push_back("norm_dev");
    }
  }
  r.sample_sizes["calibration_trials"] = cal.trials;
  r.verdict = r.flagged.empty() ? Verdict::kClean : Verdict::kSuspicious;
  return r;
}

}  // namespace qsteg
