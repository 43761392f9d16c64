#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qsteg {

enum class Verdict { kClean, kSuspicious };

const char* VerdictName(Verdict v);

// Outcome of the warden's hypothesis test. Statistics that need a reference
// image are absent when none was supplied.
struct AnalysisReport {
  double kl_bits = 0.0;
  double kl_smoothing = 0.5;
  double kl_threshold = 0.0;

  double chi2_pvalue = 1.0;
  double chi2_threshold = 0.0;  // suspicious below this

  std::vector<double> autocorr;  // lags 1..L
  std::optional<double> autocorr_max;
  std::optional<double> autocorr_threshold;

  std::optional<double> norm_dev;
  std::optional<double> norm_dev_threshold;

  Verdict verdict = Verdict::kClean;
  std::vector<std::string> flagged;

  // Keyed by statistic name; ordered so the document is canonical.
  std::map<std::string, uint64_t> sample_sizes;
};

// key = value lines, LF endings, fixed field order, reals at 9 significant
// digits.
std::string WriteReport(const AnalysisReport& report);

// %.9g, with ".0" appended when the result would otherwise read as an
// integer.
std::string FormatReal(double v);

}  // namespace qsteg
