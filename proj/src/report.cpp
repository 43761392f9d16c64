#include "qsteg/report.hpp"

#include <cstdio>
#include <cstring>

namespace qsteg {

const char* VerdictName(Verdict v) {
  return v == Verdict::kSuspicious ? "suspicious" : "clean";
}

std::string FormatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  if (std::strpbrk(buf, ".eEni") == nullptr) std::strcat(buf, ".0");
  return buf;
}

namespace {

void Field(std::string& out, const std::string& key, const std::string& value) {
  out += key;
  out += " = ";
  out += value;
  out += '\n';
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatReal(*v) : "na";
}

}  // namespace

std::string WriteReport(const AnalysisReport& r) {
  std::string out = "# qsteg analysis report v1\n";
  Field(out, "verdict", VerdictName(r.verdict));

  std::string flagged;
  for (const auto& name : r.flagged) {
    if (!flagged.empty()) flagged += ',';
    flagged += name;
  }
  Field(out, "flagged", flagged.empty() ? "none" : flagged);

  Field(out, "kl_bits", FormatReal(r.kl_bits));
  Field(out, "kl_smoothing", FormatReal(r.kl_smoothing));
  Field(out, "kl_threshold", FormatReal(r.kl_threshold));
  Field(out, "chi2_pvalue", FormatReal(r.chi2_pvalue));
  Field(out, "chi2_threshold", FormatReal(r.chi2_threshold));

  std::string lags;
  for (double v : r.autocorr) {
    if (!lags.empty()) lags += ',';
    lags += FormatReal(v);
  }
  Field(out, "autocorr", lags.empty() ? "na" : lags);
  Field(out, "autocorr_max", Optional(r.autocorr_max));
  Field(out, "autocorr_threshold", Optional(r.autocorr_threshold));
  Field(out, "norm_dev", Optional(r.norm_dev));
  Field(out, "norm_dev_threshold", Optional(r.norm_dev_threshold));

  for (const auto& [name, n] : r.sample_sizes) {
    Field(out, "sample_size." + name, std::to_string(n));
  }
  return out;
}

}  // namespace qsteg
