#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mmsim/env/environment.hpp"
#include "mmsim/metrics/metrics.hpp"

namespace mmsim::metrics {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  std::size_t n = 0;
};

MeanStd mean_std(const std::vector<double>& xs);

struct SummaryRow {
  std::string group;
  std::size_t episodes = 0;
  MeanStd epnl_k;  // EPnL / 1000
  MeanStd map;
  MeanStd pnlmap;
  MeanStd rpt;  // over episodes where it is defined
  MeanStd fills;
  MeanStd adv_ratio;
  MeanStd sharpe;
};

// Groups by strategy name in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<EpisodeReport>& reports);

std::vector<std::string> summary_columns();
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string summary_text(const std::vector<SummaryRow>& rows);
std::string reports_csv(const std::vector<EpisodeReport>& reports);

// Long-format per-step series: step, mid, z, cumulative pnl, fills.
std::string timeseries_csv(const env::EpisodeTrace& trace);

enum class Alternative { Greater, Less, TwoSided };

// Paired sign test on a[i] - b[i]; ties are dropped. Returns the p-value.
double sign_test(const std::vector<double>& a, const std::vector<double>& b,
                 Alternative alt = Alternative::Greater);

}  // namespace mmsim::metrics
