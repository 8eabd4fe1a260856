#include "mmsim/metrics/summary.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mmsim::metrics {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  out.n = xs.size();
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<EpisodeReport>& reports) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const EpisodeReport*>> groups;
  for (const auto& r : reports) {
    auto& g = groups[r.strategy];
    if (g.empty()) order.push_back(r.strategy);
    g.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& name : order) {
    const auto& g = groups[name];
    std::vector<double> epnl, map, pnlmap, rpt, fills, adv, sharpe;
    for (const auto* r : g) {
      epnl.push_back(r->epnl / 1000.0);
      map.push_back(r->map);
      pnlmap.push_back(r->pnlmap);
      if (r->rpt) rpt.push_back(*r->rpt);
      fills.push_back(r->fills_per_1000);
      adv.push_back(r->adv_ratio);
      sharpe.push_back(r->sharpe);
    }
    rows.push_back({name, g.size(), mean_std(epnl), mean_std(map), mean_std(pnlmap), mean_std(rpt),
                    mean_std(fills), mean_std(adv), mean_std(sharpe)});
  }
  return rows;
}

std::vector<std::string> summary_columns() {
  return {"EPnL[10^3]", "MAP[unit]", "PnLMAP", "RPT", "#T", "adv_ratio", "SR"};
}

namespace {

std::vector<const MeanStd*> cells(const SummaryRow& r) {
  return {&r.epnl_k, &r.map, &r.pnlmap, &r.rpt, &r.fills, &r.adv_ratio, &r.sharpe};
}

std::string fmt(double x, int prec) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << x;
  return os.str();
}

}  // namespace

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "strategy,episodes";
  for (const auto& c : summary_columns()) os << ',' << c << "_mean," << c << "_std";
  os << '\n';
  os << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.group << ',' << r.episodes;
    for (const auto* m : cells(r)) {
      if (m->n == 0) {
        os << ",,";
      } else {
        os << ',' << m->mean << ',' << m->std;
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string summary_text(const std::vector<SummaryRow>& rows) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"strategy", "n"};
  for (const auto& c : summary_columns()) header.push_back(c);
  table.push_back(header);
  for (const auto& r : rows) {
    std::vector<std::string> line{r.group, std::to_string(r.episodes)};
    for (const auto* m : cells(r)) {
      line.push_back(m->n == 0 ? "n/a" : fmt(m->mean, 3) + " ± " + fmt(m->std, 3));
    }
    table.push_back(line);
  }
  // Width in code points so the ± sign does not skew the columns.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], width(line[i]));
  }
  std::ostringstream os;
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) os << "  ";
      os << line[i];
      if (i + 1 < line.size()) os << std::string(widths[i] - width(line[i]), ' ');
    }
    os << '\n';
  }
  return os.str();
}

std::string reports_csv(const std::vector<EpisodeReport>& reports) {
  std::ostringstream os;
  os << "strategy,seed,steps,epnl,map,pnlmap,rpt,n_fills,fills_per_1000,adv_ratio,adv_defined,"
        "max_abs_inventory,sharpe\n";
  os << std::setprecision(10);
  for (const auto& r : reports) {
    os << r.strategy << ',' << r.seed << ',' << r.steps << ',' << r.epnl << ',' << r.map << ','
       << r.pnlmap << ',';
    if (r.rpt) os << *r.rpt;
    os << ',' << r.n_fills << ',' << r.fills_per_1000 << ',' << r.adv_ratio << ','
       << (r.adv_defined ? 1 : 0) << ',' << r.max_abs_inventory << ',' << r.sharpe << '\n';
  }
  return os.str();
}

std::string timeseries_csv(const env::EpisodeTrace& trace) {
  std::ostringstream os;
  os << "step,mid,z,cum_pnl,fills\n";
  os << std::setprecision(10);
  double cum = 0.0;
  for (const auto& s : trace.steps) {
    cum += s.reward.pnl;
    os << s.step << ',' << to_price(HalfTickPrice{s.mid_next}, trace.meta.tick_size) << ',' << s.z_after
       << ',' << cum << ',' << s.fills.size() << '\n';
  }
  return os.str();
}

double sign_test(const std::vector<double>& a, const std::vector<double>& b, Alternative alt) {
  if (a.size() != b.size()) throw std::invalid_argument("sign test needs paired samples");
  int wins = 0;
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    ++n;
    if (a[i] > b[i]) ++wins;
  }
  if (n == 0) return 1.0;
  auto pmf = [n](int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                    n * std::log(2.0));
  };
  double upper = 0.0;  // P(X >= wins)
  for (int k = wins; k <= n; ++k) upper += pmf(k);
  double lower = 0.0;  // P(X <= wins)
  for (int k = 0; k <= wins; ++k) lower += pmf(k);
  switch (alt) {
    case Alternative::Greater:
      return std::min(1.0, upper);
    case Alternative::Less:
      return std::min(1.0, lower);
    case Alternative::TwoSided:
      break;
  }
  return std::min(1.0, 2.0 * std::min(upper, lower));
}

}  // namespace mmsim::metrics
