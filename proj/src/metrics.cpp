// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace idcsbm {

double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw std::invalid_argument("nmi: partitions differ in length");
  if (a.size() == 0) throw std::invalid_argument("nmi: empty partitions");
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) joint[{a[i], b[i]}] += 1.0;

  auto entropy = [n](const std::vector<std::size_t>& sizes) {
    double h = 0.0;
    for (std::size_t s : sizes) {
      const double p = static_cast<double>(s) / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double ha = entropy(a.sizes());
  const double hb = entropy(b.sizes());
  if (ha + hb == 0.0) return 1.0;

  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    const double pa = static_cast<double>(a.sizes()[key.first]) / n;
    const double pb = static_cast<double>(b.sizes()[key.second]) / n;
    const double p = count / n;
    mi += p * std::log(p / (pa * pb));
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double auc(const std::vector<ScoredDyad>& scored) {
  std::vector<std::pair<double, DyadLabel>> items;
  items.reserve(scored.size());
  double links = 0.0;
  for (const auto& s : scored) {
    items.emplace_back(s.score, s.label);
    if (s.label == DyadLabel::link) links += 1.0;
  }
  const double nonlinks = static_cast<double>(items.size()) - links;
  if (links == 0.0 || nonlinks == 0.0) throw std::invalid_argument("auc: need both links and non-links");
  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  // Concordant pairs via a sweep over tied score blocks.
  double concordant = 0.0;
  double nonlinks_below = 0.0;
  for (std::size_t start = 0; start < items.size();) {
    std::size_t end = start;
    double block_links = 0.0;
    double block_nonlinks = 0.0;
    while (end < items.size() && items[end].first == items[start].first) {
      (items[end].second == DyadLabel::link ? block_links : block_nonlinks) += 1.0;
      ++end;
    }
    concordant += block_links * (nonlinks_below + 0.5 * block_nonlinks);
    nonlinks_below += block_nonlinks;
    start = end;
  }
  return concordant / (links * nonlinks);
}

double l_ratio(const ChainTrace& trace, std::size_t l_true) {
  if (l_true == 0) throw std::invalid_argument("l_ratio: L_true must be positive");
  if (trace.post_burn_in() == 0) throw std::invalid_argument("l_ratio: no post-burn-in iterations");
  double acc = 0.0;
  for (std::size_t it = trace.burn_in; it < trace.size(); ++it) {
    acc += static_cast<double>(trace.records[it].groups);
  }
  return acc / static_cast<double>(trace.post_burn_in()) / static_cast<double>(l_true);
}

double mean_nmi(const ChainTrace& trace, const Partition& truth) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& snap : trace.snapshots) {
    if (snap.iteration < trace.burn_in) continue;
    acc += nmi(snap.part, truth);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("mean_nmi: no post-burn-in snapshots");
  return acc / static_cast<double>(count);
}

namespace {

double population_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

template <class BinOf>
std::vector<DispersionPoint> dispersion(const std::vector<ChainTrace>& traces, const Network& net,
                                        std::size_t window, BinOf bin_of) {
  const auto k = degrees(net).k;
  // bin -> per-chain means
  std::map<std::size_t, std::vector<double>> per_chain;
  bool any = false;
  for (const auto& trace : traces) {
    const std::size_t first = trace.size() > window ? trace.size() - window : 0;
    std::map<std::size_t, std::pair<double, double>> acc;  // bin -> (sum, count)
    for (const auto& snap : trace.snapshots) {
      if (snap.iteration < first) continue;
      if (snap.part.size() != net.size()) {
        throw std::invalid_argument("degree_dispersion_profile: snapshot does not match network");
      }
      any = true;
      std::vector<std::vector<double>> groups(snap.part.groups());
      for (std::size_t i = 0; i < net.size(); ++i) {
        groups[snap.part[i]].push_back(static_cast<double>(k[i]));
      }
      for (const auto& g : groups) {
        auto& [sum, count] = acc[bin_of(g.size())];
        sum += population_std(g);
        count += 1.0;
      }
    }
    for (const auto& [bin, sc] : acc) per_chain[bin].push_back(sc.first / sc.second);
  }
  if (!any) throw std::invalid_argument("degree_dispersion_profile: no snapshots in window");
  std::vector<DispersionPoint> out;
  for (auto& [bin, means] : per_chain) {
    std::sort(means.begin(), means.end());
    const auto me = mean_and_sem(means);
    out.push_back({bin, me.mean, me.sem, means.size()});
  }
  return out;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<DispersionPoint> degree_dispersion_profile(const std::vector<ChainTrace>& traces,
                                                       const Network& net, std::size_t window) {
  return dispersion(traces, net, window, [](std::size_t s) { return s; });
}

std::vector<DispersionPoint> degree_dispersion_profile_log_binned(
    const std::vector<ChainTrace>& traces, const Network& net, std::size_t window) {
  return dispersion(traces, net, window, [](std::size_t s) {
    std::size_t edge = 1;
    while (edge * 2 <= s) edge *= 2;
    return edge;
  });
}

GammaSummary gamma_summary(const std::vector<ChainTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("gamma_summary: no chains");
  GammaSummary s;
  for (const auto& trace : traces) {
    if (trace.post_burn_in() == 0) throw std::invalid_argument("gamma_summary: empty chain");
    double acc = 0.0;
    for (std::size_t it = trace.burn_in; it < trace.size(); ++it) acc += trace.records[it].hp.gamma;
    s.chain_means.push_back(acc / static_cast<double>(trace.post_burn_in()));
  }
  std::vector<double> sorted = s.chain_means;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);
  return s;
}

MeanAndError mean_and_sem(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_and_sem: no values");
  MeanAndError out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double var = 0.0;
    for (double v : values) var += (v - out.mean) * (v - out.mean);
    var /= static_cast<double>(values.size() - 1);
    out.sem = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace idcsbm
