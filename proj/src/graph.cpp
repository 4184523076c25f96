// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "idcsbm/random.hpp"

namespace idcsbm {

Network::Network(std::size_t n) {
  labels_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
}

Network::Network(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw std::invalid_argument("Network: node labels must be distinct");
  }
}

void Network::check(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) {
    throw std::out_of_range("Network: dyad (" + std::to_string(a) + "," + std::to_string(b) +
                            ") outside " + std::to_string(size()) + " nodes");
  }
}

Count Network::at(std::size_t a, std::size_t b) const {
  check(a, b);
  auto it = counts_.find(make_dyad(a, b));
  return it == counts_.end() ? 0 : it->second;
}

void Network::add(std::size_t a, std::size_t b, Count c) {
  check(a, b);
  if (c < 0) throw std::invalid_argument("Network::add: negative count");
  if (c == 0) return;
  counts_[make_dyad(a, b)] += c;
}

void Network::set(std::size_t a, std::size_t b, Count c) {
  check(a, b);
  if (c < 0) throw std::invalid_argument("Network::set: negative count");
  if (c == 0) {
    counts_.erase(make_dyad(a, b));
  } else {
    counts_[make_dyad(a, b)] = c;
  }
}

Count Network::total() const {
  Count t = 0;
  for (const auto& [d, c] : counts_) t += c;
  return t;
}

std::size_t Network::link_dyads() const {
  return static_cast<std::size_t>(std::count_if(
      counts_.begin(), counts_.end(), [](const auto& e) { return e.first.i != e.first.j; }));
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    std::size_t end = pos;
    while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
    if (end > pos) out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, Count& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class EdgeListReader {
 public:
  std::size_t intern(std::string_view token) {
    auto key = std::string(token);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const std::size_t id = labels_.size();
    index_.emplace(key, id);
    labels_.push_back(std::move(key));
    return id;
  }

  void directive(std::size_t lineno, std::string_view body) {
    if (body.starts_with("nodes:")) {
      Count n = 0;
      if (!parse_int(trim(body.substr(6)), n) || n < 0) {
        throw ParseError(lineno, "malformed '#nodes:' directive");
      }
      for (Count i = 0; i < n; ++i) intern(std::to_string(i));
    } else if (body.starts_with("node:")) {
      auto label = trim(body.substr(5));
      if (label.empty() || split_ws(label).size() != 1) {
        throw ParseError(lineno, "malformed '#node:' directive");
      }
      intern(label);
    }
  }

  void read(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto body = trim(line);
      if (body.empty()) continue;
      if (body.front() == '#') {
        directive(lineno, trim(body.substr(1)));
        continue;
      }
      auto tokens = split_ws(body);
      if (tokens.size() != 2 && tokens.size() != 3) {
        throw ParseError(lineno, "expected 'u v' or 'u v w', got " +
                                     std::to_string(tokens.size()) + " tokens");
      }
      Count w = 1;
      if (tokens.size() == 3) {
        if (!parse_int(tokens[2], w)) throw ParseError(lineno, "weight is not an integer");
        if (w <= 0) throw ParseError(lineno, "weight must be positive");
      }
      const std::size_t u = intern(tokens[0]);
      const std::size_t v = intern(tokens[1]);
      edges_.push_back({make_dyad(u, v), w});
    }
  }

  Network finish() && {
    if (labels_.empty()) throw ParseError(0, "empty edge list");
    Network net(std::move(labels_));
    for (const auto& [d, w] : edges_) net.add(d.i, d.j, w);
    return net;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> labels_;
  std::vector<std::pair<Dyad, Count>> edges_;
};

bool has_default_labels(const Network& net) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.labels()[i] != std::to_string(i)) return false;
  }
  return true;
}

}  // namespace

Network load_edge_list(std::istream& in) {
  EdgeListReader reader;
  reader.read(in);
  return std::move(reader).finish();
}

Network load_edge_list(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

Network load_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Network& net,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  if (has_default_labels(net)) {
    out << "#nodes: " << net.size() << '\n';
  } else {
    for (const auto& label : net.labels()) out << "#node: " << label << '\n';
  }
  for (const auto& [d, c] : net.counts()) {
    out << net.labels()[d.i] << ' ' << net.labels()[d.j] << ' ' << c << '\n';
  }
}

std::string to_edge_list(const Network& net) {
  std::ostringstream out;
  write_edge_list(out, net);
  return out.str();
}

DegreeVector degrees(const Network& net) {
  DegreeVector dv{std::vector<Count>(net.size(), 0), std::vector<Count>(net.size(), 0)};
  for (const auto& [d, c] : net.counts()) {
    if (d.i == d.j) {
      dv.k[d.i] += c;
      dv.khat[d.i] += 2 * c;
    } else {
      dv.k[d.i] += c;
      dv.k[d.j] += c;
      dv.khat[d.i] += c;
      dv.khat[d.j] += c;
    }
  }
  return dv;
}

void ObservationMask::validate(std::size_t n) const {
  for (const auto& d : missing) {
    if (d.i > d.j || d.j >= n) {
      throw std::out_of_range("mask dyad (" + std::to_string(d.i) + "," + std::to_string(d.j) +
                              ") invalid for " + std::to_string(n) + " nodes");
    }
  }
  if (truth && truth->size() != missing.size()) {
    throw std::invalid_argument("mask truth length differs from missing set");
  }
}

namespace {

// Moves `k` uniformly chosen elements to the front of `items`.
template <class T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  for (std::size_t t = 0; t < k; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, items.size() - 1);
    std::swap(items[t], items[pick(rng)]);
  }
}

ObservationMask sorted_mask(std::vector<std::pair<Dyad, Count>> entries) {
  std::sort(entries.begin(), entries.end());
  ObservationMask mask;
  mask.truth.emplace();
  for (const auto& [d, c] : entries) {
    mask.missing.push_back(d);
    mask.truth->push_back(c);
  }
  return mask;
}

}  // namespace

ObservationMask make_holdout(const Network& net, double link_fraction, std::uint64_t seed) {
  if (!(link_fraction > 0.0 && link_fraction < 1.0)) {
    throw std::invalid_argument("make_holdout: link fraction must lie in (0, 1)");
  }
  std::vector<Dyad> links;
  for (const auto& [d, c] : net.counts()) {
    if (d.i != d.j) links.push_back(d);
  }
  if (links.empty()) throw std::invalid_argument("make_holdout: network has no links");
  const auto n = static_cast<std::uint64_t>(net.size());
  const std::uint64_t pairs = n * (n - 1) / 2;
  const std::uint64_t zeros = pairs - links.size();
  const auto want = static_cast<std::size_t>(
      std::ceil(link_fraction * static_cast<double>(links.size()) - 1e-9));
  if (zeros < want) {
    throw std::invalid_argument("make_holdout: only " + std::to_string(zeros) +
                                " zero dyads for " + std::to_string(want) + " requested");
  }

  Rng rng(seed);
  partial_shuffle(links, want, rng);
  std::vector<std::pair<Dyad, Count>> entries;
  for (std::size_t t = 0; t < want; ++t) entries.push_back({links[t], net.at(links[t].i, links[t].j)});

  if (zeros <= 4 * static_cast<std::uint64_t>(want) || pairs <= 1'000'000) {
    std::vector<Dyad> pool;
    for (std::size_t i = 0; i < net.size(); ++i) {
      for (std::size_t j = i + 1; j < net.size(); ++j) {
        if (!net.counts().contains({i, j})) pool.push_back({i, j});
      }
    }
    partial_shuffle(pool, want, rng);
    for (std::size_t t = 0; t < want; ++t) entries.push_back({pool[t], 0});
  } else {
    std::set<Dyad> chosen;
    std::uniform_int_distribution<std::size_t> node(0, net.size() - 1);
    while (chosen.size() < want) {
      const std::size_t a = node(rng);
      const std::size_t b = node(rng);
      if (a == b) continue;
      const Dyad d = make_dyad(a, b);
      if (net.counts().contains(d) || chosen.contains(d)) continue;
      chosen.insert(d);
      entries.push_back({d, 0});
    }
  }
  return sorted_mask(std::move(entries));
}

ObservationMask diagonal_mask(const Network& net) {
  std::vector<std::pair<Dyad, Count>> entries;
  for (std::size_t i = 0; i < net.size(); ++i) entries.push_back({{i, i}, net.at(i, i)});
  return sorted_mask(std::move(entries));
}

ObservationMask merge_masks(const ObservationMask& a, const ObservationMask& b) {
  std::map<Dyad, Count> merged;
  const bool with_truth = a.truth.has_value() && b.truth.has_value();
  for (const auto* m : {&a, &b}) {
    for (std::size_t t = 0; t < m->missing.size(); ++t) {
      merged.emplace(m->missing[t], m->truth ? (*m->truth)[t] : 0);
    }
  }
  ObservationMask out;
  if (with_truth) out.truth.emplace();
  for (const auto& [d, c] : merged) {
    out.missing.push_back(d);
    if (with_truth) out.truth->push_back(c);
  }
  return out;
}

Network apply_mask(const Network& net, const ObservationMask& mask, Count fill) {
  mask.validate(net.size());
  Network out = net;
  for (const auto& d : mask.missing) out.set(d.i, d.j, fill);
  return out;
}

std::string mask_to_json(const ObservationMask& mask) {
  nlohmann::json j;
  j["missing"] = nlohmann::json::array();
  for (const auto& d : mask.missing) j["missing"].push_back({d.i, d.j});
  if (mask.truth) j["truth"] = *mask.truth;
  return j.dump();
}

ObservationMask mask_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ObservationMask mask;
  for (const auto& pair : j.at("missing")) {
    mask.missing.push_back(make_dyad(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>()));
  }
  if (j.contains("truth")) mask.truth = j.at("truth").get<std::vector<Count>>();
  if (mask.truth && mask.truth->size() != mask.missing.size()) {
    throw std::invalid_argument("mask JSON: truth length differs from missing set");
  }
  return mask;
}

}  // namespace idcsbm
