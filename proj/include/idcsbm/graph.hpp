// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace idcsbm {

using Count = std::int64_t;

/// Unordered node pair, stored with i <= j. Self-pairs are dyads too.
struct Dyad {
  std::size_t i = 0;
  std::size_t j = 0;

  auto operator<=>(const Dyad&) const = default;
};

inline Dyad make_dyad(std::size_t a, std::size_t b) {
  return a <= b ? Dyad{a, b} : Dyad{b, a};
}

/// Undirected multigraph with nonnegative integer dyad counts.
///
/// Only nonzero counts are stored. Node indices are 0..size()-1 and each
/// index carries the identifier it was loaded under.
class Network {
 public:
  Network() = default;
  explicit Network(std::size_t n);
  explicit Network(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::map<Dyad, Count>& counts() const { return counts_; }

  Count at(std::size_t a, std::size_t b) const;
  void add(std::size_t a, std::size_t b, Count c);
  void set(std::size_t a, std::size_t b, Count c);

  /// Σ_{i<=j} A_ij.
  Count total() const;
  /// Number of off-diagonal dyads with A_ij >= 1.
  std::size_t link_dyads() const;

  bool operator==(const Network&) const = default;

 private:
  void check(std::size_t a, std::size_t b) const;

  std::vector<std::string> labels_;
  std::map<Dyad, Count> counts_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads `u v [w]` lines; `#` starts a comment. Two directives are
/// recognised: `#nodes: n` pre-declares nodes labelled "0".."n-1", and
/// `#node: <label>` declares one node, so isolated nodes survive a round
/// trip.
Network load_edge_list(std::istream& in);
Network load_edge_list(const std::string& text);
Network load_edge_list_file(const std::filesystem::path& path);

/// Writes a file that load_edge_list() reads back to the same network.
/// `comments` are emitted first as `# ...` lines.
void write_edge_list(std::ostream& out, const Network& net,
                     const std::vector<std::string>& comments = {});
std::string to_edge_list(const Network& net);

struct DegreeVector {
  std::vector<Count> k;     // Σ_j A_ij, diagonal once
  std::vector<Count> khat;  // k_i + A_ii
};

DegreeVector degrees(const Network& net);

/// Dyads treated as unobserved. `truth` holds the original counts when the
/// mask is an evaluation holdout.
struct ObservationMask {
  std::vector<Dyad> missing;
  std::optional<std::vector<Count>> truth;

  bool empty() const { return missing.empty(); }
  void validate(std::size_t n) const;
};

/// ceil(fraction · #links) link dyads and as many zero dyads (i < j), both
/// uniform without replacement, as a deterministic function of `seed`.
ObservationMask make_holdout(const Network& net, double link_fraction, std::uint64_t seed);

/// Every diagonal dyad, with the current A_ii as truth.
ObservationMask diagonal_mask(const Network& net);

/// Union of two masks; dyads present in both keep the first truth value.
ObservationMask merge_masks(const ObservationMask& a, const ObservationMask& b);

Network apply_mask(const Network& net, const ObservationMask& mask, Count fill);

std::string mask_to_json(const ObservationMask& mask);
ObservationMask mask_from_json(const std::string& text);

}  // namespace idcsbm
