// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace idcsbm {

/// Assignment of nodes to groups in first-appearance canonical form: node 0
/// is in group 0, and each new group gets the next unused index.
class Partition {
 public:
  Partition() = default;

  /// Canonicalizes arbitrary nonnegative labels.
  static Partition from_labels(std::span<const int> labels);
  static Partition single_group(std::size_t n);
  static Partition singletons(std::size_t n);

  std::size_t size() const { return z_.size(); }
  std::size_t groups() const { return sizes_.size(); }
  std::size_t operator[](std::size_t node) const { return z_[node]; }
  const std::vector<std::size_t>& labels() const { return z_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  /// Member lists per group, ascending node order.
  std::vector<std::vector<std::size_t>> members() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> z_;
  std::vector<std::size_t> sizes_;
};

}  // namespace idcsbm
