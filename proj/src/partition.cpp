// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/partition.hpp"

#include <map>
#include <stdexcept>

namespace idcsbm {

Partition Partition::from_labels(std::span<const int> labels) {
  Partition p;
  p.z_.reserve(labels.size());
  std::map<int, std::size_t> relabel;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("Partition: negative group label");
    auto [it, inserted] = relabel.emplace(l, p.sizes_.size());
    if (inserted) p.sizes_.push_back(0);
    p.z_.push_back(it->second);
    ++p.sizes_[it->second];
  }
  return p;
}

Partition Partition::single_group(std::size_t n) {
  std::vector<int> z(n, 0);
  return from_labels(z);
}

Partition Partition::singletons(std::size_t n) {
  std::vector<int> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<int>(i);
  return from_labels(z);
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(groups());
  for (std::size_t i = 0; i < z_.size(); ++i) out[z_[i]].push_back(i);
  return out;
}

}  // namespace idcsbm
