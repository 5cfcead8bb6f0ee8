#include "capdens/node_set.hpp"

#include <algorithm>
#include <numeric>

namespace capdens {

NodeSet::NodeSet(std::vector<int32_t> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
}

NodeSet NodeSet::all(int32_t node_count) {
  std::vector<int32_t> v(node_count);
  std::iota(v.begin(), v.end(), 0);
  NodeSet s;
  s.idx_ = std::move(v);
  return s;
}

bool NodeSet::contains(int32_t v) const {
  return std::binary_search(idx_.begin(), idx_.end(), v);
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
}

NodeSet NodeSet::set_union(const NodeSet& other) const {
  NodeSet out;
  out.idx_.reserve(idx_.size() + other.idx_.size());
  std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                 std::back_inserter(out.idx_));
  return out;
}

NodeSet NodeSet::set_intersection(const NodeSet& other) const {
  NodeSet out;
  std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                        std::back_inserter(out.idx_));
  return out;
}

NodeSet NodeSet::set_difference(const NodeSet& other) const {
  NodeSet out;
  std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                      std::back_inserter(out.idx_));
  return out;
}

NodeSet NodeSet::complement(int32_t node_count) const {
  NodeSet out;
  out.idx_.reserve(node_count - size());
  std::size_t at = 0;
  for (int32_t v = 0; v < node_count; ++v) {
    if (at < idx_.size() && idx_[at] == v) {
      ++at;
    } else {
      out.idx_.push_back(v);
    }
  }
  return out;
}

std::vector<uint8_t> NodeSet::mask(int32_t node_count) const {
  std::vector<uint8_t> m(node_count, 0);
  for (int32_t v : idx_) m[v] = 1;
  return m;
}

}  // namespace capdens
