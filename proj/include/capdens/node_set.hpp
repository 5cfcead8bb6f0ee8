#pragma once

#include <cstdint>
#include <vector>

namespace capdens {

struct MetricGraph;

/// Subset of graph nodes as a sorted, duplicate-free index list.
/// Set algebra is exact; operands must index the same graph.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::vector<int32_t> indices);  // sorts and dedupes

  static NodeSet all(int32_t node_count);

  const std::vector<int32_t>& indices() const { return idx_; }
  int32_t size() const { return static_cast<int32_t>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  bool contains(int32_t v) const;
  bool is_subset_of(const NodeSet& other) const;

  NodeSet set_union(const NodeSet& other) const;
  NodeSet set_intersection(const NodeSet& other) const;
  NodeSet set_difference(const NodeSet& other) const;
  NodeSet complement(int32_t node_count) const;

  /// Membership flags, length node_count.
  std::vector<uint8_t> mask(int32_t node_count) const;

  bool operator==(const NodeSet& other) const { return idx_ == other.idx_; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

 private:
  std::vector<int32_t> idx_;
};

}  // namespace capdens
