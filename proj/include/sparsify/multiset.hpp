#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sparsify {

/// Multiset of 0-based indices, kept as (index, multiplicity) pairs sorted by index.
class Multiset {
 public:
  struct Item {
    std::size_t index = 0;
    std::size_t count = 0;
    friend bool operator==(const Item&, const Item&) = default;
  };

  Multiset() = default;

  static Multiset from_indices(std::span<const std::size_t> indices);
  /// Pairs may repeat indices and come in any order; zero counts are dropped.
  static Multiset from_counts(std::span<const Item> items);

  void add(std::size_t index, std::size_t count = 1);

  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  /// One past the largest index present (0 when empty).
  std::size_t index_bound() const { return items_.empty() ? 0 : items_.back().index + 1; }

  /// "i:m;j:n" form used in CSV witnesses.
  std::string to_string() const;
  static Multiset parse(const std::string& text);

  friend bool operator==(const Multiset&, const Multiset&) = default;

 private:
  std::vector<Item> items_;
  std::size_t size_ = 0;
};

}  // namespace sparsify
