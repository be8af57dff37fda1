#include "sparsify/multiset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sparsify {

Multiset Multiset::from_indices(std::span<const std::size_t> indices) {
  Multiset m;
  for (std::size_t i : indices) m.add(i);
  return m;
}

Multiset Multiset::from_counts(std::span<const Item> items) {
  Multiset m;
  for (const auto& item : items) m.add(item.index, item.count);
  return m;
}

void Multiset::add(std::size_t index, std::size_t count) {
  if (count == 0) return;
  auto it = std::lower_bound(items_.begin(), items_.end(), index,
                             [](const Item& item, std::size_t i) { return item.index < i; });
  if (it != items_.end() && it->index == index)
    it->count += count;
  else
    items_.insert(it, Item{index, count});
  size_ += count;
}

std::string Multiset::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out << ';';
    out << items_[i].index << ':' << items_[i].count;
  }
  return out.str();
}

Multiset Multiset::parse(const std::string& text) {
  Multiset m;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ';')) {
    if (token.empty()) continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("multiset: expected index:count, got '" + token + "'");
    m.add(std::stoull(token.substr(0, colon)), std::stoull(token.substr(colon + 1)));
  }
  return m;
}

}  // namespace sparsify
