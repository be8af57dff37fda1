#include "doctest.h"
#include "sparsify/multiset.hpp"

#include <vector>

using sparsify::Multiset;

TEST_CASE("multiset merges repeats and sorts") {
  const std::vector<std::size_t> idx{4, 1, 4, 0, 1, 4};
  const auto m = Multiset::from_indices(idx);
  CHECK(m.size() == 6);
  REQUIRE(m.items().size() == 3);
  CHECK(m.items()[0] == Multiset::Item{0, 1});
  CHECK(m.items()[1] == Multiset::Item{1, 2});
  CHECK(m.items()[2] == Multiset::Item{4, 3});
  CHECK(m.index_bound() == 5);
  CHECK(m.to_string() == "0:1;1:2;4:3");
}

TEST_CASE("representation does not depend on order") {
  const std::vector<std::size_t> a{2, 0, 2}, b{2, 2, 0};
  CHECK(Multiset::from_indices(a) == Multiset::from_indices(b));
  const std::vector<Multiset::Item> items{{2, 1}, {0, 1}, {2, 1}, {7, 0}};
  CHECK(Multiset::from_counts(items) == Multiset::from_indices(a));
}

TEST_CASE("parse round-trips to_string") {
  Multiset m;
  m.add(3, 2);
  m.add(10);
  m.add(3);
  CHECK(m.size() == 4);
  CHECK(Multiset::parse(m.to_string()) == m);
  CHECK(Multiset::parse("").empty());
  CHECK_THROWS(Multiset::parse("1:x"));
  CHECK_THROWS(Multiset::parse("1;2"));
}

TEST_CASE("empty multiset") {
  Multiset m;
  CHECK(m.empty());
  CHECK(m.index_bound() == 0);
  CHECK(m.to_string().empty());
  m.add(5, 0);
  CHECK(m.empty());
}
