#include <doctest.h>

#include "corrsim/dims.hpp"
#include "corrsim/errors.hpp"

using corrsim::DimList;

TEST_SUITE("dims") {

TEST_CASE("totals and factors") {
  const DimList d{2, 3, 4};
  CHECK(d.size() == 3);
  CHECK(d.factor(0) == 2);
  CHECK(d.factor(2) == 4);
  CHECK(d.total() == 24);
  CHECK(d.to_string() == "2x3x4");
}

TEST_CASE("total_of and complement") {
  const DimList d{2, 3, 4};
  CHECK(d.total_of({}) == 1);
  CHECK(d.total_of({0}) == 2);
  CHECK(d.total_of({0, 2}) == 8);
  CHECK(d.complement({1}) == std::vector<int>{0, 2});
  CHECK(d.complement({}) == std::vector<int>{0, 1, 2});
  CHECK(d.complement({0, 1, 2}).empty());
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(DimList{0}, corrsim::PreconditionError);
  CHECK_THROWS_AS(DimList({2, -1}), corrsim::PreconditionError);
  CHECK_THROWS_AS((DimList{2, 2}.factor(2)), corrsim::IndexError);
  CHECK_THROWS_AS((DimList{2, 2}.factor(-1)), corrsim::IndexError);
  CHECK_THROWS_AS(DimList({2, 3}).total_of({1, 0}), corrsim::IndexError);
  CHECK_THROWS_AS(DimList({2, 3}).total_of({0, 0}), corrsim::IndexError);
  CHECK_THROWS_AS(DimList({2, 3}).total_of({2}), corrsim::IndexError);
}

TEST_CASE("equality") {
  CHECK((DimList{2, 2} == DimList{2, 2}));
  CHECK((DimList{2, 2} != DimList{4}));
}

TEST_CASE("dimension cap") {
  CHECK(corrsim::dim_cap() == 16384);
  CHECK_NOTHROW(corrsim::check_dim_cap(16384, "test"));
  CHECK_THROWS_AS(corrsim::check_dim_cap(16385, "test"),
                  corrsim::DimensionCapError);
  CHECK_THROWS_AS(corrsim::check_dim_cap(0, "test"),
                  corrsim::PreconditionError);
  corrsim::set_dim_cap(64);
  CHECK(corrsim::dim_cap() == 64);
  CHECK_THROWS_AS(corrsim::check_dim_cap(65, "test"),
                  corrsim::DimensionCapError);
  corrsim::set_dim_cap(16384);
}

}  // TEST_SUITE
