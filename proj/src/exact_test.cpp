#include "doctest.h"
#include "homfinsler/errors.hpp"
#include "homfinsler/exact.hpp"

using namespace homfinsler;

TEST_CASE("exact coordinates parse to canonical text") {
  CHECK(ExactCoord::parse("3").str() == "3");
  CHECK(ExactCoord::parse("-6/4").str() == "-3/2");
  CHECK(ExactCoord::parse("sqrt(3)/2").str() == "sqrt(3)/2");
  CHECK(ExactCoord::parse("-sqrt(12)").str() == "-2*sqrt(3)");
  CHECK(ExactCoord::parse("2*sqrt(3)/4").str() == "sqrt(3)/2");
  CHECK(ExactCoord::parse("sqrt(4)").str() == "2");
  CHECK(ExactCoord::parse("0").str() == "0");
}

TEST_CASE("exact values") {
  CHECK(ExactCoord::parse("sqrt(3)/2").value() == doctest::Approx(0.8660254037844386).epsilon(1e-15));
  CHECK(ExactCoord::parse("-3/2").value() == -1.5);
  CHECK((-ExactCoord::parse("1/2")).str() == "-1/2");
}

TEST_CASE("round trip is a fixed point") {
  for (const char* s : {"1", "-1", "1/2", "-sqrt(3)/2", "3/2", "sqrt(3)", "-2*sqrt(2)/3"}) {
    const ExactCoord c = ExactCoord::parse(s);
    CHECK(ExactCoord::parse(c.str()) == c);
  }
}

TEST_CASE("malformed coordinates are rejected") {
  for (const char* s : {"", "x", "1/0", "sqrt(-2)", "1/", "sqrt(3", "2*"}) CHECK_THROWS_AS(ExactCoord::parse(s), InputError);
}
