#include <doctest.h>

#include <charconv>
#include <cmath>
#include <sstream>

#include "anchor/random.hpp"
#include "anchor/serialize.hpp"

using namespace anchor;

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  const double third = 1.0 / 3.0;
  const std::string s = format_double(third);
  double back = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), back);
  CHECK(back == third);
}

TEST_CASE("distance matrix csv round trip") {
  DistanceMatrix m;
  m.labels = {"1900", "1950", "2000"};
  m.values = RowMatrix::Zero(3, 3);
  m.values(0, 1) = m.values(1, 0) = 0.125;
  m.values(0, 2) = m.values(2, 0) = 1.0 / 3.0;
  m.values(1, 2) = m.values(2, 1) = 0.7;

  std::stringstream buf;
  write_distance_csv(m, buf);
  CHECK(buf.str().substr(0, 15) == ",1900,1950,2000");

  const auto back = read_distance_csv(buf, "buf");
  CHECK(back.labels == m.labels);
  CHECK(back.values == m.values);  // shortest round-trip: exact
}

TEST_CASE("distance matrix csv rejects malformed input") {
  SUBCASE("asymmetric values") {
    std::stringstream buf(",a,b\na,0,1\nb,2,0\n");
    CHECK_THROWS_AS(read_distance_csv(buf, "buf"), ParseError);
  }
  SUBCASE("ragged row") {
    std::stringstream buf(",a,b\na,0\nb,1,0\n");
    CHECK_THROWS_AS(read_distance_csv(buf, "buf"), ParseError);
  }
  SUBCASE("row label mismatch") {
    std::stringstream buf(",a,b\nx,0,1\nb,1,0\n");
    CHECK_THROWS_AS(read_distance_csv(buf, "buf"), ParseError);
  }
  SUBCASE("nonzero diagonal") {
    std::stringstream buf(",a,b\na,1,1\nb,1,0\n");
    CHECK_THROWS_AS(read_distance_csv(buf, "buf"), ParseError);
  }
  SUBCASE("missing rows") {
    std::stringstream buf(",a,b\na,0,1\n");
    CHECK_THROWS_AS(read_distance_csv(buf, "buf"), ParseError);
  }
}

TEST_CASE("labels that break the format are rejected") {
  DistanceMatrix m;
  m.labels = {"a,b", "c"};
  m.values = RowMatrix::Zero(2, 2);
  std::stringstream buf;
  CHECK_THROWS_AS(write_distance_csv(m, buf), std::invalid_argument);
}

TEST_CASE("coordinates serialization") {
  SpectralCoordinates c;
  c.labels = {"x", "y"};
  c.sigma = 1.5;
  c.k = 2;
  c.coords = RowMatrix(2, 2);
  c.coords << 0.5, -0.25, 0.5, 0.75;

  std::stringstream buf;
  write_coordinates_csv(c, buf);
  CHECK(buf.str() == "label,x1,x2\nx,0.5,-0.25\ny,0.5,0.75\n");

  const auto j = coordinates_to_json(c);
  CHECK(j["sigma"] == 1.5);
  CHECK(j["k"] == 2);
  CHECK(j["labels"][1] == "y");
  CHECK(j["coords"][1][1] == 0.75);
}

TEST_CASE("drift tsv") {
  std::stringstream buf;
  write_drift_tsv({{"alpha", 0.5}, {"beta", 1.25}}, buf);
  CHECK(buf.str() == "alpha\t0.5\nbeta\t1.25\n");
}

TEST_CASE("sweep csv") {
  SweepRow row{100, {4, 0.8, 0.01, 0.78, 0.82}, 0};
  std::stringstream buf;
  write_sweep_csv({row}, buf);
  CHECK(buf.str() == "dimension,mean,std,min,max\n100,0.8,0.01,0.78,0.82\n");
}

TEST_CASE("empty summaries serialize as null") {
  const auto j = summary_to_json(summarize({}));
  CHECK(j["count"] == 0);
  CHECK(j["mean"].is_null());  // NaN becomes null in JSON
}
