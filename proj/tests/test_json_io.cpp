#include <doctest.h>

#include "tropos/errors.hpp"
#include "tropos/json_io.hpp"

using namespace tropos;
using namespace tropos::io;
using Q = Rational;

TEST_CASE("piecewise-affine round trip") {
  auto f = PiecewiseAffine<Rational>::make(Interval<Rational>{std::nullopt, Q(3)}, {Q(-1, 2), Q(1)},
                                           {Q(-2), Q(1, 3), Q(4)}, Q(0), Q(7, 5));
  Json j = to_json(f);
  CHECK(j["domain"][0] == "-inf");
  CHECK(j["domain"][1] == "3/1");
  CHECK(j["slopes"][1] == "1/3");
  CHECK(pwa_from_json(Json::parse(j.dump())) == f);
  auto d = laplacian(f);
  CHECK(divisor_from_json(to_json(d)) == d);
  CHECK_THROWS_AS(pwa_from_json(Json::parse(R"({"domain":[0]})")), PreconditionError);
}

TEST_CASE("valued series input") {
  auto s = valued_series_from_json(Json::parse(R"({"p":2,"coeffs":[[0,"0"],[1,"0"],[2,"1"],[3,"inf"]],"annulus":["-inf",0]})"));
  CHECK(s.prime() == 2);
  CHECK(!s.valuations().at(3));
  CHECK(s.window().hi == Q(0));
  CHECK(!s.window().lo);
  auto f = tropicalize_na(s);
  CHECK(f.breakpoints() == std::vector<Q>{Q(-1)});
  auto poly = valued_series_from_json(Json::parse(R"({"p":3,"poly":[[0,"-9"],[1,"1"]]})"));
  CHECK(poly.coefficients().has_value());
  CHECK_THROWS_AS(valued_series_from_json(Json::parse(R"({"coeffs":[]})")), PreconditionError);
  CHECK_THROWS_AS(valued_series_from_json(Json::parse(R"({"p":2,"coeffs":[[0,"x"]]})")), PreconditionError);
}
