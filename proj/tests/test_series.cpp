#include <catch_amalgamated.hpp>

#include <cmath>

#include "metriq/series.hpp"

using namespace metriq;
using Catch::Matchers::WithinRel;

TEST_CASE("series normalises its terms", "[series]") {
  const GeneralizedPowerSeries s(0.0, {{2.0, 1.0L}, {1.0, 0.0L}, {3.0, 1.0L}, {0.0, 2.0L}, {-1.0, 0.5L}});
  REQUIRE(s.size() == 3);
  CHECK(s.terms()[0].exponent == 0.0L);
  CHECK(s.terms()[1].exponent == 0.5L);
  CHECK(s.coefficient_of(1.0L) == 5.0);
  CHECK(s.coefficient_of(2.0L) == 0.0);
  CHECK(GeneralizedPowerSeries(0.0, {{1.0, 1.0L}, {-1.0, 1.0L}}).empty());
}

TEST_CASE("series evaluation and domain", "[series]") {
  const GeneralizedPowerSeries s(1.0, {{1.0, 0.0L}, {2.0, 0.5L}});
  CHECK_THAT(s(5.0), WithinRel(5.0, 1e-15));
  CHECK(s(1.0) == 1.0);
  CHECK_THROWS_AS(s(0.5), DomainError);
  const GeneralizedPowerSeries singular(0.0, {{1.0, -0.5L}});
  CHECK(singular.has_singular_terms());
  CHECK_THROWS_AS(singular(0.0), DomainError);
  CHECK(singular(4.0) == 0.5);
}

TEST_CASE("series arithmetic", "[series]") {
  const auto a = parse_series("1@0, 1@1");
  const auto b = parse_series("1@0, -1@1");
  const auto prod = a * b;
  CHECK(prod == parse_series("1@0, -1@2"));
  CHECK((a + b) == parse_series("2@0"));
  CHECK((a - b) == parse_series("2@1"));
  CHECK((3.0 * a) == parse_series("3@0, 3@1"));
  CHECK_THROWS_AS(a + parse_series("a=1; 1@1"), DomainError);
}

TEST_CASE("series term cap", "[series]") {
  std::vector<PowerTerm> terms;
  for (int k = 0; k < 30; ++k) terms.push_back({1.0, static_cast<exponent_t>(k) * 0.37L});
  const GeneralizedPowerSeries s(0.0, terms);
  std::vector<PowerTerm> other;
  for (int k = 0; k < 30; ++k) other.push_back({1.0, static_cast<exponent_t>(k) * 0.0101L});
  CHECK_THROWS_AS(s * GeneralizedPowerSeries(0.0, other), SeriesBlowupError);
}

TEST_CASE("series literals", "[series][literal]") {
  const auto s = parse_series("a=0; 1@0, 2.5@0.9, -1@1.8");
  REQUIRE(s.size() == 3);
  CHECK(s.coefficient_of(static_cast<exponent_t>(0.9)) == 2.5);
  CHECK(s.coefficient_of(static_cast<exponent_t>(1.8)) == -1.0);
  CHECK(parse_series(to_literal(s)) == s);
  CHECK(parse_series("a=0.5; 1@1").offset() == 0.5);
  CHECK(parse_series("  2@3 ").coefficient_of(3.0L) == 2.0);
  CHECK(parse_series("a=0;").empty());
  CHECK_THROWS_AS(parse_series("1@-1"), SyntaxError);
  CHECK_THROWS_AS(parse_series("1@"), SyntaxError);
  CHECK_THROWS_AS(parse_series("1 2"), SyntaxError);
  CHECK_THROWS_AS(parse_series("a 0; 1@1"), SyntaxError);
}

TEST_CASE("series to expression", "[series]") {
  const auto s = parse_series("a=0.5; 2@0, -1@1.5");
  const ExprAst e = to_expr(s);
  for (double t : {0.6, 1.0, 3.0}) CHECK_THAT(e(t), WithinRel(s(t), 1e-14));
}
