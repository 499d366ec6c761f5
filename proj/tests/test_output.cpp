#include <catch_amalgamated.hpp>

#include <string>

#include "metriq/output.hpp"

using namespace metriq;

TEST_CASE("value formatting", "[format]") {
  CHECK(format_value(2.718281828459045) == "2.718281828459");
  CHECK(format_value(-0.0) == "0.000000000000");
  CHECK(format_value(1.5e-7, 3) == "1.500e-07");
  CHECK(format_value(2e20, 2) == "2.00e+20");
  CHECK(format_value(30.0, 0) == "30");
  CHECK(format_value(std::nan("")) == "nan");
}

TEST_CASE("CSV and JSON tables", "[table]") {
  Table t;
  t.meta = {{"solver", "local"}};
  t.add_column("x", {0.0, 0.5});
  t.add_column("y", {1.0, 2.0});
  t.add_column("n", {3.0, 4.0}, true);
  CHECK(to_csv(t, 3) == "# metriq v1\n# solver=local\nx,y,n\n0.000,1.000,3\n0.500,2.000,4\n");
  const auto j = to_json(t);
  CHECK(j["schema"] == "metriq v1");
  CHECK(j["y"][1] == 2.0);
  CHECK(j["n"][0] == 3);
  CHECK(j.dump().find("\"x\"") < j.dump().find("\"y\""));
  CHECK_THROWS_AS(t.add_column("z", {1.0}), DomainError);
}

TEST_CASE("SVG polyline", "[svg]") {
  Table t;
  t.add_column("x", {0.0, 0.5, 1.0});
  t.add_column("y", {1.0, 1.5, 2.7});
  const std::string svg = to_svg(t, 0, 1);
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find(">0.4</text>") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  Table one;
  one.add_column("x", {1.0});
  one.add_column("y", {1.0});
  CHECK_THROWS_AS(to_svg(one, 0, 1), DomainError);
}
