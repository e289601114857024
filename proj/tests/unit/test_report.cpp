#include <doctest.h>

#include <sstream>

#include "kochspray/errors.hpp"
#include "kochspray/report.hpp"
#include "kochspray/validation.hpp"

using namespace kochspray;

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_real(0.1) == "0.10000000000000001");
  CHECK(csv_real(1.0) == "1");
}

TEST_CASE("csv writer") {
  std::ostringstream s;
  CsvWriter w(s, {"x", "label"});
  w << 0.5 << "a,b";
  w.end_row();
  CHECK(s.str() == "x,label\r\n0.5,\"a,b\"\r\n");
}

TEST_CASE("json keeps order and prints 17 digits") {
  nlohmann::ordered_json j;
  j["zeta"] = 0.1;
  j["alpha"] = {1, 2};
  j["name"] = "x";
  std::ostringstream s;
  write_json(s, j, 0);
  CHECK(s.str() == "{\"zeta\":0.10000000000000001,\"alpha\":[1,2],\"name\":\"x\"}\n");
}

TEST_CASE("validation suite selection") {
  CHECK_THROWS_AS(run_validation("nope"), DomainError);
  const auto r = run_validation("ifs");
  CHECK(r.size() >= 5);
  for (const auto& c : r) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
}
