#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lplab/constants.hpp"
#include "lplab/errors.hpp"

using namespace lplab;

TEST_CASE("shipped fixture equals compiled defaults") {
  const Constants file = Constants::load(std::filesystem::path(LPLAB_DATA_DIR) / "constants.default.txt");
  CHECK(file == Constants::defaults());
}

TEST_CASE("parse") {
  std::istringstream in("# comment\n\nc_A = 0.5  # trailing\n  tails_c=2\n");
  const Constants c = Constants::parse(in);
  CHECK(c.get("c_A") == 0.5);
  CHECK(c.get("tails_c") == 2);
  CHECK(c.get("n_min") == Constants::defaults().get("n_min"));

  std::istringstream unknown("no_such_key = 1\n");
  CHECK_THROWS_AS(Constants::parse(unknown), DomainError);
  std::istringstream bad("c_A = 0.5x\n");
  CHECK_THROWS_AS(Constants::parse(bad), DomainError);
  std::istringstream noeq("c_A 0.5\n");
  CHECK_THROWS_AS(Constants::parse(noeq), DomainError);
  CHECK_THROWS_AS(Constants::defaults().get("nope"), DomainError);
}

TEST_CASE("write round trip") {
  Constants c;
  c.set("c_A", 0.1234567890123456789);
  std::stringstream ss;
  c.write(ss);
  CHECK(Constants::parse(ss) == c);
}

TEST_CASE("resolution order") {
  const auto path = std::filesystem::temp_directory_path() / "lplab_constants_test.txt";
  {
    std::ofstream out(path);
    out << "c_A = 0.77\n";
  }
  ::unsetenv("LPLAB_CONSTANTS");
  CHECK(Constants::resolve("") == Constants::defaults());
  ::setenv("LPLAB_CONSTANTS", path.c_str(), 1);
  CHECK(Constants::resolve("").get("c_A") == 0.77);
  CHECK_THROWS_AS(Constants::resolve("/nonexistent/file"), DomainError);
  ::unsetenv("LPLAB_CONSTANTS");
  std::filesystem::remove(path);
}
