#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "orbitcount/config.hpp"
#include "orbitcount/errors.hpp"

using namespace orbitcount;
using config::Config;

namespace {
Config parse(const std::string& text) {
  std::istringstream in(text);
  return config::parse_config(in);
}

void expect_config_error(const std::string& text) {
  try {
    parse(text);
    CHECK_MESSAGE(false, text);
  } catch (const error& e) {
    CHECK(e.code() == errc::config);
  }
}
}  // namespace

TEST_CASE("a full config parses with comments and rationals") {
  Config cfg = parse(R"(# schottky-style run
[group]
rank = 2

[space]
kind = half_plane
basepoint_x = 0      # on the first axis
basepoint_y = 1

[matrices]
a = 5/3, 4/3, 4/3, 5/3
b = 25/3, -32, 4/3, -5

[conjugacy]
g = ab
cylinder_prefix = b

[coding]
verify_len = 9

[counting]
t_max_full = 16
t_max_conj = 24
fit_lo = 10
fit_hi = 24
)");
  CHECK(cfg.rank == 2);
  CHECK(cfg.kind == "half_plane");
  REQUIRE(cfg.matrices.size() == 2);
  CHECK(cfg.matrices[0](0, 0) == doctest::Approx(5.0 / 3.0));
  CHECK(cfg.matrices[1](0, 1) == doctest::Approx(-32.0));
  CHECK(cfg.basepoint_y == doctest::Approx(1.0));
  CHECK(cfg.g == "ab");
  CHECK(cfg.cylinder_prefix == "b");
  CHECK(cfg.verify_len == 9);
  CHECK(cfg.t_max_conj == doctest::Approx(24.0));
  CHECK(cfg.fit_lo == doctest::Approx(10.0));
  CHECK(cfg.resolved_depth() == 6);
  CHECK(cfg.g_word().size() == 2);
  CHECK(cfg.make_space().is_tree() == false);
}

TEST_CASE("an empty config yields the tree defaults") {
  Config cfg = parse("");
  CHECK(cfg.rank == 2);
  CHECK(cfg.kind == "tree");
  REQUIRE(cfg.weights.size() == 2);
  CHECK(cfg.weights[0] == doctest::Approx(1.0));
  CHECK(cfg.g == "a");
  CHECK(cfg.verify_len == 8);
  CHECK(cfg.resolved_depth() == 2);
  CHECK(cfg.make_space().is_tree());
}

TEST_CASE("depth override wins over the per-kind default") {
  Config cfg = parse("[potential]\ndepth = 4\n");
  CHECK(cfg.resolved_depth() == 4);
}

TEST_CASE("rational and list values parse exactly") {
  Config cfg = parse("[space]\nweights = 1, 3/2\n[potential]\nhoelder_depths = 2 3 4\n");
  REQUIRE(cfg.weights.size() == 2);
  CHECK(cfg.weights[1] == doctest::Approx(1.5));
  CHECK(cfg.hoelder_depths == std::vector<int>{2, 3, 4});
}

TEST_CASE("malformed configs are rejected with the config error code") {
  expect_config_error("[space]\nweights = 1/0\n");            // division by zero
  expect_config_error("[space]\nweights = 1, abc\n");         // not a number
  expect_config_error("[counting]\nt_max_full = 12x\n");      // trailing junk
  expect_config_error("[coding]\nverify_len = 2.5\n");        // not an integer
  expect_config_error("[group]\nrank = 2\nrank = 3\n");       // duplicate key
  expect_config_error("[space]\nkindd = tree\n");             // unknown key
  expect_config_error("[space\nkind = tree\n");               // unterminated section
  expect_config_error("[space]\nkind tree\n");                // missing '='
  expect_config_error("[space]\n= 3\n");                      // empty key
  expect_config_error("[space]\nkind = sphere\n");            // unsupported kind
  expect_config_error("[space]\nkind = half_plane\n");        // missing matrices
  expect_config_error(
      "[space]\nkind = half_plane\n[matrices]\na = 1,0,0\nb = 1,0,0,1\n");  // short matrix
  expect_config_error("[group]\nrank = 0\n");                 // no generators
  expect_config_error("[space]\nweights = 1, 1, 1\n");        // one weight per pair
}

TEST_CASE("generator overrides are validated when gens are built") {
  Config ok = parse("[group]\norder = 2, 3, 0, 1\n");
  CHECK(ok.make_gens().order == std::vector<int>{2, 3, 0, 1});

  Config bad_size = parse("[group]\ninvolution = 1, 0\n");
  CHECK_THROWS_AS(bad_size.make_gens(), error);
}

TEST_CASE("the config digest tracks values, not formatting") {
  Config a = parse("[group]\nrank = 2\n[counting]\nt_max_conj = 21\n");
  Config b = parse("# comment\n[group]\nrank   =   2\n\n[counting]\nt_max_conj = 21.0\n");
  Config c = parse("[group]\nrank = 2\n[counting]\nt_max_conj = 19\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
}

TEST_CASE("loading a missing config file is an io error") {
  try {
    config::load_config("/nonexistent/path/run.cfg");
    CHECK(false);
  } catch (const error& e) {
    CHECK(e.code() == errc::io);
  }
}
