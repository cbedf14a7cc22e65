#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oops/config.hpp"
#include "oops/frozen.hpp"
#include "oops/isa.hpp"

using namespace oops;

TEST_CASE("minimal config parses") {
  auto r = parse_config(
      "alphabet c0 c1 outv halt\n"
      "weight halt 3\n"
      "task 1k2k k=1..3\n"
      "ceiling 5000\n");
  REQUIRE(r.ok);
  CHECK(r.setup.tasks.size() == 3);
  CHECK(r.setup.tasks[0].id == "1k2k k=1");
  CHECK(r.setup.weights.weight(OP_HALT) == 3);
  CHECK(r.setup.weights.total() == 6);
  CHECK(r.setup.ceiling == 5000);
}

TEST_CASE("comments, blank lines and single-k ranges") {
  auto r = parse_config(
      "# a comment\n"
      "\n"
      "alphabet c0 c1 outv halt  # trailing comment\n"
      "task hanoi k=3\n");
  REQUIRE(r.ok);
  REQUIRE(r.setup.tasks.size() == 1);
  CHECK(r.setup.tasks[0].id == "hanoi k=3");
}

TEST_CASE("unknown keys are rejected with the line number") {
  auto r = parse_config("alphabet c0 c1\nbogus_key 1\n");
  REQUIRE_FALSE(r.ok);
  CHECK(r.error.rfind("line 2:", 0) == 0);
  CHECK(r.error.find("bogus_key") != std::string::npos);
}

TEST_CASE("malformed weight line names its line") {
  auto r = parse_config("weight bogus 3\n");
  REQUIRE_FALSE(r.ok);
  CHECK(r.error.rfind("line 1:", 0) == 0);
  CHECK(r.error.find("bogus") != std::string::npos);

  r = parse_config("alphabet c0 c1\nweight c1 0\n");
  REQUIRE_FALSE(r.ok);
  CHECK(r.error.rfind("line 2:", 0) == 0);
}

TEST_CASE("weight outside the alphabet is rejected") {
  auto r = parse_config("alphabet c0 c1\nweight halt 4\n");
  REQUIRE_FALSE(r.ok);
  CHECK(r.error.find("halt") != std::string::npos);
}

TEST_CASE("bad task ranges") {
  CHECK_FALSE(parse_config("task 1k2k k=0..3\n").ok);
  CHECK_FALSE(parse_config("task 1k2k k=5..3\n").ok);
  CHECK_FALSE(parse_config("task 1k2k\n").ok);
  CHECK_FALSE(parse_config("task maze k=1\n").ok);
}

TEST_CASE("planted task line") {
  auto r = parse_config(
      "alphabet c0 c1 outv halt\n"
      "task planted c1 outv halt\n");
  REQUIRE(r.ok);
  REQUIRE(r.setup.tasks.size() == 1);
  MachineState s;
  s.out_buf = {1};
  CHECK(r.setup.tasks[0].success(s));
}

TEST_CASE("numeric keys and gamma") {
  auto r = parse_config(
      "n_factor 2\nseed 9\nworkers 4\nsamples 5000\n"
      "global_steps 4096\ngamma 1/3\nfrozen_load some/path.txt\n");
  REQUIRE(r.ok);
  CHECK(r.setup.n_factor == 2);
  CHECK(r.setup.seed == 9);
  CHECK(r.setup.workers == 4);
  CHECK(r.setup.samples == 5000);
  CHECK(r.setup.global_steps == 4096);
  CHECK(r.setup.gamma_num == 1);
  CHECK(r.setup.gamma_den == 3);
  CHECK(r.setup.frozen_load == "some/path.txt");

  CHECK_FALSE(parse_config("gamma 2/2\n").ok);  // must be in (0,1)
  CHECK_FALSE(parse_config("gamma 0.5\n").ok);
  CHECK_FALSE(parse_config("n_factor 0\n").ok);
  CHECK_FALSE(parse_config("ceiling 0\n").ok);
}

TEST_CASE("default alphabet is the full uniform table") {
  auto r = parse_config("ceiling 10\n");
  REQUIRE(r.ok);
  CHECK(r.setup.weights.alphabet().size() == size_t{kAlphabetSize});
}

TEST_CASE("frozen store text round-trips") {
  FrozenStore store;
  store.freeze({OP_DEFNP, OP_OUT1, OP_CALLTP, OP_OUT2, OP_ENDNP});
  store.freeze({OP_XVT, OP_MV});
  std::string text = store.to_text();
  auto back = FrozenStore::from_text(text);
  REQUIRE(back.has_value());
  CHECK(*back == store);
  CHECK(back->to_text() == text);

  CHECK_FALSE(FrozenStore::from_text("0 not_a_token\n").has_value());
}

TEST_CASE("program mnemonic round-trip") {
  std::vector<uint8_t> p = {OP_C2, OP_DUP, OP_MUL, OP_HALT};
  auto parsed = program_from_string(program_to_string(p));
  REQUIRE(parsed.has_value());
  CHECK(*parsed == p);
  CHECK_FALSE(program_from_string("c2 zzz").has_value());
}

TEST_CASE("isa dump lists every token once") {
  std::string dump = dump_isa();
  for (int i = 0; i < kAlphabetSize; ++i) {
    CHECK(dump.find(std::string(op_name(static_cast<uint8_t>(i)))) !=
          std::string::npos);
  }
}
