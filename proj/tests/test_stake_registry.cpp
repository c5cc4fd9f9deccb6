#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "peerwheel/error.hpp"
#include "peerwheel/random_source.hpp"
#include "peerwheel/stake_registry.hpp"

using namespace peerwheel;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected peerwheel::Error");
  return ErrorCode::Io;
}

StakeRegistry parse(const std::string& text) {
  std::istringstream in(text);
  return parse_stakes(in, "test");
}

std::vector<Stake> weights_of(const RegistrySnapshot& snap) {
  return {snap.table.weights().begin(), snap.table.weights().end()};
}

}  // namespace

TEST_SUITE("stake-registry") {
  TEST_CASE("upsert maintains total and max") {
    StakeRegistry r;
    CHECK_FALSE(r.upsert("A", 5).has_value());
    CHECK(r.total() == 5);
    CHECK(r.max_stake() == 5);

    CHECK(r.upsert("A", 2) == Stake{5});
    CHECK(r.total() == 2);
    CHECK(r.max_is_stale());
    CHECK(r.snapshot().table.max_weight() == 2);
    CHECK_FALSE(r.max_is_stale());

    StakeRegistry s;
    s.upsert("A", 5);
    s.upsert("B", 3);
    CHECK_FALSE(s.upsert("C", 9).has_value());
    CHECK(s.total() == 17);
    CHECK(s.max_stake() == 9);
  }

  TEST_CASE("remove") {
    StakeRegistry r;
    r.upsert("A", 5);
    r.upsert("B", 3);
    CHECK(r.remove("A") == Stake{5});
    CHECK(r.total() == 3);
    const auto snap = r.snapshot();
    CHECK(weights_of(snap) == std::vector<Stake>{3});
    CHECK(snap.table.max_weight() == 3);

    StakeRegistry single;
    single.upsert("A", 5);
    CHECK_FALSE(single.remove("Z").has_value());
    CHECK(single.total() == 5);
    CHECK(single.size() == 1);
    CHECK(single.remove("A") == Stake{5});
    CHECK(single.empty());
    CHECK(code_of([&] { single.snapshot(); }) == ErrorCode::EmptyTable);
  }

  TEST_CASE("snapshot preserves insertion order") {
    StakeRegistry r;
    r.upsert("A", 1);
    r.upsert("B", 2);
    r.upsert("C", 3);
    r.upsert("D", 4);
    const auto snap = r.snapshot();
    CHECK(weights_of(snap) == std::vector<Stake>{1, 2, 3, 4});
    CHECK(snap.peers == std::vector<PeerId>{"A", "B", "C", "D"});

    // Updating keeps position; re-adding moves to the end.
    r.upsert("B", 20);
    r.remove("A");
    r.upsert("A", 7);
    const auto again = r.snapshot();
    CHECK(again.peers == std::vector<PeerId>{"B", "C", "D", "A"});
    CHECK(weights_of(again) == std::vector<Stake>{20, 3, 4, 7});
  }

  TEST_CASE("all-zero registry cannot be snapshotted") {
    StakeRegistry r;
    r.upsert("A", 0);
    r.upsert("B", 0);
    CHECK(code_of([&] { r.snapshot(); }) == ErrorCode::ZeroTotal);
  }

  TEST_CASE("random operation sequences match a from-scratch model") {
    RandomSource rng(606);
    for (int seq = 0; seq < 1000; ++seq) {
      StakeRegistry r;
      std::map<std::string, Stake> model;
      std::vector<std::string> order;
      const std::size_t pool = 1 + rng.uniform(100);
      const int ops = 1 + static_cast<int>(rng.uniform(300));
      for (int op = 0; op < ops; ++op) {
        const std::string id = "p" + std::to_string(rng.uniform(pool));
        if (rng.uniform(3) == 0) {
          const auto removed = r.remove(id);
          const auto it = model.find(id);
          REQUIRE(removed.has_value() == (it != model.end()));
          if (it != model.end()) {
            REQUIRE(*removed == it->second);
            model.erase(it);
            order.erase(std::find(order.begin(), order.end(), id));
          }
        } else {
          // Small stakes make ties with the maximum common.
          const auto stake = static_cast<Stake>(rng.uniform(rng.uniform(2) ? 10 : 1'000'000));
          const auto prev = r.upsert(id, stake);
          REQUIRE(prev.has_value() == model.contains(id));
          if (!model.contains(id)) order.push_back(id);
          model[id] = stake;
        }

        WideStake total = 0;
        Stake max = 0;
        for (const auto& [_, s] : model) {
          total += s;
          max = std::max(max, s);
        }
        REQUIRE(r.total() == total);
        REQUIRE(r.size() == model.size());
        if (rng.uniform(8) == 0) REQUIRE(r.max_stake() == max);
        if (rng.uniform(16) == 0 && total > 0) {
          const auto snap = r.snapshot();
          REQUIRE(snap.table.total() == total);
          REQUIRE(snap.table.max_weight() == max);
          REQUIRE(snap.peers == order);
        }
      }
    }
  }

  TEST_CASE("stake file parsing") {
    const auto r = parse(
        "# validators\n"
        "A,1\n"
        "  B , 2  # trailing comment\n"
        "\n"
        "C,3\r\n"
        "D,4\n");
    StakeRegistry copy = r;
    const auto snap = copy.snapshot();
    CHECK(snap.peers == std::vector<PeerId>{"A", "B", "C", "D"});
    CHECK(weights_of(snap) == std::vector<Stake>{1, 2, 3, 4});
  }

  TEST_CASE("stake file errors") {
    CHECK(code_of([] { parse(""); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("# only a comment\n\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("A 5\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse(",5\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("A,\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("A,-5\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("A,1.5\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("A,4294967296\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse("A,1\nA,2\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { load_stake_file("/nonexistent/stakes.csv"); }) == ErrorCode::Io);
  }

  TEST_CASE("written stake files load back to the same registry") {
    RandomSource rng(77);
    for (int trial = 0; trial < 50; ++trial) {
      StakeRegistry r;
      const std::size_t n = 1 + rng.uniform(40);
      for (std::size_t i = 0; i < n; ++i) {
        r.upsert("peer-" + std::to_string(rng.uniform(1000)), static_cast<Stake>(rng.uniform(1ULL << 32)));
      }
      std::ostringstream out;
      write_stakes(r, out);
      CHECK(parse(out.str()).entries() == r.entries());
    }
  }
}
