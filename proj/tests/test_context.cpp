#include "doctest.h"
#include "pical/context.hpp"
#include "support.hpp"

using namespace pical;
using testsupport::up;
using testsupport::join_pair;
using testsupport::wpair;

namespace {

const AlgebraSet& set() { return AlgebraSet::standard(); }

UsagePair lin_pair(const char* which) {
  const UsageAlgebra& lin = set().at("lin");
  std::string w = which;
  if (w == "empty") return lin.pair_empty();
  if (w == "in") return lin.pair_in();
  if (w == "out") return lin.pair_out();
  return lin.pair_both();
}

}  // namespace

TEST_CASE("types print and compare structurally") {
  Type t = Type::chan(Type::unit(), "lin", lin_pair("in"));
  CHECK(to_string(t) == "chan<unit>[lin (1,0)]");
  CHECK(t == Type::chan(Type::unit(), "lin", lin_pair("in")));
  CHECK(t != Type::chan(Type::unit(), "lin", lin_pair("out")));
  CHECK(t != Type::unit());
  CHECK(Type::unit() == Type::unit());
  Type nested = Type::chan(t, "gra", up(2, 0));
  CHECK(nested == Type::chan(t, "gra", up(2, 0)));
  CHECK(nested != Type::chan(t, "sha", wpair()));
}

TEST_CASE("consume_var reproduces the variable-reference example") {
  // gamma houses the channel below a unit; the channel sits at index 1.
  PreCtx gamma{Type::chan(Type::unit(), "lin", lin_pair("in")), Type::unit()};
  Idxs idxs{"lin", "lin"};
  Ctx usage{lin_pair("both"), lin_pair("both")};
  ConsumeResult r = consume_var(set(), gamma, idxs, usage, 1, "lin", lin_pair("in"));
  CHECK(r.type == Type::chan(Type::unit(), "lin", lin_pair("in")));
  CHECK(r.leftover == Ctx{lin_pair("out"), lin_pair("both")});
}

TEST_CASE("consuming the empty pair is the identity") {
  PreCtx gamma{Type::unit(), Type::unit()};
  Idxs idxs{"gra", "lin"};
  Ctx usage{up(3, 1), lin_pair("in")};
  for (std::size_t i = 0; i < 2; ++i) {
    const UsagePair empty = set().at(db_at(idxs, i)).pair_empty();
    ConsumeResult r = consume_var(set(), gamma, idxs, usage, i, db_at(idxs, i), empty);
    CHECK(r.leftover == usage);
  }
}

TEST_CASE("graded consumption subtracts componentwise") {
  PreCtx gamma{Type::unit()};
  Idxs idxs{"gra"};
  Ctx usage{up(2, 1)};
  ConsumeResult r = consume_var(set(), gamma, idxs, usage, 0, "gra", up(2, 0));
  CHECK(r.leftover == Ctx{up(0, 1)});
}

TEST_CASE("consume_var error paths") {
  PreCtx gamma{Type::unit()};
  Idxs idxs{"lin"};
  Ctx usage{lin_pair("out")};
  CHECK_THROWS_AS(consume_var(set(), gamma, idxs, usage, 0, "lin", lin_pair("in")), TypeError);
  CHECK_THROWS_AS(consume_var(set(), gamma, idxs, usage, 0, "gra", up(0, 0)), TypeError);
  CHECK_THROWS_AS(consume_var(set(), gamma, idxs, usage, 1, "lin", lin_pair("empty")), TypeError);
  try {
    consume_var(set(), gamma, idxs, usage, 0, "lin", lin_pair("in"));
    FAIL("expected over-consumption to throw");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::SplitUndefined);
  }
  try {
    consume_var(set(), gamma, idxs, usage, 0, "gra", up(0, 0));
    FAIL("expected algebra mismatch to throw");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::AlgebraMismatch);
  }
}

TEST_CASE("context surgery applies to all three lists in lockstep") {
  Env empty;
  Env one = ctx_insert(empty, 0, Type::unit(), "lin", lin_pair("empty"));
  CHECK(one.size() == 1);
  CHECK(one.gamma == PreCtx{Type::unit()});
  CHECK(one.idxs == Idxs{"lin"});
  CHECK(one.usage == Ctx{lin_pair("empty")});

  Env two = ctx_insert(one, 1, Type::chan(Type::unit(), "gra", up(0, 0)), "gra", up(2, 2));
  // Inserted at de Bruijn index 1, i.e. below the existing entry.
  CHECK(db_at(two.gamma, std::size_t{1}) == Type::chan(Type::unit(), "gra", up(0, 0)));
  CHECK(db_at(two.usage, std::size_t{0}) == lin_pair("empty"));

  CHECK(ctx_delete(ctx_insert(one, 0, Type::unit(), "sha", wpair()), 0).gamma == one.gamma);

  Env a = ctx_insert(two, 0, Type::unit(), "sha", wpair());
  Env swapped = ctx_exchange(a, 0);
  CHECK(db_at(swapped.idxs, std::size_t{0}) == db_at(a.idxs, std::size_t{1}));
  CHECK(db_at(swapped.idxs, std::size_t{1}) == db_at(a.idxs, std::size_t{0}));
  CHECK(db_at(swapped.idxs, std::size_t{2}) == db_at(a.idxs, std::size_t{2}));
  CHECK(ctx_exchange(swapped, 0).gamma == a.gamma);

  CHECK_THROWS_AS(ctx_delete(empty, 0), TypeError);
  CHECK_THROWS_AS(ctx_exchange(one, 0), TypeError);
}

TEST_CASE("consume_var composes along the algebra") {
  // Consuming y then z equals consuming any w with w = y + z, exhaustively
  // over the linear carrier and on sampled graded values.
  PreCtx gamma{Type::unit()};
  SUBCASE("linear") {
    Idxs idxs{"lin"};
    const char* names[] = {"empty", "in", "out", "both"};
    for (const char* start : names)
      for (const char* first : names)
        for (const char* second : names) {
          Ctx usage{lin_pair(start)};
          auto w = join_pair("lin", lin_pair(first), lin_pair(second));
          if (!w) continue;
          bool two_steps_ok = true;
          Ctx after;
          try {
            ConsumeResult r1 = consume_var(set(), gamma, idxs, usage, 0, "lin", lin_pair(first));
            ConsumeResult r2 =
                consume_var(set(), gamma, idxs, r1.leftover, 0, "lin", lin_pair(second));
            after = r2.leftover;
          } catch (const TypeError&) {
            two_steps_ok = false;
          }
          bool once_ok = true;
          Ctx once;
          try {
            once = consume_var(set(), gamma, idxs, usage, 0, "lin", *w).leftover;
          } catch (const TypeError&) {
            once_ok = false;
          }
          CHECK(two_steps_ok == once_ok);
          if (two_steps_ok && once_ok) CHECK(after == once);
        }
  }
  SUBCASE("graded") {
    Idxs idxs{"gra"};
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
      Ctx usage{up(rng() % 6, rng() % 6)};
      UsagePair y = up(rng() % 4, rng() % 4);
      UsagePair z = up(rng() % 4, rng() % 4);
      UsagePair w = *join_pair("gra", y, z);
      bool two_ok = true;
      Ctx after;
      try {
        ConsumeResult r1 = consume_var(set(), gamma, idxs, usage, 0, "gra", y);
        after = consume_var(set(), gamma, idxs, r1.leftover, 0, "gra", z).leftover;
      } catch (const TypeError&) {
        two_ok = false;
      }
      bool once_ok = true;
      Ctx once;
      try {
        once = consume_var(set(), gamma, idxs, usage, 0, "gra", w).leftover;
      } catch (const TypeError&) {
        once_ok = false;
      }
      CHECK(two_ok == once_ok);
      if (two_ok) CHECK(after == once);
    }
  }
}

TEST_CASE("split_ctx is the pointwise lift") {
  Idxs idxs{"lin", "gra"};
  Ctx gamma{lin_pair("both"), up(2, 0)};
  SUBCASE("subtracting all-empty is the identity") {
    Ctx empties{lin_pair("empty"), up(0, 0)};
    CHECK(split_ctx(set(), idxs, gamma, empties) == gamma);
  }
  SUBCASE("componentwise table") {
    Idxs one{"lin"};
    CHECK(split_ctx(set(), one, Ctx{lin_pair("both")}, Ctx{lin_pair("both")}) ==
          Ctx{lin_pair("empty")});
  }
  SUBCASE("mixed algebras subtract pointwise") {
    Ctx delta{lin_pair("in"), up(1, 0)};
    CHECK(split_ctx(set(), idxs, gamma, delta) == Ctx{lin_pair("out"), up(1, 0)});
  }
  SUBCASE("one undefined position poisons the split") {
    Ctx delta{lin_pair("out"), up(3, 0)};
    CHECK_FALSE(split_ctx(set(), idxs, gamma, delta).has_value());
    CHECK_THROWS_AS(split_ctx_or_throw(set(), idxs, gamma, delta), TypeError);
  }
}

TEST_CASE("ctx_consumption inverts split_ctx") {
  Idxs idxs{"gra", "lin", "sha"};
  Ctx input{up(4, 2), lin_pair("both"), wpair()};
  Ctx delta{up(1, 2), lin_pair("in"), wpair()};
  Ctx output = split_ctx_or_throw(set(), idxs, input, delta);
  CHECK(ctx_consumption(set(), idxs, input, output) == delta);
}
