#include "doctest.h"
#include "pical/checker.hpp"
#include "pical/metatheory.hpp"
#include "support.hpp"

using namespace pical;
using testsupport::up;
using testsupport::wpair;

namespace {

const AlgebraSet& set() { return AlgebraSet::standard(); }

// recv c = c?(v1). (1+c)?(v2). end — receives twice on the same channel.
Process recv_twice() {
  return Process::recv(Var(0, 1), Name("v1"),
                       Process::recv(Var(1, 2), Name("v2"), Process::end(3)));
}

}  // namespace

TEST_CASE("inaction returns its input context") {
  PreCtx gamma{Type::unit(), Type::chan(Type::unit(), "lin", up(1, 0))};
  Idxs idxs{"gra", "lin"};
  Ctx usage{up(3, 0), up(1, 1)};
  CheckResult r = check(set(), gamma, idxs, usage, Process::end(2));
  CHECK(r.leftover == usage);
  CHECK(r.derivation.output() == usage);
  CHECK(recheck(set(), r.derivation));
}

TEST_CASE("receiving twice consumes graded input two") {
  Type t = Type::chan(Type::unit(), "gra", up(0, 0));
  for (auto [l, rr] : {std::pair<std::uint32_t, std::uint32_t>{0, 2}, {1, 3}}) {
    PreCtx gamma{t};
    Idxs idxs{"gra"};
    Ctx usage{up(2 + l, rr)};
    CheckResult r = check(set(), gamma, idxs, usage, recv_twice());
    CHECK(r.leftover == Ctx{up(l, rr)});
    CHECK(recheck(set(), r.derivation));
  }
}

TEST_CASE("the sender consumes one graded output") {
  // send c = new u. (1+c)!u. end over a channel carrying shared packages.
  Process sender = testsupport::courier_send("u", 0, 1);
  PreCtx gamma{Type::chan(testsupport::package_type(), "gra", up(0, 0))};
  Idxs idxs{"gra"};
  for (auto [l, rr] : {std::pair<std::uint32_t, std::uint32_t>{0, 0}, {2, 1}}) {
    Ctx usage{up(l, 1 + rr)};
    CheckResult r = check(set(), gamma, idxs, usage, sender);
    CHECK(r.leftover == Ctx{up(l, rr)});
    CHECK(recheck(set(), r.derivation));
  }
}

TEST_CASE("the courier system types against empty contexts") {
  Process system = testsupport::courier_process();
  CheckResult r = check(set(), {}, {}, {}, system);
  CHECK(r.leftover.empty());
  CHECK(recheck(set(), r.derivation));

  // The component derivations thread the grades the way the example says:
  // each sender spends one output, the receiver two inputs, the courier one
  // input on each rendezvous channel and two outputs towards the receiver.
  const Derivation& send_x = r.derivation.child().left();
  CHECK(send_x.input() == Ctx{up(1, 1)});
  CHECK(send_x.output() == Ctx{up(1, 0)});
  const Derivation& send_y = r.derivation.child().right().child().left();
  CHECK(send_y.input() == Ctx{up(1, 0), up(1, 1)});
  CHECK(send_y.output() == Ctx{up(1, 0), up(1, 0)});
  const Derivation& recv_z = r.derivation.child().right().child().right().child().left();
  CHECK(recv_z.input() == Ctx{up(1, 0), up(1, 0), up(2, 2)});
  CHECK(recv_z.output() == Ctx{up(1, 0), up(1, 0), up(0, 2)});
  const Derivation& carry = r.derivation.child().right().child().right().child().right();
  CHECK(carry.input() == Ctx{up(1, 0), up(1, 0), up(0, 2)});
  CHECK(carry.output() == Ctx{up(0, 0), up(0, 0), up(0, 0)});
}

TEST_CASE("a linear channel rejects the second send") {
  Type unit_chan = Type::chan(Type::unit(), "lin", up(0, 0));
  PreCtx gamma{unit_chan, Type::unit()};
  Idxs idxs{"lin", "lin"};
  Ctx usage{up(0, 1), up(0, 0)};
  // 1!0. 1!0. end — the channel budget has a single output.
  Process p = Process::send(Var(1, 2), Var(0, 2),
                            Process::send(Var(1, 2), Var(0, 2), Process::end(2)));
  try {
    check(set(), gamma, idxs, usage, p);
    FAIL("double send must not typecheck");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::SplitUndefined);
    CHECK(e.path == "send.body");
  }
}

TEST_CASE("communicating on a unit is rejected") {
  PreCtx gamma{Type::unit()};
  Idxs idxs{"lin"};
  Ctx usage{up(1, 1)};
  try {
    check(set(), gamma, idxs, usage,
          Process::recv(Var(0, 1), Name("v"), Process::end(2)));
    FAIL("expected NotAChannel");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::NotAChannel);
  }
}

TEST_CASE("payload types must match the channel") {
  Type carries_chan = Type::chan(Type::chan(Type::unit(), "sha", wpair()), "lin", up(0, 0));
  PreCtx gamma{carries_chan, Type::unit()};
  Idxs idxs{"lin", "lin"};
  Ctx usage{up(0, 1), up(0, 0)};
  Process p = Process::send(Var(1, 2), Var(0, 2), Process::end(2));
  try {
    check(set(), gamma, idxs, usage, p);
    FAIL("expected PayloadTypeMismatch");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::PayloadTypeMismatch);
  }
}

TEST_CASE("an unexhausted binder is a residual-usage error") {
  // new x @ gra 1 . end — the grant is never spent.
  NuAnnot a{Type::unit(), "gra", up(0, 0), "gra", Usage::num(1)};
  Process p = Process::res(Name("x"), a, Process::end(1));
  try {
    check(set(), {}, {}, {}, p);
    FAIL("expected ResidualUsage");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::ResidualUsage);
  }
}

TEST_CASE("context length must match the depth") {
  CHECK_THROWS_AS(check(set(), {}, {}, {}, Process::end(1)), TypeError);
}

TEST_CASE("check is deterministic") {
  GenCase c = gen_well_typed(set(), 11, 6);
  CheckResult a = check(set(), c.gamma, c.idxs, c.usage, c.process);
  CheckResult b = check(set(), c.gamma, c.idxs, c.usage, c.process);
  CHECK(a.derivation == b.derivation);
}

TEST_CASE("recheck validates stored derivations and catches corruption") {
  Type t = Type::chan(Type::unit(), "lin", up(0, 0));
  PreCtx gamma{t};
  Idxs idxs{"lin"};
  Ctx usage{up(1, 1)};
  Process p = Process::recv(Var(0, 1), Name("v"), Process::end(2));
  CheckResult good = check(set(), gamma, idxs, usage, p);
  CHECK(recheck(set(), good.derivation));

  // Rebuild the recv node with a tampered leftover: the channel entry keeps
  // its full budget instead of paying l-in.
  VarRefStep bad_step = good.derivation.chan_step();
  bad_step.leftover = usage;
  Derivation bad = Derivation::recv_node(p, usage, bad_step, good.derivation.child());
  RecheckResult r = recheck(set(), bad);
  CHECK_FALSE(r.ok);
  CHECK(!r.reason.empty());

  // A wrong input context at the root is caught too.
  Derivation bad2 = Derivation::recv_node(p, Ctx{up(1, 0)}, good.derivation.chan_step(),
                                          good.derivation.child());
  CHECK_FALSE(recheck(set(), bad2).ok);
}

TEST_CASE("type_equal is structural") {
  CHECK(type_equal(Type::unit(), Type::unit()));
  CHECK_FALSE(type_equal(Type::chan(Type::unit(), "lin", up(1, 0)),
                         Type::chan(Type::unit(), "lin", up(0, 1))));
  Type deep = Type::chan(Type::chan(Type::unit(), "sha", wpair()), "gra", up(2, 2));
  CHECK(type_equal(deep, Type::chan(Type::chan(Type::unit(), "sha", wpair()), "gra", up(2, 2))));
}

TEST_CASE("leftovers reconstruct the input by one split") {
  // The consumed context exists pointwise, and folding every variable
  // reference in the derivation reproduces it (independent join oracle).
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenCase c = gen_well_typed(set(), seed, 7);
    CheckResult r = check(set(), c.gamma, c.idxs, c.usage, c.process);
    Ctx consumed = ctx_consumption(set(), c.idxs, c.usage, r.leftover);
    CHECK(split_ctx(set(), c.idxs, c.usage, consumed) == r.leftover);

    // Fold: sum the demands every VarRef makes against root positions.
    std::size_t n = c.usage.size();
    std::vector<UsagePair> total(n, UsagePair{Usage::num(0), Usage::num(0)});
    for (std::size_t k = 0; k < n; ++k)
      total[k] = set().at(c.idxs[k]).pair_empty();
    bool fold_ok = true;
    auto add_demand = [&](std::size_t db_index, std::size_t node_depth, const UsagePair& dem) {
      // Only references to root positions count; deeper binders are local.
      std::size_t local = node_depth - n;
      if (db_index < local) return;
      std::size_t k = n - 1 - (db_index - local);
      auto j = testsupport::join_pair(c.idxs[k], total[k], dem);
      if (!j) {
        fold_ok = false;
        return;
      }
      total[k] = *j;
    };
    auto walk = [&](auto&& self, const Derivation& d) -> void {
      switch (d.kind()) {
        case Derivation::Kind::End:
          return;
        case Derivation::Kind::Res:
          self(self, d.child());
          return;
        case Derivation::Kind::Par:
          self(self, d.left());
          self(self, d.right());
          return;
        case Derivation::Kind::Recv:
          add_demand(d.chan_step().index, d.subject().depth(), d.chan_step().demanded);
          self(self, d.child());
          return;
        case Derivation::Kind::Send:
          add_demand(d.chan_step().index, d.subject().depth(), d.chan_step().demanded);
          add_demand(d.payload_step().index, d.subject().depth(), d.payload_step().demanded);
          self(self, d.child());
          return;
      }
    };
    walk(walk, r.derivation);
    REQUIRE(fold_ok);
    CHECK(Ctx(total.begin(), total.end()) == consumed);
  }
}

TEST_CASE("unused positions keep their usage across checking") {
  int checked = 0;
  for (std::uint64_t seed = 100; seed < 180; ++seed) {
    GenCase c = gen_well_typed(set(), seed, 7);
    if (c.usage.empty()) continue;
    CheckResult r = check(set(), c.gamma, c.idxs, c.usage, c.process);
    for (std::size_t i = 0; i < c.usage.size(); ++i) {
      if (!unused(i, c.process)) continue;
      CHECK(db_at(c.usage, i) == db_at(r.leftover, i));
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("derivations print one node per line") {
  Type t = Type::chan(Type::unit(), "lin", up(0, 0));
  CheckResult r = check(set(), {t}, {"lin"}, {up(1, 1)},
                        Process::recv(Var(0, 1), Name("v"), Process::end(2)));
  std::string text = to_string(r.derivation);
  CHECK(text.find("recv(0): [(1,1)@lin] |> [(0,1)@lin]") != std::string::npos);
  CHECK(text.find("end:") != std::string::npos);
}
