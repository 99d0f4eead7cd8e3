#include <variant>

#include "doctest.h"
#include "pical/ast.hpp"
#include "support.hpp"

using namespace pical;
using testsupport::dummy_annot;
using testsupport::ProcessGen;

namespace {

Raw raw_rename_free(const Raw& p, const Name& from, const Name& to) {
  auto ren = [&](const Name& n) { return n == from ? to : n; };
  switch (p.kind()) {
    case Raw::Kind::End:
      return p;
    case Raw::Kind::Res:
      if (p.res().binder == from) return p;  // shadowed below this binder
      return Raw::res(p.res().binder, p.res().annot, raw_rename_free(p.res().body, from, to));
    case Raw::Kind::Par:
      return Raw::par(raw_rename_free(p.par().left, from, to),
                      raw_rename_free(p.par().right, from, to));
    case Raw::Kind::Recv: {
      Name chan = ren(p.recv().chan);
      if (p.recv().binder == from) return Raw::recv(chan, p.recv().binder, p.recv().body);
      return Raw::recv(chan, p.recv().binder, raw_rename_free(p.recv().body, from, to));
    }
    case Raw::Kind::Send:
      return Raw::send(ren(p.send().chan), ren(p.send().payload),
                       raw_rename_free(p.send().body, from, to));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("names reject keywords and junk") {
  CHECK(Name::valid_text("x"));
  CHECK(Name::valid_text("x^0"));
  CHECK(Name::valid_text("in0"));
  CHECK_FALSE(Name::valid_text(""));
  CHECK_FALSE(Name::valid_text("new"));
  CHECK_FALSE(Name::valid_text("w"));
  CHECK_FALSE(Name::valid_text("a b"));
  CHECK_FALSE(Name::valid_text("1x"));
  CHECK_THROWS_AS(Name("end"), InvariantError);
}

TEST_CASE("variables are bounded by their depth") {
  CHECK(Var(0, 1).index() == 0);
  CHECK(Var(2, 3).depth() == 3);
  CHECK_THROWS_AS(Var(1, 1), InvariantError);
  CHECK_THROWS_AS(Var(0, 0), InvariantError);
}

TEST_CASE("process constructors enforce depth bookkeeping") {
  NuAnnot a = dummy_annot();
  CHECK(Process::end(3).depth() == 3);
  CHECK(Process::res(Name("x"), a, Process::end(1)).depth() == 0);
  CHECK_THROWS_AS(Process::res(Name("x"), a, Process::end(0)), InvariantError);
  CHECK_THROWS_AS(Process::par(Process::end(1), Process::end(2)), InvariantError);
  CHECK_THROWS_AS(Process::recv(Var(0, 2), Name("v"), Process::end(2)), InvariantError);
  CHECK_THROWS_AS(Process::send(Var(0, 2), Var(0, 1), Process::end(2)), InvariantError);
  CHECK_NOTHROW(Process::recv(Var(0, 2), Name("v"), Process::end(3)));
  CHECK_NOTHROW(Process::send(Var(1, 2), Var(0, 2), Process::end(2)));
}

TEST_CASE("well_scoped resolves or reports the first unbound name") {
  NuAnnot a = dummy_annot();
  SUBCASE("the conversion example resolves under z") {
    auto r = well_scoped({Name("z")}, testsupport::appendix_p(a));
    CHECK(std::holds_alternative<ScopeWitness>(r));
  }
  SUBCASE("end needs nothing") {
    auto r = well_scoped({}, Raw::end());
    CHECK(std::holds_alternative<ScopeWitness>(r));
    CHECK(std::get<ScopeWitness>(r).resolutions.empty());
  }
  SUBCASE("an unbound send channel is reported") {
    auto r = well_scoped({}, Raw::send(Name("x"), Name("y"), Raw::end()));
    REQUIRE(std::holds_alternative<ScopeFailure>(r));
    CHECK(std::get<ScopeFailure>(r).name == Name("x"));
  }
  SUBCASE("inner binders shadow") {
    Raw p = Raw::recv(Name("z"), Name("z"), Raw::send(Name("z"), Name("z"), Raw::end()));
    auto r = well_scoped({Name("z")}, p);
    REQUIRE(std::holds_alternative<ScopeWitness>(r));
    // chan z resolves to the free name, both inner occurrences to the binder.
    CHECK(std::get<ScopeWitness>(r).resolutions == std::vector<std::size_t>{0, 0, 0});
  }
}

TEST_CASE("from_raw produces the printed de Bruijn term") {
  NuAnnot a = dummy_annot();
  SUBCASE("the conversion example") {
    auto w = well_scoped({Name("z")}, testsupport::appendix_p(a));
    Process q = from_raw({Name("z")}, testsupport::appendix_p(a), std::get<ScopeWitness>(w));
    CHECK(q == testsupport::appendix_q(a));
    CHECK(to_string(q) ==
          "new[x]{chan<unit>[lin (0,0)] @ lin 0}. (0?(x). 0!2. end | "
          "new[y]{chan<unit>[lin (0,0)] @ lin 0}. 1!0. 0?(y). end)");
  }
  SUBCASE("empty context end") {
    auto w = well_scoped({}, Raw::end());
    CHECK(from_raw({}, Raw::end(), std::get<ScopeWitness>(w)) == Process::end(0));
  }
  SUBCASE("the last context entry is index zero") {
    std::vector<Name> ctx{Name("a"), Name("b")};
    Raw p = Raw::send(Name("a"), Name("b"), Raw::end());
    auto w = well_scoped(ctx, p);
    CHECK(from_raw(ctx, p, std::get<ScopeWitness>(w)) ==
          Process::send(Var(1, 2), Var(0, 2), Process::end(2)));
  }
  SUBCASE("a stale witness is rejected") {
    std::vector<Name> ctx{Name("a"), Name("b")};
    Raw p = Raw::send(Name("a"), Name("b"), Raw::end());
    auto w = std::get<ScopeWitness>(well_scoped(ctx, p));
    w.resolutions[0] = 0;
    CHECK_THROWS_AS(from_raw(ctx, p, w), InvariantError);
  }
}

TEST_CASE("to_raw freshens binders with counted suffixes") {
  NuAnnot a = dummy_annot();
  SUBCASE("the conversion example") {
    Raw r = to_raw({Name("z^0")}, testsupport::appendix_q(a));
    CHECK(r == testsupport::appendix_r(a));
  }
  SUBCASE("end") { CHECK(to_raw({}, Process::end(0)) == Raw::end()); }
  SUBCASE("same hint twice counts up") {
    Process p = Process::res(
        Name("x"), a,
        Process::res(Name("x"), a, Process::send(Var(0, 2), Var(1, 2), Process::end(2))));
    Raw r = to_raw({}, p);
    REQUIRE(r.kind() == Raw::Kind::Res);
    CHECK(r.res().binder == Name("x^0"));
    CHECK(r.res().body.res().binder == Name("x^1"));
    CHECK(r.res().body.res().body ==
          Raw::send(Name("x^1"), Name("x^0"), Raw::end()));
  }
  SUBCASE("sibling binders with one hint stay distinct") {
    Process p = Process::par(Process::res(Name("x"), a, Process::end(1)),
                             Process::res(Name("x"), a, Process::end(1)));
    Raw r = to_raw({}, p);
    CHECK(r.par().left.res().binder != r.par().right.res().binder);
    CHECK(barendregt({}, r));
  }
}

TEST_CASE("lift increments everything at or above the cut") {
  CHECK(lift(0, Process::send(Var(0, 2), Var(1, 2), Process::end(2))) ==
        Process::send(Var(1, 3), Var(2, 3), Process::end(3)));
  CHECK(lift(2, Process::send(Var(0, 2), Var(1, 2), Process::end(2))) ==
        Process::send(Var(0, 3), Var(1, 3), Process::end(3)));
  // The cut moves under binders: at the bottom of the scope nothing shifts,
  // which is exactly what the lower/lift inverse law needs.
  Process p = Process::recv(Var(0, 1), Name("v"),
                            Process::send(Var(1, 2), Var(0, 2), Process::end(2)));
  Process lifted = lift(1, p);
  CHECK(lifted == Process::recv(Var(0, 2), Name("v"),
                                Process::send(Var(1, 3), Var(0, 3), Process::end(3))));
  CHECK(lower(1, lifted) == p);
  CHECK_THROWS_AS(lift(3, Process::end(2)), InvariantError);
}

TEST_CASE("unused scans input and output positions") {
  CHECK(unused(0, Process::end(1)));
  CHECK_FALSE(unused(0, Process::send(Var(0, 1), Var(0, 1), Process::end(1))));
  Process p = Process::recv(Var(0, 2), Name("v"),
                            Process::send(Var(0, 3), Var(1, 3), Process::end(3)));
  CHECK(unused(1, p));
  CHECK_FALSE(unused(0, p));
}

TEST_CASE("lower undoes lift and rejects used variables") {
  Process q = Process::send(Var(0, 2), Var(0, 2), Process::end(2));
  CHECK(lower(1, q) == Process::send(Var(0, 1), Var(0, 1), Process::end(1)));
  CHECK(lower(0, Process::send(Var(2, 3), Var(1, 3), Process::end(3))) ==
        Process::send(Var(1, 2), Var(0, 2), Process::end(2)));
  CHECK_THROWS_AS(lower(0, q), InvariantError);
}

TEST_CASE("exchange swaps adjacent references") {
  CHECK(exchange(0, Process::send(Var(0, 2), Var(1, 2), Process::end(2))) ==
        Process::send(Var(1, 2), Var(0, 2), Process::end(2)));
  CHECK(exchange(0, Process::end(2)) == Process::end(2));
  Process p = Process::recv(Var(0, 2), Name("v"),
                            Process::send(Var(1, 3), Var(2, 3), Process::end(3)));
  CHECK(exchange(0, p) == Process::recv(Var(1, 2), Name("v"),
                                        Process::send(Var(2, 3), Var(1, 3), Process::end(3))));
  CHECK_THROWS_AS(exchange(1, Process::end(2)), InvariantError);
}

TEST_CASE("subst replaces one index by another") {
  CHECK(subst(Process::send(Var(0, 2), Var(0, 2), Process::end(2)), Var(1, 2), Var(0, 2)) ==
        Process::send(Var(1, 2), Var(1, 2), Process::end(2)));
  CHECK(subst(Process::end(2), Var(1, 2), Var(0, 2)) == Process::end(2));
}

TEST_CASE("scope operation laws hold on random terms") {
  ProcessGen gen(20240517);
  for (int k = 0; k < 400; ++k) {
    std::size_t depth = gen.below(4);
    Process p = gen(depth, 6);

    std::size_t i = gen.below(p.depth() + 1);
    CHECK(lower(i, lift(i, p)) == p);
    if (p.depth() > 0) {
      std::size_t u = gen.below(p.depth());
      if (unused(u, p)) CHECK(lift(u, lower(u, p)) == p);
    }
    if (p.depth() >= 2) {
      std::size_t e = gen.below(p.depth() - 1);
      CHECK(exchange(e, exchange(e, p)) == p);
    }
  }
}

TEST_CASE("round trips between names and indices") {
  ProcessGen gen(987654);
  for (int k = 0; k < 400; ++k) {
    std::size_t depth = gen.below(3);
    Process p = gen(depth, 6);
    std::vector<Name> ctx = testsupport::numbered_names(depth);

    Raw named = to_raw(ctx, p);
    // Named output is well scoped and respects the Barendregt convention.
    auto scope = well_scoped(ctx, named);
    REQUIRE(std::holds_alternative<ScopeWitness>(scope));
    CHECK(barendregt(ctx, named));

    // Reading it back restores the indices exactly (hints may differ).
    Process back = from_raw(ctx, named, std::get<ScopeWitness>(scope));
    CHECK(equal_modulo_hints(back, p));

    // And converting the named term again is alpha-equal to it.
    CHECK(alpha_equal(ctx, to_raw(ctx, back), named));
  }
}

TEST_CASE("subst agrees with a name-based oracle") {
  ProcessGen gen(31337);
  int exercised = 0;
  for (int k = 0; k < 300; ++k) {
    std::size_t depth = 2 + gen.below(2);
    Process p = gen(depth, 6);
    std::vector<Name> ctx = testsupport::numbered_names(depth);
    std::size_t from = gen.below(depth);
    std::size_t to = gen.below(depth);
    Process direct = subst(p, Var(to, depth), Var(from, depth));

    // Oracle: rename the corresponding free name on the named form.
    Raw named = to_raw(ctx, p);
    Raw renamed = raw_rename_free(named, db_at(ctx, from), db_at(ctx, to));
    auto scope = well_scoped(ctx, renamed);
    REQUIRE(std::holds_alternative<ScopeWitness>(scope));
    Process via_names = from_raw(ctx, renamed, std::get<ScopeWitness>(scope));
    CHECK(equal_modulo_hints(via_names, direct));
    if (!(direct == p)) ++exercised;
  }
  CHECK(exercised > 20);  // the oracle saw real substitutions, not only identities
}

TEST_CASE("alpha equivalence ignores binder spelling only") {
  NuAnnot a = dummy_annot();
  Raw one = Raw::recv(Name("c"), Name("v"), Raw::send(Name("c"), Name("v"), Raw::end()));
  Raw two = Raw::recv(Name("c"), Name("u"), Raw::send(Name("c"), Name("u"), Raw::end()));
  Raw three = Raw::recv(Name("c"), Name("u"), Raw::send(Name("u"), Name("c"), Raw::end()));
  std::vector<Name> ctx{Name("c")};
  CHECK(alpha_equal(ctx, one, two));
  CHECK_FALSE(alpha_equal(ctx, one, three));
  CHECK_FALSE(alpha_equal(ctx, one, Raw::end()));
  // Annotations participate in equivalence.
  NuAnnot b = a;
  b.mult = Usage::num(1);
  b.mult_alg = "gra";
  CHECK_FALSE(alpha_equal({}, Raw::res(Name("x"), a, Raw::end()),
                          Raw::res(Name("y"), b, Raw::end())));
}

TEST_CASE("canonical process text") {
  Process p = Process::par(
      Process::recv(Var(0, 1), Name("v"), Process::end(2)),
      Process::par(Process::send(Var(0, 1), Var(0, 1), Process::end(1)), Process::end(1)));
  CHECK(to_string(p) == "0?(v). end | 0!0. end | end");
  Process grouped = Process::par(Process::par(Process::end(0), Process::end(0)), Process::end(0));
  CHECK(to_string(grouped) == "(end | end) | end");
  Process under = Process::recv(Var(0, 1), Name("v"),
                                Process::par(Process::end(2), Process::end(2)));
  CHECK(to_string(under) == "0?(v). (end | end)");
}
