#ifndef PICAL_TESTS_SUPPORT_HPP
#define PICAL_TESTS_SUPPORT_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pical/ast.hpp"
#include "pical/checker.hpp"
#include "pical/context.hpp"
#include "pical/parser.hpp"

namespace testsupport {

using namespace pical;

inline UsagePair up(std::uint32_t a, std::uint32_t b) {
  return UsagePair{Usage::num(a), Usage::num(b)};
}
inline UsagePair wpair() { return UsagePair{Usage::omega(), Usage::omega()}; }

// A neutral annotation for conversion tests that do not care about typing.
inline NuAnnot dummy_annot() {
  return NuAnnot{Type::unit(), "lin", up(0, 0), "lin", Usage::num(0)};
}

// Test-side join: the partial monoid sum, the inverse of split. Used as an
// independent oracle when reconstructing consumptions.
inline std::optional<Usage> join_usage(const AlgebraId& alg, const Usage& a, const Usage& b) {
  if (alg == "sha") return Usage::omega();
  std::uint32_t sum = a.value() + b.value();
  if (alg == "lin" && sum > 1) return std::nullopt;
  return Usage::num(sum);
}

inline std::optional<UsagePair> join_pair(const AlgebraId& alg, const UsagePair& a,
                                          const UsagePair& b) {
  auto in = join_usage(alg, a.input, b.input);
  auto out = join_usage(alg, a.output, b.output);
  if (!in || !out) return std::nullopt;
  return UsagePair{*in, *out};
}

// ---------------------------------------------------------------------------
// Random untyped processes (well-scoped by construction).

struct ProcessGen {
  std::mt19937_64 rng;

  explicit ProcessGen(std::uint64_t seed) : rng(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng() % n; }

  Usage small_usage(const AlgebraId& alg) {
    if (alg == "sha") return Usage::omega();
    if (alg == "lin") return Usage::num(static_cast<std::uint32_t>(below(2)));
    return Usage::num(static_cast<std::uint32_t>(below(5)));
  }

  AlgebraId any_alg() {
    switch (below(3)) {
      case 0: return "lin";
      case 1: return "gra";
      default: return "sha";
    }
  }

  NuAnnot random_annot() {
    AlgebraId pa = any_alg();
    Type payload = below(10) < 7 ? Type::unit()
                                 : Type::chan(Type::unit(), "sha", wpair());
    UsagePair x{small_usage(pa), small_usage(pa)};
    AlgebraId ma = any_alg();
    return NuAnnot{payload, pa, x, ma, small_usage(ma)};
  }

  Name hint() {
    static const char* pool[] = {"a", "b", "c", "x", "y", "z"};
    return Name(pool[below(6)]);
  }

  Process operator()(std::size_t depth, std::size_t budget) {
    if (budget == 0) return Process::end(depth);
    std::size_t roll = below(100);
    if (roll < 25) {
      std::size_t bl = below(budget);
      return Process::par((*this)(depth, bl), (*this)(depth, budget - 1 - bl));
    }
    if (roll < 45)
      return Process::res(hint(), random_annot(), (*this)(depth + 1, budget - 1));
    if (roll < 70 && depth > 0) {
      Var chan(below(depth), depth);
      return Process::recv(chan, hint(), (*this)(depth + 1, budget - 1));
    }
    if (roll < 90 && depth > 0) {
      Var chan(below(depth), depth);
      Var payload(below(depth), depth);
      return Process::send(chan, payload, (*this)(depth, budget - 1));
    }
    return Process::end(depth);
  }
};

inline std::vector<Name> numbered_names(std::size_t n, const std::string& base = "f") {
  std::vector<Name> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(Name(base + std::to_string(k) + "^0"));
  return out;
}

// ---------------------------------------------------------------------------
// The courier system: source text and the equivalent hand-built term.

inline const char* courier_source() {
  return R"(new x : chan<chan<unit>[sha (w,w)]>[gra (0,0)] @ gra 1 .
( ( new u : chan<unit>[sha (w,w)] @ gra 0 . x!u. end )
| new y : chan<chan<unit>[sha (w,w)]>[gra (0,0)] @ gra 1 .
  ( ( new v : chan<unit>[sha (w,w)] @ gra 0 . y!v. end )
  | new z : chan<chan<unit>[sha (w,w)]>[gra (0,0)] @ gra 2 .
    ( ( z?(p1). z?(p2). end )
    | x?(a). y?(b). z!a. z!b. end ) ) )
)";
}

inline Type package_type() { return Type::chan(Type::unit(), "sha", wpair()); }

inline NuAnnot courier_chan_annot(std::uint32_t mult) {
  return NuAnnot{package_type(), "gra", up(0, 0), "gra", Usage::num(mult)};
}

inline NuAnnot package_annot() {
  return NuAnnot{Type::unit(), "sha", wpair(), "gra", Usage::num(0)};
}

// send c = new w. (1+c)!w. end, at the given depth.
inline Process courier_send(const char* pkg_hint, std::size_t chan, std::size_t depth) {
  return Process::res(Name(pkg_hint), package_annot(),
                      Process::send(Var(chan + 1, depth + 1), Var(0, depth + 1),
                                    Process::end(depth + 1)));
}

inline Process courier_process() {
  // recv z = z?(p1). z?(p2). end at depth 3 (z = 0).
  Process recv_z = Process::recv(
      Var(0, 3), Name("p1"),
      Process::recv(Var(1, 4), Name("p2"), Process::end(5)));
  // carry x y z = x?(a). y?(b). z!a. z!b. end at depth 3 (x=2, y=1, z=0).
  Process carry = Process::recv(
      Var(2, 3), Name("a"),
      Process::recv(Var(2, 4), Name("b"),
                    Process::send(Var(2, 5), Var(1, 5),
                                  Process::send(Var(2, 5), Var(0, 5), Process::end(5)))));
  Process inner_z = Process::res(Name("z"), courier_chan_annot(2), Process::par(recv_z, carry));
  Process inner_y = Process::res(Name("y"), courier_chan_annot(1),
                                 Process::par(courier_send("v", 0, 2), inner_z));
  return Process::res(Name("x"), courier_chan_annot(1),
                      Process::par(courier_send("u", 0, 1), inner_y));
}

inline Process parse_courier() {
  Program prog = parse(courier_source());
  auto scope = well_scoped({}, prog.proc);
  return from_raw({}, prog.proc, std::get<ScopeWitness>(scope));
}

// ---------------------------------------------------------------------------
// The named/de Bruijn conversion example: P converts to Q, Q prints as R.

inline Raw appendix_p(const NuAnnot& a) {
  return Raw::res(
      Name("x"), a,
      Raw::par(Raw::recv(Name("x"), Name("x"),
                         Raw::send(Name("x"), Name("z"), Raw::end())),
               Raw::res(Name("y"), a,
                        Raw::send(Name("x"), Name("y"),
                                  Raw::recv(Name("y"), Name("y"), Raw::end())))));
}

inline Process appendix_q(const NuAnnot& a) {
  return Process::res(
      Name("x"), a,
      Process::par(
          Process::recv(Var(0, 2), Name("x"),
                        Process::send(Var(0, 3), Var(2, 3), Process::end(3))),
          Process::res(Name("y"), a,
                       Process::send(Var(1, 3), Var(0, 3),
                                     Process::recv(Var(0, 3), Name("y"), Process::end(4))))));
}

inline Raw appendix_r(const NuAnnot& a) {
  return Raw::res(
      Name("x^0"), a,
      Raw::par(Raw::recv(Name("x^0"), Name("x^1"),
                         Raw::send(Name("x^1"), Name("z^0"), Raw::end())),
               Raw::res(Name("y^0"), a,
                        Raw::send(Name("x^0"), Name("y^0"),
                                  Raw::recv(Name("y^0"), Name("y^1"), Raw::end())))));
}

}  // namespace testsupport

#endif
