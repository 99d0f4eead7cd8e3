#ifndef PICAL_SEMANTICS_HPP
#define PICAL_SEMANTICS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pical/ast.hpp"

namespace pical {

/// The channel a reduction step communicates on: bound inside the process,
/// or the free variable `i`.
class Channel {
 public:
  static Channel internal() { return Channel(std::nullopt); }
  static Channel external(Var v) { return Channel(v); }

  bool is_internal() const { return !var_.has_value(); }
  Var var() const;

  friend bool operator==(const Channel& a, const Channel& b) {
    if (a.is_internal() != b.is_internal()) return false;
    return a.is_internal() || a.var() == b.var();
  }
  friend bool operator!=(const Channel& a, const Channel& b) { return !(a == b); }

 private:
  explicit Channel(std::optional<Var> v) : var_(v) {}
  std::optional<Var> var_;
};

std::string to_string(const Channel& c);

/// Steps a channel under one binder: external 0 becomes internal, external
/// 1+n becomes external n.
Channel dec(const Channel& c);

enum class CongRuleKind { CompAssoc, CompSym, CompId, ScopeEnd, ScopeExt, ScopeComm };
enum class Direction { Forward, Backward };

struct CongRule {
  CongRuleKind kind;
  Direction dir = Direction::Forward;
};

std::string to_string(const CongRule& rule);

using CongPath = Path;

/// Applies one structural-congruence rewrite at the subterm addressed by
/// `path`. Forward directions read the rules left to right:
///   comp-assoc  P|(Q|R)  ->  (P|Q)|R
///   comp-sym    P|Q      ->  Q|P
///   comp-id     P|end    ->  P
///   scope-end   new end  ->  end
///   scope-ext   new(P|Q) ->  (new P)|lower0(Q)   requires unused(0, Q)
///   scope-comm  new new P -> new new exchange0(P)  (annotations swap)
/// Backward directions invert; the fresh channel introduced by backward
/// scope-end carries unit payload at graded zero usage and multiplicity 0.
/// Throws RewriteError when the subterm does not match or a side condition
/// fails.
Process apply_cong(const CongRule& rule, const CongPath& path, const Process& p);

/// The annotation used when a rewrite must invent a channel.
NuAnnot inert_annot();

struct Reduction {
  Channel channel;
  Process result;
};

/// Enumerates the reduction steps of `p`, deterministically, left to right.
/// Redex discovery first normalizes with flatten_normalize (associativity,
/// symmetry and unit laws only), then pairs input and output spine
/// components on a common channel; each step's result is assembled from the
/// normalized spine. Communication through a restriction decrements the
/// binder's multiplicity annotation (when the split is defined) so the
/// result re-typechecks. Scope extrusion is never searched automatically;
/// see prenex.
std::vector<Reduction> reductions(const Process& p);

/// Reassociates parallel composition to a right-nested spine and drops end
/// units, recursively under every constructor. The result is structurally
/// congruent to the input via comp-assoc/comp-sym/comp-id alone.
Process flatten_normalize(const Process& p);

/// Floats restrictions outward (backward scope extrusion) until every spine
/// is restriction-free, so cross-scope redexes become visible to
/// `reductions`. Prefix continuations are left alone: a binder cannot move
/// past an input or output. The result is structurally congruent to the
/// input.
Process prenex(const Process& p);

/// Alpha-equality on de Bruijn terms: index equality modulo name hints.
bool process_eq(const Process& a, const Process& b);

/// True iff the process collapses to end by flattening plus scope-end
/// rewrites alone.
bool congruent_to_end(const Process& p);

namespace detail {

/// Where a reduction step came from, for derivation transformers that must
/// mirror the engine's search. Subject processes handed to these helpers
/// must already be flatten-normalized.
struct CommLoc {
  std::size_t recv_pos;
  std::size_t send_pos;
  std::size_t chan;     // spine-level channel index
  std::size_t payload;  // spine-level payload index
};
struct ResLoc {
  std::size_t pos;  // spine position of the restriction; recurse inside
};
struct LocatedStep {
  Reduction step;
  std::variant<CommLoc, ResLoc> loc;
};

/// Right-nested spine components of a normalized process (empty for end).
std::vector<Process> spine_components(const Process& p);
Process assemble_spine(const std::vector<Process>& comps, std::size_t depth);

/// Steps of a normalized process, with locations. For a Res subject the
/// location is ResLoc{0} and the inner step is found by re-entering the body.
std::vector<LocatedStep> located_steps(const Process& normalized);

Process res_step_wrap(const Process& res_subject, const Reduction& inner, Reduction& out);

}  // namespace detail

}  // namespace pical

#endif
