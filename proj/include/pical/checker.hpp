#ifndef PICAL_CHECKER_HPP
#define PICAL_CHECKER_HPP

#include <memory>
#include <string>
#include <vector>

#include "pical/ast.hpp"
#include "pical/context.hpp"

namespace pical {

/// One variable-reference judgment inside a derivation: consuming `demanded`
/// (of algebra `alg`) at `index` yielded the full `leftover` context, and the
/// typing context houses `type` there.
struct VarRefStep {
  std::size_t index;
  Type type;
  AlgebraId alg;
  UsagePair demanded;
  Ctx leftover;

  friend bool operator==(const VarRefStep& a, const VarRefStep& b) {
    return a.index == b.index && a.type == b.type && a.alg == b.alg && a.demanded == b.demanded &&
           a.leftover == b.leftover;
  }
};

/// A typing-derivation tree. Every node snapshots the typing context, the
/// index context and the input/output usage contexts of its judgment, so a
/// node can be re-validated locally and transformers can frame in O(1)
/// lookups. Nodes are immutable and share structure.
class Derivation {
 public:
  enum class Kind { End, Res, Par, Recv, Send };

  static Derivation end_node(Process subject, PreCtx gamma, Idxs idxs, Ctx input);
  /// Builds a restriction node over its body derivation; the node contexts
  /// are the body's with the bound position peeled off.
  static Derivation res_node(Process subject, Derivation body);
  static Derivation par_node(Process subject, Derivation left, Derivation right);
  static Derivation recv_node(Process subject, Ctx input, VarRefStep chan, Derivation body);
  static Derivation send_node(Process subject, Ctx input, VarRefStep chan, VarRefStep payload,
                              Derivation cont);

  Kind kind() const;
  const Process& subject() const;
  const PreCtx& gamma() const;
  const Idxs& idxs() const;
  const Ctx& input() const;
  const Ctx& output() const;

  const NuAnnot& annot() const;         // Res
  const VarRefStep& chan_step() const;  // Recv, Send
  const VarRefStep& payload_step() const;  // Send
  const Derivation& child() const;      // Res, Recv, Send
  const Derivation& left() const;       // Par
  const Derivation& right() const;      // Par

  friend bool operator==(const Derivation& a, const Derivation& b);
  friend bool operator!=(const Derivation& a, const Derivation& b) { return !(a == b); }

 private:
  struct Node;
  explicit Derivation(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct CheckResult {
  Derivation derivation;
  Ctx leftover;
};

/// The syntax-directed leftover checker. Throws TypeError (with the
/// syntactic path of the offending node) when the process does not type.
CheckResult check(const AlgebraSet& set, const PreCtx& gamma, const Idxs& idxs, const Ctx& input,
                  const Process& p);

struct RecheckResult {
  bool ok = true;
  std::string reason;
  Path path;
  explicit operator bool() const { return ok; }
};

/// Re-validates every node of a stored derivation against its typing rule
/// and checks that adjacent contexts agree. The oracle for all derivation
/// transformers.
RecheckResult recheck(const AlgebraSet& set, const Derivation& d);

/// Structural type equality, including usage pairs and algebra ids.
bool type_equal(const Type& a, const Type& b);

/// One node per line: kind, input usage context, output usage context.
std::string to_string(const Derivation& d);

}  // namespace pical

#endif
