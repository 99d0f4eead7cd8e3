#ifndef PICAL_AST_HPP
#define PICAL_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pical/context.hpp"
#include "pical/error.hpp"

namespace pical {

/// A channel/variable name of the surface syntax. Nonempty, free of
/// whitespace and reserved punctuation, and distinct from keywords.
class Name {
 public:
  explicit Name(std::string text);
  const std::string& text() const { return text_; }

  static bool valid_text(const std::string& text);

  friend bool operator==(const Name& a, const Name& b) { return a.text_ == b.text_; }
  friend bool operator!=(const Name& a, const Name& b) { return a.text_ != b.text_; }
  friend bool operator<(const Name& a, const Name& b) { return a.text_ < b.text_; }

 private:
  std::string text_;
};

/// A well-scoped de Bruijn variable: an index below the scope depth it
/// lives in.
class Var {
 public:
  Var(std::size_t index, std::size_t depth);
  std::size_t index() const { return index_; }
  std::size_t depth() const { return depth_; }

  friend bool operator==(const Var& a, const Var& b) {
    return a.index_ == b.index_ && a.depth_ == b.depth_;
  }
  friend bool operator!=(const Var& a, const Var& b) { return !(a == b); }

 private:
  std::size_t index_;
  std::size_t depth_;
};

/// Named surface processes. Scope restrictions carry annotations; binders
/// are the restriction name and the input binder.
class Raw {
 public:
  enum class Kind { End, Res, Par, Recv, Send };

  struct ResData;
  struct ParData;
  struct RecvData;
  struct SendData;

  static Raw end();
  static Raw res(Name binder, NuAnnot annot, Raw body);
  static Raw par(Raw left, Raw right);
  static Raw recv(Name chan, Name binder, Raw body);
  static Raw send(Name chan, Name payload, Raw body);

  Kind kind() const;
  const ResData& res() const;
  const ParData& par() const;
  const RecvData& recv() const;
  const SendData& send() const;

  friend bool operator==(const Raw& a, const Raw& b);
  friend bool operator!=(const Raw& a, const Raw& b) { return !(a == b); }

 private:
  struct Node;
  explicit Raw(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Raw::ResData {
  Name binder;
  NuAnnot annot;
  Raw body;
};
struct Raw::ParData {
  Raw left;
  Raw right;
};
struct Raw::RecvData {
  Name chan;
  Name binder;
  Raw body;
};
struct Raw::SendData {
  Name chan;
  Name payload;
  Raw body;
};

/// Well-scoped de Bruijn processes, indexed by their depth. Depth is stored
/// and checked on construction: a restriction or input body sits one binder
/// deeper than its node, parallel components and output continuations share
/// the node's depth, and every variable's depth is the enclosing depth.
/// Binders keep the original names as hints. Immutable and freely shared.
class Process {
 public:
  enum class Kind { End, Res, Par, Recv, Send };

  struct ResData;
  struct ParData;
  struct RecvData;
  struct SendData;

  static Process end(std::size_t depth);
  static Process res(Name hint, NuAnnot annot, Process body);
  static Process par(Process left, Process right);
  static Process recv(Var chan, Name hint, Process body);
  static Process send(Var chan, Var payload, Process body);

  Kind kind() const;
  std::size_t depth() const;
  const ResData& res() const;
  const ParData& par() const;
  const RecvData& recv() const;
  const SendData& send() const;

  /// Exact structural equality including hints and annotations.
  friend bool operator==(const Process& a, const Process& b);
  friend bool operator!=(const Process& a, const Process& b) { return !(a == b); }

 private:
  struct Node;
  explicit Process(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Process::ResData {
  Name hint;
  NuAnnot annot;
  Process body;
};
struct Process::ParData {
  Process left;
  Process right;
};
struct Process::RecvData {
  Var chan;
  Name hint;
  Process body;
};
struct Process::SendData {
  Var chan;
  Var payload;
  Process body;
};

/// Structural equality that ignores binder name hints (alpha-equality on the
/// de Bruijn representation); annotations still compare.
bool equal_modulo_hints(const Process& a, const Process& b);

// Child selectors for syntactic paths into processes and derivations.
enum class PathStep { ResBody, ParLeft, ParRight, RecvBody, SendBody };
using Path = std::vector<PathStep>;
std::string to_string(const Path& path);

/// Per-occurrence resolution produced by well_scoped: the de Bruijn index of
/// every name occurrence in pre-order (input channel, then body; output
/// channel, then payload, then body).
struct ScopeWitness {
  std::vector<std::size_t> resolutions;
};

struct ScopeFailure {
  Name name;
  Path path;
};

using ScopeCheck = std::variant<ScopeWitness, ScopeFailure>;

/// Checks that every free name occurrence of `p` resolves in `ctx` (the
/// innermost binder shadows; ctx is oldest-first, its last entry is index 0).
ScopeCheck well_scoped(const std::vector<Name>& ctx, const Raw& p);

/// Converts a well-scoped named process to de Bruijn form, keeping binder
/// names as hints. The witness must come from well_scoped on the same input.
Process from_raw(const std::vector<Name>& ctx, const Raw& p, const ScopeWitness& witness);

/// Converts back to names. Fresh binder names follow `hint^k`, counting
/// prior bindings of the hint across the traversal; ctx entries must already
/// carry suffixes (e.g. z^0) so free names never collide. The result obeys
/// the Barendregt convention.
Raw to_raw(const std::vector<Name>& ctx, const Process& p);

/// Increments every variable >= i; the result lives one binder deeper.
Process lift(std::size_t i, const Process& p);

/// True iff no input or output position references i.
bool unused(std::size_t i, const Process& p);

/// Decrements every variable > i; requires (and re-checks) unused(i, p).
Process lower(std::size_t i, const Process& p);

/// Swaps references to i and i+1.
Process exchange(std::size_t i, const Process& p);

/// Replaces every occurrence of `from` by `to`; depth is unchanged.
Process subst(const Process& p, Var to, Var from);

/// Alpha-equivalence on named processes relative to a shared free-name
/// context: occurrences must resolve to the same binding site; binder names
/// and hints are ignored, annotations compare structurally.
bool alpha_equal(const std::vector<Name>& ctx, const Raw& a, const Raw& b);

/// Barendregt convention: all binder names pairwise distinct and distinct
/// from the given free names.
bool barendregt(const std::vector<Name>& free_names, const Raw& p);

/// Canonical text of a de Bruijn process: `end`, `new[hint]{annot}. P`,
/// `P | Q`, `n?(hint). P`, `n!m. P`.
std::string to_string(const Process& p);

/// Surface-syntax text of a named process.
std::string to_string(const Raw& p);

}  // namespace pical

#endif
