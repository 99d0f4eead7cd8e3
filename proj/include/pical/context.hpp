#ifndef PICAL_CONTEXT_HPP
#define PICAL_CONTEXT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pical/algebra.hpp"
#include "pical/error.hpp"

namespace pical {

/// A process type: the unit type, or a channel type carrying a payload type
/// together with the usage annotation transmitted alongside the payload.
/// Immutable, value-semantic handle with structural sharing.
class Type {
 public:
  enum class Kind { Unit, Chan };

  static Type unit();
  static Type chan(Type payload, AlgebraId alg, UsagePair usage);

  Kind kind() const;
  bool is_chan() const { return kind() == Kind::Chan; }

  // Channel accessors; throw on unit.
  const Type& payload() const;
  const AlgebraId& alg() const;
  const UsagePair& usage() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Type& t);

/// The three annotations a scope restriction carries: the payload type and
/// usage transmitted over the new channel, and the multiplicity granted to
/// the channel itself. The payload and the channel multiplicity may live in
/// different algebras.
struct NuAnnot {
  Type payload_type;
  AlgebraId payload_alg;
  UsagePair payload_usage;
  AlgebraId mult_alg;
  Usage mult;

  Type chan_type() const { return Type::chan(payload_type, payload_alg, payload_usage); }

  friend bool operator==(const NuAnnot& a, const NuAnnot& b) {
    return a.payload_type == b.payload_type && a.payload_alg == b.payload_alg &&
           a.payload_usage == b.payload_usage && a.mult_alg == b.mult_alg && a.mult == b.mult;
  }
  friend bool operator!=(const NuAnnot& a, const NuAnnot& b) { return !(a == b); }
};

std::string to_string(const NuAnnot& a);

// Contexts are stored oldest-first: de Bruijn index 0 is the back(). Entering
// a binder pushes at the back; printing follows storage order.
using PreCtx = std::vector<Type>;
using Idxs = std::vector<AlgebraId>;
using Ctx = std::vector<UsagePair>;

template <typename T>
const T& db_at(const std::vector<T>& v, std::size_t i) {
  return v[v.size() - 1 - i];
}
template <typename T>
T& db_at(std::vector<T>& v, std::size_t i) {
  return v[v.size() - 1 - i];
}
template <typename T>
std::vector<T> db_insert(std::vector<T> v, std::size_t i, T value) {
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(v.size() - i), std::move(value));
  return v;
}
template <typename T>
std::vector<T> db_delete(std::vector<T> v, std::size_t i) {
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(v.size() - 1 - i));
  return v;
}
template <typename T>
std::vector<T> db_exchange(std::vector<T> v, std::size_t i) {
  std::swap(v[v.size() - 1 - i], v[v.size() - 2 - i]);
  return v;
}
template <typename T>
std::vector<T> db_push(std::vector<T> v, T value) {
  v.push_back(std::move(value));
  return v;
}
template <typename T>
std::vector<T> db_pop(std::vector<T> v) {
  v.pop_back();
  return v;
}

std::string to_string(const Ctx& ctx, const Idxs& idxs);
std::string to_string(const PreCtx& ctx);

/// The aligned triple of typing context, per-position algebra indices and
/// usage context that every judgment threads.
struct Env {
  PreCtx gamma;
  Idxs idxs;
  Ctx usage;

  std::size_t size() const { return gamma.size(); }
  bool aligned() const { return gamma.size() == idxs.size() && idxs.size() == usage.size(); }
};

Env ctx_insert(const Env& env, std::size_t i, Type t, AlgebraId alg, UsagePair x);
Env ctx_delete(const Env& env, std::size_t i);
Env ctx_exchange(const Env& env, std::size_t i);

struct ConsumeResult {
  Type type;     // the type housed at the consumed index
  Ctx leftover;  // the usage context after subtraction
};

/// Subtracts `demanded` (a pair of algebra `demanded_alg`) at position `i`,
/// leaving every other position untouched, and reports the housed type.
ConsumeResult consume_var(const AlgebraSet& set, const PreCtx& gamma, const Idxs& idxs,
                          const Ctx& usage, std::size_t i, const AlgebraId& demanded_alg,
                          const UsagePair& demanded);

/// Pointwise split of usage contexts over the same index context; nullopt if
/// any position is undefined.
std::optional<Ctx> split_ctx(const AlgebraSet& set, const Idxs& idxs, const Ctx& gamma,
                             const Ctx& delta);

/// Like split_ctx but throws TypeError{SplitUndefined} naming the first
/// failing de Bruijn index.
Ctx split_ctx_or_throw(const AlgebraSet& set, const Idxs& idxs, const Ctx& gamma,
                       const Ctx& delta);

/// The pointwise consumption between an input context and the leftover it
/// produced: the unique delta with split_ctx(input, delta) == output. Throws
/// if some position does not decompose (possible only for malformed pairs).
Ctx ctx_consumption(const AlgebraSet& set, const Idxs& idxs, const Ctx& input, const Ctx& output);

/// ctx[i] == l-empty of idxs[i].
bool is_empty_at(const AlgebraSet& set, const Idxs& idxs, const Ctx& ctx, std::size_t i);

}  // namespace pical

#endif
