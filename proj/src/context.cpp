#include "pical/context.hpp"

#include <sstream>

namespace pical {

struct Type::Node {
  Kind kind;
  // Chan fields; unused for Unit.
  std::optional<Type> payload;
  AlgebraId alg;
  UsagePair usage{Usage::num(0), Usage::num(0)};
};

Type Type::unit() {
  static const std::shared_ptr<const Node> node =
      std::make_shared<Node>(Node{Kind::Unit, std::nullopt, "", {Usage::num(0), Usage::num(0)}});
  return Type(node);
}

Type Type::chan(Type payload, AlgebraId alg, UsagePair usage) {
  return Type(std::make_shared<Node>(Node{Kind::Chan, std::move(payload), std::move(alg), usage}));
}

Type::Kind Type::kind() const { return node_->kind; }

const Type& Type::payload() const {
  if (!is_chan()) throw InvariantError("payload() on unit type");
  return *node_->payload;
}

const AlgebraId& Type::alg() const {
  if (!is_chan()) throw InvariantError("alg() on unit type");
  return node_->alg;
}

const UsagePair& Type::usage() const {
  if (!is_chan()) throw InvariantError("usage() on unit type");
  return node_->usage;
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Type::Kind::Unit) return true;
  return a.alg() == b.alg() && a.usage() == b.usage() && a.payload() == b.payload();
}

std::string to_string(const Type& t) {
  if (t.kind() == Type::Kind::Unit) return "unit";
  return "chan<" + to_string(t.payload()) + ">[" + t.alg() + " " + to_string(t.usage()) + "]";
}

std::string to_string(const NuAnnot& a) {
  return to_string(a.chan_type()) + " @ " + a.mult_alg + " " + to_string(a.mult);
}

std::string to_string(const Ctx& ctx, const Idxs& idxs) {
  std::ostringstream out;
  out << "[";
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    if (k) out << ", ";
    out << to_string(ctx[k]) << "@" << idxs[k];
  }
  out << "]";
  return out.str();
}

std::string to_string(const PreCtx& ctx) {
  std::ostringstream out;
  out << "[";
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    if (k) out << ", ";
    out << to_string(ctx[k]);
  }
  out << "]";
  return out.str();
}

namespace {
void require_range(std::size_t i, std::size_t size, const char* op) {
  if (i >= size)
    throw TypeError(TypeError::Kind::IndexOutOfRange,
                    std::string(op) + ": index " + std::to_string(i) + " out of range " +
                        std::to_string(size));
}
}  // namespace

Env ctx_insert(const Env& env, std::size_t i, Type t, AlgebraId alg, UsagePair x) {
  if (i > env.size())
    throw TypeError(TypeError::Kind::IndexOutOfRange, "ctx_insert: position past end");
  return Env{db_insert(env.gamma, i, std::move(t)), db_insert(env.idxs, i, std::move(alg)),
             db_insert(env.usage, i, x)};
}

Env ctx_delete(const Env& env, std::size_t i) {
  require_range(i, env.size(), "ctx_delete");
  return Env{db_delete(env.gamma, i), db_delete(env.idxs, i), db_delete(env.usage, i)};
}

Env ctx_exchange(const Env& env, std::size_t i) {
  require_range(i + 1, env.size(), "ctx_exchange");
  return Env{db_exchange(env.gamma, i), db_exchange(env.idxs, i), db_exchange(env.usage, i)};
}

ConsumeResult consume_var(const AlgebraSet& set, const PreCtx& gamma, const Idxs& idxs,
                          const Ctx& usage, std::size_t i, const AlgebraId& demanded_alg,
                          const UsagePair& demanded) {
  require_range(i, usage.size(), "consume_var");
  if (gamma.size() != usage.size() || idxs.size() != usage.size())
    throw TypeError(TypeError::Kind::DepthMismatch, "consume_var: contexts not aligned");
  const AlgebraId& here = db_at(idxs, i);
  if (here != demanded_alg)
    throw TypeError(TypeError::Kind::AlgebraMismatch,
                    "consume_var: demanded " + demanded_alg + " at index " + std::to_string(i) +
                        " housed in " + here);
  const UsageAlgebra& alg = set.at(here);
  auto left = alg.split_pair(db_at(usage, i), demanded);
  if (!left)
    throw TypeError(TypeError::Kind::SplitUndefined,
                    "consume_var: cannot take " + to_string(demanded) + " from " +
                        to_string(db_at(usage, i)) + "@" + here + " at index " + std::to_string(i));
  Ctx out = usage;
  db_at(out, i) = *left;
  return ConsumeResult{db_at(gamma, i), std::move(out)};
}

std::optional<Ctx> split_ctx(const AlgebraSet& set, const Idxs& idxs, const Ctx& gamma,
                             const Ctx& delta) {
  if (gamma.size() != delta.size() || gamma.size() != idxs.size()) return std::nullopt;
  Ctx out;
  out.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    auto z = set.at(idxs[k]).split_pair(gamma[k], delta[k]);
    if (!z) return std::nullopt;
    out.push_back(*z);
  }
  return out;
}

Ctx split_ctx_or_throw(const AlgebraSet& set, const Idxs& idxs, const Ctx& gamma,
                       const Ctx& delta) {
  if (gamma.size() != delta.size() || gamma.size() != idxs.size())
    throw TypeError(TypeError::Kind::DepthMismatch, "split_ctx: length mismatch");
  Ctx out;
  out.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    auto z = set.at(idxs[k]).split_pair(gamma[k], delta[k]);
    if (!z)
      throw TypeError(TypeError::Kind::SplitUndefined,
                      "split_ctx: undefined at de Bruijn index " +
                          std::to_string(gamma.size() - 1 - k));
    out.push_back(*z);
  }
  return out;
}

Ctx ctx_consumption(const AlgebraSet& set, const Idxs& idxs, const Ctx& input, const Ctx& output) {
  if (input.size() != output.size() || input.size() != idxs.size())
    throw TypeError(TypeError::Kind::DepthMismatch, "ctx_consumption: length mismatch");
  Ctx out;
  out.reserve(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    auto c = set.at(idxs[k]).split_pair(input[k], output[k]);
    if (!c)
      throw TypeError(TypeError::Kind::SplitUndefined,
                      "ctx_consumption: " + to_string(output[k]) + " not within " +
                          to_string(input[k]) + " at position " + std::to_string(k));
    out.push_back(*c);
  }
  return out;
}

bool is_empty_at(const AlgebraSet& set, const Idxs& idxs, const Ctx& ctx, std::size_t i) {
  require_range(i, ctx.size(), "is_empty_at");
  return db_at(ctx, i) == set.at(db_at(idxs, i)).pair_empty();
}

}  // namespace pical
