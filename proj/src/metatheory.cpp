#include "pical/metatheory.hpp"

#include <algorithm>
#include <random>

namespace pical {

namespace {

[[noreturn]] void evidence_error(const std::string& what) {
  throw MetaError(MetaError::Kind::EvidenceMismatch, what);
}

UsagePair must_split_pair(const AlgebraSet& set, const AlgebraId& alg, const UsagePair& x,
                          const UsagePair& y, const char* what) {
  auto z = set.at(alg).split_pair(x, y);
  if (!z) evidence_error(std::string(what) + ": " + to_string(y) + " does not split " +
                         to_string(x) + "@" + alg);
  return *z;
}

std::vector<Derivation> deriv_components(const Derivation& d) {
  std::vector<Derivation> out;
  auto gather = [&](auto&& self, const Derivation& node) -> void {
    if (node.kind() == Derivation::Kind::End) return;
    if (node.kind() == Derivation::Kind::Par) {
      self(self, node.left());
      self(self, node.right());
      return;
    }
    out.push_back(node);
  };
  gather(gather, d);
  return out;
}

Derivation assemble_par(const std::vector<Derivation>& comps, std::size_t depth,
                        const PreCtx& gamma, const Idxs& idxs, const Ctx& input) {
  if (comps.empty()) return Derivation::end_node(Process::end(depth), gamma, idxs, input);
  Derivation acc = comps.back();
  for (std::size_t k = comps.size() - 1; k-- > 0;) {
    Process subject = Process::par(comps[k].subject(), acc.subject());
    acc = Derivation::par_node(std::move(subject), comps[k], acc);
  }
  return acc;
}

}  // namespace

SplitEvidence derivation_consumption(const AlgebraSet& set, const Derivation& d) {
  return SplitEvidence{d.input(), ctx_consumption(set, d.idxs(), d.input(), d.output()),
                       d.output()};
}

// ---------------------------------------------------------------------------
// Framing

namespace {

Derivation replay_at(const AlgebraSet& set, const Derivation& d, const Ctx& input) {
  switch (d.kind()) {
    case Derivation::Kind::End:
      return Derivation::end_node(d.subject(), d.gamma(), d.idxs(), input);
    case Derivation::Kind::Res: {
      const NuAnnot& a = d.annot();
      Derivation body = replay_at(set, d.child(), db_push(input, UsagePair{a.mult, a.mult}));
      return Derivation::res_node(d.subject(), std::move(body));
    }
    case Derivation::Kind::Par: {
      Derivation left = replay_at(set, d.left(), input);
      Derivation right = replay_at(set, d.right(), left.output());
      return Derivation::par_node(d.subject(), std::move(left), std::move(right));
    }
    case Derivation::Kind::Recv: {
      const VarRefStep& c = d.chan_step();
      ConsumeResult r = consume_var(set, d.gamma(), d.idxs(), input, c.index, c.alg, c.demanded);
      VarRefStep chan{c.index, r.type, c.alg, c.demanded, r.leftover};
      Derivation body =
          replay_at(set, d.child(), db_push(chan.leftover, chan.type.usage()));
      return Derivation::recv_node(d.subject(), input, std::move(chan), std::move(body));
    }
    case Derivation::Kind::Send: {
      const VarRefStep& c = d.chan_step();
      const VarRefStep& pl = d.payload_step();
      ConsumeResult rc = consume_var(set, d.gamma(), d.idxs(), input, c.index, c.alg, c.demanded);
      VarRefStep chan{c.index, rc.type, c.alg, c.demanded, rc.leftover};
      ConsumeResult rp =
          consume_var(set, d.gamma(), d.idxs(), chan.leftover, pl.index, pl.alg, pl.demanded);
      VarRefStep payload{pl.index, rp.type, pl.alg, pl.demanded, rp.leftover};
      Derivation cont = replay_at(set, d.child(), payload.leftover);
      return Derivation::send_node(d.subject(), input, std::move(chan), std::move(payload),
                                   std::move(cont));
    }
  }
  throw InvariantError("replay_at: unreachable");
}

}  // namespace

Derivation frame(const AlgebraSet& set, const Derivation& d, const SplitEvidence& ev,
                 const Ctx& gamma_r) {
  if (d.input() != ev.gamma_l || d.output() != ev.xi_l)
    evidence_error("frame: evidence does not describe the derivation");
  auto xi_l = split_ctx(set, d.idxs(), ev.gamma_l, ev.delta);
  if (!xi_l || *xi_l != ev.xi_l) evidence_error("frame: delta is not the consumption");
  auto xi_r = split_ctx(set, d.idxs(), gamma_r, ev.delta);
  if (!xi_r)
    throw MetaError(MetaError::Kind::FrameUndefined,
                    "frame: target context cannot absorb the consumption");
  Derivation out = [&] {
    try {
      return replay_at(set, d, gamma_r);
    } catch (const TypeError& e) {
      throw MetaError(MetaError::Kind::FrameUndefined, std::string("frame: ") + e.what());
    }
  }();
  if (out.output() != *xi_r) evidence_error("frame: replay disagrees with the split (internal)");
  return out;
}

// ---------------------------------------------------------------------------
// Weakening / strengthening / exchange

namespace {

Derivation weaken_rec(const AlgebraSet& set, const Derivation& d, std::size_t i, const Type& t,
                      const AlgebraId& alg, const UsagePair& x) {
  PreCtx gamma = db_insert(d.gamma(), i, t);
  Idxs idxs = db_insert(d.idxs(), i, alg);
  Ctx input = db_insert(d.input(), i, x);
  std::size_t depth = d.subject().depth() + 1;
  auto shift = [&](std::size_t idx) { return idx >= i ? idx + 1 : idx; };
  auto shift_step = [&](const VarRefStep& s) {
    return VarRefStep{shift(s.index), s.type, s.alg, s.demanded, db_insert(s.leftover, i, x)};
  };
  switch (d.kind()) {
    case Derivation::Kind::End:
      return Derivation::end_node(Process::end(depth), std::move(gamma), std::move(idxs),
                                  std::move(input));
    case Derivation::Kind::Res: {
      Derivation body = weaken_rec(set, d.child(), i + 1, t, alg, x);
      Process subject = Process::res(d.subject().res().hint, d.annot(), body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case Derivation::Kind::Par: {
      Derivation left = weaken_rec(set, d.left(), i, t, alg, x);
      Derivation right = weaken_rec(set, d.right(), i, t, alg, x);
      Process subject = Process::par(left.subject(), right.subject());
      return Derivation::par_node(std::move(subject), std::move(left), std::move(right));
    }
    case Derivation::Kind::Recv: {
      VarRefStep chan = shift_step(d.chan_step());
      Derivation body = weaken_rec(set, d.child(), i + 1, t, alg, x);
      Process subject =
          Process::recv(Var(chan.index, depth), d.subject().recv().hint, body.subject());
      return Derivation::recv_node(std::move(subject), std::move(input), std::move(chan),
                                   std::move(body));
    }
    case Derivation::Kind::Send: {
      VarRefStep chan = shift_step(d.chan_step());
      VarRefStep payload = shift_step(d.payload_step());
      Derivation cont = weaken_rec(set, d.child(), i, t, alg, x);
      Process subject =
          Process::send(Var(chan.index, depth), Var(payload.index, depth), cont.subject());
      return Derivation::send_node(std::move(subject), std::move(input), std::move(chan),
                                   std::move(payload), std::move(cont));
    }
  }
  throw InvariantError("weaken: unreachable");
}

Derivation strengthen_rec(const AlgebraSet& set, const Derivation& d, std::size_t i) {
  PreCtx gamma = db_delete(d.gamma(), i);
  Idxs idxs = db_delete(d.idxs(), i);
  Ctx input = db_delete(d.input(), i);
  std::size_t depth = d.subject().depth() - 1;
  auto shift = [&](std::size_t idx) {
    if (idx == i)
      throw MetaError(MetaError::Kind::UsedVariable,
                      "strengthen: variable " + std::to_string(i) + " is referenced");
    return idx > i ? idx - 1 : idx;
  };
  auto shift_step = [&](const VarRefStep& s) {
    return VarRefStep{shift(s.index), s.type, s.alg, s.demanded, db_delete(s.leftover, i)};
  };
  switch (d.kind()) {
    case Derivation::Kind::End:
      return Derivation::end_node(Process::end(depth), std::move(gamma), std::move(idxs),
                                  std::move(input));
    case Derivation::Kind::Res: {
      Derivation body = strengthen_rec(set, d.child(), i + 1);
      Process subject = Process::res(d.subject().res().hint, d.annot(), body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case Derivation::Kind::Par: {
      Derivation left = strengthen_rec(set, d.left(), i);
      Derivation right = strengthen_rec(set, d.right(), i);
      Process subject = Process::par(left.subject(), right.subject());
      return Derivation::par_node(std::move(subject), std::move(left), std::move(right));
    }
    case Derivation::Kind::Recv: {
      VarRefStep chan = shift_step(d.chan_step());
      Derivation body = strengthen_rec(set, d.child(), i + 1);
      Process subject =
          Process::recv(Var(chan.index, depth), d.subject().recv().hint, body.subject());
      return Derivation::recv_node(std::move(subject), std::move(input), std::move(chan),
                                   std::move(body));
    }
    case Derivation::Kind::Send: {
      VarRefStep chan = shift_step(d.chan_step());
      VarRefStep payload = shift_step(d.payload_step());
      Derivation cont = strengthen_rec(set, d.child(), i);
      Process subject =
          Process::send(Var(chan.index, depth), Var(payload.index, depth), cont.subject());
      return Derivation::send_node(std::move(subject), std::move(input), std::move(chan),
                                   std::move(payload), std::move(cont));
    }
  }
  throw InvariantError("strengthen: unreachable");
}

Derivation exchange_rec(const AlgebraSet& set, const Derivation& d, std::size_t i) {
  PreCtx gamma = db_exchange(d.gamma(), i);
  Idxs idxs = db_exchange(d.idxs(), i);
  Ctx input = db_exchange(d.input(), i);
  std::size_t depth = d.subject().depth();
  auto swap_idx = [&](std::size_t idx) {
    if (idx == i) return i + 1;
    if (idx == i + 1) return i;
    return idx;
  };
  auto swap_step = [&](const VarRefStep& s) {
    return VarRefStep{swap_idx(s.index), s.type, s.alg, s.demanded, db_exchange(s.leftover, i)};
  };
  switch (d.kind()) {
    case Derivation::Kind::End:
      return Derivation::end_node(Process::end(depth), std::move(gamma), std::move(idxs),
                                  std::move(input));
    case Derivation::Kind::Res: {
      Derivation body = exchange_rec(set, d.child(), i + 1);
      Process subject = Process::res(d.subject().res().hint, d.annot(), body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case Derivation::Kind::Par: {
      Derivation left = exchange_rec(set, d.left(), i);
      Derivation right = exchange_rec(set, d.right(), i);
      Process subject = Process::par(left.subject(), right.subject());
      return Derivation::par_node(std::move(subject), std::move(left), std::move(right));
    }
    case Derivation::Kind::Recv: {
      VarRefStep chan = swap_step(d.chan_step());
      Derivation body = exchange_rec(set, d.child(), i + 1);
      Process subject =
          Process::recv(Var(chan.index, depth), d.subject().recv().hint, body.subject());
      return Derivation::recv_node(std::move(subject), std::move(input), std::move(chan),
                                   std::move(body));
    }
    case Derivation::Kind::Send: {
      VarRefStep chan = swap_step(d.chan_step());
      VarRefStep payload = swap_step(d.payload_step());
      Derivation cont = exchange_rec(set, d.child(), i);
      Process subject =
          Process::send(Var(chan.index, depth), Var(payload.index, depth), cont.subject());
      return Derivation::send_node(std::move(subject), std::move(input), std::move(chan),
                                   std::move(payload), std::move(cont));
    }
  }
  throw InvariantError("exchange_deriv: unreachable");
}

}  // namespace

Derivation weaken(const AlgebraSet& set, const Derivation& d, std::size_t i, const Type& t,
                  const AlgebraId& alg, const UsagePair& x) {
  if (i > d.gamma().size())
    throw TypeError(TypeError::Kind::IndexOutOfRange, "weaken: position past end");
  if (!set.contains(alg)) throw UnknownAlgebraError("weaken: unknown algebra " + alg);
  return weaken_rec(set, d, i, t, alg, x);
}

Derivation strengthen(const AlgebraSet& set, const Derivation& d, std::size_t i) {
  if (i >= d.gamma().size())
    throw TypeError(TypeError::Kind::IndexOutOfRange, "strengthen: index out of range");
  if (!unused(i, d.subject()))
    throw MetaError(MetaError::Kind::UsedVariable,
                    "strengthen: variable " + std::to_string(i) + " is used by the subject");
  return strengthen_rec(set, d, i);
}

Derivation exchange_deriv(const AlgebraSet& set, const Derivation& d, std::size_t i) {
  if (i + 1 >= d.gamma().size())
    throw TypeError(TypeError::Kind::IndexOutOfRange, "exchange_deriv: swap out of range");
  return exchange_rec(set, d, i);
}

// ---------------------------------------------------------------------------
// Generalised substitution

namespace {

// Core of the substitution transformer: rebuilds the derivation at the
// target input context, redirecting to j the slice `m` that position i used
// to provide. The evidence validated by the caller guarantees every split
// taken here.
Derivation subst_go(const AlgebraSet& set, const Derivation& d, std::size_t i, std::size_t j,
                    const UsagePair& m, const Ctx& gamma_j) {
  const PreCtx& gamma = d.gamma();
  const Idxs& idxs = d.idxs();
  std::size_t depth = d.subject().depth();
  switch (d.kind()) {
    case Derivation::Kind::End:
      return Derivation::end_node(d.subject(), gamma, idxs, gamma_j);
    case Derivation::Kind::Res: {
      const NuAnnot& a = d.annot();
      Derivation body = subst_go(set, d.child(), i + 1, j + 1, m,
                                 db_push(gamma_j, UsagePair{a.mult, a.mult}));
      Process subject = Process::res(d.subject().res().hint, a, body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case Derivation::Kind::Par: {
      const Derivation& dl = d.left();
      const AlgebraId& alg_i = db_at(idxs, i);
      UsagePair psi = must_split_pair(set, alg_i, db_at(dl.input(), i), db_at(dl.output(), i),
                                      "subst: left consumption at i");
      UsagePair delta = must_split_pair(set, alg_i, m, psi, "subst: m does not cover the left");
      Derivation left = subst_go(set, dl, i, j, m, gamma_j);
      Derivation right = subst_go(set, d.right(), i, j, delta, left.output());
      Process subject = Process::par(left.subject(), right.subject());
      return Derivation::par_node(std::move(subject), std::move(left), std::move(right));
    }
    case Derivation::Kind::Recv: {
      const VarRefStep& step = d.chan_step();
      UsagePair m_next = m;
      std::size_t target = step.index;
      if (step.index == i) {
        m_next = must_split_pair(set, step.alg, m, step.demanded, "subst: input splits m");
        target = j;
      }
      ConsumeResult r = consume_var(set, gamma, idxs, gamma_j, target, step.alg, step.demanded);
      VarRefStep chan{target, r.type, step.alg, step.demanded, r.leftover};
      Derivation body = subst_go(set, d.child(), i + 1, j + 1, m_next,
                                 db_push(chan.leftover, chan.type.usage()));
      Process subject = Process::recv(Var(target, depth), d.subject().recv().hint, body.subject());
      return Derivation::recv_node(std::move(subject), gamma_j, std::move(chan), std::move(body));
    }
    case Derivation::Kind::Send: {
      UsagePair m_cur = m;
      Ctx ctx_j = gamma_j;
      const VarRefStep& cstep = d.chan_step();
      std::size_t ct = cstep.index;
      if (ct == i) {
        m_cur = must_split_pair(set, cstep.alg, m_cur, cstep.demanded, "subst: output splits m");
        ct = j;
      }
      ConsumeResult rc = consume_var(set, gamma, idxs, ctx_j, ct, cstep.alg, cstep.demanded);
      VarRefStep chan{ct, rc.type, cstep.alg, cstep.demanded, rc.leftover};
      ctx_j = chan.leftover;
      const VarRefStep& pstep = d.payload_step();
      std::size_t pt = pstep.index;
      if (pt == i) {
        m_cur = must_split_pair(set, pstep.alg, m_cur, pstep.demanded, "subst: payload splits m");
        pt = j;
      }
      ConsumeResult rp = consume_var(set, gamma, idxs, ctx_j, pt, pstep.alg, pstep.demanded);
      VarRefStep payload{pt, rp.type, pstep.alg, pstep.demanded, rp.leftover};
      Derivation cont = subst_go(set, d.child(), i, j, m_cur, payload.leftover);
      Process subject = Process::send(Var(ct, depth), Var(pt, depth), cont.subject());
      return Derivation::send_node(std::move(subject), gamma_j, std::move(chan),
                                   std::move(payload), std::move(cont));
    }
  }
  throw InvariantError("subst_go: unreachable");
}

void validate_arrow(const AlgebraSet& set, const PreCtx& gamma, const Idxs& idxs, const Ctx& from,
                    std::size_t at, const AlgebraId& alg, const UsagePair& demanded,
                    const Ctx& expect, const char* arrow) {
  try {
    ConsumeResult r = consume_var(set, gamma, idxs, from, at, alg, demanded);
    if (r.leftover != expect) evidence_error(std::string("subst evidence: arrow ") + arrow +
                                             " does not reach its floor");
  } catch (const TypeError& e) {
    evidence_error(std::string("subst evidence: arrow ") + arrow + ": " + e.what());
  }
}

}  // namespace

Derivation subst_deriv(const AlgebraSet& set, const Derivation& d, const SubstEvidence& ev) {
  const PreCtx& gamma = d.gamma();
  const Idxs& idxs = d.idxs();
  std::size_t n = gamma.size();
  if (ev.i >= n || ev.j >= n)
    throw TypeError(TypeError::Kind::IndexOutOfRange, "subst_deriv: index out of range");
  if (!type_equal(db_at(gamma, ev.i), db_at(gamma, ev.j)))
    evidence_error("subst evidence: gamma houses different types at i and j");
  if (db_at(idxs, ev.i) != db_at(idxs, ev.j))
    evidence_error("subst evidence: i and j live in different algebras");
  const AlgebraId& alg = db_at(idxs, ev.i);
  validate_arrow(set, gamma, idxs, d.input(), ev.i, alg, ev.m, ev.gamma_floor, "input at i");
  validate_arrow(set, gamma, idxs, ev.gamma_j, ev.j, alg, ev.m, ev.gamma_floor, "input at j");
  validate_arrow(set, gamma, idxs, d.output(), ev.i, alg, ev.n, ev.psi_floor, "output at i");
  validate_arrow(set, gamma, idxs, ev.psi_j, ev.j, alg, ev.n, ev.psi_floor, "output at j");
  auto floor_split = split_ctx(set, idxs, ev.gamma_floor, ev.delta);
  if (!floor_split || *floor_split != ev.psi_floor)
    evidence_error("subst evidence: delta does not take the input floor to the output floor");
  if (db_at(ev.delta, ev.i) != set.at(alg).pair_empty())
    evidence_error("subst evidence: delta is not empty at i");

  if (ev.i == ev.j) return d;  // substitution is the identity
  Derivation out = subst_go(set, d, ev.i, ev.j, ev.m, ev.gamma_j);
  if (out.output() != ev.psi_j)
    evidence_error("subst_deriv: conclusion leftover disagrees with psi_j");
  return out;
}

// ---------------------------------------------------------------------------
// Substitution of the most recent variable (used by communication)

namespace {

// Input: d types P under (gamma,t ; G,m) with leftover (S, l-empty).
// Output: derivation of subst(P, 1+j, 0) under (gamma,t ; G,m) with leftover
// (X, m), where X = S minus m at j.
Derivation subst_top(const AlgebraSet& set, const Derivation& d, std::size_t j) {
  const Idxs& idxs_ext = d.idxs();
  const AlgebraId& head_alg = db_at(idxs_ext, std::size_t{0});
  UsagePair m = db_at(d.input(), std::size_t{0});
  if (db_at(d.output(), std::size_t{0}) != set.at(head_alg).pair_empty())
    evidence_error("subst_top: the bound position is not exhausted");

  PreCtx gamma = db_pop(d.gamma());
  Idxs idxs = db_pop(idxs_ext);
  Ctx g = db_pop(d.input());
  Ctx s = db_pop(d.output());

  // Arrow S at j by m, and the floor T = G minus m at j.
  ConsumeResult cx = consume_var(set, gamma, idxs, s, j, head_alg, m);
  ConsumeResult ct = consume_var(set, gamma, idxs, g, j, head_alg, m);
  if (!type_equal(cx.type, db_at(d.gamma(), std::size_t{0})))
    evidence_error("subst_top: target variable has a different type");

  // Frame to (T, m), substitute towards 1+j, frame back to (G, m).
  Derivation framed = frame(set, d, derivation_consumption(set, d), db_push(ct.leftover, m));
  Derivation subbed = subst_go(set, framed, 0, j + 1, m,
                               db_push(g, set.at(head_alg).pair_empty()));
  Derivation out = frame(set, subbed, derivation_consumption(set, subbed), db_push(g, m));
  if (db_pop(out.output()) != cx.leftover)
    evidence_error("subst_top: leftover disagrees with the computed arrow (internal)");
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Subject congruence

namespace {

Derivation cong_at_root(const AlgebraSet& set, const Derivation& d, const CongRule& rule) {
  bool fwd = rule.dir == Direction::Forward;
  auto shape_error = [&]() -> Derivation {
    throw RewriteError(RewriteError::Kind::ShapeMismatch,
                       to_string(rule) + " does not match the derivation's subject");
  };
  switch (rule.kind) {
    case CongRuleKind::CompAssoc: {
      if (fwd) {
        if (d.kind() != Derivation::Kind::Par || d.right().kind() != Derivation::Kind::Par)
          return shape_error();
        const Derivation& a = d.left();
        const Derivation& b = d.right().left();
        const Derivation& c = d.right().right();
        Derivation ab = Derivation::par_node(Process::par(a.subject(), b.subject()), a, b);
        Process subject = Process::par(ab.subject(), c.subject());
        return Derivation::par_node(std::move(subject), std::move(ab), c);
      }
      if (d.kind() != Derivation::Kind::Par || d.left().kind() != Derivation::Kind::Par)
        return shape_error();
      const Derivation& a = d.left().left();
      const Derivation& b = d.left().right();
      const Derivation& c = d.right();
      Derivation bc = Derivation::par_node(Process::par(b.subject(), c.subject()), b, c);
      Process subject = Process::par(a.subject(), bc.subject());
      return Derivation::par_node(std::move(subject), a, std::move(bc));
    }
    case CongRuleKind::CompSym: {
      if (d.kind() != Derivation::Kind::Par) return shape_error();
      const Derivation& a = d.left();
      const Derivation& b = d.right();
      Derivation b2 = frame(set, b, derivation_consumption(set, b), d.input());
      Derivation a2 = frame(set, a, derivation_consumption(set, a), b2.output());
      if (a2.output() != d.output())
        evidence_error("comp-sym: swapped composition misses the leftover (internal)");
      Process subject = Process::par(b2.subject(), a2.subject());
      return Derivation::par_node(std::move(subject), std::move(b2), std::move(a2));
    }
    case CongRuleKind::CompId: {
      if (fwd) {
        if (d.kind() != Derivation::Kind::Par || d.right().kind() != Derivation::Kind::End)
          return shape_error();
        return d.left();
      }
      Derivation unit = Derivation::end_node(Process::end(d.subject().depth()), d.gamma(),
                                             d.idxs(), d.output());
      Process subject = Process::par(d.subject(), unit.subject());
      return Derivation::par_node(std::move(subject), d, std::move(unit));
    }
    case CongRuleKind::ScopeEnd: {
      if (fwd) {
        if (d.kind() != Derivation::Kind::Res || d.child().kind() != Derivation::Kind::End)
          return shape_error();
        return Derivation::end_node(Process::end(d.subject().depth()), d.gamma(), d.idxs(),
                                    d.input());
      }
      if (d.kind() != Derivation::Kind::End) return shape_error();
      NuAnnot a = inert_annot();
      std::size_t depth = d.subject().depth();
      Derivation body = Derivation::end_node(
          Process::end(depth + 1), db_push(d.gamma(), a.chan_type()),
          db_push(d.idxs(), a.mult_alg), db_push(d.input(), UsagePair{a.mult, a.mult}));
      Process subject = Process::res(Name("c"), a, body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case CongRuleKind::ScopeExt: {
      if (fwd) {
        if (d.kind() != Derivation::Kind::Res || d.child().kind() != Derivation::Kind::Par)
          return shape_error();
        const Derivation& dp = d.child().left();
        const Derivation& dq = d.child().right();
        if (!unused(0, dq.subject()))
          throw RewriteError(RewriteError::Kind::UnusedViolation,
                             "scope-ext: the bound channel occurs in the right component");
        Derivation dq2 = strengthen(set, dq, 0);
        Derivation resp = Derivation::res_node(
            Process::res(d.subject().res().hint, d.annot(), dp.subject()), dp);
        Process subject = Process::par(resp.subject(), dq2.subject());
        return Derivation::par_node(std::move(subject), std::move(resp), std::move(dq2));
      }
      if (d.kind() != Derivation::Kind::Par || d.left().kind() != Derivation::Kind::Res)
        return shape_error();
      const Derivation& res = d.left();
      const Derivation& dq = d.right();
      const NuAnnot& a = res.annot();
      Derivation dq2 =
          weaken(set, dq, 0, a.chan_type(), a.mult_alg, set.at(a.mult_alg).pair_empty());
      const Derivation& dp = res.child();
      Process body_subject = Process::par(dp.subject(), dq2.subject());
      Derivation body = Derivation::par_node(std::move(body_subject), dp, std::move(dq2));
      Process subject = Process::res(res.subject().res().hint, a, body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case CongRuleKind::ScopeComm: {
      if (d.kind() != Derivation::Kind::Res || d.child().kind() != Derivation::Kind::Res)
        return shape_error();
      const Derivation& inner = d.child();
      const Derivation& dp = inner.child();
      Name h1 = d.subject().res().hint;
      Name h2 = inner.subject().res().hint;
      const NuAnnot& a1 = d.annot();
      const NuAnnot& a2 = inner.annot();
      Derivation x = exchange_deriv(set, dp, 0);
      Process inner_subject = Process::res(h1, a1, x.subject());
      Derivation new_inner = Derivation::res_node(std::move(inner_subject), std::move(x));
      Process subject = Process::res(h2, a2, new_inner.subject());
      return Derivation::res_node(std::move(subject), std::move(new_inner));
    }
  }
  throw InvariantError("subject_cong: unreachable");
}

}  // namespace

Derivation subject_cong(const AlgebraSet& set, const Derivation& d, const CongRule& rule,
                        const CongPath& path) {
  if (path.empty()) return cong_at_root(set, d, rule);
  PathStep step = path.front();
  CongPath rest(path.begin() + 1, path.end());
  auto bad_path = [&]() -> Derivation {
    throw RewriteError(RewriteError::Kind::PathUnresolved,
                       "subject_cong: path step does not match the derivation");
  };
  switch (step) {
    case PathStep::ResBody: {
      if (d.kind() != Derivation::Kind::Res) return bad_path();
      Derivation body = subject_cong(set, d.child(), rule, rest);
      Process subject = Process::res(d.subject().res().hint, d.annot(), body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case PathStep::ParLeft: {
      if (d.kind() != Derivation::Kind::Par) return bad_path();
      Derivation left = subject_cong(set, d.left(), rule, rest);
      Process subject = Process::par(left.subject(), d.right().subject());
      return Derivation::par_node(std::move(subject), std::move(left), d.right());
    }
    case PathStep::ParRight: {
      if (d.kind() != Derivation::Kind::Par) return bad_path();
      Derivation right = subject_cong(set, d.right(), rule, rest);
      Process subject = Process::par(d.left().subject(), right.subject());
      return Derivation::par_node(std::move(subject), d.left(), std::move(right));
    }
    case PathStep::RecvBody: {
      if (d.kind() != Derivation::Kind::Recv) return bad_path();
      Derivation body = subject_cong(set, d.child(), rule, rest);
      Process subject = Process::recv(d.subject().recv().chan, d.subject().recv().hint,
                                      body.subject());
      return Derivation::recv_node(std::move(subject), d.input(), d.chan_step(), std::move(body));
    }
    case PathStep::SendBody: {
      if (d.kind() != Derivation::Kind::Send) return bad_path();
      Derivation cont = subject_cong(set, d.child(), rule, rest);
      Process subject = Process::send(d.subject().send().chan, d.subject().send().payload,
                                      cont.subject());
      return Derivation::send_node(std::move(subject), d.input(), d.chan_step(),
                                   d.payload_step(), std::move(cont));
    }
  }
  throw InvariantError("subject_cong: unreachable");
}

Derivation normalize_deriv(const AlgebraSet& set, const Derivation& d) {
  switch (d.kind()) {
    case Derivation::Kind::End:
      return d;
    case Derivation::Kind::Res: {
      Derivation body = normalize_deriv(set, d.child());
      Process subject = Process::res(d.subject().res().hint, d.annot(), body.subject());
      return Derivation::res_node(std::move(subject), std::move(body));
    }
    case Derivation::Kind::Recv: {
      Derivation body = normalize_deriv(set, d.child());
      Process subject =
          Process::recv(d.subject().recv().chan, d.subject().recv().hint, body.subject());
      return Derivation::recv_node(std::move(subject), d.input(), d.chan_step(), std::move(body));
    }
    case Derivation::Kind::Send: {
      Derivation cont = normalize_deriv(set, d.child());
      Process subject =
          Process::send(d.subject().send().chan, d.subject().send().payload, cont.subject());
      return Derivation::send_node(std::move(subject), d.input(), d.chan_step(), d.payload_step(),
                                   std::move(cont));
    }
    case Derivation::Kind::Par: {
      Derivation left = normalize_deriv(set, d.left());
      Derivation right = normalize_deriv(set, d.right());
      std::vector<Derivation> comps = deriv_components(left);
      for (const Derivation& c : deriv_components(right)) comps.push_back(c);
      return assemble_par(comps, d.subject().depth(), d.gamma(), d.idxs(), d.input());
    }
  }
  throw InvariantError("normalize_deriv: unreachable");
}

// ---------------------------------------------------------------------------
// Subject reduction

Capability derive_capability(const AlgebraSet& set, const Derivation& d, std::size_t index) {
  bool can_step = false;
  for (const Reduction& r : reductions(d.subject())) {
    if (!r.channel.is_internal() && r.channel.var().index() == index) {
      can_step = true;
      break;
    }
  }
  if (!can_step)
    throw MetaError(MetaError::Kind::NoCapability,
                    "derive_capability: no external reduction on " + std::to_string(index));
  const AlgebraId& alg = db_at(d.idxs(), index);
  auto left = set.at(alg).split_pair(db_at(d.input(), index), set.at(alg).pair_both());
  if (!left)
    throw MetaError(MetaError::Kind::NoCapability,
                    "derive_capability: input context cannot pay l-# at " +
                        std::to_string(index) + " despite a pending step");
  Ctx out = d.input();
  db_at(out, index) = *left;
  return Capability{index, std::move(out)};
}

namespace {

Capability capability_for(const AlgebraSet& set, const Idxs& idxs, const Ctx& input,
                          std::size_t index) {
  const AlgebraId& alg = db_at(idxs, index);
  auto left = set.at(alg).split_pair(db_at(input, index), set.at(alg).pair_both());
  if (!left)
    throw MetaError(MetaError::Kind::NoCapability,
                    "subject_reduction: context cannot pay l-# at " + std::to_string(index));
  Ctx out = input;
  db_at(out, index) = *left;
  return Capability{index, std::move(out)};
}

// Rebuilds the component at the input slot of a communication: frames the
// input continuation onto the new chain, redirects the payload slot
// consumption to j, and drops the spent binder.
Derivation comm_recv_component(const AlgebraSet& set, const Derivation& recv_node, std::size_t j,
                               const Ctx& new_input) {
  const Derivation& cont = recv_node.child();
  const UsagePair& pay_usage = recv_node.chan_step().type.usage();
  Derivation framed =
      frame(set, cont, derivation_consumption(set, cont), db_push(new_input, pay_usage));
  Derivation subbed = subst_top(set, framed, j);
  return strengthen(set, subbed, 0);
}

Derivation transform(const AlgebraSet& set, const Derivation& dn, const Reduction& step,
                     const std::optional<Capability>& cap);

Derivation transform_res(const AlgebraSet& set, const Derivation& dn, const Reduction& step,
                         const std::optional<Capability>& cap) {
  const Derivation& body = dn.child();
  const Process::ResData& res = dn.subject().res();
  for (const detail::LocatedStep& inner : detail::located_steps(body.subject())) {
    Reduction wrapped{Channel::internal(), dn.subject()};
    detail::res_step_wrap(dn.subject(), inner.step, wrapped);
    if (!(wrapped.channel == step.channel) || !process_eq(wrapped.result, step.result)) continue;
    const Channel& c = inner.step.channel;
    if (c.is_internal()) {
      Derivation body2 = transform(set, body, inner.step, std::nullopt);
      Process subject = Process::res(res.hint, res.annot, body2.subject());
      return Derivation::res_node(std::move(subject), std::move(body2));
    }
    if (c.var().index() == 0) {
      // Communication on the channel this binder introduces: pay l-# out of
      // the balanced multiplicity and keep the annotation in step.
      Capability bcap = capability_for(set, body.idxs(), body.input(), 0);
      Derivation body2 = transform(set, body, inner.step, bcap);
      const UsageAlgebra& alg = set.at(res.annot.mult_alg);
      auto dec_mult = alg.split(res.annot.mult, alg.one());
      if (!dec_mult)
        throw MetaError(MetaError::Kind::NoCapability,
                        "subject_reduction: binder multiplicity cannot pay for the step");
      NuAnnot annot = res.annot;
      annot.mult = *dec_mult;
      Process subject = Process::res(res.hint, annot, body2.subject());
      return Derivation::res_node(std::move(subject), std::move(body2));
    }
    // External beyond this binder: lift the caller's capability under it.
    if (!cap)
      throw MetaError(MetaError::Kind::MissingCapability,
                      "subject_reduction: external step requires capability evidence");
    Capability bcap{c.var().index(),
                    db_push(cap->leftover, UsagePair{res.annot.mult, res.annot.mult})};
    Derivation body2 = transform(set, body, inner.step, bcap);
    Process subject = Process::res(res.hint, res.annot, body2.subject());
    return Derivation::res_node(std::move(subject), std::move(body2));
  }
  throw MetaError(MetaError::Kind::StepNotDerivable,
                  "subject_reduction: step not found under the restriction");
}

Derivation transform_par(const AlgebraSet& set, const Derivation& dn, const Reduction& step,
                         const std::optional<Capability>& cap) {
  std::vector<Derivation> comps = deriv_components(dn);
  std::size_t depth = dn.subject().depth();
  for (const detail::LocatedStep& ls : detail::located_steps(dn.subject())) {
    if (!(ls.step.channel == step.channel) || !process_eq(ls.step.result, step.result)) continue;

    if (std::holds_alternative<detail::ResLoc>(ls.loc)) {
      std::size_t t = std::get<detail::ResLoc>(ls.loc).pos;
      Process result_comp = detail::spine_components(step.result)[t];
      Reduction comp_step{step.channel, result_comp};
      if (step.channel.is_internal()) {
        std::vector<Derivation> out = comps;
        out[t] = transform(set, comps[t], comp_step, std::nullopt);
        return assemble_par(out, depth, dn.gamma(), dn.idxs(), dn.input());
      }
      if (!cap)
        throw MetaError(MetaError::Kind::MissingCapability,
                        "subject_reduction: external step requires capability evidence");
      std::size_t i = step.channel.var().index();
      std::vector<Derivation> out;
      out.reserve(comps.size());
      Ctx chain = cap->leftover;
      for (std::size_t u = 0; u < comps.size(); ++u) {
        if (u < t) {
          out.push_back(frame(set, comps[u], derivation_consumption(set, comps[u]), chain));
          chain = out.back().output();
        } else if (u == t) {
          Capability tcap = capability_for(set, comps[t].idxs(), comps[t].input(), i);
          out.push_back(transform(set, comps[t], comp_step, tcap));
          chain = out.back().output();
        } else {
          out.push_back(comps[u]);
          chain = comps[u].output();
        }
      }
      return assemble_par(out, depth, dn.gamma(), dn.idxs(), cap->leftover);
    }

    const auto& loc = std::get<detail::CommLoc>(ls.loc);
    if (!cap)
      throw MetaError(MetaError::Kind::MissingCapability,
                      "subject_reduction: communication on a free channel requires capability");
    std::vector<Derivation> out;
    out.reserve(comps.size());
    Ctx chain = cap->leftover;
    for (std::size_t u = 0; u < comps.size(); ++u) {
      if (u == loc.recv_pos) {
        out.push_back(comm_recv_component(set, comps[u], loc.payload, chain));
      } else if (u == loc.send_pos) {
        const Derivation& cont = comps[u].child();
        out.push_back(frame(set, cont, derivation_consumption(set, cont), chain));
      } else {
        out.push_back(frame(set, comps[u], derivation_consumption(set, comps[u]), chain));
      }
      chain = out.back().output();
    }
    if (chain != dn.output())
      evidence_error("subject_reduction: rebuilt chain misses the leftover (internal)");
    return assemble_par(out, depth, dn.gamma(), dn.idxs(), cap->leftover);
  }
  throw MetaError(MetaError::Kind::StepNotDerivable,
                  "subject_reduction: step not found in the parallel spine");
}

Derivation transform(const AlgebraSet& set, const Derivation& dn, const Reduction& step,
                     const std::optional<Capability>& cap) {
  switch (dn.kind()) {
    case Derivation::Kind::Res:
      return transform_res(set, dn, step, cap);
    case Derivation::Kind::Par:
      return transform_par(set, dn, step, cap);
    default:
      throw MetaError(MetaError::Kind::StepNotDerivable,
                      "subject_reduction: the subject has no reduction");
  }
}

}  // namespace

Derivation subject_reduction(const AlgebraSet& set, const Derivation& d, const Reduction& step,
                             const std::optional<Capability>& capability) {
  if (!step.channel.is_internal() && !capability)
    throw MetaError(MetaError::Kind::MissingCapability,
                    "subject_reduction: external steps need l-# capability evidence");
  Derivation dn = normalize_deriv(set, d);
  Derivation out = transform(set, dn, step, capability);
  const Ctx& expect_in = step.channel.is_internal() ? d.input() : capability->leftover;
  if (out.input() != expect_in || out.output() != d.output())
    evidence_error("subject_reduction: root contexts disagree with the theorem (internal)");
  if (!process_eq(out.subject(), step.result))
    evidence_error("subject_reduction: rebuilt subject is not the reduct (internal)");
  return out;
}

// ---------------------------------------------------------------------------
// Well-typed process generation

namespace {

class Generator {
 public:
  Generator(const AlgebraSet& set, std::uint64_t seed, const AlgebraMix& mix)
      : set_(set), rng_(seed), mix_(mix) {}

  GenCase run(std::size_t budget) {
    Env env = free_env();
    auto [p, _] = gen(env, budget);
    return GenCase{env.gamma, env.idxs, env.usage, p};
  }

 private:
  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng_() % n; }
  bool chance(std::uint32_t percent) { return rng_() % 100 < percent; }

  AlgebraId pick_alg() {
    double total = mix_.lin + mix_.gra + mix_.sha;
    double roll = static_cast<double>(rng_() % 1000) / 1000.0 * total;
    if (roll < mix_.lin) return "lin";
    if (roll < mix_.lin + mix_.gra) return "gra";
    return "sha";
  }

  Usage small_usage(const AlgebraId& alg, std::uint32_t max) {
    if (alg == "sha") return Usage::omega();
    if (alg == "lin") return Usage::num(static_cast<std::uint32_t>(below(2)));
    return Usage::num(static_cast<std::uint32_t>(below(max + 1)));
  }

  UsagePair payload_pair(const AlgebraId& alg) {
    if (chance(65)) return set_.at(alg).pair_empty();
    return UsagePair{small_usage(alg, 2), small_usage(alg, 2)};
  }

  Type payload_type(const AlgebraId& alg, UsagePair& pair_out) {
    pair_out = payload_pair(alg);
    if (chance(85)) return Type::unit();
    return Type::chan(Type::unit(), "sha", UsagePair{Usage::omega(), Usage::omega()});
  }

  Name hint() {
    static const char* pool[] = {"a", "b", "c", "u", "v", "x", "y", "z"};
    return Name(pool[below(8)]);
  }

  Env free_env() {
    Env env;
    std::size_t slots = below(4);
    for (std::size_t k = 0; k < slots; ++k) {
      AlgebraId own = pick_alg();
      if (chance(70)) {
        AlgebraId pa = pick_alg();
        UsagePair x{Usage::num(0), Usage::num(0)};
        Type t = payload_type(pa, x);
        env.gamma.push_back(Type::chan(t, pa, x));
        env.idxs.push_back(own);
        env.usage.push_back(UsagePair{small_usage(own, 4), small_usage(own, 4)});
      } else {
        env.gamma.push_back(Type::unit());
        env.idxs.push_back(own);
        env.usage.push_back(UsagePair{small_usage(own, 2), small_usage(own, 2)});
      }
    }
    return env;
  }

  bool affords(const Env& env, std::size_t i, const UsagePair& demanded) {
    return set_.at(db_at(env.idxs, i)).split_pair(db_at(env.usage, i), demanded).has_value();
  }

  std::vector<std::size_t> channel_candidates(const Env& env, bool out) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < env.size(); ++i) {
      if (!db_at(env.gamma, i).is_chan()) continue;
      const UsageAlgebra& alg = set_.at(db_at(env.idxs, i));
      if (affords(env, i, out ? alg.pair_out() : alg.pair_in())) c.push_back(i);
    }
    return c;
  }

  std::pair<Process, Ctx> gen(const Env& env, std::size_t budget) {
    if (budget == 0) return {Process::end(env.size()), env.usage};
    std::uint32_t roll = static_cast<std::uint32_t>(rng_() % 100);
    if (roll < 40) return gen_par(env, budget);
    if (roll < 60) {
      if (auto r = gen_res(env, budget)) return *r;
    } else if (roll < 80) {
      if (auto r = gen_recv(env, budget)) return *r;
    } else {
      if (auto r = gen_send(env, budget)) return *r;
    }
    return {Process::end(env.size()), env.usage};
  }

  std::pair<Process, Ctx> gen_par(const Env& env, std::size_t budget) {
    if (budget >= 2 && chance(35)) {
      if (auto r = gen_comm_pair(env, budget)) return *r;
    }
    std::size_t bl = below(budget);
    std::size_t br = budget - 1 - bl;
    auto [left, mid] = gen(env, bl);
    Env env2{env.gamma, env.idxs, mid};
    auto [right, out] = gen(env2, br);
    return {Process::par(left, right), out};
  }

  // An input and a matching output composed in parallel, so reduction has
  // something to find.
  std::optional<std::pair<Process, Ctx>> gen_comm_pair(const Env& env, std::size_t budget) {
    std::vector<std::size_t> chans;
    for (std::size_t i = 0; i < env.size(); ++i) {
      const Type& t = db_at(env.gamma, i);
      if (!t.is_chan()) continue;
      const UsageAlgebra& alg = set_.at(db_at(env.idxs, i));
      if (!affords(env, i, alg.pair_both())) continue;
      chans.push_back(i);
    }
    if (chans.empty()) return std::nullopt;
    std::size_t c = chans[below(chans.size())];
    const Type& ct = db_at(env.gamma, c);
    std::size_t rem = budget - 2;
    std::size_t bl = below(rem + 1);
    std::size_t br = rem - bl;

    // Input side.
    const UsageAlgebra& chan_alg = set_.at(db_at(env.idxs, c));
    auto after_in = consume_checked(env, c, db_at(env.idxs, c), chan_alg.pair_in());
    if (!after_in) return std::nullopt;
    Env body_env{db_push(env.gamma, ct.payload()), db_push(env.idxs, ct.alg()),
                 db_push(*after_in, ct.usage())};
    auto body = gen_exhausting(body_env, bl, ct.alg(), 4);
    if (!body) return std::nullopt;
    Process left = Process::recv(Var(c, env.size()), hint(), body->first);
    Ctx mid = db_pop(body->second);

    // Output side from the leftovers of the input.
    Env env2{env.gamma, env.idxs, mid};
    auto after_out = consume_checked(env2, c, db_at(env.idxs, c), chan_alg.pair_out());
    if (!after_out) return std::nullopt;
    Env env3{env.gamma, env.idxs, *after_out};
    std::vector<std::size_t> payloads;
    for (std::size_t p = 0; p < env.size(); ++p) {
      if (p == c) continue;
      if (!type_equal(db_at(env3.gamma, p), ct.payload())) continue;
      if (db_at(env3.idxs, p) != ct.alg()) continue;
      if (!affords(env3, p, ct.usage())) continue;
      payloads.push_back(p);
    }
    if (payloads.empty()) return std::nullopt;
    std::size_t p = payloads[below(payloads.size())];
    auto after_pay = consume_checked(env3, p, ct.alg(), ct.usage());
    if (!after_pay) return std::nullopt;
    Env env4{env.gamma, env.idxs, *after_pay};
    auto [contq, out] = gen(env4, br);
    Process right = Process::send(Var(c, env.size()), Var(p, env.size()), contq);
    return std::make_pair(Process::par(left, right), out);
  }

  std::optional<Ctx> consume_checked(const Env& env, std::size_t i, const AlgebraId& alg,
                                     const UsagePair& demanded) {
    if (db_at(env.idxs, i) != alg) return std::nullopt;
    auto z = set_.at(alg).split_pair(db_at(env.usage, i), demanded);
    if (!z) return std::nullopt;
    Ctx out = env.usage;
    db_at(out, i) = *z;
    return out;
  }

  // Generates a body whose leftover at position 0 is exactly l-empty of the
  // given algebra; retries a few times when the slot starts nonempty.
  std::optional<std::pair<Process, Ctx>> gen_exhausting(const Env& env, std::size_t budget,
                                                        const AlgebraId& alg,
                                                        std::size_t attempts) {
    const UsagePair empty = set_.at(alg).pair_empty();
    if (db_at(env.usage, std::size_t{0}) == empty) {
      auto [p, left] = gen(env, budget);
      return std::make_pair(p, left);  // minimality keeps the slot at empty
    }
    for (std::size_t k = 0; k < attempts; ++k) {
      auto [p, left] = gen(env, budget);
      if (db_at(left, std::size_t{0}) == empty) return std::make_pair(p, left);
    }
    return std::nullopt;
  }

  std::optional<std::pair<Process, Ctx>> gen_res(const Env& env, std::size_t budget) {
    AlgebraId pa = pick_alg();
    UsagePair x{Usage::num(0), Usage::num(0)};
    Type t = payload_type(pa, x);
    AlgebraId ma = pick_alg();
    const UsageAlgebra& malg = set_.at(ma);
    Name h = hint();

    for (std::size_t attempt = 0; attempt < 6; ++attempt) {
      Usage probe = ma == "lin" ? Usage::num(1)
                    : ma == "sha" ? Usage::omega()
                                  : Usage::num(4);
      Env body_env{db_push(env.gamma, Type::chan(t, pa, x)), db_push(env.idxs, ma),
                   db_push(env.usage, UsagePair{probe, probe})};
      auto [body, left] = gen(body_env, budget - 1);
      UsagePair head = db_at(left, std::size_t{0});
      auto used_in = malg.split(probe, head.input);
      auto used_out = malg.split(probe, head.output);
      if (!used_in || !used_out || !(*used_in == *used_out)) continue;
      // The body consumed a balanced amount; shrink the grant to exactly it.
      NuAnnot annot{t, pa, x, ma, *used_in};
      return std::make_pair(Process::res(h, annot, body), db_pop(left));
    }

    // Fall back to an unused channel.
    NuAnnot annot{t, pa, x, ma, malg.zero()};
    Usage z = malg.zero();
    Env body_env{db_push(env.gamma, Type::chan(t, pa, x)), db_push(env.idxs, ma),
                 db_push(env.usage, UsagePair{z, z})};
    auto body = gen_exhausting(body_env, budget - 1, ma, 4);
    if (!body) return std::nullopt;
    return std::make_pair(Process::res(h, annot, body->first), db_pop(body->second));
  }

  std::optional<std::pair<Process, Ctx>> gen_recv(const Env& env, std::size_t budget) {
    std::vector<std::size_t> cand = channel_candidates(env, false);
    if (cand.empty()) return std::nullopt;
    std::size_t c = cand[below(cand.size())];
    const Type& ct = db_at(env.gamma, c);
    const UsageAlgebra& alg = set_.at(db_at(env.idxs, c));
    auto after = consume_checked(env, c, db_at(env.idxs, c), alg.pair_in());
    if (!after) return std::nullopt;
    Env body_env{db_push(env.gamma, ct.payload()), db_push(env.idxs, ct.alg()),
                 db_push(*after, ct.usage())};
    auto body = gen_exhausting(body_env, budget - 1, ct.alg(), 4);
    if (!body) return std::nullopt;
    return std::make_pair(Process::recv(Var(c, env.size()), hint(), body->first),
                          db_pop(body->second));
  }

  std::optional<std::pair<Process, Ctx>> gen_send(const Env& env, std::size_t budget) {
    std::vector<std::size_t> cand = channel_candidates(env, true);
    while (!cand.empty()) {
      std::size_t pick = below(cand.size());
      std::size_t c = cand[pick];
      cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(pick));
      const Type& ct = db_at(env.gamma, c);
      auto after_out = consume_checked(env, c, db_at(env.idxs, c),
                                       set_.at(db_at(env.idxs, c)).pair_out());
      if (!after_out) continue;
      Env env2{env.gamma, env.idxs, *after_out};
      std::vector<std::size_t> payloads;
      for (std::size_t p = 0; p < env.size(); ++p) {
        if (p == c) continue;
        if (!type_equal(db_at(env2.gamma, p), ct.payload())) continue;
        if (db_at(env2.idxs, p) != ct.alg()) continue;
        if (!affords(env2, p, ct.usage())) continue;
        payloads.push_back(p);
      }
      if (payloads.empty()) continue;
      std::size_t p = payloads[below(payloads.size())];
      auto after_pay = consume_checked(env2, p, ct.alg(), ct.usage());
      if (!after_pay) continue;
      Env env3{env.gamma, env.idxs, *after_pay};
      auto [cont, out] = gen(env3, budget - 1);
      return std::make_pair(Process::send(Var(c, env.size()), Var(p, env.size()), cont), out);
    }
    return std::nullopt;
  }

  const AlgebraSet& set_;
  std::mt19937_64 rng_;
  AlgebraMix mix_;
};

}  // namespace

GenCase gen_well_typed(const AlgebraSet& set, std::uint64_t seed, std::size_t budget,
                       const AlgebraMix& mix) {
  Generator gen(set, seed, mix);
  return gen.run(budget);
}

}  // namespace pical
