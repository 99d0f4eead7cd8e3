#include "pical/semantics.hpp"

#include <sstream>

namespace pical {

Var Channel::var() const {
  if (!var_) throw InvariantError("var() on an internal channel");
  return *var_;
}

std::string to_string(const Channel& c) {
  if (c.is_internal()) return "internal";
  return "ext " + std::to_string(c.var().index());
}

Channel dec(const Channel& c) {
  if (c.is_internal()) return c;
  Var v = c.var();
  if (v.index() == 0) return Channel::internal();
  return Channel::external(Var(v.index() - 1, v.depth() - 1));
}

std::string to_string(const CongRule& rule) {
  std::string name;
  switch (rule.kind) {
    case CongRuleKind::CompAssoc: name = "comp-assoc"; break;
    case CongRuleKind::CompSym: name = "comp-sym"; break;
    case CongRuleKind::CompId: name = "comp-id"; break;
    case CongRuleKind::ScopeEnd: name = "scope-end"; break;
    case CongRuleKind::ScopeExt: name = "scope-ext"; break;
    case CongRuleKind::ScopeComm: name = "scope-comm"; break;
  }
  return name + (rule.dir == Direction::Forward ? "" : " (backward)");
}

NuAnnot inert_annot() {
  return NuAnnot{Type::unit(), "gra", UsagePair{Usage::num(0), Usage::num(0)}, "gra",
                 Usage::num(0)};
}

// ---------------------------------------------------------------------------
// apply_cong

namespace {

[[noreturn]] void shape_error(const CongRule& rule, const Process& p) {
  throw RewriteError(RewriteError::Kind::ShapeMismatch,
                     to_string(rule) + " does not match `" + to_string(p) + "`");
}

Process apply_rule(const CongRule& rule, const Process& p) {
  bool fwd = rule.dir == Direction::Forward;
  switch (rule.kind) {
    case CongRuleKind::CompAssoc: {
      if (fwd) {
        if (p.kind() != Process::Kind::Par || p.par().right.kind() != Process::Kind::Par)
          shape_error(rule, p);
        const Process& a = p.par().left;
        const Process& b = p.par().right.par().left;
        const Process& c = p.par().right.par().right;
        return Process::par(Process::par(a, b), c);
      }
      if (p.kind() != Process::Kind::Par || p.par().left.kind() != Process::Kind::Par)
        shape_error(rule, p);
      const Process& a = p.par().left.par().left;
      const Process& b = p.par().left.par().right;
      const Process& c = p.par().right;
      return Process::par(a, Process::par(b, c));
    }
    case CongRuleKind::CompSym: {
      if (p.kind() != Process::Kind::Par) shape_error(rule, p);
      return Process::par(p.par().right, p.par().left);
    }
    case CongRuleKind::CompId: {
      if (fwd) {
        if (p.kind() != Process::Kind::Par || p.par().right.kind() != Process::Kind::End)
          shape_error(rule, p);
        return p.par().left;
      }
      return Process::par(p, Process::end(p.depth()));
    }
    case CongRuleKind::ScopeEnd: {
      if (fwd) {
        if (p.kind() != Process::Kind::Res || p.res().body.kind() != Process::Kind::End)
          shape_error(rule, p);
        return Process::end(p.depth());
      }
      if (p.kind() != Process::Kind::End) shape_error(rule, p);
      return Process::res(Name("c"), inert_annot(), Process::end(p.depth() + 1));
    }
    case CongRuleKind::ScopeExt: {
      if (fwd) {
        if (p.kind() != Process::Kind::Res || p.res().body.kind() != Process::Kind::Par)
          shape_error(rule, p);
        const Process& left = p.res().body.par().left;
        const Process& right = p.res().body.par().right;
        if (!unused(0, right))
          throw RewriteError(RewriteError::Kind::UnusedViolation,
                             "scope-ext: the bound channel occurs in the right component");
        return Process::par(Process::res(p.res().hint, p.res().annot, left), lower(0, right));
      }
      if (p.kind() != Process::Kind::Par || p.par().left.kind() != Process::Kind::Res)
        shape_error(rule, p);
      const Process::ResData& res = p.par().left.res();
      return Process::res(res.hint, res.annot, Process::par(res.body, lift(0, p.par().right)));
    }
    case CongRuleKind::ScopeComm: {
      if (p.kind() != Process::Kind::Res || p.res().body.kind() != Process::Kind::Res)
        shape_error(rule, p);
      const Process::ResData& outer = p.res();
      const Process::ResData& inner = outer.body.res();
      return Process::res(inner.hint, inner.annot,
                          Process::res(outer.hint, outer.annot, exchange(0, inner.body)));
    }
  }
  throw InvariantError("apply_rule: unreachable");
}

}  // namespace

Process apply_cong(const CongRule& rule, const CongPath& path, const Process& p) {
  if (path.empty()) return apply_rule(rule, p);
  PathStep step = path.front();
  CongPath rest(path.begin() + 1, path.end());
  auto bad_path = [&]() -> Process {
    throw RewriteError(RewriteError::Kind::PathUnresolved,
                       "path step does not match `" + to_string(p) + "`");
  };
  switch (step) {
    case PathStep::ResBody:
      if (p.kind() != Process::Kind::Res) return bad_path();
      return Process::res(p.res().hint, p.res().annot, apply_cong(rule, rest, p.res().body));
    case PathStep::ParLeft:
      if (p.kind() != Process::Kind::Par) return bad_path();
      return Process::par(apply_cong(rule, rest, p.par().left), p.par().right);
    case PathStep::ParRight:
      if (p.kind() != Process::Kind::Par) return bad_path();
      return Process::par(p.par().left, apply_cong(rule, rest, p.par().right));
    case PathStep::RecvBody:
      if (p.kind() != Process::Kind::Recv) return bad_path();
      return Process::recv(p.recv().chan, p.recv().hint, apply_cong(rule, rest, p.recv().body));
    case PathStep::SendBody:
      if (p.kind() != Process::Kind::Send) return bad_path();
      return Process::send(p.send().chan, p.send().payload,
                           apply_cong(rule, rest, p.send().body));
  }
  throw InvariantError("apply_cong: unreachable");
}

// ---------------------------------------------------------------------------
// flatten_normalize

namespace detail {

std::vector<Process> spine_components(const Process& p) {
  std::vector<Process> out;
  const Process* cur = &p;
  while (true) {
    if (cur->kind() == Process::Kind::End) return out;
    if (cur->kind() != Process::Kind::Par) {
      out.push_back(*cur);
      return out;
    }
    if (cur->par().left.kind() != Process::Kind::End) out.push_back(cur->par().left);
    cur = &cur->par().right;
  }
}

Process assemble_spine(const std::vector<Process>& comps, std::size_t depth) {
  if (comps.empty()) return Process::end(depth);
  Process acc = comps.back();
  for (std::size_t k = comps.size() - 1; k-- > 0;) acc = Process::par(comps[k], acc);
  return acc;
}

}  // namespace detail

Process flatten_normalize(const Process& p) {
  switch (p.kind()) {
    case Process::Kind::End:
      return p;
    case Process::Kind::Res:
      return Process::res(p.res().hint, p.res().annot, flatten_normalize(p.res().body));
    case Process::Kind::Recv:
      return Process::recv(p.recv().chan, p.recv().hint, flatten_normalize(p.recv().body));
    case Process::Kind::Send:
      return Process::send(p.send().chan, p.send().payload, flatten_normalize(p.send().body));
    case Process::Kind::Par: {
      Process left = flatten_normalize(p.par().left);
      Process right = flatten_normalize(p.par().right);
      std::vector<Process> comps = detail::spine_components(left);
      for (const Process& c : detail::spine_components(right)) comps.push_back(c);
      return detail::assemble_spine(comps, p.depth());
    }
  }
  throw InvariantError("flatten_normalize: unreachable");
}

// ---------------------------------------------------------------------------
// reductions

namespace detail {

namespace {

// Communication through the binder spends one input and one output of the
// channel's own multiplicity; keep the annotation in step so the reduct
// still typechecks. An undefined decrement (possible only for ill-typed
// processes) leaves the annotation alone.
NuAnnot dec_annot(const NuAnnot& annot) {
  const AlgebraSet& std_set = AlgebraSet::standard();
  if (!std_set.contains(annot.mult_alg)) return annot;
  const UsageAlgebra& alg = std_set.at(annot.mult_alg);
  auto m = alg.split(annot.mult, alg.one());
  if (!m) return annot;
  NuAnnot out = annot;
  out.mult = *m;
  return out;
}

}  // namespace

Process res_step_wrap(const Process& res_subject, const Reduction& inner, Reduction& out) {
  const Process::ResData& res = res_subject.res();
  bool on_binder = !inner.channel.is_internal() && inner.channel.var().index() == 0;
  NuAnnot annot = on_binder ? dec_annot(res.annot) : res.annot;
  Process result = Process::res(res.hint, annot, inner.result);
  out = Reduction{dec(inner.channel), result};
  return result;
}

std::vector<LocatedStep> located_steps(const Process& q) {
  std::vector<LocatedStep> out;
  switch (q.kind()) {
    case Process::Kind::End:
    case Process::Kind::Recv:
    case Process::Kind::Send:
      return out;
    case Process::Kind::Res: {
      for (const LocatedStep& inner : located_steps(q.res().body)) {
        Reduction wrapped{Channel::internal(), q};
        res_step_wrap(q, inner.step, wrapped);
        out.push_back(LocatedStep{wrapped, ResLoc{0}});
      }
      return out;
    }
    case Process::Kind::Par: {
      std::vector<Process> comps = spine_components(q);
      std::size_t depth = q.depth();
      for (std::size_t t = 0; t < comps.size(); ++t) {
        if (comps[t].kind() == Process::Kind::Res) {
          for (const LocatedStep& inner : located_steps(comps[t].res().body)) {
            Reduction wrapped{Channel::internal(), q};
            res_step_wrap(comps[t], inner.step, wrapped);
            std::vector<Process> next = comps;
            next[t] = wrapped.result;
            out.push_back(LocatedStep{
                Reduction{wrapped.channel, assemble_spine(next, depth)}, ResLoc{t}});
          }
        }
        if (comps[t].kind() == Process::Kind::Recv) {
          std::size_t i = comps[t].recv().chan.index();
          for (std::size_t l = 0; l < comps.size(); ++l) {
            if (l == t || comps[l].kind() != Process::Kind::Send) continue;
            if (comps[l].send().chan.index() != i) continue;
            std::size_t j = comps[l].send().payload.index();
            const Process& body = comps[t].recv().body;
            Process substituted = subst(body, Var(j + 1, depth + 1), Var(0, depth + 1));
            Process continued = lower(0, substituted);
            std::vector<Process> next = comps;
            next[t] = continued;
            next[l] = comps[l].send().body;
            out.push_back(LocatedStep{
                Reduction{Channel::external(Var(i, depth)), assemble_spine(next, depth)},
                CommLoc{t, l, i, j}});
          }
        }
      }
      return out;
    }
  }
  throw InvariantError("located_steps: unreachable");
}

}  // namespace detail

std::vector<Reduction> reductions(const Process& p) {
  std::vector<Reduction> out;
  for (const detail::LocatedStep& s : detail::located_steps(flatten_normalize(p)))
    out.push_back(s.step);
  return out;
}

// ---------------------------------------------------------------------------
// prenex

namespace {

Process prenex_norm(const Process& q) {
  switch (q.kind()) {
    case Process::Kind::End:
    case Process::Kind::Recv:
    case Process::Kind::Send:
      return q;
    case Process::Kind::Res:
      return Process::res(q.res().hint, q.res().annot, prenex_norm(q.res().body));
    case Process::Kind::Par: {
      std::vector<Process> comps = detail::spine_components(q);
      for (std::size_t t = 0; t < comps.size(); ++t) {
        if (comps[t].kind() != Process::Kind::Res) continue;
        const Process::ResData& res = comps[t].res();
        std::vector<Process> inner;
        inner.reserve(comps.size());
        for (std::size_t k = 0; k < comps.size(); ++k)
          inner.push_back(k == t ? res.body : lift(0, comps[k]));
        Process body = flatten_normalize(detail::assemble_spine(inner, q.depth() + 1));
        return Process::res(res.hint, res.annot, prenex_norm(body));
      }
      return q;
    }
  }
  throw InvariantError("prenex: unreachable");
}

}  // namespace

Process prenex(const Process& p) { return prenex_norm(flatten_normalize(p)); }

bool process_eq(const Process& a, const Process& b) { return equal_modulo_hints(a, b); }

bool congruent_to_end(const Process& p) {
  Process q = flatten_normalize(p);
  while (q.kind() == Process::Kind::Res) q = q.res().body;
  return q.kind() == Process::Kind::End;
}

}  // namespace pical
