#include "pical/ast.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pical {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"end", "new", "free", "unit", "chan",
                                           "lin", "gra", "sha", "w"};
  return kw;
}

bool name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '^';
}

}  // namespace

bool Name::valid_text(const std::string& text) {
  if (text.empty()) return false;
  if (keywords().count(text)) return false;
  char first = text[0];
  if (!((first >= 'a' && first <= 'z') || (first >= 'A' && first <= 'Z') || first == '_'))
    return false;
  return std::all_of(text.begin(), text.end(), name_char);
}

Name::Name(std::string text) : text_(std::move(text)) {
  if (!valid_text(text_)) throw InvariantError("invalid name '" + text_ + "'");
}

Var::Var(std::size_t index, std::size_t depth) : index_(index), depth_(depth) {
  if (index >= depth)
    throw InvariantError("variable index " + std::to_string(index) + " out of scope depth " +
                         std::to_string(depth));
}

// ---------------------------------------------------------------------------
// Raw

struct Raw::Node {
  std::variant<std::monostate, ResData, ParData, RecvData, SendData> data;
};

Raw Raw::end() {
  static const Raw instance(std::make_shared<Node>(Node{std::monostate{}}));
  return instance;
}
Raw Raw::res(Name binder, NuAnnot annot, Raw body) {
  return Raw(std::make_shared<Node>(Node{ResData{std::move(binder), std::move(annot), std::move(body)}}));
}
Raw Raw::par(Raw left, Raw right) {
  return Raw(std::make_shared<Node>(Node{ParData{std::move(left), std::move(right)}}));
}
Raw Raw::recv(Name chan, Name binder, Raw body) {
  return Raw(std::make_shared<Node>(Node{RecvData{std::move(chan), std::move(binder), std::move(body)}}));
}
Raw Raw::send(Name chan, Name payload, Raw body) {
  return Raw(std::make_shared<Node>(Node{SendData{std::move(chan), std::move(payload), std::move(body)}}));
}

Raw::Kind Raw::kind() const {
  return static_cast<Kind>(node_->data.index());
}
const Raw::ResData& Raw::res() const { return std::get<ResData>(node_->data); }
const Raw::ParData& Raw::par() const { return std::get<ParData>(node_->data); }
const Raw::RecvData& Raw::recv() const { return std::get<RecvData>(node_->data); }
const Raw::SendData& Raw::send() const { return std::get<SendData>(node_->data); }

bool operator==(const Raw& a, const Raw& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Raw::Kind::End:
      return true;
    case Raw::Kind::Res:
      return a.res().binder == b.res().binder && a.res().annot == b.res().annot &&
             a.res().body == b.res().body;
    case Raw::Kind::Par:
      return a.par().left == b.par().left && a.par().right == b.par().right;
    case Raw::Kind::Recv:
      return a.recv().chan == b.recv().chan && a.recv().binder == b.recv().binder &&
             a.recv().body == b.recv().body;
    case Raw::Kind::Send:
      return a.send().chan == b.send().chan && a.send().payload == b.send().payload &&
             a.send().body == b.send().body;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Process

struct Process::Node {
  std::size_t depth;
  std::variant<std::monostate, ResData, ParData, RecvData, SendData> data;
};

Process Process::end(std::size_t depth) {
  return Process(std::make_shared<Node>(Node{depth, std::monostate{}}));
}

Process Process::res(Name hint, NuAnnot annot, Process body) {
  if (body.depth() == 0) throw InvariantError("restriction body must sit under the binder");
  std::size_t depth = body.depth() - 1;
  return Process(
      std::make_shared<Node>(Node{depth, ResData{std::move(hint), std::move(annot), std::move(body)}}));
}

Process Process::par(Process left, Process right) {
  if (left.depth() != right.depth())
    throw InvariantError("parallel components at different depths");
  std::size_t depth = left.depth();
  return Process(std::make_shared<Node>(Node{depth, ParData{std::move(left), std::move(right)}}));
}

Process Process::recv(Var chan, Name hint, Process body) {
  if (body.depth() != chan.depth() + 1)
    throw InvariantError("input body must sit one binder under its channel");
  std::size_t depth = chan.depth();
  return Process(
      std::make_shared<Node>(Node{depth, RecvData{chan, std::move(hint), std::move(body)}}));
}

Process Process::send(Var chan, Var payload, Process body) {
  if (chan.depth() != payload.depth() || body.depth() != chan.depth())
    throw InvariantError("output parts at different depths");
  std::size_t depth = chan.depth();
  return Process(std::make_shared<Node>(Node{depth, SendData{chan, payload, std::move(body)}}));
}

Process::Kind Process::kind() const {
  return static_cast<Kind>(node_->data.index());
}
std::size_t Process::depth() const { return node_->depth; }
const Process::ResData& Process::res() const { return std::get<ResData>(node_->data); }
const Process::ParData& Process::par() const { return std::get<ParData>(node_->data); }
const Process::RecvData& Process::recv() const { return std::get<RecvData>(node_->data); }
const Process::SendData& Process::send() const { return std::get<SendData>(node_->data); }

namespace {

bool process_equal(const Process& a, const Process& b, bool with_hints) {
  if (a.kind() != b.kind() || a.depth() != b.depth()) return false;
  switch (a.kind()) {
    case Process::Kind::End:
      return true;
    case Process::Kind::Res:
      return (!with_hints || a.res().hint == b.res().hint) && a.res().annot == b.res().annot &&
             process_equal(a.res().body, b.res().body, with_hints);
    case Process::Kind::Par:
      return process_equal(a.par().left, b.par().left, with_hints) &&
             process_equal(a.par().right, b.par().right, with_hints);
    case Process::Kind::Recv:
      return a.recv().chan == b.recv().chan &&
             (!with_hints || a.recv().hint == b.recv().hint) &&
             process_equal(a.recv().body, b.recv().body, with_hints);
    case Process::Kind::Send:
      return a.send().chan == b.send().chan && a.send().payload == b.send().payload &&
             process_equal(a.send().body, b.send().body, with_hints);
  }
  return false;
}

}  // namespace

bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  return process_equal(a, b, true);
}

bool equal_modulo_hints(const Process& a, const Process& b) { return process_equal(a, b, false); }

std::string to_string(const Path& path) {
  std::string out;
  for (PathStep step : path) {
    if (!out.empty()) out += "/";
    switch (step) {
      case PathStep::ResBody: out += "res.body"; break;
      case PathStep::ParLeft: out += "par.left"; break;
      case PathStep::ParRight: out += "par.right"; break;
      case PathStep::RecvBody: out += "recv.body"; break;
      case PathStep::SendBody: out += "send.body"; break;
    }
  }
  return out.empty() ? "root" : out;
}

// ---------------------------------------------------------------------------
// Scope checking and conversions

namespace {

std::optional<std::size_t> resolve(const std::vector<Name>& ctx, const Name& name) {
  // Innermost binder wins: search from the back (index 0).
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    if (ctx[ctx.size() - 1 - k] == name) return k;
  }
  return std::nullopt;
}

struct ScopeWalker {
  std::vector<std::size_t> resolutions;
  std::optional<ScopeFailure> failure;
  Path path;

  bool occurrence(const std::vector<Name>& ctx, const Name& name) {
    auto i = resolve(ctx, name);
    if (!i) {
      failure = ScopeFailure{name, path};
      return false;
    }
    resolutions.push_back(*i);
    return true;
  }

  bool walk(std::vector<Name>& ctx, const Raw& p) {
    switch (p.kind()) {
      case Raw::Kind::End:
        return true;
      case Raw::Kind::Res: {
        ctx.push_back(p.res().binder);
        path.push_back(PathStep::ResBody);
        bool ok = walk(ctx, p.res().body);
        path.pop_back();
        ctx.pop_back();
        return ok;
      }
      case Raw::Kind::Par: {
        path.push_back(PathStep::ParLeft);
        bool ok = walk(ctx, p.par().left);
        path.pop_back();
        if (!ok) return false;
        path.push_back(PathStep::ParRight);
        ok = walk(ctx, p.par().right);
        path.pop_back();
        return ok;
      }
      case Raw::Kind::Recv: {
        if (!occurrence(ctx, p.recv().chan)) return false;
        ctx.push_back(p.recv().binder);
        path.push_back(PathStep::RecvBody);
        bool ok = walk(ctx, p.recv().body);
        path.pop_back();
        ctx.pop_back();
        return ok;
      }
      case Raw::Kind::Send: {
        if (!occurrence(ctx, p.send().chan)) return false;
        if (!occurrence(ctx, p.send().payload)) return false;
        path.push_back(PathStep::SendBody);
        bool ok = walk(ctx, p.send().body);
        path.pop_back();
        return ok;
      }
    }
    return false;
  }
};

}  // namespace

ScopeCheck well_scoped(const std::vector<Name>& ctx, const Raw& p) {
  ScopeWalker walker;
  std::vector<Name> scope = ctx;
  if (walker.walk(scope, p)) return ScopeWitness{std::move(walker.resolutions)};
  return *walker.failure;
}

namespace {

Process from_raw_rec(std::vector<Name>& ctx, const Raw& p, const ScopeWitness& witness,
                     std::size_t& cursor) {
  auto occurrence = [&](const Name& name) -> Var {
    auto i = resolve(ctx, name);
    if (!i) throw InvariantError("from_raw: unresolved name '" + name.text() + "'");
    if (cursor >= witness.resolutions.size() || witness.resolutions[cursor] != *i)
      throw InvariantError("from_raw: witness does not match the process");
    ++cursor;
    return Var(*i, ctx.size());
  };
  switch (p.kind()) {
    case Raw::Kind::End:
      return Process::end(ctx.size());
    case Raw::Kind::Res: {
      ctx.push_back(p.res().binder);
      Process body = from_raw_rec(ctx, p.res().body, witness, cursor);
      ctx.pop_back();
      return Process::res(p.res().binder, p.res().annot, std::move(body));
    }
    case Raw::Kind::Par: {
      Process left = from_raw_rec(ctx, p.par().left, witness, cursor);
      Process right = from_raw_rec(ctx, p.par().right, witness, cursor);
      return Process::par(std::move(left), std::move(right));
    }
    case Raw::Kind::Recv: {
      Var chan = occurrence(p.recv().chan);
      ctx.push_back(p.recv().binder);
      Process body = from_raw_rec(ctx, p.recv().body, witness, cursor);
      ctx.pop_back();
      return Process::recv(chan, p.recv().binder, std::move(body));
    }
    case Raw::Kind::Send: {
      Var chan = occurrence(p.send().chan);
      Var payload = occurrence(p.send().payload);
      Process body = from_raw_rec(ctx, p.send().body, witness, cursor);
      return Process::send(chan, payload, std::move(body));
    }
  }
  throw InvariantError("from_raw: unreachable");
}

}  // namespace

Process from_raw(const std::vector<Name>& ctx, const Raw& p, const ScopeWitness& witness) {
  std::vector<Name> scope = ctx;
  std::size_t cursor = 0;
  Process out = from_raw_rec(scope, p, witness, cursor);
  if (cursor != witness.resolutions.size())
    throw InvariantError("from_raw: witness has trailing entries");
  return out;
}

namespace {

// Splits "base^k" into its parts when the suffix is a well-formed number.
std::optional<std::pair<std::string, std::uint64_t>> split_suffix(const std::string& text) {
  auto pos = text.rfind('^');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size()) return std::nullopt;
  std::uint64_t k = 0;
  for (std::size_t i = pos + 1; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    k = k * 10 + static_cast<std::uint64_t>(text[i] - '0');
  }
  return std::make_pair(text.substr(0, pos), k);
}

struct Freshener {
  std::map<std::string, std::uint64_t> counters;

  Name fresh(const Name& hint) {
    std::uint64_t k = counters[hint.text()]++;
    return Name(hint.text() + "^" + std::to_string(k));
  }
};

Raw to_raw_rec(std::vector<Name>& ctx, const Process& p, Freshener& freshener) {
  auto lookup = [&](Var v) { return ctx[ctx.size() - 1 - v.index()]; };
  switch (p.kind()) {
    case Process::Kind::End:
      return Raw::end();
    case Process::Kind::Res: {
      Name binder = freshener.fresh(p.res().hint);
      ctx.push_back(binder);
      Raw body = to_raw_rec(ctx, p.res().body, freshener);
      ctx.pop_back();
      return Raw::res(binder, p.res().annot, std::move(body));
    }
    case Process::Kind::Par: {
      Raw left = to_raw_rec(ctx, p.par().left, freshener);
      Raw right = to_raw_rec(ctx, p.par().right, freshener);
      return Raw::par(std::move(left), std::move(right));
    }
    case Process::Kind::Recv: {
      Name chan = lookup(p.recv().chan);
      Name binder = freshener.fresh(p.recv().hint);
      ctx.push_back(binder);
      Raw body = to_raw_rec(ctx, p.recv().body, freshener);
      ctx.pop_back();
      return Raw::recv(chan, binder, std::move(body));
    }
    case Process::Kind::Send: {
      Name chan = lookup(p.send().chan);
      Name payload = lookup(p.send().payload);
      Raw body = to_raw_rec(ctx, p.send().body, freshener);
      return Raw::send(chan, payload, std::move(body));
    }
  }
  throw InvariantError("to_raw: unreachable");
}

}  // namespace

Raw to_raw(const std::vector<Name>& ctx, const Process& p) {
  if (ctx.size() != p.depth())
    throw InvariantError("to_raw: context length " + std::to_string(ctx.size()) +
                         " does not match depth " + std::to_string(p.depth()));
  Freshener freshener;
  for (const Name& name : ctx) {
    if (auto parts = split_suffix(name.text())) {
      auto& slot = freshener.counters[parts->first];
      slot = std::max(slot, parts->second + 1);
    } else {
      // Unsuffixed free name: future binders of that hint start at ^0, which
      // cannot collide with the bare name.
      freshener.counters.emplace(name.text(), 0);
    }
  }
  std::vector<Name> scope = ctx;
  return to_raw_rec(scope, p, freshener);
}

// ---------------------------------------------------------------------------
// Scope manipulation

namespace {

Var lift_var(std::size_t i, Var v) {
  std::size_t idx = v.index() >= i ? v.index() + 1 : v.index();
  return Var(idx, v.depth() + 1);
}

Var lower_var(std::size_t i, Var v) {
  if (v.index() == i) throw InvariantError("lower: variable " + std::to_string(i) + " is used");
  std::size_t idx = v.index() > i ? v.index() - 1 : v.index();
  return Var(idx, v.depth() - 1);
}

Var exchange_var(std::size_t i, Var v) {
  if (v.index() == i) return Var(i + 1, v.depth());
  if (v.index() == i + 1) return Var(i, v.depth());
  return v;
}

}  // namespace

Process lift(std::size_t i, const Process& p) {
  if (i > p.depth()) throw InvariantError("lift: cut exceeds depth");
  switch (p.kind()) {
    case Process::Kind::End:
      return Process::end(p.depth() + 1);
    case Process::Kind::Res:
      return Process::res(p.res().hint, p.res().annot, lift(i + 1, p.res().body));
    case Process::Kind::Par:
      return Process::par(lift(i, p.par().left), lift(i, p.par().right));
    case Process::Kind::Recv:
      return Process::recv(lift_var(i, p.recv().chan), p.recv().hint, lift(i + 1, p.recv().body));
    case Process::Kind::Send:
      return Process::send(lift_var(i, p.send().chan), lift_var(i, p.send().payload),
                           lift(i, p.send().body));
  }
  throw InvariantError("lift: unreachable");
}

bool unused(std::size_t i, const Process& p) {
  if (i >= p.depth()) throw InvariantError("unused: index out of depth");
  switch (p.kind()) {
    case Process::Kind::End:
      return true;
    case Process::Kind::Res:
      return unused(i + 1, p.res().body);
    case Process::Kind::Par:
      return unused(i, p.par().left) && unused(i, p.par().right);
    case Process::Kind::Recv:
      return p.recv().chan.index() != i && unused(i + 1, p.recv().body);
    case Process::Kind::Send:
      return p.send().chan.index() != i && p.send().payload.index() != i &&
             unused(i, p.send().body);
  }
  throw InvariantError("unused: unreachable");
}

Process lower(std::size_t i, const Process& p) {
  if (!unused(i, p)) throw InvariantError("lower: variable " + std::to_string(i) + " is used");
  switch (p.kind()) {
    case Process::Kind::End:
      return Process::end(p.depth() - 1);
    case Process::Kind::Res:
      return Process::res(p.res().hint, p.res().annot, lower(i + 1, p.res().body));
    case Process::Kind::Par:
      return Process::par(lower(i, p.par().left), lower(i, p.par().right));
    case Process::Kind::Recv:
      return Process::recv(lower_var(i, p.recv().chan), p.recv().hint,
                           lower(i + 1, p.recv().body));
    case Process::Kind::Send:
      return Process::send(lower_var(i, p.send().chan), lower_var(i, p.send().payload),
                           lower(i, p.send().body));
  }
  throw InvariantError("lower: unreachable");
}

Process exchange(std::size_t i, const Process& p) {
  if (i + 1 >= p.depth()) throw InvariantError("exchange: swap exceeds depth");
  switch (p.kind()) {
    case Process::Kind::End:
      return p;
    case Process::Kind::Res:
      return Process::res(p.res().hint, p.res().annot, exchange(i + 1, p.res().body));
    case Process::Kind::Par:
      return Process::par(exchange(i, p.par().left), exchange(i, p.par().right));
    case Process::Kind::Recv:
      return Process::recv(exchange_var(i, p.recv().chan), p.recv().hint,
                           exchange(i + 1, p.recv().body));
    case Process::Kind::Send:
      return Process::send(exchange_var(i, p.send().chan), exchange_var(i, p.send().payload),
                           exchange(i, p.send().body));
  }
  throw InvariantError("exchange: unreachable");
}

Process subst(const Process& p, Var to, Var from) {
  if (to.depth() != p.depth() || from.depth() != p.depth())
    throw InvariantError("subst: variables at a different depth than the process");
  auto sub_var = [&](Var v) { return v.index() == from.index() ? to : v; };
  switch (p.kind()) {
    case Process::Kind::End:
      return p;
    case Process::Kind::Res: {
      Var to2(to.index() + 1, p.depth() + 1);
      Var from2(from.index() + 1, p.depth() + 1);
      return Process::res(p.res().hint, p.res().annot, subst(p.res().body, to2, from2));
    }
    case Process::Kind::Par:
      return Process::par(subst(p.par().left, to, from), subst(p.par().right, to, from));
    case Process::Kind::Recv: {
      Var to2(to.index() + 1, p.depth() + 1);
      Var from2(from.index() + 1, p.depth() + 1);
      return Process::recv(sub_var(p.recv().chan), p.recv().hint,
                           subst(p.recv().body, to2, from2));
    }
    case Process::Kind::Send:
      return Process::send(sub_var(p.send().chan), sub_var(p.send().payload),
                           subst(p.send().body, to, from));
  }
  throw InvariantError("subst: unreachable");
}

// ---------------------------------------------------------------------------
// Alpha equivalence and the Barendregt check

namespace {

bool alpha_rec(std::vector<Name>& ca, const Raw& a, std::vector<Name>& cb, const Raw& b) {
  if (a.kind() != b.kind()) return false;
  auto same_occurrence = [&](const Name& na, const Name& nb) {
    auto ia = resolve(ca, na);
    auto ib = resolve(cb, nb);
    return ia && ib && *ia == *ib;
  };
  switch (a.kind()) {
    case Raw::Kind::End:
      return true;
    case Raw::Kind::Res: {
      if (a.res().annot != b.res().annot) return false;
      ca.push_back(a.res().binder);
      cb.push_back(b.res().binder);
      bool ok = alpha_rec(ca, a.res().body, cb, b.res().body);
      ca.pop_back();
      cb.pop_back();
      return ok;
    }
    case Raw::Kind::Par:
      return alpha_rec(ca, a.par().left, cb, b.par().left) &&
             alpha_rec(ca, a.par().right, cb, b.par().right);
    case Raw::Kind::Recv: {
      if (!same_occurrence(a.recv().chan, b.recv().chan)) return false;
      ca.push_back(a.recv().binder);
      cb.push_back(b.recv().binder);
      bool ok = alpha_rec(ca, a.recv().body, cb, b.recv().body);
      ca.pop_back();
      cb.pop_back();
      return ok;
    }
    case Raw::Kind::Send:
      return same_occurrence(a.send().chan, b.send().chan) &&
             same_occurrence(a.send().payload, b.send().payload) &&
             alpha_rec(ca, a.send().body, cb, b.send().body);
  }
  return false;
}

void collect_binders(const Raw& p, std::vector<Name>& out) {
  switch (p.kind()) {
    case Raw::Kind::End:
      return;
    case Raw::Kind::Res:
      out.push_back(p.res().binder);
      collect_binders(p.res().body, out);
      return;
    case Raw::Kind::Par:
      collect_binders(p.par().left, out);
      collect_binders(p.par().right, out);
      return;
    case Raw::Kind::Recv:
      out.push_back(p.recv().binder);
      collect_binders(p.recv().body, out);
      return;
    case Raw::Kind::Send:
      collect_binders(p.send().body, out);
      return;
  }
}

}  // namespace

bool alpha_equal(const std::vector<Name>& ctx, const Raw& a, const Raw& b) {
  std::vector<Name> ca = ctx;
  std::vector<Name> cb = ctx;
  return alpha_rec(ca, a, cb, b);
}

bool barendregt(const std::vector<Name>& free_names, const Raw& p) {
  std::vector<Name> binders;
  collect_binders(p, binders);
  std::set<Name> seen(free_names.begin(), free_names.end());
  for (const Name& b : binders) {
    if (!seen.insert(b).second) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_process(std::ostringstream& out, const Process& p, bool parenthesize_par) {
  switch (p.kind()) {
    case Process::Kind::End:
      out << "end";
      return;
    case Process::Kind::Res:
      out << "new[" << p.res().hint.text() << "]{" << to_string(p.res().annot) << "}. ";
      print_process(out, p.res().body, true);
      return;
    case Process::Kind::Par: {
      if (parenthesize_par) out << "(";
      bool left_parens = p.par().left.kind() == Process::Kind::Par;
      if (left_parens) out << "(";
      print_process(out, p.par().left, false);
      if (left_parens) out << ")";
      out << " | ";
      print_process(out, p.par().right, false);
      if (parenthesize_par) out << ")";
      return;
    }
    case Process::Kind::Recv:
      out << p.recv().chan.index() << "?(" << p.recv().hint.text() << "). ";
      print_process(out, p.recv().body, true);
      return;
    case Process::Kind::Send:
      out << p.send().chan.index() << "!" << p.send().payload.index() << ". ";
      print_process(out, p.send().body, true);
      return;
  }
}

void print_raw(std::ostringstream& out, const Raw& p, bool parenthesize_par) {
  switch (p.kind()) {
    case Raw::Kind::End:
      out << "end";
      return;
    case Raw::Kind::Res:
      out << "new " << p.res().binder.text() << " : " << to_string(p.res().annot.chan_type())
          << " @ " << p.res().annot.mult_alg << " " << to_string(p.res().annot.mult) << ". ";
      print_raw(out, p.res().body, true);
      return;
    case Raw::Kind::Par: {
      if (parenthesize_par) out << "(";
      bool left_parens = p.par().left.kind() == Raw::Kind::Par;
      if (left_parens) out << "(";
      print_raw(out, p.par().left, false);
      if (left_parens) out << ")";
      out << " | ";
      print_raw(out, p.par().right, false);
      if (parenthesize_par) out << ")";
      return;
    }
    case Raw::Kind::Recv:
      out << p.recv().chan.text() << "?(" << p.recv().binder.text() << "). ";
      print_raw(out, p.recv().body, true);
      return;
    case Raw::Kind::Send:
      out << p.send().chan.text() << "!" << p.send().payload.text() << ". ";
      print_raw(out, p.send().body, true);
      return;
  }
}

}  // namespace

std::string to_string(const Process& p) {
  std::ostringstream out;
  print_process(out, p, false);
  return out.str();
}

std::string to_string(const Raw& p) {
  std::ostringstream out;
  print_raw(out, p, false);
  return out.str();
}

}  // namespace pical
