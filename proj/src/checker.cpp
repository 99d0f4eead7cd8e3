#include "pical/checker.hpp"

#include <optional>
#include <sstream>
#include <variant>

namespace pical {

struct Derivation::Node {
  Kind kind;
  Process subject;
  PreCtx gamma;
  Idxs idxs;
  Ctx input;
  Ctx output;
  std::optional<VarRefStep> chan;
  std::optional<VarRefStep> payload;
  std::vector<Derivation> children;
};

Derivation Derivation::end_node(Process subject, PreCtx gamma, Idxs idxs, Ctx input) {
  if (subject.kind() != Process::Kind::End) throw InvariantError("end_node: subject is not end");
  Ctx output = input;
  return Derivation(std::make_shared<Node>(Node{Kind::End, std::move(subject), std::move(gamma),
                                                std::move(idxs), std::move(input),
                                                std::move(output), std::nullopt, std::nullopt,
                                                {}}));
}

Derivation Derivation::res_node(Process subject, Derivation body) {
  if (subject.kind() != Process::Kind::Res) throw InvariantError("res_node: subject is not new");
  if (body.gamma().empty()) throw InvariantError("res_node: body context is empty");
  PreCtx gamma = db_pop(body.gamma());
  Idxs idxs = db_pop(body.idxs());
  Ctx input = db_pop(body.input());
  Ctx output = db_pop(body.output());
  return Derivation(std::make_shared<Node>(Node{Kind::Res, std::move(subject), std::move(gamma),
                                                std::move(idxs), std::move(input),
                                                std::move(output), std::nullopt, std::nullopt,
                                                {std::move(body)}}));
}

Derivation Derivation::par_node(Process subject, Derivation left, Derivation right) {
  if (subject.kind() != Process::Kind::Par) throw InvariantError("par_node: subject is not par");
  if (left.output() != right.input())
    throw InvariantError("par_node: leftovers of the left component do not feed the right");
  PreCtx gamma = left.gamma();
  Idxs idxs = left.idxs();
  Ctx input = left.input();
  Ctx output = right.output();
  return Derivation(std::make_shared<Node>(Node{Kind::Par, std::move(subject), std::move(gamma),
                                                std::move(idxs), std::move(input),
                                                std::move(output), std::nullopt, std::nullopt,
                                                {std::move(left), std::move(right)}}));
}

Derivation Derivation::recv_node(Process subject, Ctx input, VarRefStep chan, Derivation body) {
  if (subject.kind() != Process::Kind::Recv) throw InvariantError("recv_node: subject is not recv");
  PreCtx gamma = db_pop(body.gamma());
  Idxs idxs = db_pop(body.idxs());
  Ctx output = db_pop(body.output());
  return Derivation(std::make_shared<Node>(Node{Kind::Recv, std::move(subject), std::move(gamma),
                                                std::move(idxs), std::move(input),
                                                std::move(output), std::move(chan), std::nullopt,
                                                {std::move(body)}}));
}

Derivation Derivation::send_node(Process subject, Ctx input, VarRefStep chan, VarRefStep payload,
                                 Derivation cont) {
  if (subject.kind() != Process::Kind::Send) throw InvariantError("send_node: subject is not send");
  PreCtx gamma = cont.gamma();
  Idxs idxs = cont.idxs();
  Ctx output = cont.output();
  return Derivation(std::make_shared<Node>(Node{Kind::Send, std::move(subject), std::move(gamma),
                                                std::move(idxs), std::move(input),
                                                std::move(output), std::move(chan),
                                                std::move(payload), {std::move(cont)}}));
}

Derivation::Kind Derivation::kind() const { return node_->kind; }
const Process& Derivation::subject() const { return node_->subject; }
const PreCtx& Derivation::gamma() const { return node_->gamma; }
const Idxs& Derivation::idxs() const { return node_->idxs; }
const Ctx& Derivation::input() const { return node_->input; }
const Ctx& Derivation::output() const { return node_->output; }

const NuAnnot& Derivation::annot() const { return subject().res().annot; }
const VarRefStep& Derivation::chan_step() const {
  if (!node_->chan) throw InvariantError("chan_step on a node without one");
  return *node_->chan;
}
const VarRefStep& Derivation::payload_step() const {
  if (!node_->payload) throw InvariantError("payload_step on a node without one");
  return *node_->payload;
}
const Derivation& Derivation::child() const {
  if (node_->children.size() != 1) throw InvariantError("child() on a node without a single child");
  return node_->children[0];
}
const Derivation& Derivation::left() const {
  if (node_->kind != Kind::Par) throw InvariantError("left() on a non-par node");
  return node_->children[0];
}
const Derivation& Derivation::right() const {
  if (node_->kind != Kind::Par) throw InvariantError("right() on a non-par node");
  return node_->children[1];
}

bool operator==(const Derivation& a, const Derivation& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (!(a.subject() == b.subject())) return false;
  if (a.gamma() != b.gamma() || a.idxs() != b.idxs() || a.input() != b.input() ||
      a.output() != b.output())
    return false;
  if (a.node_->chan != b.node_->chan || a.node_->payload != b.node_->payload) return false;
  if (a.node_->children.size() != b.node_->children.size()) return false;
  for (std::size_t k = 0; k < a.node_->children.size(); ++k)
    if (!(a.node_->children[k] == b.node_->children[k])) return false;
  return true;
}

bool type_equal(const Type& a, const Type& b) { return a == b; }

// ---------------------------------------------------------------------------
// check

namespace {

class Checker {
 public:
  explicit Checker(const AlgebraSet& set) : set_(set) {}

  Derivation run(const PreCtx& gamma, const Idxs& idxs, const Ctx& input, const Process& p) {
    if (gamma.size() != p.depth() || idxs.size() != p.depth() || input.size() != p.depth())
      throw TypeError(TypeError::Kind::DepthMismatch,
                      "context length does not match process depth " + std::to_string(p.depth()),
                      to_string(path_));
    switch (p.kind()) {
      case Process::Kind::End:
        return Derivation::end_node(p, gamma, idxs, input);
      case Process::Kind::Res:
        return check_res(gamma, idxs, input, p);
      case Process::Kind::Par:
        return check_par(gamma, idxs, input, p);
      case Process::Kind::Recv:
        return check_recv(gamma, idxs, input, p);
      case Process::Kind::Send:
        return check_send(gamma, idxs, input, p);
    }
    throw InvariantError("check: unreachable");
  }

 private:
  VarRefStep consume(const PreCtx& gamma, const Idxs& idxs, const Ctx& usage, std::size_t i,
                     const AlgebraId& alg, const UsagePair& demanded) {
    try {
      ConsumeResult r = consume_var(set_, gamma, idxs, usage, i, alg, demanded);
      return VarRefStep{i, r.type, alg, demanded, std::move(r.leftover)};
    } catch (const TypeError& e) {
      throw TypeError(e.kind, e.what(), to_string(path_));
    }
  }

  // The bound position must come back fully spent.
  void require_exhausted(const Ctx& body_output, const AlgebraId& alg) {
    const UsagePair empty = set_.at(alg).pair_empty();
    if (db_at(body_output, std::size_t{0}) != empty)
      throw TypeError(TypeError::Kind::ResidualUsage,
                      "bound position keeps " + to_string(db_at(body_output, std::size_t{0})) +
                          "@" + alg + ", expected " + to_string(empty),
                      to_string(path_));
  }

  Derivation check_res(const PreCtx& gamma, const Idxs& idxs, const Ctx& input, const Process& p) {
    const NuAnnot& a = p.res().annot;
    if (!set_.contains(a.payload_alg) || !set_.contains(a.mult_alg))
      throw TypeError(TypeError::Kind::AlgebraMismatch, "annotation names an unknown algebra",
                      to_string(path_));
    PreCtx g2 = db_push(gamma, a.chan_type());
    Idxs i2 = db_push(idxs, a.mult_alg);
    Ctx u2 = db_push(input, UsagePair{a.mult, a.mult});
    path_.push_back(PathStep::ResBody);
    Derivation body = run(g2, i2, u2, p.res().body);
    path_.pop_back();
    require_exhausted(body.output(), a.mult_alg);
    return Derivation::res_node(p, std::move(body));
  }

  Derivation check_par(const PreCtx& gamma, const Idxs& idxs, const Ctx& input, const Process& p) {
    path_.push_back(PathStep::ParLeft);
    Derivation left = run(gamma, idxs, input, p.par().left);
    path_.pop_back();
    path_.push_back(PathStep::ParRight);
    Derivation right = run(gamma, idxs, left.output(), p.par().right);
    path_.pop_back();
    return Derivation::par_node(p, std::move(left), std::move(right));
  }

  Derivation check_recv(const PreCtx& gamma, const Idxs& idxs, const Ctx& input, const Process& p) {
    std::size_t i = p.recv().chan.index();
    const AlgebraId& chan_alg = db_at(idxs, i);
    VarRefStep chan = consume(gamma, idxs, input, i, chan_alg, set_.at(chan_alg).pair_in());
    if (!chan.type.is_chan())
      throw TypeError(TypeError::Kind::NotAChannel,
                      "input on " + std::to_string(i) + " of type " + to_string(chan.type),
                      to_string(path_));
    const Type& t = chan.type.payload();
    const AlgebraId& payload_alg = chan.type.alg();
    const UsagePair& x = chan.type.usage();
    PreCtx g2 = db_push(gamma, t);
    Idxs i2 = db_push(idxs, payload_alg);
    Ctx u2 = db_push(chan.leftover, x);
    path_.push_back(PathStep::RecvBody);
    Derivation body = run(g2, i2, u2, p.recv().body);
    path_.pop_back();
    require_exhausted(body.output(), payload_alg);
    return Derivation::recv_node(p, input, std::move(chan), std::move(body));
  }

  Derivation check_send(const PreCtx& gamma, const Idxs& idxs, const Ctx& input, const Process& p) {
    std::size_t i = p.send().chan.index();
    std::size_t j = p.send().payload.index();
    const AlgebraId& chan_alg = db_at(idxs, i);
    VarRefStep chan = consume(gamma, idxs, input, i, chan_alg, set_.at(chan_alg).pair_out());
    if (!chan.type.is_chan())
      throw TypeError(TypeError::Kind::NotAChannel,
                      "output on " + std::to_string(i) + " of type " + to_string(chan.type),
                      to_string(path_));
    const Type& t = chan.type.payload();
    if (!type_equal(db_at(gamma, j), t))
      throw TypeError(TypeError::Kind::PayloadTypeMismatch,
                      "payload " + std::to_string(j) + " has type " + to_string(db_at(gamma, j)) +
                          ", channel carries " + to_string(t),
                      to_string(path_));
    VarRefStep payload = consume(gamma, idxs, chan.leftover, j, chan.type.alg(), chan.type.usage());
    path_.push_back(PathStep::SendBody);
    Derivation cont = run(gamma, idxs, payload.leftover, p.send().body);
    path_.pop_back();
    return Derivation::send_node(p, input, std::move(chan), std::move(payload), std::move(cont));
  }

  const AlgebraSet& set_;
  Path path_;
};

}  // namespace

CheckResult check(const AlgebraSet& set, const PreCtx& gamma, const Idxs& idxs, const Ctx& input,
                  const Process& p) {
  Checker checker(set);
  Derivation d = checker.run(gamma, idxs, input, p);
  Ctx leftover = d.output();
  return CheckResult{std::move(d), std::move(leftover)};
}

// ---------------------------------------------------------------------------
// recheck

namespace {

struct Rechecker {
  const AlgebraSet& set;
  RecheckResult result;

  bool fail(const Path& path, const std::string& reason) {
    if (result.ok) {
      result.ok = false;
      result.reason = reason;
      result.path = path;
    }
    return false;
  }

  bool consume_matches(const Path& path, const PreCtx& gamma, const Idxs& idxs, const Ctx& input,
                       const VarRefStep& step, const char* label) {
    if (step.index >= input.size()) return fail(path, std::string(label) + ": index out of range");
    if (db_at(idxs, step.index) != step.alg)
      return fail(path, std::string(label) + ": algebra disagrees with idxs");
    if (!type_equal(db_at(gamma, step.index), step.type))
      return fail(path, std::string(label) + ": stored type disagrees with gamma");
    auto z = set.at(step.alg).split_pair(db_at(input, step.index), step.demanded);
    if (!z) return fail(path, std::string(label) + ": demanded split undefined");
    if (step.leftover.size() != input.size())
      return fail(path, std::string(label) + ": leftover length mismatch");
    for (std::size_t k = 0; k < input.size(); ++k) {
      std::size_t db = input.size() - 1 - k;
      const UsagePair& expect = db == step.index ? *z : input[k];
      if (!(step.leftover[k] == expect))
        return fail(path, std::string(label) + ": leftover wrong at position " + std::to_string(k));
    }
    return true;
  }

  bool node(const Derivation& d, Path& path) {
    const Process& p = d.subject();
    std::size_t n = p.depth();
    if (d.gamma().size() != n || d.idxs().size() != n || d.input().size() != n ||
        d.output().size() != n)
      return fail(path, "context lengths disagree with subject depth");
    switch (d.kind()) {
      case Derivation::Kind::End: {
        if (p.kind() != Process::Kind::End) return fail(path, "kind mismatch");
        if (d.output() != d.input()) return fail(path, "end must not change usages");
        return true;
      }
      case Derivation::Kind::Res: {
        if (p.kind() != Process::Kind::Res) return fail(path, "kind mismatch");
        const NuAnnot& a = p.res().annot;
        const Derivation& body = d.child();
        if (body.gamma() != db_push(d.gamma(), a.chan_type()))
          return fail(path, "body gamma does not extend with the channel type");
        if (body.idxs() != db_push(d.idxs(), a.mult_alg))
          return fail(path, "body idxs does not extend with the annotation algebra");
        if (body.input() != db_push(d.input(), UsagePair{a.mult, a.mult}))
          return fail(path, "body input does not extend with the balanced multiplicity");
        if (db_at(body.output(), std::size_t{0}) != set.at(a.mult_alg).pair_empty())
          return fail(path, "bound channel not exhausted");
        if (d.output() != db_pop(body.output())) return fail(path, "output is not the body tail");
        if (!(body.subject() == p.res().body)) return fail(path, "body subject mismatch");
        path.push_back(PathStep::ResBody);
        bool ok = node(body, path);
        path.pop_back();
        return ok;
      }
      case Derivation::Kind::Par: {
        if (p.kind() != Process::Kind::Par) return fail(path, "kind mismatch");
        const Derivation& l = d.left();
        const Derivation& r = d.right();
        if (l.gamma() != d.gamma() || r.gamma() != d.gamma() || l.idxs() != d.idxs() ||
            r.idxs() != d.idxs())
          return fail(path, "component contexts differ from the node");
        if (l.input() != d.input()) return fail(path, "left input mismatch");
        if (r.input() != l.output()) return fail(path, "leftovers of the left do not feed the right");
        if (d.output() != r.output()) return fail(path, "output is not the right leftover");
        if (!(l.subject() == p.par().left) || !(r.subject() == p.par().right))
          return fail(path, "component subject mismatch");
        path.push_back(PathStep::ParLeft);
        bool ok = node(l, path);
        path.pop_back();
        if (!ok) return false;
        path.push_back(PathStep::ParRight);
        ok = node(r, path);
        path.pop_back();
        return ok;
      }
      case Derivation::Kind::Recv: {
        if (p.kind() != Process::Kind::Recv) return fail(path, "kind mismatch");
        const VarRefStep& chan = d.chan_step();
        if (chan.index != p.recv().chan.index()) return fail(path, "channel index mismatch");
        if (chan.demanded != set.at(chan.alg).pair_in()) return fail(path, "input must demand l-in");
        if (!consume_matches(path, d.gamma(), d.idxs(), d.input(), chan, "chan")) return false;
        if (!chan.type.is_chan()) return fail(path, "input on a non-channel");
        const Derivation& body = d.child();
        if (body.gamma() != db_push(d.gamma(), chan.type.payload()))
          return fail(path, "body gamma does not extend with the payload type");
        if (body.idxs() != db_push(d.idxs(), chan.type.alg()))
          return fail(path, "body idxs does not extend with the payload algebra");
        if (body.input() != db_push(chan.leftover, chan.type.usage()))
          return fail(path, "body input does not extend the channel leftover");
        if (db_at(body.output(), std::size_t{0}) != set.at(chan.type.alg()).pair_empty())
          return fail(path, "received element not exhausted");
        if (d.output() != db_pop(body.output())) return fail(path, "output is not the body tail");
        if (!(body.subject() == p.recv().body)) return fail(path, "body subject mismatch");
        path.push_back(PathStep::RecvBody);
        bool ok = node(body, path);
        path.pop_back();
        return ok;
      }
      case Derivation::Kind::Send: {
        if (p.kind() != Process::Kind::Send) return fail(path, "kind mismatch");
        const VarRefStep& chan = d.chan_step();
        const VarRefStep& payload = d.payload_step();
        if (chan.index != p.send().chan.index()) return fail(path, "channel index mismatch");
        if (payload.index != p.send().payload.index()) return fail(path, "payload index mismatch");
        if (chan.demanded != set.at(chan.alg).pair_out())
          return fail(path, "output must demand l-out");
        if (!consume_matches(path, d.gamma(), d.idxs(), d.input(), chan, "chan")) return false;
        if (!chan.type.is_chan()) return fail(path, "output on a non-channel");
        if (!type_equal(db_at(d.gamma(), payload.index), chan.type.payload()))
          return fail(path, "payload type disagrees with the channel");
        if (payload.alg != chan.type.alg() || payload.demanded != chan.type.usage())
          return fail(path, "payload demand disagrees with the channel annotation");
        if (!consume_matches(path, d.gamma(), d.idxs(), chan.leftover, payload, "payload"))
          return false;
        const Derivation& cont = d.child();
        if (cont.gamma() != d.gamma() || cont.idxs() != d.idxs())
          return fail(path, "continuation contexts differ");
        if (cont.input() != payload.leftover)
          return fail(path, "continuation input is not the payload leftover");
        if (d.output() != cont.output()) return fail(path, "output mismatch");
        if (!(cont.subject() == p.send().body)) return fail(path, "continuation subject mismatch");
        path.push_back(PathStep::SendBody);
        bool ok = node(cont, path);
        path.pop_back();
        return ok;
      }
    }
    return fail(path, "unknown node kind");
  }
};

}  // namespace

RecheckResult recheck(const AlgebraSet& set, const Derivation& d) {
  Rechecker rc{set, {}};
  Path path;
  rc.node(d, path);
  return rc.result;
}

namespace {

void print_derivation(std::ostringstream& out, const Derivation& d, std::size_t indent) {
  out << std::string(indent * 2, ' ');
  switch (d.kind()) {
    case Derivation::Kind::End: out << "end"; break;
    case Derivation::Kind::Res: out << "res"; break;
    case Derivation::Kind::Par: out << "par"; break;
    case Derivation::Kind::Recv: out << "recv(" << d.chan_step().index << ")"; break;
    case Derivation::Kind::Send:
      out << "send(" << d.chan_step().index << "!" << d.payload_step().index << ")";
      break;
  }
  out << ": " << to_string(d.input(), d.idxs()) << " |> " << to_string(d.output(), d.idxs())
      << "\n";
  switch (d.kind()) {
    case Derivation::Kind::End: break;
    case Derivation::Kind::Par:
      print_derivation(out, d.left(), indent + 1);
      print_derivation(out, d.right(), indent + 1);
      break;
    default:
      print_derivation(out, d.child(), indent + 1);
      break;
  }
}

}  // namespace

std::string to_string(const Derivation& d) {
  std::ostringstream out;
  print_derivation(out, d, 0);
  return out.str();
}

}  // namespace pical
