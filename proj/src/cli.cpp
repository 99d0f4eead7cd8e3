#include "pical/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pical/checker.hpp"
#include "pical/metatheory.hpp"
#include "pical/parser.hpp"
#include "pical/semantics.hpp"

namespace pical::cli {

namespace {

using nlohmann::json;

struct Loaded {
  Program program;
  Process proc;
};

Loaded load(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::stringstream buffer;
  buffer << file.rdbuf();
  Program program = parse(buffer.str());
  auto scope = well_scoped(program.names(), program.proc);
  if (auto* failure = std::get_if<ScopeFailure>(&scope))
    throw ScopeError(failure->name.text(), to_string(failure->path));
  Process proc = from_raw(program.names(), program.proc, std::get<ScopeWitness>(scope));
  return Loaded{std::move(program), std::move(proc)};
}

json ctx_json(const Ctx& ctx, const Idxs& idxs) {
  json out = json::array();
  for (std::size_t k = 0; k < ctx.size(); ++k)
    out.push_back({{"usage", to_string(ctx[k])}, {"algebra", idxs[k]}});
  return out;
}

json deriv_json(const Derivation& d) {
  json node;
  switch (d.kind()) {
    case Derivation::Kind::End: node["kind"] = "end"; break;
    case Derivation::Kind::Res: node["kind"] = "res"; break;
    case Derivation::Kind::Par: node["kind"] = "par"; break;
    case Derivation::Kind::Recv:
      node["kind"] = "recv";
      node["channel"] = d.chan_step().index;
      break;
    case Derivation::Kind::Send:
      node["kind"] = "send";
      node["channel"] = d.chan_step().index;
      node["payload"] = d.payload_step().index;
      break;
  }
  node["input"] = ctx_json(d.input(), d.idxs());
  node["output"] = ctx_json(d.output(), d.idxs());
  json children = json::array();
  switch (d.kind()) {
    case Derivation::Kind::End: break;
    case Derivation::Kind::Par:
      children.push_back(deriv_json(d.left()));
      children.push_back(deriv_json(d.right()));
      break;
    default:
      children.push_back(deriv_json(d.child()));
      break;
  }
  node["children"] = std::move(children);
  return node;
}

int cmd_check(const std::string& path, bool as_json, std::ostream& out, std::ostream& err) {
  Loaded loaded = load(path);
  const AlgebraSet& set = AlgebraSet::standard();
  try {
    CheckResult result =
        check(set, loaded.program.gamma(), loaded.program.idxs(), loaded.program.usage(),
              loaded.proc);
    if (as_json) {
      json j{{"ok", true},
             {"leftover", ctx_json(result.leftover, loaded.program.idxs())},
             {"derivation", deriv_json(result.derivation)}};
      out << j.dump(2) << "\n";
    } else {
      out << to_string(result.derivation);
      out << "leftover: " << to_string(result.leftover, loaded.program.idxs()) << "\n";
    }
    return 0;
  } catch (const TypeError& e) {
    if (as_json) {
      out << json{{"ok", false}, {"error", e.what()}}.dump(2) << "\n";
    } else {
      err << "type error: " << e.what() << "\n";
    }
    return 1;
  }
}

int cmd_reduce(const std::string& path, std::optional<std::size_t> steps, bool as_json,
               std::ostream& out) {
  Loaded loaded = load(path);
  Process p = loaded.proc;
  json trace = json::array();
  std::size_t k = 1;
  while (!steps || k <= *steps) {
    p = prenex(p);
    std::vector<Reduction> rs = reductions(p);
    if (rs.empty()) break;
    const Reduction& step = rs.front();
    if (as_json) {
      trace.push_back(
          {{"channel", to_string(step.channel)}, {"process", to_string(step.result)}});
    } else {
      out << "step " << k << ": channel=" << to_string(step.channel)
          << " ; process=" << to_string(step.result) << "\n";
    }
    p = step.result;
    ++k;
  }
  if (as_json) out << json{{"steps", trace}}.dump(2) << "\n";
  return 0;
}

int cmd_roundtrip(const std::string& path, std::ostream& out) {
  Loaded loaded = load(path);
  std::vector<Name> suffixed;
  for (const Name& n : loaded.program.names()) suffixed.push_back(Name(n.text() + "^0"));
  Raw named = to_raw(suffixed, loaded.proc);
  Program echoed = loaded.program;
  for (std::size_t k = 0; k < echoed.decls.size(); ++k) echoed.decls[k].name = suffixed[k];
  echoed.proc = named;
  out << print_program(echoed);
  return 0;
}

// ---------------------------------------------------------------------------
// repl

struct ReplState {
  PreCtx gamma;
  Idxs idxs;
  Ctx usage;
  Process proc;
};

void all_paths(const Process& p, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  switch (p.kind()) {
    case Process::Kind::End:
      return;
    case Process::Kind::Res:
      cur.push_back(PathStep::ResBody);
      all_paths(p.res().body, cur, out);
      cur.pop_back();
      return;
    case Process::Kind::Par:
      cur.push_back(PathStep::ParLeft);
      all_paths(p.par().left, cur, out);
      cur.pop_back();
      cur.push_back(PathStep::ParRight);
      all_paths(p.par().right, cur, out);
      cur.pop_back();
      return;
    case Process::Kind::Recv:
      cur.push_back(PathStep::RecvBody);
      all_paths(p.recv().body, cur, out);
      cur.pop_back();
      return;
    case Process::Kind::Send:
      cur.push_back(PathStep::SendBody);
      all_paths(p.send().body, cur, out);
      cur.pop_back();
      return;
  }
}

struct Rewrite {
  CongRule rule;
  Path path;
  Process result;
};

std::vector<Rewrite> applicable_rewrites(const Process& p) {
  std::vector<Rewrite> out;
  std::vector<Path> paths;
  Path cur;
  all_paths(p, cur, paths);
  static const CongRuleKind kinds[] = {CongRuleKind::CompAssoc, CongRuleKind::CompSym,
                                       CongRuleKind::CompId,    CongRuleKind::ScopeEnd,
                                       CongRuleKind::ScopeExt,  CongRuleKind::ScopeComm};
  for (const Path& path : paths) {
    for (CongRuleKind kind : kinds) {
      for (Direction dir : {Direction::Forward, Direction::Backward}) {
        CongRule rule{kind, dir};
        try {
          out.push_back(Rewrite{rule, path, apply_cong(rule, path, p)});
        } catch (const RewriteError&) {
        }
      }
    }
  }
  return out;
}

void report_typing(const ReplState& st, std::ostream& out) {
  try {
    CheckResult r = check(AlgebraSet::standard(), st.gamma, st.idxs, st.usage, st.proc);
    out << "leftover: " << to_string(r.leftover, st.idxs) << "\n";
  } catch (const TypeError& e) {
    out << "ill-typed: " << e.what() << "\n";
  }
}

int cmd_repl(const std::string& path, std::istream& in, std::ostream& out) {
  Loaded loaded = load(path);
  ReplState st{loaded.program.gamma(), loaded.program.idxs(), loaded.program.usage(),
               loaded.proc};
  report_typing(st, out);
  while (true) {
    out << "\nprocess: " << to_string(st.proc) << "\n";
    std::vector<Reduction> steps = reductions(st.proc);
    std::vector<Rewrite> rewrites = applicable_rewrites(st.proc);
    std::size_t item = 1;
    for (const Reduction& r : steps) {
      out << "  " << item++ << ") step on " << to_string(r.channel) << " -> "
          << to_string(r.result) << "\n";
    }
    for (const Rewrite& rw : rewrites) {
      out << "  " << item++ << ") " << to_string(rw.rule) << " at " << to_string(rw.path) << "\n";
    }
    out << "choose a number, or p(renex), n(ormalize), q(uit) > " << std::flush;
    std::string line;
    if (!std::getline(in, line)) return 0;
    if (line == "q" || line == "quit") return 0;
    if (line == "p" || line == "prenex") {
      st.proc = prenex(st.proc);
      report_typing(st, out);
      continue;
    }
    if (line == "n" || line == "normalize") {
      st.proc = flatten_normalize(st.proc);
      report_typing(st, out);
      continue;
    }
    std::size_t choice = 0;
    try {
      choice = static_cast<std::size_t>(std::stoul(line));
    } catch (...) {
      out << "unrecognized input\n";
      continue;
    }
    if (choice == 0 || choice > steps.size() + rewrites.size()) {
      out << "no such item\n";
      continue;
    }
    if (choice <= steps.size()) {
      const Reduction& r = steps[choice - 1];
      if (!r.channel.is_internal()) {
        std::size_t i = r.channel.var().index();
        const AlgebraSet& set = AlgebraSet::standard();
        const UsageAlgebra& alg = set.at(db_at(st.idxs, i));
        auto paid = alg.split_pair(db_at(st.usage, i), alg.pair_both());
        if (paid) {
          db_at(st.usage, i) = *paid;
        } else {
          out << "warning: context cannot pay l-# on ext " << i << "; typing will degrade\n";
        }
      }
      st.proc = r.result;
    } else {
      st.proc = rewrites[choice - steps.size() - 1].result;
    }
    report_typing(st, out);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"resource-aware pi-calculus with leftover typing"};
  app.require_subcommand(1);

  std::string file;
  bool as_json = false;

  CLI::App* check_cmd = app.add_subcommand("check", "typecheck a program");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_flag("--json", as_json);

  CLI::App* reduce_cmd = app.add_subcommand("reduce", "run the reduction engine");
  reduce_cmd->add_option("file", file)->required();
  std::size_t steps = 0;
  CLI::Option* steps_opt = reduce_cmd->add_option("--steps", steps, "stop after N steps");
  reduce_cmd->add_flag("--to-end", "reduce until no step applies");
  reduce_cmd->add_flag("--json", as_json);

  CLI::App* repl_cmd = app.add_subcommand("repl", "interactive stepper");
  repl_cmd->add_option("file", file)->required();

  CLI::App* roundtrip_cmd = app.add_subcommand("roundtrip", "named form after a round trip");
  roundtrip_cmd->add_option("file", file)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(check_cmd)) return cmd_check(file, as_json, out, err);
    if (app.got_subcommand(reduce_cmd)) {
      std::optional<std::size_t> limit;
      if (steps_opt->count() > 0) limit = steps;
      return cmd_reduce(file, limit, as_json, out);
    }
    if (app.got_subcommand(repl_cmd)) return cmd_repl(file, in, out);
    if (app.got_subcommand(roundtrip_cmd)) return cmd_roundtrip(file, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ScopeError& e) {
    err << "scope error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pical::cli
