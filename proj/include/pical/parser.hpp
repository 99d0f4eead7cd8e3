#ifndef PICAL_PARSER_HPP
#define PICAL_PARSER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "pical/ast.hpp"

namespace pical {

/// A free-name declaration: `free x : TYPE [@ ALG (u,v)] ;`. The usage
/// clause gives the channel's own budget in the usage context; omitted it
/// defaults to shared (w,w), the unrestricted budget.
struct FreeDecl {
  Name name;
  Type type;
  AlgebraId usage_alg;
  UsagePair usage;
};

struct Program {
  std::vector<FreeDecl> decls;
  Raw proc;

  std::vector<Name> names() const;
  PreCtx gamma() const;
  Idxs idxs() const;
  Ctx usage() const;
};

/// Parses the surface grammar:
///   program := ("free" NAME ":" type ["@" ALG "(" usage "," usage ")"] ";")* proc
///   proc    := atom ("|" proc)?                      -- right associative
///   atom    := "end" | "new" NAME ":" type "@" ALG usage "." atom
///            | NAME "?" "(" NAME ")" "." atom | NAME "!" NAME "." atom
///            | "(" proc ")"
///   type    := "unit" | "chan" "<" type ">" "[" ALG "(" usage "," usage ")" "]"
///   usage   := DIGITS | "w"
/// `#` starts a comment to end of line. Throws ParseError with line/column.
Program parse(std::string_view text, const AlgebraSet& set = AlgebraSet::standard());

/// Canonical text; parse(print_program(p)) reproduces p exactly.
std::string print_program(const Program& p);

}  // namespace pical

#endif
