#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hintelab/env.hpp"
#include "hintelab/error.hpp"

namespace hintelab {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Var, Hole, Meta, Sort, UnitTy, Star, App, Lam, Pi, Arrow, Ascribe, Anon, Case1 };

struct BinderGroup {
  std::vector<std::string> names;
  ExprPtr type;  // null for untyped lambda binders
  SourcePos pos;
};

// App: args = {fn, arg}; Lam/Pi: binders + args = {body}; Arrow/Ascribe: two
// args; Anon: the field list; Case1: motive, branch, scrutinee.
struct Expr {
  ExprKind kind;
  SourcePos pos;
  std::string name;
  std::vector<ExprPtr> args;
  std::vector<BinderGroup> binders;
};

ExprPtr make_expr(ExprKind kind, SourcePos pos, std::string name = {}, std::vector<ExprPtr> args = {},
                  std::vector<BinderGroup> binders = {});

enum class CommandKind {
  Def,
  Axiom,
  Structure,
  Coercion,
  Nonuniform,
  Hint,
  Check,
  Infer,
  Conjecture,
  Rewrite,
  Expand,
  Notation,
  DumpHints,
  DumpCoercions,
};

struct FieldSyntax {
  std::string name;
  ExprPtr type;
  FieldKind kind = FieldKind::Data;
  SourcePos pos;
};

struct TelescopeSyntax {
  std::string name;
  ExprPtr definition;
  SourcePos pos;
};

struct Command {
  CommandKind kind;
  SourcePos pos;
  std::string file;
  std::string name;                  // declared / goal / instance / coercion function name
  std::vector<BinderGroup> binders;  // parameters, branch context, hint context
  ExprPtr type;
  ExprPtr value;
  Reducibility reducibility = Reducibility::Reducible;
  std::vector<FieldSyntax> fields;
  std::size_t arg_index = 0;
  ExprPtr source, target, pattern, result;
  std::optional<int> priority;
  std::vector<TelescopeSyntax> telescope;
  ExprPtr lhs, rhs;
  bool reverse = false;
  std::optional<std::size_t> occurrence;
  Notation notation;
};

struct Script {
  std::vector<Command> commands;
};

// Notations every script starts with (equality from the prelude).
std::vector<Notation> prelude_notations();

// Parses a script. `include "path"` is resolved relative to `base_dir` and
// spliced in place. Throws Error(SyntaxError) with a position.
Script parse_script(const std::string& text, const std::string& file = "<input>",
                    const std::filesystem::path& base_dir = {});
Script parse_file(const std::filesystem::path& path);

// Parses a single term with the prelude notations plus `extra`.
ExprPtr parse_term(const std::string& text, const std::vector<Notation>& extra = {});

}  // namespace hintelab
