#include "hintelab/session.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "hintelab/coercions.hpp"
#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/printer.hpp"

namespace hintelab {

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
      return kExitSyntax;
    case ErrorKind::Internal:
      return kExitInternal;
    default:
      return kExitError;
  }
}

void diagnostic(std::ostream& err, const std::string& file, SourcePos pos, const std::string& kind,
                const std::string& msg) {
  err << file;
  if (pos.known()) err << ":" << pos.line << ":" << pos.column;
  err << ": error: [" << kind << "] " << msg << "\n";
}

}  // namespace

Session::Session(SessionOptions opts) : opts_(opts) {
  declare_prelude(env_);
  UnifierConfig cfg;
  cfg.max_hint_depth = opts_.max_hint_depth;
  cfg.fuel = opts_.fuel;
  unifier_ = std::make_unique<Unifier>(env_, db_, metas_, cfg);
  unifier_->set_observer([this](const LocalContext& ctx, const Term& a, const Term& b) {
    solved_.push_back({ctx, a, b});
  });
  unifier_->set_trace([this](const std::string& line) {
    if (trace_) *trace_ << line << "\n";
  });
  elab_ = std::make_unique<Elaborator>(env_, db_, metas_, *unifier_);
  elab_->set_obligations_fail(opts_.obligations_fail);
}

std::string Session::render(const Term& t) const { return render_term(env_, t, RenderOptions{&metas_, true}); }

void Session::print_result(const ElabResult& r, std::ostream& out) const {
  out << "TERM: " << render(r.term) << "\n";
  out << "TYPE: " << render(r.type) << "\n";
  for (const auto& o : r.obligations) out << "OBLIGATION " << o.name << ": " << render(o.type) << "\n";
}

void Session::execute(const Command& c, std::ostream& out) {
  Elaborator& el = *elab_;
  Unifier& u = *unifier_;
  switch (c.kind) {
    case CommandKind::Def:
    case CommandKind::Axiom: {
      if (env_.contains(c.name)) throw Error(ErrorKind::AlreadyDeclared, c.name + " is already declared", c.pos);
      LocalContext ctx;
      std::vector<Term> xs = el.elab_binders(ctx, c.binders);
      Term ty = el.elab_type(ctx, c.type);
      ElabResult r = c.kind == CommandKind::Def ? el.finish(el.check(ctx, c.value, ty), ty) : el.finish(ty, mk_sort());
      Term body = r.term;
      Term type = c.kind == CommandKind::Def ? r.type : r.term;
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
        FVarId id = it->as<node::FVar>().id;
        const LocalDecl* d = ctx.find(id);
        Term dty = normalize_greedy(env_, u.instantiate(d->type));
        body = mk_lam(d->name, dty, abstract_fvar(body, id));
        type = mk_pi(d->name, dty, abstract_fvar(type, id));
      }
      if (c.kind == CommandKind::Def)
        env_.add(DefDecl{c.name, type, body, c.reducibility});
      else
        env_.add(AxiomDecl{c.name, type});
      for (const auto& o : r.obligations) out << "OBLIGATION " << o.name << ": " << render(o.type) << "\n";
      break;
    }
    case CommandKind::Structure: {
      LocalContext ctx;
      StructureDecl s;
      s.name = c.name;
      std::vector<FVarId> ids;
      auto closed = [&](const ExprPtr& e) {
        Term t = normalize_greedy(env_, u.instantiate(el.elab_type(ctx, e)));
        if (t.has_meta()) throw Error(ErrorKind::IllTyped, "unsolved placeholder in " + render(t), e->pos);
        return t;
      };
      for (const auto& g : c.binders) {
        Term ty = closed(g.type);
        for (const auto& n : g.names) {
          s.params.push_back(Binder{n, abstract_fvars(ty, ids)});
          ids.push_back(el.push_local(ctx, n, ty).as<node::FVar>().id);
        }
      }
      for (const auto& f : c.fields) {
        Term ty = closed(f.type);
        s.fields.push_back(Field{f.name, abstract_fvars(ty, ids), f.kind});
        ids.push_back(el.push_local(ctx, f.name, ty).as<node::FVar>().id);
      }
      env_.add(std::move(s));
      break;
    }
    case CommandKind::Coercion:
      declare_uniform(env_, db_, c.name, c.arg_index);
      break;
    case CommandKind::Nonuniform:
      declare_nonuniform(env_, db_, metas_, el.elaborate_branch(c), c.name, c.priority);
      break;
    case CommandKind::Hint:
      db_.declare_hint(env_, metas_, el.elaborate_hint(c));
      break;
    case CommandKind::Check:
    case CommandKind::Infer: {
      ElabResult r = c.kind == CommandKind::Check ? el.elaborate_check(c.value, c.type) : el.elaborate_infer(c.value);
      print_result(r, out);
      records_.push_back({c.kind, r, std::nullopt});
      break;
    }
    case CommandKind::Conjecture: {
      LocalContext ctx;
      el.elab_binders(ctx, c.binders);
      ElabResult r = el.finish(el.elab_type(ctx, c.type), mk_sort());
      goals_[c.name] = Goal{c.name, ctx, r.term};
      out << "GOAL " << c.name << ": " << render(r.term) << "\n";
      for (const auto& o : r.obligations) out << "OBLIGATION " << o.name << ": " << render(o.type) << "\n";
      break;
    }
    case CommandKind::Rewrite: {
      auto it = goals_.find(c.name);
      if (it == goals_.end()) throw Error(ErrorKind::UnboundName, "no goal named " + c.name, c.pos);
      RewriteResult r = el.rewrite_goal(it->second, c.value,
                                        c.reverse ? RewriteDirection::RightToLeft : RewriteDirection::LeftToRight,
                                        c.occurrence);
      it->second = r.goal;
      out << "GOAL " << c.name << ": " << render(r.goal.statement) << "\n";
      for (const auto& o : r.obligations) out << "OBLIGATION " << o.name << ": " << render(o.type) << "\n";
      records_.push_back({c.kind, std::nullopt, r});
      break;
    }
    case CommandKind::Expand: {
      Term x = expand_instance(env_, c.name);
      db_.expand_in_telescopes(env_, metas_, c.name, x);
      out << "TERM: " << render(x) << "\n";
      break;
    }
    case CommandKind::Notation: {
      const std::string& k = c.notation.constant;
      if (!env_.contains(k) && !env_.find_projection(k) && !env_.find_constructor(k))
        throw Error(ErrorKind::UnboundName, "notation for unknown constant " + k, c.pos);
      env_.add_notation(c.notation);
      break;
    }
    case CommandKind::DumpHints:
      out << db_.dump_hints(env_, metas_);
      break;
    case CommandKind::DumpCoercions:
      out << db_.dump_coercions(env_);
      break;
  }
}

int Session::run(const Script& script, std::ostream& out, std::ostream& err) {
  trace_ = opts_.trace ? &err : nullptr;
  int code = kExitOk;
  for (const auto& c : script.commands) {
    elab_->begin_command();
    try {
      execute(c, out);
      continue;
    } catch (const Error& e) {
      SourcePos pos = e.pos().known() ? e.pos() : c.pos;
      diagnostic(err, c.file, pos, to_string(e.kind()), e.what());
      if (code == kExitOk) code = exit_code_for(e.kind());
    } catch (const std::exception& e) {
      diagnostic(err, c.file, c.pos, "Internal", e.what());
      if (code == kExitOk) code = kExitInternal;
    }
    if (!opts_.keep_going) break;
  }
  if (opts_.dump_hints) out << db_.dump_hints(env_, metas_);
  if (opts_.dump_coercions) out << db_.dump_coercions(env_);
  return code;
}

int Session::run_text(const std::string& text, std::ostream& out, std::ostream& err, const std::string& file) {
  Script s;
  try {
    s = parse_script(text, file);
  } catch (const Error& e) {
    diagnostic(err, file, e.pos(), to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  }
  return run(s, out, err);
}

int Session::run_file(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  Script s;
  try {
    s = parse_file(path);
  } catch (const Error& e) {
    diagnostic(err, path.string(), e.pos(), to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  }
  return run(s, out, err);
}

}  // namespace hintelab
