#include "hintelab/hintdb.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"
#include "hintelab/printer.hpp"

namespace hintelab {

namespace {

std::size_t count_meta(const Term& t, MetaId id) {
  std::size_t n = 0;
  for_each(t, [&](const Term& s) {
    if (!s.has_meta()) return false;
    if (s.is<node::Meta>() && s.as<node::Meta>().id == id) ++n;
    return true;
  });
  return n;
}

MetaSubstitution telescope_subst(const Hint& h) {
  MetaSubstitution s;
  for (const auto& e : h.telescope) s.assign(e.meta, e.definition);
  return s;
}

std::string meta_label(const MetaContext& metas, MetaId id) {
  const MetaVar* m = metas.find(id);
  return (m && !m->name.empty()) ? "?" + m->name : "?" + std::to_string(id);
}

void check_acceptable(const GlobalEnv& env, const Hint& h) {
  Term p = hint_side_instantiated(h, h.lhs);
  Term q = hint_side_instantiated(h, h.rhs);
  bool ok = false;
  try {
    ok = conv(env, p, q);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FuelExhausted) throw;
  }
  if (!ok)
    throw Error(ErrorKind::NotAcceptable, "hint " + h.name + " is not acceptable: " + render_term(env, p) +
                                              " and " + render_term(env, q) + " are not convertible");
}

}  // namespace

Term hint_side_instantiated(const Hint& h, const Term& side) {
  return instantiate_metas(side, telescope_subst(h));
}

const Hint& HintDb::declare_hint(const GlobalEnv& env, const MetaContext& metas, HintSpec spec,
                                 const HintCheckOptions& opts) {
  Hint h;
  h.decl_index = hints_.size();
  h.name = spec.name.empty() ? "hint_" + std::to_string(h.decl_index + 1) : spec.name;
  if (find_hint(h.name)) throw Error(ErrorKind::AlreadyDeclared, "hint " + h.name + " already declared");
  h.context = std::move(spec.context);
  h.telescope = std::move(spec.telescope);
  h.lhs = std::move(spec.lhs);
  h.rhs = std::move(spec.rhs);
  h.priority = spec.priority.value_or(static_cast<int>(h.decl_index));
  h.from_coercion = spec.from_coercion;

  std::set<MetaId> declared(h.context.begin(), h.context.end());
  for (const auto& e : h.telescope) {
    if (declared.count(e.meta))
      throw Error(ErrorKind::NonlinearPattern, "hint " + h.name + ": " + meta_label(metas, e.meta) + " bound twice");
    declared.insert(e.meta);
    for (MetaId m : collect_metas(e.definition))
      if (!declared.count(m))
        throw Error(ErrorKind::IllTyped, "hint " + h.name + ": telescope mentions undeclared " + meta_label(metas, m));
  }
  for (const Term* side : {&h.lhs, &h.rhs})
    for (MetaId m : collect_metas(*side))
      if (!declared.count(m))
        throw Error(ErrorKind::IllTyped, "hint " + h.name + ": pattern mentions undeclared " + meta_label(metas, m));

  for (const auto& e : h.telescope) {
    std::size_t n = count_meta(h.lhs, e.meta) + count_meta(h.rhs, e.meta);
    if (n != 1)
      throw Error(ErrorKind::NonlinearPattern, "hint " + h.name + ": " + meta_label(metas, e.meta) + " occurs " +
                                                   std::to_string(n) + " times in the pattern, expected exactly once");
  }

  // Telescope definitions must inhabit the declared types, and P[tel], Q[tel]
  // must be well typed.
  MetaTyping typing{&metas, nullptr};
  LocalContext empty;
  MetaSubstitution partial;
  try {
    for (const auto& e : h.telescope) {
      Fuel fuel;
      Term def = instantiate_metas(e.definition, partial);
      Term ty = infer_type(env, empty, def, typing, InferMode::Check, fuel);
      Term expected = instantiate_metas(metas.get(e.meta).type, partial);
      if (!conv(env, ty, expected))
        throw Error(ErrorKind::IllTyped, "telescope definition of " + meta_label(metas, e.meta) + " has type " +
                                             render_term(env, ty) + ", expected " + render_term(env, expected));
      partial.assign(e.meta, def);
    }
    Fuel fuel;
    Term pt = infer_type(env, empty, hint_side_instantiated(h, h.lhs), typing, InferMode::Check, fuel);
    Term qt = infer_type(env, empty, hint_side_instantiated(h, h.rhs), typing, InferMode::Check, fuel);
    if (!conv(env, pt, qt))
      throw Error(ErrorKind::IllTyped, "sides have types " + render_term(env, pt) + " and " + render_term(env, qt));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IllTyped || e.kind() == ErrorKind::TypeMismatch || e.kind() == ErrorKind::UnboundName)
      throw Error(ErrorKind::IllTyped, "hint " + h.name + " is ill-typed: " + e.what());
    throw;
  }

  if (opts.check_acceptable) check_acceptable(env, h);

  h.lhs_key = key_of(env, h.lhs, key_depth_);
  h.rhs_key = key_of(env, h.rhs, key_depth_);
  std::size_t idx = hints_.size();
  hints_.push_back(std::move(h));
  const Hint& stored = hints_.back();
  tree_.insert(stored.lhs_key, Entry{Entry::HintLhs, idx});
  tree_.insert(stored.rhs_key, Entry{Entry::HintRhs, idx});
  for (std::size_t c = 0; c < coercions_.size(); ++c) add_aliases(c, stored, env);
  return stored;
}

std::vector<HintCandidate> HintDb::retrieve_hints(const GlobalEnv& env, const Term& lhs, const Term& rhs) const {
  auto l = tree_.retrieve(key_of(env, lhs, key_depth_));
  auto r = tree_.retrieve(key_of(env, rhs, key_depth_));
  auto has = [](const std::vector<Entry>& v, Entry e) { return std::find(v.begin(), v.end(), e) != v.end(); };
  std::vector<HintCandidate> out;
  for (std::size_t i = 0; i < hints_.size(); ++i) {
    if (has(l, {Entry::HintLhs, i}) && has(r, {Entry::HintRhs, i})) out.push_back({i, Orientation::LeftToRight});
    if (has(l, {Entry::HintRhs, i}) && has(r, {Entry::HintLhs, i})) out.push_back({i, Orientation::RightToLeft});
  }
  std::stable_sort(out.begin(), out.end(), [&](const HintCandidate& a, const HintCandidate& b) {
    const Hint& ha = hints_[a.index];
    const Hint& hb = hints_[b.index];
    if (ha.priority != hb.priority) return ha.priority < hb.priority;
    if (ha.decl_index != hb.decl_index) return ha.decl_index < hb.decl_index;
    return a.orientation == Orientation::LeftToRight && b.orientation == Orientation::RightToLeft;
  });
  return out;
}

void HintDb::add_aliases(std::size_t c, const Hint& h, const GlobalEnv& env) {
  UniformCoercion& co = coercions_[c];
  PathKey kp = key_of(env, hint_side_instantiated(h, h.lhs), key_depth_);
  PathKey kq = key_of(env, hint_side_instantiated(h, h.rhs), key_depth_);
  auto alias = [&](const PathKey& base, std::vector<PathKey>& aliases, Entry::Tag tag) {
    for (const auto& [from, to] : {std::pair{&kp, &kq}, std::pair{&kq, &kp}}) {
      if (!keys_compatible(base, *from)) continue;
      if (std::find(aliases.begin(), aliases.end(), *to) != aliases.end()) continue;
      aliases.push_back(*to);
      tree_.insert(*to, Entry{tag, c});
    }
  };
  alias(co.source_key, co.source_aliases, Entry::CoeSource);
  alias(co.target_key, co.target_aliases, Entry::CoeTarget);
}

const UniformCoercion& HintDb::add_coercion(const GlobalEnv& env, UniformCoercion c) {
  for (const auto& o : coercions_)
    if (o.source_key == c.source_key && o.target_key == c.target_key)
      throw Error(ErrorKind::DuplicateCoercion, "coercion " + c.fn + " at " + std::to_string(c.arg_index) +
                                                    " has the same source and target as " + o.fn);
  std::size_t idx = coercions_.size();
  coercions_.push_back(std::move(c));
  tree_.insert(coercions_.back().source_key, Entry{Entry::CoeSource, idx});
  tree_.insert(coercions_.back().target_key, Entry{Entry::CoeTarget, idx});
  for (const auto& h : hints_) add_aliases(idx, h, env);
  return coercions_.back();
}

std::vector<std::size_t> HintDb::retrieve_coercions(const GlobalEnv& env, const Term& source,
                                                    const Term& target) const {
  auto s = tree_.retrieve(key_of(env, source, key_depth_));
  auto t = tree_.retrieve(key_of(env, target, key_depth_));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < coercions_.size(); ++i) {
    bool hs = std::find(s.begin(), s.end(), Entry{Entry::CoeSource, i}) != s.end();
    bool ht = std::find(t.begin(), t.end(), Entry{Entry::CoeTarget, i}) != t.end();
    if (hs && ht) out.push_back(i);
  }
  return out;
}

std::size_t HintDb::expand_in_telescopes(const GlobalEnv& env, const MetaContext& metas, const std::string& name,
                                         const Term& expanded) {
  (void)metas;
  std::size_t n = 0;
  Term target = mk_const(name);
  for (auto& h : hints_) {
    bool touched = false;
    for (auto& e : h.telescope) {
      if (e.definition == target) {
        e.definition = expanded;
        touched = true;
        ++n;
      }
    }
    if (touched) check_acceptable(env, h);
  }
  return n;
}

const Hint* HintDb::find_hint(const std::string& name) const {
  for (const auto& h : hints_)
    if (h.name == name) return &h;
  return nullptr;
}

std::string HintDb::dump_hints(const GlobalEnv& env, const MetaContext& metas) const {
  RenderOptions ro{&metas, true};
  std::ostringstream out;
  for (const auto& h : hints_) {
    out << "hint " << h.name << " priority " << h.priority << "\n";
    out << "  context:";
    if (h.context.empty()) out << " (none)";
    for (std::size_t i = 0; i < h.context.size(); ++i)
      out << (i ? ", " : " ") << meta_label(metas, h.context[i]) << " : "
          << render_term(env, metas.get(h.context[i]).type, ro);
    out << "\n  telescope:";
    if (h.telescope.empty()) out << " (none)";
    for (std::size_t i = 0; i < h.telescope.size(); ++i)
      out << (i ? "; " : " ") << meta_label(metas, h.telescope[i].meta) << " := "
          << render_term(env, h.telescope[i].definition, ro);
    out << "\n  pattern: " << render_term(env, h.lhs, ro) << " == " << render_term(env, h.rhs, ro) << "\n";
    out << "  keys: " << render_key(env, h.lhs_key) << " == " << render_key(env, h.rhs_key) << "\n";
  }
  return out.str();
}

std::string HintDb::dump_coercions(const GlobalEnv& env) const {
  std::ostringstream out;
  for (const auto& c : coercions_) {
    out << "coercion " << c.fn << " at " << c.arg_index << " : " << render_term(env, c.fn_type) << "\n";
    out << "  source: " << render_key(env, c.source_key);
    for (const auto& a : c.source_aliases) out << " | " << render_key(env, a);
    out << "\n  target: " << render_key(env, c.target_key);
    for (const auto& a : c.target_aliases) out << " | " << render_key(env, a);
    out << "\n";
  }
  return out.str();
}

}  // namespace hintelab
