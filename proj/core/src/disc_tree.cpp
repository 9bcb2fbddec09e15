#include "hintelab/disc_tree.hpp"

#include "hintelab/error.hpp"
#include "hintelab/kernel.hpp"

namespace hintelab {

namespace {

constexpr std::uint64_t kKeyFuel = 10'000;

Term whnf_keyed(const GlobalEnv& env, const Term& t) {
  try {
    Fuel fuel(kKeyFuel);
    return whnf(env, t, Policy::NoInstanceDelta, fuel);
  } catch (const Error&) {
    return t;
  }
}

void emit(const GlobalEnv& env, const Term& t, std::size_t depth, std::size_t max_depth, PathKey& out) {
  if (depth >= max_depth) {
    out.push_back(Symbol{});
    return;
  }
  Term w = t;
  try {
    Fuel fuel(kKeyFuel);
    w = whnf(env, t, Policy::NoInstanceDelta, fuel);
  } catch (const Error&) {
    out.push_back(Symbol{});
    return;
  }
  const Term& head = app_head(w);
  std::vector<Term> args = app_args(w);
  auto children = [&](std::initializer_list<Term> prefix) {
    for (const auto& c : prefix) emit(env, c, depth + 1, max_depth, out);
    for (const auto& a : args) emit(env, a, depth + 1, max_depth, out);
  };
  switch (head.kind()) {
    case Kind::Const:
      out.push_back(Symbol{SymKind::Const, head.as<node::Const>().name, 0, args.size()});
      children({});
      return;
    case Kind::Proj: {
      const auto& p = head.as<node::Proj>();
      // Below the root a projection of an unknown instance may be solved by a hint.
      if (depth > 0 && app_head(whnf_keyed(env, p.scrutinee)).is<node::Meta>()) {
        out.push_back(Symbol{});
        return;
      }
      out.push_back(Symbol{SymKind::Proj, p.structure, p.index, 1 + args.size()});
      children({p.scrutinee});
      return;
    }
    case Kind::Sort:
      out.push_back(Symbol{SymKind::Sort, "", 0, args.size()});
      children({});
      return;
    case Kind::UnitTy:
      out.push_back(Symbol{SymKind::Unit, "", 0, args.size()});
      children({});
      return;
    case Kind::Star:
      out.push_back(Symbol{SymKind::Star, "", 0, args.size()});
      children({});
      return;
    case Kind::Pi: {
      const auto& p = head.as<node::Pi>();
      out.push_back(Symbol{SymKind::Pi, "", 0, 2 + args.size()});
      children({p.domain, p.codomain});
      return;
    }
    case Kind::Lam: {
      const auto& l = head.as<node::Lam>();
      out.push_back(Symbol{SymKind::Lam, "", 0, 2 + args.size()});
      children({l.type, l.body});
      return;
    }
    case Kind::Mk: {
      const auto& m = head.as<node::Mk>();
      out.push_back(Symbol{SymKind::Mk, m.structure, 0, m.params.size() + m.fields.size() + args.size()});
      for (const auto& p : m.params) emit(env, p, depth + 1, max_depth, out);
      for (const auto& f : m.fields) emit(env, f, depth + 1, max_depth, out);
      children({});
      return;
    }
    default:
      // Metavariables, locals, bound variables and stuck Case1 heads.
      out.push_back(Symbol{});
      return;
  }
}

}  // namespace

PathKey key_of(const GlobalEnv& env, const Term& t, std::size_t max_depth) {
  PathKey out;
  emit(env, t, 0, max_depth, out);
  return out;
}

std::string render_key(const GlobalEnv& env, const PathKey& key) {
  std::string out = "[";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += " ";
    const Symbol& s = key[i];
    std::string label;
    switch (s.kind) {
      case SymKind::Const: label = s.name; break;
      case SymKind::Proj: {
        const auto* st = env.find_structure(s.name);
        label = (st && s.index < st->fields.size()) ? st->fields[s.index].name
                                                    : s.name + "." + std::to_string(s.index);
        break;
      }
      case SymKind::Sort: label = "Type"; break;
      case SymKind::Pi: label = "Pi"; break;
      case SymKind::Lam: label = "fun"; break;
      case SymKind::Mk: label = "<|" + s.name + "|>"; break;
      case SymKind::Unit: label = "Unit"; break;
      case SymKind::Star: label = "star"; break;
      case SymKind::Wildcard: label = "*"; break;
    }
    if (s.arity > 0 && s.kind != SymKind::Pi && s.kind != SymKind::Lam) label += "/" + std::to_string(s.arity);
    out += label;
  }
  return out + "]";
}

std::size_t skip_subtree(const PathKey& key, std::size_t pos) {
  std::size_t pending = 1;
  while (pending > 0 && pos < key.size()) {
    pending = pending - 1 + key[pos].arity;
    ++pos;
  }
  return pos;
}

bool keys_compatible(const PathKey& a, const PathKey& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].kind == SymKind::Wildcard) {
      ++i;
      j = skip_subtree(b, j);
    } else if (b[j].kind == SymKind::Wildcard) {
      ++j;
      i = skip_subtree(a, i);
    } else if (a[i] == b[j]) {
      ++i;
      ++j;
    } else {
      return false;
    }
  }
  return i == a.size() && j == b.size();
}

}  // namespace hintelab
