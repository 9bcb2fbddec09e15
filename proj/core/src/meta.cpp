#include "hintelab/meta.hpp"

#include "hintelab/error.hpp"

namespace hintelab {

const MetaVar& MetaContext::declare(std::string name, Term type, std::vector<FVarId> scope,
                                    MetaOrigin origin) {
  MetaId id = next_++;
  auto [it, _] = metas_.emplace(id, MetaVar{id, std::move(name), std::move(type), std::move(scope), origin});
  return it->second;
}

Term MetaContext::fresh(std::string name, Term type, std::vector<FVarId> scope, MetaOrigin origin) {
  const auto& m = declare(std::move(name), std::move(type), std::move(scope), origin);
  return mk_meta(m.id, m.scope);
}

const MetaVar& MetaContext::get(MetaId id) const {
  auto it = metas_.find(id);
  if (it == metas_.end()) throw Error(ErrorKind::Internal, "unknown metavariable ?" + std::to_string(id));
  return it->second;
}

const MetaVar* MetaContext::find(MetaId id) const {
  auto it = metas_.find(id);
  return it == metas_.end() ? nullptr : &it->second;
}

void MetaContext::set_name(MetaId id, std::string name) {
  auto it = metas_.find(id);
  if (it == metas_.end()) throw Error(ErrorKind::Internal, "unknown metavariable ?" + std::to_string(id));
  it->second.name = std::move(name);
}

void MetaContext::set_type(MetaId id, Term type) {
  auto it = metas_.find(id);
  if (it == metas_.end()) throw Error(ErrorKind::Internal, "unknown metavariable ?" + std::to_string(id));
  it->second.type = std::move(type);
}

const Term* MetaSubstitution::lookup(MetaId id) const {
  auto it = map_.find(id);
  return it == map_.end() ? nullptr : &it->second;
}

bool MetaSubstitution::extends(const MetaSubstitution& base) const {
  for (const auto& [id, v] : base.map_) {
    const Term* mine = lookup(id);
    if (!mine || !(*mine == v)) return false;
  }
  return true;
}

namespace {

Term beta_head(Term t) {
  std::vector<Term> args;
  while (true) {
    const Term& h = app_head(t);
    if (!h.is<node::Lam>() || !t.is<node::App>()) return t;
    args = app_args(t);
    Term body = h;
    std::size_t used = 0;
    while (body.is<node::Lam>() && used < args.size()) {
      body = instantiate(body.as<node::Lam>().body, args[used]);
      ++used;
    }
    t = mk_app(body, std::span<const Term>(args).subspan(used));
  }
}

}  // namespace

Term instantiate_metas(const Term& t, const MetaSubstitution& s) {
  if (!t.has_meta() || s.size() == 0) return t;
  return replace(t, [&](const Term& x, std::uint32_t) -> std::optional<Term> {
    if (!x.has_meta()) return x;
    if (x.is<node::Meta>()) {
      if (const Term* v = s.lookup(x.as<node::Meta>().id)) return instantiate_metas(*v, s);
      return x;
    }
    if (x.is<node::App>() && app_head(x).is<node::Meta>()) {
      const Term* v = s.lookup(app_head(x).as<node::Meta>().id);
      if (!v) return std::nullopt;
      std::vector<Term> args = app_args(x);
      for (auto& a : args) a = instantiate_metas(a, s);
      return beta_head(mk_app(instantiate_metas(*v, s), args));
    }
    return std::nullopt;
  });
}

}  // namespace hintelab
