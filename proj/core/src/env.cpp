#include "hintelab/env.hpp"

#include <atomic>

#include "hintelab/error.hpp"

namespace hintelab {

FVarId fresh_fvar_id() {
  static std::atomic<FVarId> next{1};
  return next++;
}

const std::string& decl_name(const Declaration& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

Term StructureDecl::type() const {
  Term t = mk_sort();
  for (auto it = params.rbegin(); it != params.rend(); ++it) t = mk_pi(it->name, it->type, t);
  return t;
}

Term StructureDecl::constructor_type() const {
  // Result `name p_1 .. p_k` sits under k params and n fields.
  const auto k = static_cast<std::uint32_t>(params.size());
  const auto n = static_cast<std::uint32_t>(fields.size());
  Term result = mk_const(name);
  for (std::uint32_t i = 0; i < k; ++i) result = mk_app(result, mk_bvar(n + k - 1 - i));
  for (auto it = fields.rbegin(); it != fields.rend(); ++it) result = mk_pi(it->name, it->type, result);
  for (auto it = params.rbegin(); it != params.rend(); ++it) result = mk_pi(it->name, it->type, result);
  return result;
}

void GlobalEnv::add(Declaration d) {
  const std::string& name = decl_name(d);
  if (contains(name)) throw Error(ErrorKind::AlreadyDeclared, "name already declared: " + name);
  if (const auto* s = std::get_if<StructureDecl>(&d)) {
    if (contains(s->constructor_name()))
      throw Error(ErrorKind::AlreadyDeclared, "name already declared: " + s->constructor_name());
    for (const auto& f : s->fields)
      if (contains(f.name) || f.name == name)
        throw Error(ErrorKind::AlreadyDeclared, "field name already declared: " + f.name);
    for (std::size_t i = 0; i < s->fields.size(); ++i)
      projections_[s->fields[i].name] = ProjectionInfo{s->name, i};
    constructors_[s->constructor_name()] = s->name;
  }
  index_[name] = decls_.size();
  decls_.push_back(std::move(d));
}

bool GlobalEnv::contains(const std::string& name) const {
  return index_.count(name) || projections_.count(name) || constructors_.count(name);
}

const Declaration* GlobalEnv::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &decls_[it->second];
}

const DefDecl* GlobalEnv::find_def(const std::string& name) const {
  const auto* d = find(name);
  return d ? std::get_if<DefDecl>(d) : nullptr;
}

const StructureDecl* GlobalEnv::find_structure(const std::string& name) const {
  const auto* d = find(name);
  return d ? std::get_if<StructureDecl>(d) : nullptr;
}

std::optional<ProjectionInfo> GlobalEnv::find_projection(const std::string& name) const {
  auto it = projections_.find(name);
  if (it == projections_.end()) return std::nullopt;
  return it->second;
}

const StructureDecl* GlobalEnv::find_constructor(const std::string& name) const {
  auto it = constructors_.find(name);
  return it == constructors_.end() ? nullptr : find_structure(it->second);
}

const std::string& GlobalEnv::field_name(const std::string& structure, std::size_t index) const {
  const auto* s = find_structure(structure);
  if (!s || index >= s->fields.size())
    throw Error(ErrorKind::Internal, "bad projection " + structure + "." + std::to_string(index));
  return s->fields[index].name;
}

std::optional<Term> GlobalEnv::const_type(const std::string& name) const {
  const auto* d = find(name);
  if (!d) return std::nullopt;
  if (const auto* def = std::get_if<DefDecl>(d)) return def->type;
  if (const auto* ax = std::get_if<AxiomDecl>(d)) return ax->type;
  return std::get<StructureDecl>(*d).type();
}

bool GlobalEnv::is_instance(const std::string& name) const {
  const auto* def = find_def(name);
  if (!def) return false;
  const Term* b = &def->body;
  while (b->is<node::Lam>()) b = &b->as<node::Lam>().body;
  return b->is<node::Mk>();
}

void GlobalEnv::add_notation(Notation n) {
  for (auto& existing : notations_) {
    if (existing.constant == n.constant) {
      existing = std::move(n);
      return;
    }
  }
  notations_.push_back(std::move(n));
}

const Notation* GlobalEnv::notation_for_const(const std::string& name) const {
  for (const auto& n : notations_)
    if (n.constant == name) return &n;
  return nullptr;
}

const Notation* GlobalEnv::notation_for_symbol(const std::string& symbol, bool prefix) const {
  for (const auto& n : notations_)
    if (n.symbol == symbol && (n.fixity == Fixity::Prefix) == prefix) return &n;
  return nullptr;
}

Term LocalContext::push(std::string name, Term type, std::optional<Term> value) {
  FVarId id = fresh_fvar_id();
  decls_.push_back(LocalDecl{id, name, std::move(type), std::move(value)});
  return mk_fvar(id, std::move(name));
}

const LocalDecl* LocalContext::find(FVarId id) const {
  for (const auto& d : decls_)
    if (d.id == id) return &d;
  return nullptr;
}

const LocalDecl* LocalContext::find_by_name(const std::string& name) const {
  for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
    if (it->name == name) return &*it;
  return nullptr;
}

std::vector<FVarId> LocalContext::ids() const {
  std::vector<FVarId> out;
  out.reserve(decls_.size());
  for (const auto& d : decls_) out.push_back(d.id);
  return out;
}

Term LocalContext::close_pi(const Term& t) const {
  Term r = t;
  for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
    r = mk_pi(it->name, it->type, abstract_fvar(r, it->id));
  return r;
}

Term LocalContext::close_lam(const Term& t) const {
  Term r = t;
  for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
    r = mk_lam(it->name, it->type, abstract_fvar(r, it->id));
  return r;
}

}  // namespace hintelab
