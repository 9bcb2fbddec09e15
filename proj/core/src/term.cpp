#include "hintelab/term.hpp"

#include <algorithm>
#include <unordered_set>

namespace hintelab {

namespace {

std::shared_ptr<const TermData> make(Node n) {
  auto d = std::make_shared<TermData>();
  d->node = std::move(n);
  auto absorb = [&](const Term& sub, std::uint32_t binders) {
    std::uint32_t b = sub.loose_bound();
    if (b > binders) d->loose_bound = std::max(d->loose_bound, b - binders);
    d->has_meta = d->has_meta || sub.has_meta();
    d->has_fvar = d->has_fvar || sub.has_fvar();
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::BVar>) {
          d->loose_bound = x.index + 1;
        } else if constexpr (std::is_same_v<T, node::FVar>) {
          d->has_fvar = true;
        } else if constexpr (std::is_same_v<T, node::Meta>) {
          d->has_meta = true;
        } else if constexpr (std::is_same_v<T, node::App>) {
          absorb(x.fn, 0);
          absorb(x.arg, 0);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          absorb(x.type, 0);
          absorb(x.body, 1);
        } else if constexpr (std::is_same_v<T, node::Pi>) {
          absorb(x.domain, 0);
          absorb(x.codomain, 1);
        } else if constexpr (std::is_same_v<T, node::Mk>) {
          for (const auto& p : x.params) absorb(p, 0);
          for (const auto& f : x.fields) absorb(f, 0);
        } else if constexpr (std::is_same_v<T, node::Proj>) {
          absorb(x.scrutinee, 0);
        } else if constexpr (std::is_same_v<T, node::Case1>) {
          absorb(x.motive, 0);
          absorb(x.branch, 0);
          absorb(x.scrutinee, 0);
        }
      },
      d->node);
  return d;
}

const std::shared_ptr<const TermData>& sort_data() {
  static const auto d = make(node::Sort{});
  return d;
}

bool vec_eq(const std::vector<Term>& a, const std::vector<Term>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

Term::Term() : data_(sort_data()) {}

Kind Term::kind() const { return static_cast<Kind>(data_->node.index()); }
const Node& Term::node() const { return data_->node; }
std::uint32_t Term::loose_bound() const { return data_->loose_bound; }
bool Term::has_meta() const { return data_->has_meta; }
bool Term::has_fvar() const { return data_->has_fvar; }

bool operator==(const Term& a, const Term& b) {
  if (a.data_ == b.data_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Sort:
    case Kind::UnitTy:
    case Kind::Star:
      return true;
    case Kind::BVar:
      return a.as<node::BVar>().index == b.as<node::BVar>().index;
    case Kind::FVar:
      return a.as<node::FVar>().id == b.as<node::FVar>().id;
    case Kind::Const:
      return a.as<node::Const>().name == b.as<node::Const>().name;
    case Kind::Meta:
      return a.as<node::Meta>().id == b.as<node::Meta>().id;
    case Kind::App: {
      const auto& x = a.as<node::App>();
      const auto& y = b.as<node::App>();
      return x.fn == y.fn && x.arg == y.arg;
    }
    case Kind::Lam: {
      const auto& x = a.as<node::Lam>();
      const auto& y = b.as<node::Lam>();
      return x.type == y.type && x.body == y.body;
    }
    case Kind::Pi: {
      const auto& x = a.as<node::Pi>();
      const auto& y = b.as<node::Pi>();
      return x.domain == y.domain && x.codomain == y.codomain;
    }
    case Kind::Mk: {
      const auto& x = a.as<node::Mk>();
      const auto& y = b.as<node::Mk>();
      return x.structure == y.structure && vec_eq(x.params, y.params) && vec_eq(x.fields, y.fields);
    }
    case Kind::Proj: {
      const auto& x = a.as<node::Proj>();
      const auto& y = b.as<node::Proj>();
      return x.structure == y.structure && x.index == y.index && x.scrutinee == y.scrutinee;
    }
    case Kind::Case1: {
      const auto& x = a.as<node::Case1>();
      const auto& y = b.as<node::Case1>();
      return x.motive == y.motive && x.branch == y.branch && x.scrutinee == y.scrutinee;
    }
  }
  return false;
}

Term mk_sort() { return Term(); }
Term mk_bvar(std::uint32_t index) { return Term(make(node::BVar{index})); }
Term mk_fvar(FVarId id, std::string name) { return Term(make(node::FVar{id, std::move(name)})); }
Term mk_const(std::string name) { return Term(make(node::Const{std::move(name)})); }
Term mk_meta(MetaId id, std::vector<FVarId> scope) {
  return Term(make(node::Meta{id, std::move(scope)}));
}
Term mk_app(Term fn, Term arg) { return Term(make(node::App{std::move(fn), std::move(arg)})); }
Term mk_app(Term fn, std::span<const Term> args) {
  for (const auto& a : args) fn = mk_app(std::move(fn), a);
  return fn;
}
Term mk_app(Term fn, std::initializer_list<Term> args) {
  return mk_app(std::move(fn), std::span<const Term>(args.begin(), args.size()));
}
Term mk_lam(std::string binder, Term type, Term body) {
  return Term(make(node::Lam{std::move(binder), std::move(type), std::move(body)}));
}
Term mk_pi(std::string binder, Term domain, Term codomain) {
  return Term(make(node::Pi{std::move(binder), std::move(domain), std::move(codomain)}));
}
Term mk_arrow(Term domain, Term codomain) {
  return mk_pi("_", std::move(domain), lift_loose(codomain, 1));
}
Term mk_mk(std::string structure, std::vector<Term> params, std::vector<Term> fields) {
  return Term(make(node::Mk{std::move(structure), std::move(params), std::move(fields)}));
}
Term mk_proj(std::string structure, std::size_t index, Term scrutinee) {
  return Term(make(node::Proj{std::move(structure), index, std::move(scrutinee)}));
}
Term mk_unit_ty() {
  static const Term t(make(node::UnitTy{}));
  return t;
}
Term mk_star() {
  static const Term t(make(node::Star{}));
  return t;
}
Term mk_case1(Term motive, Term branch, Term scrutinee) {
  return Term(make(node::Case1{std::move(motive), std::move(branch), std::move(scrutinee)}));
}

const Term& app_head(const Term& t) {
  const Term* cur = &t;
  while (cur->is<node::App>()) cur = &cur->as<node::App>().fn;
  return *cur;
}

std::vector<Term> app_args(const Term& t) {
  std::vector<Term> args;
  const Term* cur = &t;
  while (cur->is<node::App>()) {
    args.push_back(cur->as<node::App>().arg);
    cur = &cur->as<node::App>().fn;
  }
  std::reverse(args.begin(), args.end());
  return args;
}

std::size_t app_arity(const Term& t) {
  std::size_t n = 0;
  for (const Term* cur = &t; cur->is<node::App>(); cur = &cur->as<node::App>().fn) ++n;
  return n;
}

Term replace(const Term& t, const ReplaceFn& fn, std::uint32_t offset) {
  if (auto r = fn(t, offset)) return *r;
  auto rec = [&](const Term& s, std::uint32_t off) { return replace(s, fn, off); };
  auto all = [&](const std::vector<Term>& v) {
    std::vector<Term> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(rec(x, offset));
    return out;
  };
  switch (t.kind()) {
    case Kind::App: {
      const auto& x = t.as<node::App>();
      Term f = rec(x.fn, offset), a = rec(x.arg, offset);
      if (f.same_ptr(x.fn) && a.same_ptr(x.arg)) return t;
      return mk_app(std::move(f), std::move(a));
    }
    case Kind::Lam: {
      const auto& x = t.as<node::Lam>();
      Term ty = rec(x.type, offset), b = rec(x.body, offset + 1);
      if (ty.same_ptr(x.type) && b.same_ptr(x.body)) return t;
      return mk_lam(x.binder, std::move(ty), std::move(b));
    }
    case Kind::Pi: {
      const auto& x = t.as<node::Pi>();
      Term d = rec(x.domain, offset), c = rec(x.codomain, offset + 1);
      if (d.same_ptr(x.domain) && c.same_ptr(x.codomain)) return t;
      return mk_pi(x.binder, std::move(d), std::move(c));
    }
    case Kind::Mk: {
      const auto& x = t.as<node::Mk>();
      return mk_mk(x.structure, all(x.params), all(x.fields));
    }
    case Kind::Proj: {
      const auto& x = t.as<node::Proj>();
      Term s = rec(x.scrutinee, offset);
      if (s.same_ptr(x.scrutinee)) return t;
      return mk_proj(x.structure, x.index, std::move(s));
    }
    case Kind::Case1: {
      const auto& x = t.as<node::Case1>();
      return mk_case1(rec(x.motive, offset), rec(x.branch, offset), rec(x.scrutinee, offset));
    }
    default:
      return t;
  }
}

Term lift_loose(const Term& t, std::uint32_t amount) {
  if (amount == 0 || t.loose_bound() == 0) return t;
  return replace(t, [&](const Term& s, std::uint32_t off) -> std::optional<Term> {
    if (s.loose_bound() <= off) return s;
    if (s.is<node::BVar>()) return mk_bvar(s.as<node::BVar>().index + amount);
    return std::nullopt;
  });
}

Term instantiate_rev(const Term& body, std::span<const Term> values) {
  if (body.loose_bound() == 0 || values.empty()) return body;
  const auto n = static_cast<std::uint32_t>(values.size());
  return replace(body, [&](const Term& s, std::uint32_t off) -> std::optional<Term> {
    if (s.loose_bound() <= off) return s;
    if (s.is<node::BVar>()) {
      std::uint32_t i = s.as<node::BVar>().index;
      if (i < off) return s;
      if (i - off < n) return lift_loose(values[n - 1 - (i - off)], off);
      return mk_bvar(i - n);
    }
    return std::nullopt;
  });
}

Term instantiate(const Term& body, const Term& value) {
  return instantiate_rev(body, std::span<const Term>(&value, 1));
}

Term abstract_fvars(const Term& t, std::span<const FVarId> ids) {
  if (!t.has_fvar() || ids.empty()) return t;
  const auto n = static_cast<std::uint32_t>(ids.size());
  return replace(t, [&](const Term& s, std::uint32_t off) -> std::optional<Term> {
    if (!s.has_fvar()) return s;
    if (s.is<node::FVar>()) {
      auto id = s.as<node::FVar>().id;
      for (std::uint32_t j = 0; j < n; ++j)
        if (ids[j] == id) return mk_bvar(off + n - 1 - j);
      return s;
    }
    return std::nullopt;
  });
}

Term abstract_fvar(const Term& t, FVarId id) {
  return abstract_fvars(t, std::span<const FVarId>(&id, 1));
}

void for_each(const Term& t, const std::function<bool(const Term&)>& fn) {
  if (!fn(t)) return;
  switch (t.kind()) {
    case Kind::App:
      for_each(t.as<node::App>().fn, fn);
      for_each(t.as<node::App>().arg, fn);
      break;
    case Kind::Lam:
      for_each(t.as<node::Lam>().type, fn);
      for_each(t.as<node::Lam>().body, fn);
      break;
    case Kind::Pi:
      for_each(t.as<node::Pi>().domain, fn);
      for_each(t.as<node::Pi>().codomain, fn);
      break;
    case Kind::Mk:
      for (const auto& p : t.as<node::Mk>().params) for_each(p, fn);
      for (const auto& f : t.as<node::Mk>().fields) for_each(f, fn);
      break;
    case Kind::Proj:
      for_each(t.as<node::Proj>().scrutinee, fn);
      break;
    case Kind::Case1:
      for_each(t.as<node::Case1>().motive, fn);
      for_each(t.as<node::Case1>().branch, fn);
      for_each(t.as<node::Case1>().scrutinee, fn);
      break;
    default:
      break;
  }
}

bool occurs_meta(const Term& t, MetaId id) {
  bool found = false;
  for_each(t, [&](const Term& s) {
    if (found || !s.has_meta()) return false;
    if (s.is<node::Meta>() && s.as<node::Meta>().id == id) found = true;
    return !found;
  });
  return found;
}

bool occurs_fvar(const Term& t, FVarId id) {
  bool found = false;
  for_each(t, [&](const Term& s) {
    if (found || !s.has_fvar()) return false;
    if (s.is<node::FVar>() && s.as<node::FVar>().id == id) found = true;
    return !found;
  });
  return found;
}

std::vector<MetaId> collect_metas(const Term& t) {
  std::vector<MetaId> out;
  for_each(t, [&](const Term& s) {
    if (!s.has_meta()) return false;
    if (s.is<node::Meta>()) {
      auto id = s.as<node::Meta>().id;
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    }
    return true;
  });
  return out;
}

std::vector<FVarId> collect_fvars(const Term& t) {
  std::vector<FVarId> out;
  for_each(t, [&](const Term& s) {
    if (!s.has_fvar()) return false;
    if (s.is<node::FVar>()) {
      auto id = s.as<node::FVar>().id;
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    }
    return true;
  });
  return out;
}

bool occurs_const(const Term& t, const std::string& name) {
  bool found = false;
  for_each(t, [&](const Term& s) {
    if (found) return false;
    if (s.is<node::Const>() && s.as<node::Const>().name == name) found = true;
    return !found;
  });
  return found;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 0;
  for_each(t, [&](const Term&) {
    ++n;
    return true;
  });
  return n;
}

}  // namespace hintelab
