#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hintelab {

using FVarId = std::uint64_t;
using MetaId = std::uint64_t;

class Term;

namespace node {

struct Sort {};
// Loose de Bruijn index; only appears under binders in locally-nameless terms.
struct BVar {
  std::uint32_t index;
};
struct FVar {
  FVarId id;
  std::string name;
};
struct Const {
  std::string name;
};
struct Meta {
  MetaId id;
  std::vector<FVarId> scope;
};
struct App;
struct Lam;
struct Pi;
struct Mk;
struct Proj;
struct UnitTy {};
struct Star {};
struct Case1;

}  // namespace node

using Node = std::variant<node::Sort, node::BVar, node::FVar, node::Const, node::Meta,
                          node::App, node::Lam, node::Pi, node::Mk, node::Proj, node::UnitTy,
                          node::Star, node::Case1>;

enum class Kind { Sort, BVar, FVar, Const, Meta, App, Lam, Pi, Mk, Proj, UnitTy, Star, Case1 };

struct TermData;

// Immutable, shared term. Copies are cheap; equality is alpha-equivalence.
class Term {
 public:
  Term();  // Sort
  explicit Term(std::shared_ptr<const TermData> data) : data_(std::move(data)) {}

  Kind kind() const;
  const Node& node() const;

  template <typename T>
  bool is() const { return std::holds_alternative<T>(node()); }
  template <typename T>
  const T& as() const { return std::get<T>(node()); }

  // One past the largest loose bound variable index (0 when closed).
  std::uint32_t loose_bound() const;
  bool has_meta() const;
  bool has_fvar() const;

  bool same_ptr(const Term& o) const { return data_ == o.data_; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  std::shared_ptr<const TermData> data_;
};

namespace node {

struct App {
  Term fn;
  Term arg;
};
struct Lam {
  std::string binder;
  Term type;
  Term body;
};
struct Pi {
  std::string binder;
  Term domain;
  Term codomain;
};
struct Mk {
  std::string structure;
  std::vector<Term> params;
  std::vector<Term> fields;
};
struct Proj {
  std::string structure;
  std::size_t index;
  Term scrutinee;
};
struct Case1 {
  Term motive;
  Term branch;
  Term scrutinee;
};

}  // namespace node

struct TermData {
  Node node;
  std::uint32_t loose_bound = 0;
  bool has_meta = false;
  bool has_fvar = false;
};

// Constructors.
Term mk_sort();
Term mk_bvar(std::uint32_t index);
Term mk_fvar(FVarId id, std::string name);
Term mk_const(std::string name);
Term mk_meta(MetaId id, std::vector<FVarId> scope = {});
Term mk_app(Term fn, Term arg);
Term mk_app(Term fn, std::span<const Term> args);
Term mk_app(Term fn, std::initializer_list<Term> args);
Term mk_lam(std::string binder, Term type, Term body);
Term mk_pi(std::string binder, Term domain, Term codomain);
Term mk_arrow(Term domain, Term codomain);
Term mk_mk(std::string structure, std::vector<Term> params, std::vector<Term> fields);
Term mk_proj(std::string structure, std::size_t index, Term scrutinee);
Term mk_unit_ty();
Term mk_star();
Term mk_case1(Term motive, Term branch, Term scrutinee);

// Application spine helpers.
const Term& app_head(const Term& t);
std::vector<Term> app_args(const Term& t);
std::size_t app_arity(const Term& t);

// Generic bottom-up rebuild. `fn` sees each subterm together with the number of
// binders crossed; returning a value replaces the subterm without descending.
using ReplaceFn = std::function<std::optional<Term>(const Term&, std::uint32_t offset)>;
Term replace(const Term& t, const ReplaceFn& fn, std::uint32_t offset = 0);

// Shift loose bound variables up by `amount`.
Term lift_loose(const Term& t, std::uint32_t amount);
// Replace loose BVar(i) by values[n-1-i], lifting values under crossed binders.
Term instantiate_rev(const Term& body, std::span<const Term> values);
Term instantiate(const Term& body, const Term& value);
// Turn the listed free variables into loose bound variables (last id = BVar 0).
Term abstract_fvars(const Term& t, std::span<const FVarId> ids);
Term abstract_fvar(const Term& t, FVarId id);

// Pre-order visit; returning false stops descent into that subterm.
void for_each(const Term& t, const std::function<bool(const Term&)>& fn);

bool occurs_meta(const Term& t, MetaId id);
bool occurs_fvar(const Term& t, FVarId id);
std::vector<MetaId> collect_metas(const Term& t);  // first-occurrence order
std::vector<FVarId> collect_fvars(const Term& t);
bool occurs_const(const Term& t, const std::string& name);

std::size_t term_size(const Term& t);

}  // namespace hintelab
