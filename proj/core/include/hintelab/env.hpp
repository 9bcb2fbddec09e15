#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hintelab/term.hpp"

namespace hintelab {

enum class Reducibility { Reducible, Opaque, CoercionReducible };

enum class FieldKind { Data, Property };

struct Binder {
  std::string name;
  Term type;  // may mention earlier binders as loose BVars
};

struct Field {
  std::string name;
  Term type;  // over params then earlier fields, as loose BVars
  FieldKind kind = FieldKind::Data;
};

struct DefDecl {
  std::string name;
  Term type;
  Term body;
  Reducibility reducibility = Reducibility::Reducible;
};

struct AxiomDecl {
  std::string name;
  Term type;
};

// Constructor `mk<Name>` and one projection per field are derived, not declared.
struct StructureDecl {
  std::string name;
  std::vector<Binder> params;
  std::vector<Field> fields;

  std::string constructor_name() const { return "mk" + name; }
  // Π params. Type
  Term type() const;
  // Π params. Π fields. name params
  Term constructor_type() const;
};

using Declaration = std::variant<DefDecl, AxiomDecl, StructureDecl>;

const std::string& decl_name(const Declaration& d);

enum class Fixity { InfixL, InfixR, Infix, Prefix };

struct Notation {
  std::string symbol;
  std::string constant;
  Fixity fixity = Fixity::Infix;
  int level = 50;
  std::size_t implicit = 0;  // leading arguments hidden by the notation
};

struct ProjectionInfo {
  std::string structure;
  std::size_t index;
};

// Ordered global declarations. Names are unique across declarations, derived
// constructors and projections.
class GlobalEnv {
 public:
  void add(Declaration d);

  bool contains(const std::string& name) const;
  const Declaration* find(const std::string& name) const;
  const DefDecl* find_def(const std::string& name) const;
  const StructureDecl* find_structure(const std::string& name) const;
  std::optional<ProjectionInfo> find_projection(const std::string& name) const;
  // Structure whose derived constructor is named `name`.
  const StructureDecl* find_constructor(const std::string& name) const;
  const std::string& field_name(const std::string& structure, std::size_t index) const;

  // Type of a global constant (defs, axioms, structure type formers).
  std::optional<Term> const_type(const std::string& name) const;

  // A definition whose body, under its lambdas, is a structure literal.
  bool is_instance(const std::string& name) const;

  const std::vector<Declaration>& declarations() const { return decls_; }

  void add_notation(Notation n);
  const Notation* notation_for_const(const std::string& name) const;
  const Notation* notation_for_symbol(const std::string& symbol, bool prefix) const;
  const std::vector<Notation>& notations() const { return notations_; }

 private:
  std::vector<Declaration> decls_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, ProjectionInfo> projections_;
  std::map<std::string, std::string> constructors_;
  std::vector<Notation> notations_;
};

struct LocalDecl {
  FVarId id;
  std::string name;
  Term type;
  std::optional<Term> value;
};

class LocalContext {
 public:
  // Adds a binding with a fresh id and returns the corresponding FVar term.
  Term push(std::string name, Term type, std::optional<Term> value = std::nullopt);
  void pop() { decls_.pop_back(); }

  const LocalDecl* find(FVarId id) const;
  const LocalDecl* find_by_name(const std::string& name) const;
  std::vector<FVarId> ids() const;
  const std::vector<LocalDecl>& decls() const { return decls_; }
  std::size_t size() const { return decls_.size(); }
  bool empty() const { return decls_.empty(); }

  // Π-closes `t` over the whole context.
  Term close_pi(const Term& t) const;
  Term close_lam(const Term& t) const;

 private:
  std::vector<LocalDecl> decls_;
};

FVarId fresh_fvar_id();

}  // namespace hintelab
