#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hintelab/env.hpp"
#include "hintelab/term.hpp"

namespace hintelab {

enum class SymKind { Const, Sort, Pi, Lam, Mk, Proj, Unit, Star, Wildcard };

// One position of a flattened term skeleton. `arity` counts the subtrees that
// follow in pre-order, so keys can be skipped without the original term.
struct Symbol {
  SymKind kind = SymKind::Wildcard;
  std::string name;       // constant or structure name
  std::size_t index = 0;  // projection field index
  std::size_t arity = 0;

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

using PathKey = std::vector<Symbol>;

inline constexpr std::size_t kDefaultKeyDepth = 4;

// Pre-order flattening of the NoInstanceDelta weak-head skeleton, cut off at
// `max_depth`; metavariables, locals and deeper subtrees become wildcards.
PathKey key_of(const GlobalEnv& env, const Term& t, std::size_t max_depth = kDefaultKeyDepth);

std::string render_key(const GlobalEnv& env, const PathKey& key);

// Index just past the subtree that starts at `pos`.
std::size_t skip_subtree(const PathKey& key, std::size_t pos);

// Direct comparison of two keys where a wildcard on either side swallows one
// whole subtree of the other.
bool keys_compatible(const PathKey& a, const PathKey& b);

template <typename Payload>
class DiscTree {
 public:
  void insert(const PathKey& key, const Payload& payload) {
    Node* n = &root_;
    for (const auto& s : key) {
      auto& child = n->children[s];
      if (!child) child = std::make_unique<Node>();
      n = child.get();
    }
    if (std::find(n->payloads.begin(), n->payloads.end(), payload) == n->payloads.end()) {
      n->payloads.push_back(payload);
      ++size_;
    }
  }

  // Every payload whose key is compatible with `query`, without duplicates, in
  // insertion order per leaf.
  std::vector<Payload> retrieve(const PathKey& query) const {
    std::vector<Payload> out;
    match(&root_, query, 0, out);
    return out;
  }

  std::size_t size() const { return size_; }

 private:
  struct Node {
    std::map<Symbol, std::unique_ptr<Node>> children;
    std::vector<Payload> payloads;
  };

  static void skip(const Node* n, std::size_t pending, std::vector<const Node*>& out) {
    if (pending == 0) {
      out.push_back(n);
      return;
    }
    for (const auto& [sym, child] : n->children) skip(child.get(), pending - 1 + sym.arity, out);
  }

  static void match(const Node* n, const PathKey& q, std::size_t pos, std::vector<Payload>& out) {
    if (pos == q.size()) {
      for (const auto& p : n->payloads)
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
      return;
    }
    const Symbol& s = q[pos];
    if (s.kind == SymKind::Wildcard) {
      std::vector<const Node*> next;
      skip(n, 1, next);
      for (const Node* m : next) match(m, q, pos + 1, out);
      return;
    }
    if (auto it = n->children.find(s); it != n->children.end()) match(it->second.get(), q, pos + 1, out);
    if (auto it = n->children.find(Symbol{}); it != n->children.end())
      match(it->second.get(), q, skip_subtree(q, pos), out);
  }

  Node root_;
  std::size_t size_ = 0;
};

}  // namespace hintelab
