#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stratrew {

/// Interned identifier. Two symbols are equal iff their spellings are equal;
/// comparison and hashing are pointer operations.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  const std::string& str() const;
  bool empty() const { return text_ == nullptr || text_->empty(); }
  explicit operator bool() const { return text_ != nullptr; }

  bool operator==(const Symbol& other) const { return text_ == other.text_; }
  const void* id() const { return text_; }

 private:
  const std::string* text_ = nullptr;
};

enum class TermKind : std::uint8_t { Variable, Numeral, Application };

struct TermNode;

/// Handle to an immutable, hash-consed term. Structurally equal terms share
/// one node, so equality and hashing are O(1). Terms are independent of any
/// module: operators are identified by name and arity, variables by name and
/// sort name. Canonical forms modulo axioms are produced by the kernel, which
/// needs the signature.
class Term {
 public:
  Term() = default;

  static Term variable(Symbol name, Symbol sort);
  static Term numeral(std::uint64_t value);
  static Term application(Symbol op, std::vector<Term> args);
  static Term constant(Symbol op) { return application(op, {}); }

  TermKind kind() const;
  bool isVariable() const { return kind() == TermKind::Variable; }
  bool isNumeral() const { return kind() == TermKind::Numeral; }
  bool isApplication() const { return kind() == TermKind::Application; }

  /// Operator name for applications, variable name for variables.
  Symbol head() const;
  /// Sort name of a variable.
  Symbol sort() const;
  std::uint64_t value() const;
  std::span<const Term> args() const;
  std::size_t arity() const { return args().size(); }
  const Term& arg(std::size_t i) const { return args()[i]; }

  bool ground() const;
  std::size_t size() const;
  std::size_t hash() const;
  const TermNode* node() const { return node_; }

  explicit operator bool() const { return node_ != nullptr; }
  bool operator==(const Term& other) const { return node_ == other.node_; }

 private:
  explicit Term(const TermNode* node) : node_(node) {}
  const TermNode* node_ = nullptr;
};

struct TermNode {
  TermKind kind;
  Symbol head;
  Symbol sort;
  std::uint64_t value = 0;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool ground = true;
};

inline TermKind Term::kind() const { return node_->kind; }
inline Symbol Term::head() const { return node_->head; }
inline Symbol Term::sort() const { return node_->sort; }
inline std::uint64_t Term::value() const { return node_->value; }
inline std::span<const Term> Term::args() const { return node_->args; }
inline bool Term::ground() const { return node_->ground; }
inline std::size_t Term::size() const { return node_->size; }
inline std::size_t Term::hash() const { return node_->hash; }

/// Total order on terms: variables < numerals < applications; variables by
/// name then sort; numerals by value; applications by operator name, arity,
/// then children lexicographically. Independent of interning order.
int compareTerms(const Term& a, const Term& b);
inline bool termLess(const Term& a, const Term& b) { return compareTerms(a, b) < 0; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct SymbolHash {
  std::size_t operator()(const Symbol& s) const { return std::hash<const void*>()(s.id()); }
};

/// Collects the distinct variables of a term in first-occurrence order.
void collectVariables(const Term& t, std::vector<Term>& out);

/// Finite map from variables to terms. Kept as a small unordered vector;
/// equality and hashing are order-insensitive.
class Subst {
 public:
  using Binding = std::pair<Term, Term>;

  Subst() = default;

  const Term* find(const Term& var) const {
    for (const auto& [v, t] : bindings_)
      if (v == var) return &t;
    return nullptr;
  }
  /// Looks a variable up by name only (initial substitutions name rule
  /// variables without sorts).
  const Term* findByName(Symbol name) const;

  void bind(const Term& var, const Term& value) { bindings_.emplace_back(var, value); }
  void set(const Term& var, const Term& value);
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  void truncate(std::size_t n) { bindings_.resize(n); }

  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  /// Union; bindings of `other` win on conflict.
  Subst merged(const Subst& other) const;
  /// Bindings sorted by variable name then sort, for display and ordering.
  std::vector<Binding> sorted() const;

  bool operator==(const Subst& other) const;
  std::size_t hash() const;

 private:
  std::vector<Binding> bindings_;
};

/// Lexicographic order on substitutions through `Subst::sorted()`.
bool substLess(const Subst& a, const Subst& b);

struct SubstHash {
  std::size_t operator()(const Subst& s) const { return s.hash(); }
};

inline std::size_t hashCombine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace stratrew
