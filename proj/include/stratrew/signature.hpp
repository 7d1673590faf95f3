#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stratrew/term.hpp"

namespace stratrew {

using SortId = int;

/// Accepts every term. Used by the `@` placeholder of proposition
/// definitions and by the arguments of polymorphic builtins such as `_==_`.
inline constexpr SortId kAnySort = -2;

/// Operators whose equations are evaluated natively on literals.
enum class Builtin {
  None,
  Succ,
  Plus,
  Times,
  SymDiff,
  Rem,
  Quo,
  Min,
  Max,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Not,
  And,
  Or,
  Xor,
  Implies,
  AndThen,
  OrElse,
  Equal,
  NotEqual,
};

enum class Gather { Default, Left, Right };

struct OpAttrs {
  bool ctor = false;
  bool assoc = false;
  bool comm = false;
  std::optional<Term> identity;
  std::vector<int> frozen;  // 1-based argument indices
  std::vector<int> strat;   // evaluation strategy including the 0s; empty = default
  int prec = -1;            // -1 = default for the operator's syntactic form
  Gather gather = Gather::Default;
  Builtin builtin = Builtin::None;
  bool polymorphic = false;
  bool prelude = false;  // declared by a builtin module
  bool partial = false;  // declared with `~>`: the result lives at the kind
};

struct OpDecl {
  Symbol name;
  std::vector<SortId> domain;
  SortId range = 0;
  OpAttrs attrs;
};

/// Per (name, arity) view of a possibly overloaded operator. Overloads of
/// one symbol must agree on their equational attributes.
struct SymbolInfo {
  Symbol name;
  std::size_t arity = 0;
  bool ctor = false;  // some declaration is a constructor
  bool assoc = false;
  bool comm = false;
  std::optional<Term> identity;
  std::vector<bool> frozen;  // size arity
  std::vector<int> strat;    // empty = default 1 .. n 0
  Builtin builtin = Builtin::None;
  bool polymorphic = false;
  bool prelude = true;  // every declaration comes from a builtin module
  int prec = 0;
  Gather gather = Gather::Default;
  std::vector<std::size_t> decls;  // indices into Signature::ops()
};

/// Syntactic form of an operator name, derived from its underscores.
enum class OpForm {
  Prefix,      // f or f(...) : no underscores
  Infix,       // _op_
  PrefixUnary, // op_
  Juxtaposition,  // __
  Bracket,     // [_,_,...]
  Other,
};
OpForm opForm(const std::string& name, std::size_t arity);
/// Token of an infix or unary-prefix operator (`:` for `_:_`, `s` for `s_`).
std::string opToken(const std::string& name);

/// Sorts, subsort preorder (closed reflexively and transitively), kinds, and
/// operator declarations. Build with the add* calls, then `finalize()`.
class Signature {
 public:
  Signature() = default;
  Signature(const Signature& other);
  Signature& operator=(const Signature& other);
  Signature(Signature&&) = default;
  Signature& operator=(Signature&&) = default;

  SortId addSort(Symbol name);
  void addSubsort(SortId sub, SortId super);
  std::size_t addOp(OpDecl decl);
  /// Closes the subsort relation, computes kinds, and validates attributes.
  /// Throws SortError on cycles or inconsistent declarations.
  void finalize();

  std::size_t sortCount() const { return sortNames_.size(); }
  std::optional<SortId> findSort(Symbol name) const;
  SortId sortId(Symbol name) const;  // throws SortError
  std::string sortName(SortId s) const;
  const std::vector<std::pair<SortId, SortId>>& subsortDecls() const { return subsorts_; }

  bool leq(SortId a, SortId b) const;
  bool sameKind(SortId a, SortId b) const;
  int kindOf(SortId s) const;
  /// Error sort `[S]` at the top of the kind of s.
  SortId kindTop(SortId s) const;
  bool isKindTop(SortId s) const { return s >= static_cast<SortId>(sortNames_.size()); }

  const std::vector<OpDecl>& ops() const { return ops_; }
  /// Information for an application with `nargs` arguments; flattened
  /// applications of associative operators resolve to the binary symbol.
  const SymbolInfo* symbol(Symbol name, std::size_t nargs) const;
  /// All arities declared under one name.
  std::vector<const SymbolInfo*> symbolsNamed(Symbol name) const;
  bool hasOpNamed(Symbol name) const;
  const std::vector<const SymbolInfo*>& allSymbols() const { return symbolList_; }

  /// Sort of a variable's sort name, accepting the placeholder sort.
  SortId variableSort(const Term& var) const;

  /// Least sort of a canonical term; the kind's error sort when no
  /// declaration applies.
  SortId leastSort(const Term& t) const;
  bool hasSort(const Term& t, SortId s) const { return leq(leastSort(t), s); }
  /// Range sort of some declaration of the symbol (its kind is what matters).
  SortId rangeOf(const SymbolInfo& info) const { return ops_[info.decls.front()].range; }

  /// Sort name written for the placeholder of proposition definitions.
  static Symbol anySortName();

 private:
  SortId computeLeastSort(const Term& t) const;
  SortId resultFor(const SymbolInfo& info, const std::vector<SortId>& argSorts) const;

  std::vector<Symbol> sortNames_;
  std::unordered_map<Symbol, SortId, SymbolHash> sortIndex_;
  std::vector<std::pair<SortId, SortId>> subsorts_;
  std::vector<std::vector<bool>> leq_;
  std::vector<int> kind_;
  int kindCount_ = 0;
  std::vector<SortId> kindTopName_;  // representative maximal sort per kind

  std::vector<OpDecl> ops_;
  struct Key {
    Symbol name;
    std::size_t arity;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return hashCombine(SymbolHash()(k.name), k.arity);
    }
  };
  std::unordered_map<Key, SymbolInfo, KeyHash> symbols_;
  std::vector<const SymbolInfo*> symbolList_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

}  // namespace stratrew
