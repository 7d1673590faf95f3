#include "stratrew/term.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_set>

namespace stratrew {

namespace {

struct SymbolTable {
  std::mutex mutex;
  std::unordered_set<std::string> names;
};

SymbolTable& symbolTable() {
  static SymbolTable table;
  return table;
}

struct NodeHash {
  std::size_t operator()(const TermNode* n) const { return n->hash; }
};

struct NodeEq {
  bool operator()(const TermNode* a, const TermNode* b) const {
    return a->kind == b->kind && a->head == b->head && a->sort == b->sort &&
           a->value == b->value && a->args == b->args;
  }
};

struct TermTable {
  std::mutex mutex;
  std::unordered_set<const TermNode*, NodeHash, NodeEq> nodes;
  std::vector<std::unique_ptr<TermNode>> storage;
};

TermTable& termTable() {
  static TermTable* table = new TermTable;  // outlives static destructors
  return *table;
}

const TermNode* intern(TermNode&& candidate) {
  std::size_t h = std::hash<int>()(static_cast<int>(candidate.kind));
  h = hashCombine(h, std::hash<const void*>()(candidate.head.id()));
  h = hashCombine(h, std::hash<const void*>()(candidate.sort.id()));
  h = hashCombine(h, std::hash<std::uint64_t>()(candidate.value));
  for (const Term& a : candidate.args) {
    h = hashCombine(h, a.hash());
    candidate.size += a.size();
    candidate.ground = candidate.ground && a.ground();
  }
  if (candidate.kind == TermKind::Variable) candidate.ground = false;
  candidate.hash = h;

  TermTable& table = termTable();
  std::lock_guard lock(table.mutex);
  if (auto it = table.nodes.find(&candidate); it != table.nodes.end()) return *it;
  auto owned = std::make_unique<TermNode>(std::move(candidate));
  const TermNode* raw = owned.get();
  table.storage.push_back(std::move(owned));
  table.nodes.insert(raw);
  return raw;
}

}  // namespace

Symbol::Symbol(std::string_view text) {
  SymbolTable& table = symbolTable();
  std::lock_guard lock(table.mutex);
  text_ = &*table.names.emplace(text).first;
}

const std::string& Symbol::str() const {
  static const std::string empty;
  return text_ ? *text_ : empty;
}

Term Term::variable(Symbol name, Symbol sort) {
  TermNode n{TermKind::Variable, name, sort, 0, {}};
  return Term(intern(std::move(n)));
}

Term Term::numeral(std::uint64_t value) {
  TermNode n{TermKind::Numeral, Symbol(), Symbol(), value, {}};
  return Term(intern(std::move(n)));
}

Term Term::application(Symbol op, std::vector<Term> args) {
  TermNode n{TermKind::Application, op, Symbol(), 0, std::move(args)};
  return Term(intern(std::move(n)));
}

int compareTerms(const Term& a, const Term& b) {
  if (a == b) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case TermKind::Variable: {
      if (int c = a.head().str().compare(b.head().str())) return c < 0 ? -1 : 1;
      int c = a.sort().str().compare(b.sort().str());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case TermKind::Numeral:
      return a.value() < b.value() ? -1 : 1;
    case TermKind::Application: {
      if (a.head() != b.head()) return a.head().str() < b.head().str() ? -1 : 1;
      if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (int c = compareTerms(a.arg(i), b.arg(i))) return c;
      return 0;
    }
  }
  return 0;
}

void collectVariables(const Term& t, std::vector<Term>& out) {
  if (t.ground()) return;
  if (t.isVariable()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) collectVariables(a, out);
}

const Term* Subst::findByName(Symbol name) const {
  for (const auto& [v, t] : bindings_)
    if (v.head() == name) return &t;
  return nullptr;
}

void Subst::set(const Term& var, const Term& value) {
  for (auto& [v, t] : bindings_)
    if (v == var) {
      t = value;
      return;
    }
  bind(var, value);
}

Subst Subst::merged(const Subst& other) const {
  Subst out = *this;
  for (const auto& [v, t] : other) out.set(v, t);
  return out;
}

std::vector<Subst::Binding> Subst::sorted() const {
  std::vector<Binding> out = bindings_;
  std::sort(out.begin(), out.end(), [](const Binding& x, const Binding& y) {
    return termLess(x.first, y.first);
  });
  return out;
}

bool Subst::operator==(const Subst& other) const {
  if (size() != other.size()) return false;
  for (const auto& [v, t] : bindings_) {
    const Term* o = other.find(v);
    if (!o || !(*o == t)) return false;
  }
  return true;
}

std::size_t Subst::hash() const {
  std::size_t h = bindings_.size();
  for (const auto& [v, t] : bindings_) h += hashCombine(v.hash(), t.hash());
  return h;
}

bool substLess(const Subst& a, const Subst& b) {
  auto x = a.sorted();
  auto y = b.sorted();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (int c = compareTerms(x[i].first, y[i].first)) return c < 0;
    if (int c = compareTerms(x[i].second, y[i].second)) return c < 0;
  }
  return x.size() < y.size();
}

}  // namespace stratrew
