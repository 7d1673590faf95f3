#include "stratrew/signature.hpp"

#include <algorithm>
#include <mutex>

#include "stratrew/error.hpp"

namespace stratrew {

struct Signature::Cache {
  std::mutex mutex;
  std::unordered_map<const TermNode*, SortId> sorts;
};

OpForm opForm(const std::string& name, std::size_t arity) {
  auto underscores = std::count(name.begin(), name.end(), '_');
  if (underscores == 0) return OpForm::Prefix;
  if (name == "__" && arity == 2) return OpForm::Juxtaposition;
  if (name.size() >= 3 && name.front() == '[' && name.back() == ']' &&
      static_cast<std::size_t>(underscores) == arity)
    return OpForm::Bracket;
  if (arity == 2 && underscores == 2 && name.size() > 2 && name.front() == '_' &&
      name.back() == '_')
    return OpForm::Infix;
  if (arity == 1 && underscores == 1 && name.size() > 1 && name.back() == '_')
    return OpForm::PrefixUnary;
  return OpForm::Other;
}

std::string opToken(const std::string& name) {
  std::string out = name;
  if (!out.empty() && out.front() == '_') out.erase(out.begin());
  if (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

Symbol Signature::anySortName() {
  static const Symbol any("@Any");
  return any;
}

Signature::Signature(const Signature& other) { *this = other; }

Signature& Signature::operator=(const Signature& other) {
  if (this == &other) return *this;
  sortNames_ = other.sortNames_;
  sortIndex_ = other.sortIndex_;
  subsorts_ = other.subsorts_;
  leq_ = other.leq_;
  kind_ = other.kind_;
  kindCount_ = other.kindCount_;
  kindTopName_ = other.kindTopName_;
  ops_ = other.ops_;
  symbols_ = other.symbols_;
  symbolList_.clear();
  for (const SymbolInfo* info : other.symbolList_)
    symbolList_.push_back(&symbols_.at(Key{info->name, info->arity}));
  cache_ = other.cache_;
  return *this;
}

SortId Signature::addSort(Symbol name) {
  if (auto it = sortIndex_.find(name); it != sortIndex_.end()) return it->second;
  SortId id = static_cast<SortId>(sortNames_.size());
  sortNames_.push_back(name);
  sortIndex_.emplace(name, id);
  return id;
}

void Signature::addSubsort(SortId sub, SortId super) {
  if (std::find(subsorts_.begin(), subsorts_.end(), std::make_pair(sub, super)) ==
      subsorts_.end())
    subsorts_.emplace_back(sub, super);
}

std::size_t Signature::addOp(OpDecl decl) {
  ops_.push_back(std::move(decl));
  return ops_.size() - 1;
}

std::optional<SortId> Signature::findSort(Symbol name) const {
  if (name == anySortName()) return kAnySort;
  if (auto it = sortIndex_.find(name); it != sortIndex_.end()) return it->second;
  return std::nullopt;
}

SortId Signature::sortId(Symbol name) const {
  if (auto s = findSort(name)) return *s;
  throw SortError("unknown sort " + name.str());
}

std::string Signature::sortName(SortId s) const {
  if (s == kAnySort) return anySortName().str();
  if (isKindTop(s)) {
    SortId rep = kindTopName_.at(static_cast<std::size_t>(s) - sortNames_.size());
    return "[" + sortNames_[rep].str() + "]";
  }
  return sortNames_.at(static_cast<std::size_t>(s)).str();
}

void Signature::finalize() {
  const std::size_t n = sortNames_.size();
  leq_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
  for (auto [a, b] : subsorts_) leq_[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq_[i][j] && leq_[j][i])
        throw SortError("cyclic subsort relation between " + sortNames_[i].str() +
                        " and " + sortNames_[j].str());

  // Kinds are connected components of the subsort graph.
  kind_.assign(n, -1);
  kindCount_ = 0;
  kindTopName_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (kind_[i] >= 0) continue;
    std::vector<std::size_t> todo{i};
    kind_[i] = kindCount_;
    SortId top = static_cast<SortId>(i);
    while (!todo.empty()) {
      std::size_t s = todo.back();
      todo.pop_back();
      if (leq_[top][s]) top = static_cast<SortId>(s);
      for (std::size_t j = 0; j < n; ++j)
        if ((leq_[s][j] || leq_[j][s]) && kind_[j] < 0) {
          kind_[j] = kindCount_;
          todo.push_back(j);
        }
    }
    kindTopName_.push_back(top);
    ++kindCount_;
  }

  symbols_.clear();
  symbolList_.clear();
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const OpDecl& d = ops_[i];
    const std::size_t arity = d.domain.size();
    for (int f : d.attrs.frozen)
      if (f < 1 || static_cast<std::size_t>(f) > arity)
        throw SortError("frozen index out of range in " + d.name.str());
    for (int s : d.attrs.strat)
      if (s < 0 || static_cast<std::size_t>(s) > arity)
        throw SortError("strat index out of range in " + d.name.str());
    if (d.attrs.assoc) {
      if (arity != 2) throw SortError("assoc operator " + d.name.str() + " must be binary");
      if (!sameKind(d.domain[0], d.range) || !sameKind(d.domain[1], d.range))
        throw SortError("assoc operator " + d.name.str() +
                        " must have its arguments in the kind of its range");
    }
    if (d.attrs.comm && arity != 2)
      throw SortError("comm operator " + d.name.str() + " must be binary");

    Key key{d.name, arity};
    auto [it, fresh] = symbols_.try_emplace(key);
    SymbolInfo& info = it->second;
    if (fresh) {
      info.name = d.name;
      info.arity = arity;
      info.frozen.assign(arity, false);
      OpForm form = opForm(d.name.str(), arity);
      info.prec = (form == OpForm::Infix || form == OpForm::Juxtaposition) ? 41
                  : form == OpForm::PrefixUnary                             ? 15
                                                                            : 0;
      symbolList_.push_back(&info);
    } else if (info.assoc != d.attrs.assoc || info.comm != d.attrs.comm) {
      throw SortError("overloaded operator " + d.name.str() +
                      " declared with different equational attributes");
    }
    info.decls.push_back(i);
    info.ctor = info.ctor || d.attrs.ctor;
    info.assoc = d.attrs.assoc;
    info.comm = d.attrs.comm;
    if (d.attrs.identity && !info.identity) info.identity = d.attrs.identity;
    for (int f : d.attrs.frozen) info.frozen[static_cast<std::size_t>(f - 1)] = true;
    if (!d.attrs.strat.empty()) info.strat = d.attrs.strat;
    if (d.attrs.builtin != Builtin::None) info.builtin = d.attrs.builtin;
    info.polymorphic = info.polymorphic || d.attrs.polymorphic;
    info.prelude = info.prelude && d.attrs.prelude;
    if (d.attrs.prec >= 0) info.prec = d.attrs.prec;
    if (d.attrs.gather != Gather::Default) info.gather = d.attrs.gather;
  }
  cache_ = std::make_shared<Cache>();

  for (const SymbolInfo* info : symbolList_) {
    if (!info->identity) continue;
    SortId s = leastSort(*info->identity);
    if (isKindTop(s) || !sameKind(s, rangeOf(*info)))
      throw SortError("identity element of " + info->name.str() + " is ill-sorted");
  }
}

bool Signature::leq(SortId a, SortId b) const {
  if (b == kAnySort) return true;
  if (a == kAnySort) return false;
  if (isKindTop(b)) return kindOf(a) == kindOf(b);
  if (isKindTop(a)) return false;
  return leq_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

int Signature::kindOf(SortId s) const {
  if (s == kAnySort) return -1;
  if (isKindTop(s)) return s - static_cast<SortId>(sortNames_.size());
  return kind_.at(static_cast<std::size_t>(s));
}

bool Signature::sameKind(SortId a, SortId b) const {
  if (a == kAnySort || b == kAnySort) return true;
  return kindOf(a) == kindOf(b);
}

SortId Signature::kindTop(SortId s) const {
  if (s == kAnySort) return kAnySort;
  return static_cast<SortId>(sortNames_.size()) + kindOf(s);
}

const SymbolInfo* Signature::symbol(Symbol name, std::size_t nargs) const {
  if (auto it = symbols_.find(Key{name, nargs}); it != symbols_.end()) return &it->second;
  if (nargs > 2)
    if (auto it = symbols_.find(Key{name, 2}); it != symbols_.end() && it->second.assoc)
      return &it->second;
  return nullptr;
}

std::vector<const SymbolInfo*> Signature::symbolsNamed(Symbol name) const {
  std::vector<const SymbolInfo*> out;
  for (const SymbolInfo* info : symbolList_)
    if (info->name == name) out.push_back(info);
  return out;
}

bool Signature::hasOpNamed(Symbol name) const {
  for (const SymbolInfo* info : symbolList_)
    if (info->name == name) return true;
  return false;
}

SortId Signature::variableSort(const Term& var) const { return sortId(var.sort()); }

SortId Signature::leastSort(const Term& t) const {
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->sorts.find(t.node()); it != cache_->sorts.end()) return it->second;
  }
  SortId s = computeLeastSort(t);
  std::lock_guard lock(cache_->mutex);
  cache_->sorts.emplace(t.node(), s);
  return s;
}

SortId Signature::resultFor(const SymbolInfo& info, const std::vector<SortId>& argSorts) const {
  std::vector<SortId> candidates;
  for (std::size_t di : info.decls) {
    const OpDecl& d = ops_[di];
    bool fits = true;
    for (std::size_t i = 0; i < d.domain.size() && fits; ++i)
      fits = leq(argSorts[i], d.domain[i]);
    if (fits) candidates.push_back(d.attrs.partial ? kindTop(d.range) : d.range);
  }
  if (candidates.empty()) return kindTop(rangeOf(info));
  for (SortId c : candidates) {
    bool least = std::all_of(candidates.begin(), candidates.end(),
                             [&](SortId o) { return leq(c, o); });
    if (least) return c;
  }
  for (SortId c : candidates) {
    bool minimal = std::none_of(candidates.begin(), candidates.end(),
                                [&](SortId o) { return o != c && leq(o, c); });
    if (minimal) return c;
  }
  return candidates.front();
}

SortId Signature::computeLeastSort(const Term& t) const {
  switch (t.kind()) {
    case TermKind::Variable:
      return variableSort(t);
    case TermKind::Numeral: {
      static const Symbol zero("Zero"), nzNat("NzNat");
      auto s = findSort(t.value() == 0 ? zero : nzNat);
      if (!s) throw SortError("numeral " + std::to_string(t.value()) +
                              " used in a module that does not import NAT");
      return *s;
    }
    case TermKind::Application:
      break;
  }
  const SymbolInfo* info = symbol(t.head(), t.arity());
  if (!info)
    throw SortError("no operator " + t.head().str() + " with " +
                    std::to_string(t.arity()) + " arguments");
  if (info->polymorphic) return rangeOf(*info);
  std::vector<SortId> argSorts;
  argSorts.reserve(t.arity());
  for (const Term& a : t.args()) argSorts.push_back(leastSort(a));
  if (info->assoc && t.arity() > 2) {
    SortId acc = argSorts[0];
    for (std::size_t i = 1; i < argSorts.size(); ++i) acc = resultFor(*info, {acc, argSorts[i]});
    return acc;
  }
  return resultFor(*info, argSorts);
}

}  // namespace stratrew
