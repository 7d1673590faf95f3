#pragma once

#include <memory>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stratrew/module.hpp"

namespace stratrew {

/// Loaded modules by name. Imports are flattened when a module is loaded;
/// each module also keeps its own declarations so that importers can merge
/// them without duplicating diamond imports. The builtin modules BOOL,
/// EXT-BOOL, NAT and INT are always present.
class ModuleRegistry {
 public:
  ModuleRegistry();

  /// Parses every module in `text` and registers it, replacing earlier
  /// modules of the same name. Returns the names in source order.
  std::vector<Symbol> load(std::string_view text);
  /// Registers a generated module. Its components are treated as its own.
  void insert(ModuleDef flat);

  const ModuleDef* find(Symbol name) const;
  const ModuleDef& get(Symbol name) const;  // throws Error
  std::shared_ptr<const ModuleDef> share(Symbol name) const;  // throws Error
  /// Non-builtin modules in load order.
  const std::vector<Symbol>& userModules() const { return order_; }

  /// When false, congruences and generic traversals are rejected.
  void setExtended(bool on) { extended_ = on; }
  bool extended() const { return extended_; }

 private:
  struct Entry {
    std::shared_ptr<const ModuleDef> flat;
    std::shared_ptr<const ModuleDef> own;
  };
  void loadText(std::string_view text, bool prelude, std::vector<Symbol>* names);
  friend class ModuleBuilder;

  std::unordered_map<Symbol, Entry, SymbolHash> modules_;
  std::vector<Symbol> order_;
  bool extended_ = true;
};

/// Copies sorts, subsorts and operator declarations of `src` into `dst`,
/// matching sorts by name. `dst` must be finalized afterwards.
void mergeSignature(Signature& dst, const Signature& src);

/// Source of the builtin modules.
std::string_view preludeText();
bool isPreludeModule(Symbol name);
bool isPreludeSort(const std::string& name);

}  // namespace stratrew
