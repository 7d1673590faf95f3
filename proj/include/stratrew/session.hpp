#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stratrew/frontend.hpp"
#include "stratrew/rewrite.hpp"

namespace stratrew {

struct SessionOptions {
  bool extended = true;
  /// Evaluate congruences and traversals directly instead of translating
  /// them into core strategies first.
  bool nativeExtended = false;
  bool json = false;
  std::size_t stepLimit = 1'000'000;
  std::size_t stateLimit = 1'000'000;
};

/// Command interpreter shared by the REPL and batch modes.
class Session {
 public:
  enum class Status { Ok, Holds, Fails, Error, Quit };

  Session(SessionOptions opts, std::ostream& out, std::ostream& err);
  ~Session();

  /// Runs one command without its terminating period.
  Status execute(std::string_view command);
  /// Runs every command of a script; module definitions may be inlined.
  /// Stops at `quit`.
  Status runScript(std::string_view text);
  /// Exit code so far: 1 after any error, else 2 if the last check failed,
  /// else 0.
  int exitCode() const;
  bool quitting() const { return quit_; }

  /// Relative `load` paths are resolved against this directory.
  void setBaseDirectory(std::string dir) { baseDir_ = std::move(dir); }

  ModuleRegistry& registry() { return reg_; }
  const ModuleDef* current() const;

  /// Splits script text into commands and inline module blocks. With
  /// `remainder`, an unterminated last command is returned there instead.
  static std::vector<std::string> splitCommands(std::string_view text,
                                                std::string* remainder = nullptr);

 private:
  Status dispatch(const std::string& verb, std::string_view rest);
  Status load(std::string_view path);
  Status loadText(std::string_view text);
  Status select(std::string_view name);
  Status reduce(std::string_view rest);
  Status rewrite(std::string_view rest);
  Status srewrite(std::string_view rest, bool depthFirst);
  Status check(std::string_view rest);
  Status transform(std::string_view rest);
  Status showModule();
  Status fail(const std::string& msg);

  struct Prepared;
  Prepared prepare(std::string_view strategies);
  std::shared_ptr<const ModuleDef> requireModule() const;
  Limits limits() const;

  SessionOptions opts_;
  std::ostream& out_;
  std::ostream& err_;
  ModuleRegistry reg_;
  std::string baseDir_;
  Symbol current_;
  bool hasCurrent_ = false;
  bool error_ = false;
  bool lastCheckFailed_ = false;
  bool quit_ = false;
};

}  // namespace stratrew
