#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stratrew/session.hpp"

namespace {

// Reads commands line by line and runs each as soon as it is complete.
void repl(stratrew::Session& session, bool interactive) {
  std::string pending, line;
  if (interactive) std::cout << "stratrew> " << std::flush;
  while (std::getline(std::cin, line)) {
    pending += line;
    pending += '\n';
    std::vector<std::string> cmds = stratrew::Session::splitCommands(pending, &pending);
    for (const std::string& c : cmds) {
      session.execute(c);
      if (session.quitting()) return;
    }
    if (interactive) std::cout << "stratrew> " << std::flush;
  }
  if (!pending.empty()) session.runScript(pending);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Term rewriting with strategies, multistrategies and LTL checking"};
  stratrew::SessionOptions opts;
  std::vector<std::string> scripts, commands, files;
  bool noExtended = false;
  app.add_option("-f,--file", scripts, "Run the commands of a script");
  app.add_option("-c,--command", commands, "Run one command");
  app.add_flag("--extended", opts.extended, "Accept congruences and generic traversals (default)");
  app.add_flag("--no-extended", noExtended, "Reject congruences and generic traversals");
  app.add_flag("--native-extended", opts.nativeExtended,
               "Evaluate congruences and traversals without translating them");
  app.add_option("--step-limit", opts.stepLimit, "Equational and rewrite step budget");
  app.add_option("--state-limit", opts.stateLimit, "Search and model-checking state budget");
  app.add_flag("--json", opts.json, "Print one JSON object per command");
  app.add_option("modules", files, "Module files to load first");
  CLI11_PARSE(app, argc, argv);
  if (noExtended) opts.extended = false;

  stratrew::Session session(opts, std::cout, std::cerr);
  for (const std::string& f : files) {
    session.execute("load " + f);
    if (session.exitCode() == 1) return 1;
  }
  for (const std::string& path : scripts) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "Error: cannot open " << path << '\n';
      return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    session.setBaseDirectory(std::filesystem::path(path).parent_path().string());
    session.runScript(ss.str());
    session.setBaseDirectory({});
    if (session.quitting()) return session.exitCode();
  }
  for (const std::string& c : commands) {
    session.runScript(c);
    if (session.quitting()) return session.exitCode();
  }
  if (scripts.empty() && commands.empty()) repl(session, isatty(STDIN_FILENO) != 0);
  return session.exitCode();
}
