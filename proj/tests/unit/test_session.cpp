#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <regex>

#include <nlohmann/json.hpp>

#include "stratrew/session.hpp"
#include "support.hpp"

using namespace stratrew;

namespace {

std::string runScript(const std::string& path, SessionOptions opts = {}) {
  std::ostringstream out;
  Session s(opts, out, out);
  s.setBaseDirectory(std::filesystem::path(path).parent_path().string());
  s.runScript(testing::readFile(path));
  return out.str();
}

// Solution lines of one command form a set; everything else is compared
// line by line.
std::vector<std::string> normalize(const std::string& text) {
  static const std::regex solution(R"(^Solution \d+: (.*)$)");
  std::vector<std::string> out;
  std::vector<std::string> group;
  auto flush = [&] {
    std::sort(group.begin(), group.end());
    for (auto& g : group) out.push_back("Solution: " + g);
    group.clear();
  };
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (std::regex_match(line, m, solution)) {
      group.push_back(m[1]);
      continue;
    }
    flush();
    out.push_back(line);
  }
  flush();
  return out;
}

struct Outcome {
  int code;
  std::string out;
};

Outcome session(std::initializer_list<const char*> commands, SessionOptions opts = {}) {
  std::ostringstream out;
  Session s(opts, out, out);
  s.setBaseDirectory(STRATREW_FIXTURE_DIR);
  for (const char* c : commands) {
    s.runScript(c);
    if (s.quitting()) break;
  }
  return {s.exitCode(), out.str()};
}

}  // namespace

TEST_CASE("golden transcripts", "[cli]") {
  const bool update = std::getenv("STRATREW_UPDATE_GOLDEN") != nullptr;
  for (const char* name : {"llist", "foo", "lazy-list", "tictactoe", "errors"}) {
    INFO(name);
    std::string script = testing::fixture(std::string("scripts/") + name + ".cmd");
    std::string golden = std::string(STRATREW_GOLDEN_DIR) + "/" + name + ".out";
    std::string got = runScript(script);
    if (update) {
      std::ofstream(golden) << got;
      continue;
    }
    CHECK(normalize(got) == normalize(testing::readFile(golden)));
  }
}

TEST_CASE("command splitting", "[cli]") {
  auto cmds = Session::splitCommands(
      "red a .\n*** comment\nsrew x using match P s.t. C .\nfmod M is sort S . endfm\nred\n b .");
  REQUIRE(cmds.size() == 4);
  CHECK(cmds[0] == "red a");
  CHECK(cmds[1] == "srew x using match P s.t. C");
  CHECK(cmds[2].starts_with("fmod M is"));
  CHECK(cmds[3] == "red\n b");
  std::string rest;
  auto partial = Session::splitCommands("red a .\nsrew b using", &rest);
  CHECK(partial.size() == 1);
  CHECK(rest.find("srew b using") != std::string::npos);
  CHECK(Session::splitCommands("quit.") == std::vector<std::string>{"quit"});
}

TEST_CASE("list session lines", "[cli]") {
  auto r = session({"load llist.maude .", "select LLIST .",
                    "srew nil using seq(a b), seq(c d) by turns ."});
  CHECK(r.code == 0);
  CHECK(r.out == "Solution 1: a c b d\nNo more solutions.\n");
  CHECK(session({"load llist.maude .", "red length(a b c) ."}).out == "result NzNat: 3\n");
}

TEST_CASE("errors do not end the session", "[cli]") {
  auto r = session({"nonsense .", "load llist.maude .", "red length(a) ."});
  CHECK(r.code == 1);
  CHECK(r.out.find("Error: unknown command") != std::string::npos);
  CHECK(r.out.find("result NzNat: 1") != std::string::npos);
}

TEST_CASE("exit codes of checks", "[cli]") {
  CHECK(session({"load tictactoe.maude .",
                 "check [] ~ Owins from initial using perfectX, randomO by turns ."})
            .code == 0);
  CHECK(session({"load tictactoe.maude .",
                 "check [] ~ Owins from initial using betterX, randomO by turns ."})
            .code == 2);
  CHECK(session({"quit ."}).code == 0);
  CHECK(session({"load nowhere.maude ."}).code == 1);
}

TEST_CASE("json output", "[cli]") {
  SessionOptions opts;
  opts.json = true;
  auto r = session({"load llist.maude .", "select LLIST .",
                    "srew nil using seq(a b), seq(c d) by concurrent .",
                    "load tictactoe.maude .",
                    "check [] ~ Owins from initial using betterX, randomO by turns ."},
                   opts);
  std::vector<nlohmann::json> lines;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == 4);
  CHECK(lines[1]["solutions"].size() == 6);
  CHECK(lines[3]["verdict"] == "fails");
  CHECK(lines[3]["counterexample"]["cycle"].size() == 1);
  CHECK(lines[3]["counterexample"]["prefix"][0]["label"] == "0 does putX");
}

TEST_CASE("extended syntax can be switched off", "[cli]") {
  SessionOptions opts;
  opts.extended = false;
  auto off = session({"load foo.maude .", "srew f(a, a) using gt-one(next) ."}, opts);
  CHECK(off.code == 1);
  opts.extended = true;
  opts.nativeExtended = true;
  auto native = session({"load foo.maude .", "srew f(a, a) using gt-one(next) ."}, opts);
  CHECK(native.out == "Solution 1: f(b, a)\nNo more solutions.\n");
}

TEST_CASE("transform and show", "[cli]") {
  auto r = session({"load lazy-list.maude .", "transform csr LAZY-LIST .", "show module ."});
  CHECK(r.code == 0);
  CHECK(r.out.find("Module LAZY-LIST-CSR created.") != std::string::npos);
  CHECK(r.out.find("norm-via-munorm") != std::string::npos);
  CHECK(r.out.find("frozen") != std::string::npos);

  auto current = session({"load lazy-list.maude .", "select LAZY-LIST .", "transform csr .",
                          "srew take(2, natsFrom(5)) using norm-via-munorm ."});
  CHECK(current.out ==
        "Module LAZY-LIST-CSR created.\nSolution 1: 5 : 6 : nil\nNo more solutions.\n");
}

TEST_CASE("step limit bounds plain rewriting", "[cli]") {
  SessionOptions opts;
  opts.stepLimit = 5;
  auto r = session({"load foo.maude .", "rew f(a, b) ."}, opts);
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("result Foo: "));
}

TEST_CASE("release formulas", "[cli]") {
  CHECK(session({"load tictactoe.maude .",
                 "check false R ~ Owins from initial using perfectX, randomO by turns ."})
            .code == 0);
  CHECK(session({"load tictactoe.maude .",
                 "check Xwins R ~ Owins from initial using betterX, randomO by turns ."})
            .code == 2);
}
