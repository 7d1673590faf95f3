#include <catch_amalgamated.hpp>

#include <random>

#include "stratrew/csr.hpp"
#include "stratrew/kernel.hpp"
#include "support.hpp"

using namespace stratrew;

using Path = std::vector<std::uint32_t>;

namespace {

struct Op {
  const char* name;
  std::size_t arity;
  bool assoc;
};

const Op kOps[] = {{"k", 0, false}, {"h", 1, false}, {"f", 2, false}, {"g", 3, false}, {"__", 2, true}};

Term randomTerm(std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  if (depth == 0 || pick(4) == 0) return Term::constant(Symbol("k"));
  const Op& op = kOps[1 + pick(4)];
  // Associative nodes appear flattened with two to four arguments.
  std::size_t n = op.assoc ? 2 + pick(3) : op.arity;
  std::vector<Term> args;
  for (std::size_t i = 0; i < n; ++i) args.push_back(randomTerm(rng, depth - 1));
  return Term::application(Symbol(op.name), std::move(args));
}

// Keeps the paths all of whose steps go through replacing arguments.
std::vector<Path> filterOracle(const Term& t, const ReplacementMap& mu) {
  std::vector<Path> out;
  for (const Path& p : allPaths(t)) {
    bool ok = true;
    const Term* node = &t;
    for (std::uint32_t i : p) {
      const bool assoc = node->head() == Symbol("__");
      const std::size_t declared = assoc ? 2 : node->arity();
      std::vector<int> idx = mu.of(node->head(), declared);
      auto has = [&](int k) { return std::find(idx.begin(), idx.end(), k) != idx.end(); };
      ok = assoc && node->arity() > 2 ? has(1) && has(2) : has(static_cast<int>(i) + 1);
      if (!ok) break;
      node = &node->arg(i);
    }
    if (ok) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("replacing positions agree with filtering all paths", "[property][positions]") {
  std::mt19937 rng(31337);
  int restricted = 0;
  for (int i = 0; i < 300; ++i) {
    ReplacementMap mu;
    for (const Op& op : kOps) {
      if (rng() % 5 == 0) continue;  // unknown operators replace everywhere
      std::vector<int> idx;
      for (std::size_t a = 1; a <= op.arity; ++a)
        if (rng() % 2) idx.push_back(static_cast<int>(a));
      mu.set(Symbol(op.name), op.arity, idx);
    }
    Term t = randomTerm(rng, 4);
    std::vector<Path> got = muPositions(t, mu);
    std::vector<Path> expected = filterOracle(t, mu);
    REQUIRE_FALSE(got.empty());
    CHECK(got.front().empty());
    // Pre-order on paths is their lexicographic order.
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(std::set<Path>(got.begin(), got.end()) == std::set<Path>(expected.begin(), expected.end()));
    CHECK(got.size() == expected.size());
    if (expected.size() < allPaths(t).size()) ++restricted;
  }
  CHECK(restricted >= 100);
}
