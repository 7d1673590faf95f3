#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

namespace testing {

/// Direct tic-tac-toe model: cells row-major, '-' empty. Players follow the
/// priority rules of the perfect and random strategies literally.
class TicTacToe {
 public:
  using Grid = std::array<char, 9>;

  static char opponent(char p) { return p == 'X' ? 'O' : 'X'; }

  static bool wins(char p, const Grid& g) {
    for (const auto& l : lines())
      if (g[l[0]] == p && g[l[1]] == p && g[l[2]] == p) return true;
    return false;
  }

  /// Empty cells completing a line for p (with repetitions, like the
  /// equational definition collects them per line).
  static std::vector<int> winningPos(char p, const Grid& g) {
    std::vector<int> out;
    for (const auto& l : lines()) {
      int mine = 0, free = -1, empties = 0;
      for (int c : l) {
        if (g[c] == p) ++mine;
        if (g[c] == '-') {
          ++empties;
          free = c;
        }
      }
      if (mine == 2 && empties == 1) out.push_back(free);
    }
    return out;
  }

  static std::set<Grid> puts(char p, const Grid& g, const std::vector<int>& cells) {
    std::set<Grid> out;
    for (int c : cells)
      if (g[c] == '-') {
        Grid h = g;
        h[c] = p;
        out.insert(h);
      }
    return out;
  }

  static std::set<Grid> putsAnywhere(char p, const Grid& g) { return puts(p, g, all()); }

  static bool fork(char p, const Grid& g) {
    return winningPos(p, g).size() >= 2;
  }

  static std::set<Grid> perfectStep(char p, const Grid& g) {
    const char o = opponent(p);
    if (auto r = puts(p, g, winningPos(p, g)); !r.empty()) return r;
    if (auto r = puts(p, g, winningPos(o, g)); !r.empty()) return r;
    {
      std::set<Grid> r;
      for (const Grid& h : putsAnywhere(p, g))
        if (fork(p, h)) r.insert(h);
      if (!r.empty()) return r;
    }
    bool opponentForks = false;
    for (const Grid& h : putsAnywhere(o, g)) opponentForks = opponentForks || fork(o, h);
    if (opponentForks) {
      std::set<Grid> r;
      for (const Grid& h : putsAnywhere(p, g)) {
        bool noFork = true;
        for (const Grid& k : putsAnywhere(o, h)) noFork = noFork && !fork(o, k);
        bool forcing = false;
        for (int c : winningPos(p, h)) {
          Grid k = h;
          k[c] = o;
          forcing = forcing || !fork(o, k);
        }
        if (noFork || forcing) r.insert(h);
      }
      if (!r.empty()) return r;
    }
    if (auto r = puts(p, g, {4}); !r.empty()) return r;
    {
      std::set<Grid> r;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (g[i * 3 + j] != o || i == 1) continue;
          if (i == j) r.merge(puts(p, g, {(2 - i) * 3 + (2 - i)}));
          if (j != 1) r.merge(puts(p, g, {j * 3 + i}));
        }
      if (!r.empty()) return r;
    }
    if (auto r = puts(p, g, {0, 8, 2, 6}); !r.empty()) return r;
    return puts(p, g, {1, 3, 5, 7});
  }

  struct Player {
    char symbol;
    bool perfect;
  };

  /// Final grids of a game by turns: a player moves while the opponent
  /// has not won; the run ends when the player to move cannot.
  static std::set<Grid> finalGrids(Player first, Player second) {
    Grid start;
    start.fill('-');
    const Player players[] = {first, second};
    std::set<std::pair<Grid, int>> seen{{start, 0}};
    std::vector<std::pair<Grid, int>> stack{{start, 0}};
    std::set<Grid> finals;
    while (!stack.empty()) {
      auto [g, turn] = stack.back();
      stack.pop_back();
      const Player& pl = players[turn];
      std::set<Grid> next;
      if (!wins(opponent(pl.symbol), g))
        next = pl.perfect ? perfectStep(pl.symbol, g) : putsAnywhere(pl.symbol, g);
      if (next.empty()) {
        finals.insert(g);
        continue;
      }
      for (const Grid& h : next)
        if (seen.insert({h, 1 - turn}).second) stack.push_back({h, 1 - turn});
    }
    return finals;
  }

 private:
  static const std::vector<std::array<int, 3>>& lines() {
    static const std::vector<std::array<int, 3>> ls = {
        {0, 3, 6}, {1, 4, 7}, {2, 5, 8}, {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 4, 8}, {2, 4, 6}};
    return ls;
  }
  static std::vector<int> all() { return {0, 1, 2, 3, 4, 5, 6, 7, 8}; }
};

}  // namespace testing
