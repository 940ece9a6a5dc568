#pragma once

// Cosmetic two-level minimization for display. Output is equivalent to the
// input but not unique per equivalence class, so never compare with it.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ocn/logic.hpp"

namespace ocn {

// Above this many atoms the canonical DNF is returned unchanged.
inline constexpr std::size_t kMaxSimplifyAtoms = 12;

namespace detail {

// A cube: `care` selects the fixed variables, `bits` holds their values.
struct Cube {
  std::uint32_t bits;
  std::uint32_t care;
  friend auto operator<=>(const Cube&, const Cube&) = default;
  bool covers(std::uint32_t minterm) const { return (minterm & care) == bits; }
};

inline std::vector<Cube> prime_implicants(const std::vector<std::uint32_t>& minterms, std::size_t n) {
  const std::uint32_t full = n == 32 ? ~0U : (1U << n) - 1;
  std::set<Cube> current;
  for (auto m : minterms) current.insert({m, full});
  std::set<Cube> primes;
  while (!current.empty()) {
    std::set<Cube> next;
    std::set<Cube> merged;
    for (auto a = current.begin(); a != current.end(); ++a) {
      for (auto b = std::next(a); b != current.end(); ++b) {
        if (a->care != b->care) continue;
        const std::uint32_t diff = a->bits ^ b->bits;
        if (std::popcount(diff) != 1) continue;
        next.insert({a->bits & ~diff, a->care & ~diff});
        merged.insert(*a);
        merged.insert(*b);
      }
    }
    for (const auto& c : current)
      if (!merged.count(c)) primes.insert(c);
    current = std::move(next);
  }
  return {primes.begin(), primes.end()};
}

inline std::vector<Cube> select_cover(const std::vector<Cube>& primes, std::vector<std::uint32_t> todo) {
  std::vector<Cube> cover;
  auto take = [&](const Cube& c) {
    cover.push_back(c);
    std::erase_if(todo, [&](std::uint32_t m) { return c.covers(m); });
  };
  // Essential primes first.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto m : todo) {
      const Cube* only = nullptr;
      int hits = 0;
      for (const auto& p : primes)
        if (p.covers(m)) {
          ++hits;
          only = &p;
        }
      if (hits == 1) {
        take(*only);
        changed = true;
        break;
      }
    }
  }
  while (!todo.empty()) {
    const Cube* best = nullptr;
    std::size_t best_hits = 0;
    for (const auto& p : primes) {
      auto hits = static_cast<std::size_t>(
          std::count_if(todo.begin(), todo.end(), [&](std::uint32_t m) { return p.covers(m); }));
      if (hits > best_hits) {
        best = &p;
        best_hits = hits;
      }
    }
    take(*best);
  }
  std::sort(cover.begin(), cover.end(), [](const Cube& a, const Cube& b) {
    const int pa = std::popcount(a.care);
    const int pb = std::popcount(b.care);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return cover;
}

}  // namespace detail

inline Sentence simplify_for_display(const Sentence& s, const Vocabulary& vocab) {
  const TruthTable t = truth_table(s, vocab);
  if (t.none() || t.all() || vocab.size() > kMaxSimplifyAtoms) return sentence_from_table(t, vocab);
  std::vector<std::uint32_t> minterms;
  for (std::uint64_t i = 0; i < t.size(); ++i)
    if (t.test(i)) minterms.push_back(static_cast<std::uint32_t>(i));
  const auto cover = detail::select_cover(detail::prime_implicants(minterms, vocab.size()), minterms);
  std::vector<Sentence> terms;
  for (const auto& cube : cover) {
    std::vector<Sentence> literals;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      if (!((cube.care >> i) & 1U)) continue;
      Sentence a = Sentence::atom(vocab.name(i), vocab.tag());
      literals.push_back(((cube.bits >> i) & 1U) ? a : make_not(a));
    }
    terms.push_back(Sentence::conjunction(literals));
  }
  return Sentence::disjunction(terms);
}

}  // namespace ocn
