#pragma once

// Objection-based states of belief. A state maps every sentence A of the
// domain language L to an objection Phi(A) in the objection language O.
//
// The canonical representation is a world table: one objection per L-world.
// The objection to an arbitrary sentence is the conjunction of the objections
// of its models, which makes Phi(A | B) == Phi(A) & Phi(B) and invariance
// under equivalence hold by construction. The empty conjunction is true, so
// contradictions are rejected.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocn/logic.hpp"

namespace ocn {

class ObjectionState {
 public:
  // Builds a state from one (world, objection) entry per L-world. Throws
  // ConsistencyError on missing or duplicate worlds and when the conjunction
  // of all objections is satisfiable (the tautology would have a consistent
  // objection); the message names a satisfying O-assignment.
  static ObjectionState from_world_table(Vocabulary l_vocab, Vocabulary o_vocab,
                                         const std::vector<std::pair<World, Sentence>>& entries) {
    check_vocabularies(l_vocab, o_vocab);
    const std::uint64_t n = l_vocab.world_count();
    std::vector<std::optional<Sentence>> slots(n);
    for (const auto& [world, objection] : entries) {
      if (!(world.vocabulary() == l_vocab))
        throw ConsistencyError("world table entry over a different L vocabulary");
      if (slots[world.index()])
        throw ConsistencyError("duplicate world '" + render(world.to_sentence()) + "'");
      slots[world.index()] = objection;
    }
    std::vector<Sentence> objections;
    objections.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (!slots[i]) throw ConsistencyError("missing world '" + render(World(l_vocab, i).to_sentence()) + "'");
      objections.push_back(*slots[i]);
    }
    return ObjectionState(std::move(l_vocab), std::move(o_vocab), std::move(objections));
  }

  // Objections listed in canonical world order.
  ObjectionState(Vocabulary l_vocab, Vocabulary o_vocab, std::vector<Sentence> objections) {
    check_vocabularies(l_vocab, o_vocab);
    if (objections.size() != l_vocab.world_count())
      throw ConsistencyError("world table has " + std::to_string(objections.size()) + " entries, expected " +
                             std::to_string(l_vocab.world_count()));
    std::vector<TruthTable> tables;
    tables.reserve(objections.size());
    for (const auto& s : objections) tables.push_back(truth_table(s, o_vocab));
    init(std::move(l_vocab), std::move(o_vocab), std::move(objections), std::move(tables));
  }

  const Vocabulary& l_vocab() const noexcept { return data_->l_vocab; }
  const Vocabulary& o_vocab() const noexcept { return data_->o_vocab; }
  std::uint64_t world_count() const noexcept { return data_->objections.size(); }

  const Sentence& objection(const World& w) const { return data_->objections.at(checked_index(w)); }
  const TruthTable& objection_table(const World& w) const { return data_->tables.at(checked_index(w)); }
  const Sentence& objection(std::uint64_t world_index) const { return data_->objections.at(world_index); }
  const TruthTable& objection_table(std::uint64_t world_index) const { return data_->tables.at(world_index); }

  // O-table of the conjunction of the objections of every world in `worlds`.
  TruthTable conjoined(const TruthTable& worlds) const {
    TruthTable out(o_vocab().size(), true);
    for (std::uint64_t i = 0; i < worlds.size(); ++i)
      if (worlds.test(i)) out &= data_->tables[i];
    return out;
  }

  // Used by operations that already hold O-tables; skips re-evaluation.
  static ObjectionState from_tables(Vocabulary l_vocab, Vocabulary o_vocab, std::vector<TruthTable> tables) {
    std::vector<Sentence> objections;
    objections.reserve(tables.size());
    for (const auto& t : tables) objections.push_back(sentence_from_table(t, o_vocab));
    ObjectionState s;
    s.init(std::move(l_vocab), std::move(o_vocab), std::move(objections), std::move(tables));
    return s;
  }

 private:
  struct Data {
    Vocabulary l_vocab;
    Vocabulary o_vocab;
    std::vector<Sentence> objections;
    std::vector<TruthTable> tables;
  };

  ObjectionState() = default;

  static void check_vocabularies(const Vocabulary& l_vocab, const Vocabulary& o_vocab) {
    if (l_vocab.tag() != VocabularyTag::L || o_vocab.tag() != VocabularyTag::O)
      throw VocabularyError("objection state needs an L vocabulary and an O vocabulary");
    check_disjoint(l_vocab, o_vocab);
    o_vocab.world_count();
  }

  void init(Vocabulary l_vocab, Vocabulary o_vocab, std::vector<Sentence> objections,
            std::vector<TruthTable> tables) {
    TruthTable all(o_vocab.size(), true);
    for (const auto& t : tables) all &= t;
    if (auto witness = all.first()) {
      throw ConsistencyError("the tautology has a satisfiable objection; all world objections hold under " +
                             render(World(o_vocab, *witness).to_sentence()));
    }
    data_ = std::make_shared<const Data>(
        Data{std::move(l_vocab), std::move(o_vocab), std::move(objections), std::move(tables)});
  }

  std::uint64_t checked_index(const World& w) const {
    if (!(w.vocabulary() == l_vocab())) throw VocabularyError("world is not over the state's L vocabulary");
    return w.index();
  }

  std::shared_ptr<const Data> data_;
};

inline ObjectionState state_from_world_table(Vocabulary l_vocab, Vocabulary o_vocab,
                                             const std::vector<std::pair<World, Sentence>>& entries) {
  return ObjectionState::from_world_table(std::move(l_vocab), std::move(o_vocab), entries);
}

namespace detail {

inline void require_tag(const Sentence& s, VocabularyTag tag, const char* what) {
  if (s.tag() && *s.tag() != tag)
    throw VocabularyError(std::string(what) + " must be a sentence over the " + to_string(tag) + " vocabulary");
}

}  // namespace detail

// O-table of Phi(a).
inline TruthTable objection_table(const ObjectionState& state, const Sentence& a) {
  detail::require_tag(a, VocabularyTag::L, "queried sentence");
  return state.conjoined(truth_table(a, state.l_vocab()));
}

// Phi(a) in canonical form over the state's O vocabulary.
inline Sentence objection_of(const ObjectionState& state, const Sentence& a) {
  return sentence_from_table(objection_table(state, a), state.o_vocab());
}

inline bool rejects(const ObjectionState& state, const Sentence& a) { return objection_table(state, a).all(); }
inline bool accepts(const ObjectionState& state, const Sentence& a) { return rejects(state, make_not(a)); }

// alpha |= Phi(a)
inline bool objects_under(const ObjectionState& state, const Sentence& a, const Sentence& alpha) {
  detail::require_tag(alpha, VocabularyTag::O, "alpha");
  return truth_table(alpha, state.o_vocab()).subset_of(objection_table(state, a));
}

// alpha |= !Phi(a)
inline bool admits_under(const ObjectionState& state, const Sentence& a, const Sentence& alpha) {
  detail::require_tag(alpha, VocabularyTag::O, "alpha");
  return truth_table(alpha, state.o_vocab()).subset_of(~objection_table(state, a));
}

// Belief change on observing a non-rejected sentence a:
//   Phi_a(B) = true                     if Phi(a & B) is tautologous
//            = Phi(a & B) & !Phi(a)     otherwise
// applied world by world. Worlds outside a get true.
inline ObjectionState conditionalize(const ObjectionState& state, const Sentence& a) {
  const TruthTable worlds = truth_table(a, state.l_vocab());
  const TruthTable phi_a = state.conjoined(worlds);
  if (phi_a.all()) throw RejectedEvidenceError("evidence '" + render(a) + "' is rejected (its objection is tautologous)");
  const TruthTable admit = ~phi_a;
  const TruthTable tautology(state.o_vocab().size(), true);
  std::vector<TruthTable> tables;
  tables.reserve(state.world_count());
  for (std::uint64_t i = 0; i < state.world_count(); ++i) {
    const TruthTable& t = state.objection_table(i);
    if (!worlds.test(i) || t.all())
      tables.push_back(tautology);
    else
      tables.push_back(t & admit);
  }
  return ObjectionState::from_tables(state.l_vocab(), state.o_vocab(), std::move(tables));
}

// Product rule: Phi(A & B) == Phi_A(B) | Phi(A), given Phi(A) is not
// tautologous and Phi_A(B) is either tautologous or inconsistent with Phi(A).
inline Sentence product(const Sentence& phi_a, const Sentence& phi_a_b) {
  if (is_valid(phi_a)) throw RejectedConditionError("the condition's objection '" + render(phi_a) + "' is tautologous");
  if (!is_valid(phi_a_b) && is_satisfiable(make_and(phi_a_b, phi_a)))
    throw ContradictoryAssessmentError("conditional objection '" + render(phi_a_b) +
                                       "' is consistent with the condition's objection '" + render(phi_a) + "'");
  return make_or(phi_a_b, phi_a);
}

// Reads an elicited conditional objection b as b & !Phi(A), which always
// satisfies the product rule's side condition. Tautologous b is returned as is.
inline Sentence normalize_conditional(const Sentence& b, const Sentence& phi_a) {
  if (is_valid(b)) return b;
  return make_and(b, make_not(phi_a));
}

// ---------------------------------------------------------------------------
// Orderings and ignorance

enum class Ordering { NoMoreObjectionable, NoMoreBelieved, NoMoreIgnorant };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::NoMoreObjectionable: return "no-more-objectionable";
    case Ordering::NoMoreBelieved: return "no-more-believed";
    case Ordering::NoMoreIgnorant: return "no-more-ignorant";
  }
  return "";
}

struct EntailmentCheck {
  Sentence premise;
  Sentence conclusion;
  bool holds;
};

struct OrderingVerdict {
  Ordering relation;
  bool holds;
  std::vector<EntailmentCheck> checks;
};

// Re-runs the recorded entailments; agrees with verdict.holds.
inline bool recheck(const OrderingVerdict& v) {
  return std::all_of(v.checks.begin(), v.checks.end(),
                     [](const EntailmentCheck& c) { return entails(c.premise, c.conclusion); });
}

namespace detail {

inline EntailmentCheck entailment_check(const Sentence& premise, const Sentence& conclusion, const Vocabulary& o) {
  return {premise, conclusion, entails(premise, conclusion, o)};
}

inline OrderingVerdict make_verdict(Ordering relation, std::vector<EntailmentCheck> checks) {
  const bool holds = std::all_of(checks.begin(), checks.end(), [](const EntailmentCheck& c) { return c.holds; });
  return {relation, holds, std::move(checks)};
}

}  // namespace detail

// Phi(a) |= Phi(b)
inline OrderingVerdict no_more_objectionable(const ObjectionState& state, const Sentence& a, const Sentence& b) {
  return detail::make_verdict(Ordering::NoMoreObjectionable,
                              {detail::entailment_check(objection_of(state, a), objection_of(state, b),
                                                        state.o_vocab())});
}

// Phi(b) |= Phi(a) and Phi(!a) |= Phi(!b)
inline OrderingVerdict no_more_believed(const ObjectionState& state, const Sentence& a, const Sentence& b) {
  const auto& o = state.o_vocab();
  return detail::make_verdict(
      Ordering::NoMoreBelieved,
      {detail::entailment_check(objection_of(state, b), objection_of(state, a), o),
       detail::entailment_check(objection_of(state, make_not(a)), objection_of(state, make_not(b)), o)});
}

// !Phi(a) & !Phi(!a): the weakest O-sentence under which both a and !a are admitted.
inline Sentence ignorance(const ObjectionState& state, const Sentence& a) {
  const TruthTable t = ~objection_table(state, a) & ~objection_table(state, make_not(a));
  return sentence_from_table(t, state.o_vocab());
}

inline OrderingVerdict no_more_ignorant(const ObjectionState& state, const Sentence& a, const Sentence& b) {
  return detail::make_verdict(Ordering::NoMoreIgnorant,
                              {detail::entailment_check(ignorance(state, a), ignorance(state, b), state.o_vocab())});
}

}  // namespace ocn
