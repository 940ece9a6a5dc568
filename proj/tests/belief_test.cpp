#include <gtest/gtest.h>

#include "ocn/belief.hpp"
#include "oracle.hpp"

namespace ocn {
namespace {

const Vocabulary kBirdL(VocabularyTag::L, {"bird", "fly"});
const Vocabulary kBirdO(VocabularyTag::O, {"normal", "wingless"});

Sentence L(const std::string& text) { return parse_sentence(text, kBirdL); }
Sentence O(const std::string& text) { return parse_sentence(text, kBirdO); }

World bird_world(bool bird, bool fly) { return World(kBirdL, std::vector<bool>{bird, fly}); }

// The Tweety world table.
ObjectionState tweety() {
  return state_from_world_table(kBirdL, kBirdO,
                                {{bird_world(true, true), O("!normal")},
                                 {bird_world(true, false), O("normal")},
                                 {bird_world(false, true), O("true")},
                                 {bird_world(false, false), O("false")}});
}

TEST(StateFromWorldTable, TweetyIsValid) { EXPECT_NO_THROW(tweety()); }

TEST(StateFromWorldTable, SatisfiableConjunctionIsRejected) {
  EXPECT_NO_THROW(ObjectionState(kBirdL, kBirdO, std::vector<Sentence>(4, Sentence::constant(false))));
  try {
    ObjectionState(kBirdL, kBirdO, {O("normal"), O("normal | wingless"), O("true"), O("normal")});
    FAIL() << "expected ConsistencyError";
  } catch (const ConsistencyError& e) {
    EXPECT_NE(std::string(e.what()).find("normal"), std::string::npos);
  }
}

TEST(StateFromWorldTable, MissingAndDuplicateWorlds) {
  EXPECT_THROW(state_from_world_table(kBirdL, kBirdO, {{bird_world(true, true), O("false")}}), ConsistencyError);
  EXPECT_THROW(state_from_world_table(kBirdL, kBirdO,
                                      {{bird_world(true, true), O("false")},
                                       {bird_world(true, true), O("false")},
                                       {bird_world(false, true), O("false")},
                                       {bird_world(false, false), O("false")}}),
               ConsistencyError);
}

TEST(StateFromWorldTable, FalseEntryMakesAnyTableValid) {
  oracle::Generator gen(7);
  for (int i = 0; i < 50; ++i) {
    std::vector<Sentence> objections;
    for (int w = 0; w < 4; ++w) objections.push_back(gen.sentence(kBirdO, 3));
    objections[static_cast<std::size_t>(gen.uniform(0, 3))] = Sentence::constant(false);
    EXPECT_NO_THROW(ObjectionState(kBirdL, kBirdO, objections));
  }
}

TEST(StateFromWorldTable, VocabulariesMustBeTaggedAndDisjoint) {
  EXPECT_THROW(ObjectionState(kBirdO, kBirdL, {}), VocabularyError);
  const Vocabulary clash(VocabularyTag::O, {"bird"});
  EXPECT_THROW(ObjectionState(kBirdL, clash, std::vector<Sentence>(4, Sentence::constant(false))), VocabularyError);
}

TEST(ObjectionOf, TweetyColumns) {
  const auto s = tweety();
  EXPECT_TRUE(equivalent(objection_of(s, L("fly")), O("!normal")));
  EXPECT_TRUE(equivalent(objection_of(s, L("bird")), O("false")));
  EXPECT_TRUE(equivalent(objection_of(s, L("!bird")), O("false")));
  EXPECT_TRUE(equivalent(objection_of(s, L("!fly")), O("false")));
  EXPECT_TRUE(equivalent(objection_of(s, L("true")), O("false")));
  EXPECT_TRUE(equivalent(objection_of(s, L("false")), O("true")));
}

TEST(ObjectionOf, VocabularyMismatch) {
  EXPECT_THROW(objection_of(tweety(), O("normal")), VocabularyError);
  EXPECT_THROW(objection_of(tweety(), Sentence::atom("penguin", VocabularyTag::L)), UnknownAtomError);
}

TEST(RejectsAccepts, Tweety) {
  const auto s = tweety();
  EXPECT_TRUE(rejects(s, L("!bird & fly")));
  EXPECT_TRUE(rejects(s, L("false")));
  EXPECT_FALSE(accepts(s, L("bird")));
  EXPECT_TRUE(accepts(s, L("!(!bird & fly)")));
}

// Phi(P3 => P5) = O4 over a two-node language.
ObjectionState shoes() {
  const Vocabulary l(VocabularyTag::L, {"P3", "P5"});
  const Vocabulary o(VocabularyTag::O, {"O4"});
  std::vector<Sentence> objections;
  for (std::uint64_t w = 0; w < 4; ++w) {
    const World world(l, w);
    const bool grass_wet_shoes_dry = world.value("P3") && !world.value("P5");
    objections.push_back(parse_sentence(grass_wet_shoes_dry ? "!O4" : "O4", o));
  }
  return ObjectionState(l, o, objections);
}

TEST(ObjectsAdmitsUnder, ShoesExample) {
  const auto s = shoes();
  const Sentence impl = parse_sentence("P3 => P5", s.l_vocab());
  const Sentence o4 = parse_sentence("O4", s.o_vocab());
  EXPECT_TRUE(equivalent(objection_of(s, impl), o4));
  EXPECT_TRUE(objects_under(s, impl, o4));
  EXPECT_TRUE(admits_under(s, impl, make_not(o4)));
  EXPECT_FALSE(objects_under(s, impl, make_not(o4)));
  EXPECT_FALSE(admits_under(s, impl, o4));
}

TEST(ObjectsAdmitsUnder, FalseAndReflexivity) {
  const auto s = tweety();
  oracle::Generator gen(11);
  for (int i = 0; i < 30; ++i) {
    const Sentence a = gen.sentence(kBirdL, 3);
    EXPECT_TRUE(objects_under(s, a, Sentence::constant(false)));
    EXPECT_TRUE(admits_under(s, a, Sentence::constant(false)));
    EXPECT_TRUE(objects_under(s, a, objection_of(s, a)));
  }
  // Phi(bird) = false, so bird is admitted under anything.
  EXPECT_TRUE(admits_under(s, L("bird"), Sentence::constant(true)));
  EXPECT_THROW(objects_under(s, L("bird"), L("fly")), VocabularyError);
}

TEST(Conditionalize, OnTautologyChangesNothing) {
  const auto s = tweety();
  const auto c = conditionalize(s, L("true"));
  oracle::Generator gen(3);
  for (int i = 0; i < 30; ++i) {
    const Sentence b = gen.sentence(kBirdL, 3);
    EXPECT_TRUE(equivalent(objection_of(c, b), objection_of(s, b)));
  }
}

TEST(Conditionalize, TweetyOnBird) {
  const auto s = tweety();
  const auto c = conditionalize(s, L("bird"));
  EXPECT_TRUE(equivalent(objection_of(c, L("fly")), O("!normal")));
  EXPECT_TRUE(rejects(c, L("!bird")));
  EXPECT_TRUE(equivalent(objection_of(c, L("bird")), O("false")));
}

TEST(Conditionalize, RejectedEvidence) {
  EXPECT_THROW(conditionalize(tweety(), L("!bird & fly")), RejectedEvidenceError);
  EXPECT_THROW(conditionalize(tweety(), L("false")), RejectedEvidenceError);
}

TEST(Product, Examples) {
  const Sentence b = O("normal | wingless");
  EXPECT_TRUE(equivalent(product(O("false"), b), b));
  EXPECT_THROW(product(O("wingless"), O("!normal")), ContradictoryAssessmentError);
  EXPECT_TRUE(is_valid(product(O("normal"), O("true"))));
  EXPECT_THROW(product(O("true"), O("false")), RejectedConditionError);
  EXPECT_TRUE(equivalent(product(O("wingless"), O("!normal & !wingless")), O("!normal | wingless")));
}

TEST(NormalizeConditional, Examples) {
  EXPECT_TRUE(equivalent(normalize_conditional(O("!normal"), O("wingless")), O("!normal & !wingless")));
  EXPECT_TRUE(equivalent(normalize_conditional(O("normal"), O("false")), O("normal")));
  EXPECT_TRUE(is_valid(normalize_conditional(O("true"), O("wingless"))));
  EXPECT_NO_THROW(product(O("wingless"), normalize_conditional(O("!normal"), O("wingless"))));
}

TEST(Orderings, TweetyCaption) {
  const auto s = tweety();
  EXPECT_TRUE(no_more_objectionable(s, L("!bird"), L("!fly")).holds);
  EXPECT_TRUE(no_more_objectionable(s, L("bird"), L("fly")).holds);
  EXPECT_FALSE(no_more_objectionable(s, L("fly"), L("bird")).holds);
  EXPECT_TRUE(no_more_objectionable(s, L("fly"), L("fly")).holds);
}

TEST(Orderings, BeliefNeedsBothConditions) {
  const auto s = tweety();
  const auto fly_bird = no_more_believed(s, L("fly"), L("bird"));
  EXPECT_TRUE(fly_bird.holds);
  ASSERT_EQ(fly_bird.checks.size(), 2u);
  EXPECT_TRUE(fly_bird.checks[0].holds && fly_bird.checks[1].holds);

  const auto bird_fly = no_more_believed(s, L("bird"), L("fly"));
  EXPECT_FALSE(bird_fly.holds);
  // Condition (a) fails, (b) holds: neither is implied by the other here.
  EXPECT_FALSE(bird_fly.checks[0].holds);
  EXPECT_TRUE(bird_fly.checks[1].holds);
  EXPECT_TRUE(no_more_believed(s, L("bird"), L("bird")).holds);
}

TEST(Orderings, VerdictsAreReproducible) {
  const auto s = tweety();
  oracle::Generator gen(5);
  for (int i = 0; i < 40; ++i) {
    const Sentence a = gen.sentence(kBirdL, 3);
    const Sentence b = gen.sentence(kBirdL, 3);
    for (const auto& v : {no_more_objectionable(s, a, b), no_more_believed(s, a, b), no_more_ignorant(s, a, b)})
      EXPECT_EQ(recheck(v), v.holds);
  }
}

TEST(Ignorance, MaximalMinimalAndTweety) {
  const Vocabulary l(VocabularyTag::L, {"P1"});
  const Vocabulary o(VocabularyTag::O, {"x"});
  const Sentence p1 = parse_sentence("P1", l);
  const ObjectionState blank(l, o, {Sentence::constant(false), Sentence::constant(false)});
  EXPECT_TRUE(is_valid(ignorance(blank, p1)));
  const ObjectionState sharp(l, o, {parse_sentence("!x", o), parse_sentence("x", o)});
  EXPECT_TRUE(is_unsatisfiable(ignorance(sharp, p1)));

  const auto s = tweety();
  EXPECT_TRUE(equivalent(ignorance(s, L("fly")), O("normal")));
  EXPECT_TRUE(no_more_ignorant(s, L("fly"), L("bird")).holds);
  EXPECT_TRUE(no_more_ignorant(sharp, p1, p1).holds);
}

// Random states: <= 4 L atoms, <= 5 O atoms.
class CalculusProperties : public ::testing::Test {
 protected:
  oracle::Generator gen{424242};

  template <typename F>
  void for_random_states(int count, F&& check) {
    for (int i = 0; i < count; ++i) {
      const Vocabulary l = gen.vocabulary(VocabularyTag::L, "P", 1, 4);
      const Vocabulary o = gen.vocabulary(VocabularyTag::O, "O", 1, 5);
      check(gen.state(l, o));
    }
  }
};

TEST_F(CalculusProperties, DisjunctionAndEquivalence) {
  for_random_states(60, [&](const ObjectionState& s) {
    for (int k = 0; k < 5; ++k) {
      const Sentence a = gen.sentence(s.l_vocab(), 3);
      const Sentence b = gen.sentence(s.l_vocab(), 3);
      EXPECT_TRUE(equivalent(objection_of(s, make_or(a, b)), make_and(objection_of(s, a), objection_of(s, b)),
                             s.o_vocab()));
      EXPECT_TRUE(equivalent(objection_of(s, a), objection_of(s, canonical_form(a, s.l_vocab())), s.o_vocab()));
      EXPECT_TRUE(is_unsatisfiable(make_and(objection_of(s, a), objection_of(s, make_not(a)))));
      EXPECT_TRUE(equivalent(ignorance(s, a), ignorance(s, make_not(a)), s.o_vocab()));
      EXPECT_TRUE(is_unsatisfiable(objection_of(s, Sentence::constant(true))));
    }
  });
}

TEST_F(CalculusProperties, ObjectionMatchesOracle) {
  for_random_states(40, [&](const ObjectionState& s) {
    const auto table = oracle::table_of(s);
    for (int k = 0; k < 5; ++k) {
      const Sentence a = gen.sentence(s.l_vocab(), 3);
      EXPECT_TRUE(oracle::brute_equivalent(objection_of(s, a), oracle::objection(table, a)));
    }
  });
}

TEST_F(CalculusProperties, ConditionalizationLaws) {
  for_random_states(60, [&](const ObjectionState& s) {
    const auto table = oracle::table_of(s);
    for (int k = 0; k < 4; ++k) {
      const Sentence a = gen.sentence(s.l_vocab(), 3);
      if (rejects(s, a)) {
        EXPECT_THROW(conditionalize(s, a), RejectedEvidenceError);
        continue;
      }
      const auto c = conditionalize(s, a);
      EXPECT_TRUE(accepts(c, a));
      EXPECT_TRUE(is_unsatisfiable(objection_of(c, a)));
      const auto cc = conditionalize(c, a);
      const Sentence b = gen.sentence(s.l_vocab(), 3);
      EXPECT_TRUE(equivalent(objection_of(cc, b), objection_of(c, b), s.o_vocab()));
      EXPECT_TRUE(oracle::brute_equivalent(objection_of(c, b), oracle::conditional(table, a, b)));

      // Product rule whenever its side conditions hold.
      const Sentence phi_a = objection_of(s, a);
      const Sentence phi_a_b = objection_of(c, b);
      if (is_valid(phi_a_b) || is_unsatisfiable(make_and(phi_a_b, phi_a))) {
        EXPECT_TRUE(equivalent(product(phi_a, phi_a_b), objection_of(s, make_and(a, b)), s.o_vocab()));
      }
    }
  });
}

TEST_F(CalculusProperties, NormalizeRestoresProductPrecondition) {
  for (int i = 0; i < 300; ++i) {
    const Vocabulary o = gen.vocabulary(VocabularyTag::O, "O", 1, 5);
    const Sentence phi_a = gen.sentence(o, 3);
    const Sentence b = gen.sentence(o, 3);
    if (is_valid(phi_a)) {
      EXPECT_THROW(product(phi_a, b), RejectedConditionError);
      continue;
    }
    EXPECT_NO_THROW(product(phi_a, normalize_conditional(b, phi_a))) << render(phi_a) << " / " << render(b);
  }
}

}  // namespace
}  // namespace ocn
