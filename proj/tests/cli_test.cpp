#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"

namespace ocn {
namespace {

const std::string kData = OCN_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ocn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string grass() { return kData + "/grass.ocn"; }
std::string birdfly() { return kData + "/birdfly.obs"; }

const Vocabulary& grass_o() {
  static const Vocabulary o(VocabularyTag::O, {"O1", "O2", "O3", "O4", "O5"});
  return o;
}

TEST(Cli, QueryWorkedWorld) {
  const auto r = run({"query", grass(), "P5 & P4 & P3 & !P2 & P1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Sentence objection = parse_sentence(r.out, grass_o());
  EXPECT_TRUE(equivalent(objection, parse_sentence("O4 | O3 | O1", grass_o())));
}

TEST(Cli, QueryJsonRoundTrip) {
  const auto r = run({"query", grass(), "P5", "--given", "P3", "--format", "json", "--pretty"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = cli::Json::parse(r.out);
  EXPECT_EQ(j["given"], "P3");
  EXPECT_FALSE(j["rejected"].get<bool>());
  const auto expected = parse_sentence("O4 & !O1", grass_o());
  EXPECT_TRUE(equivalent(parse_sentence(j["objection"].get<std::string>(), grass_o()), expected, grass_o()));
  EXPECT_TRUE(equivalent(parse_sentence(j["objection_simplified"].get<std::string>(), grass_o()), expected, grass_o()));
}

TEST(Cli, Prob) {
  const auto r = run({"prob", grass(), "P5 & P4 & P3 & !P2 & P1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.151875\n");
  const auto j = cli::Json::parse(run({"prob", kData + "/grass.pcn", "P5", "--given", "P3", "--format", "json"}).out);
  EXPECT_NEAR(j["probability"].get<double>(), 0.9, 1e-12);
}

TEST(Cli, DomainErrorsExitOne) {
  EXPECT_EQ(run({"query", grass(), "P5", "--given", "!P1 & !P2 & P3"}).code, 1);
  EXPECT_EQ(run({"prob", grass(), "P5", "--given", "!P1 & !P2 & P3"}).code, 1);
  EXPECT_EQ(run({"query", kData + "/grass_verbatim.ocn", "P3"}).code, 1);
  const auto v = run({"validate", kData + "/grass_verbatim.ocn"});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("inconsistent at P4 | P3"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate", grass()}).code, 2);
  EXPECT_EQ(run({"query", grass()}).code, 2);
  EXPECT_EQ(run({"query", grass(), "P1 &"}).code, 2);
  EXPECT_EQ(run({"query", grass(), "Q1"}).code, 2);
  EXPECT_EQ(run({"query", grass(), "P1", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"query", kData + "/missing.ocn", "P1"}).code, 2);
  EXPECT_EQ(run({"prob", birdfly(), "fly"}).code, 2);
  EXPECT_EQ(run({"markov", birdfly()}).code, 2);
  EXPECT_EQ(run({"order", birdfly(), "fly"}).code, 2);
  EXPECT_EQ(run({"query", kData + "/grass.pcn", "P1"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("markov"), std::string::npos);
}

TEST(Cli, ValidateAndRemedy) {
  EXPECT_EQ(run({"validate", grass()}).out, "ocn: ok\npcn: ok\n");
  const auto r = run({"validate", grass(), "--remedy", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  const auto j = cli::Json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["product_conditions"].size(), 4u);
  EXPECT_EQ(run({"validate", birdfly()}).code, 0);
}

TEST(Cli, WorldsDumpReloads) {
  for (const auto& file : {birdfly(), grass()}) {
    const auto r = run({"worlds", file});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto reloaded = parse_state(r.out);
    const auto original = cli::Model(file).state();
    ASSERT_EQ(reloaded.state.world_count(), original.world_count());
    for (std::uint64_t w = 0; w < original.world_count(); ++w)
      EXPECT_EQ(reloaded.state.objection_table(w), original.objection_table(w));
  }
  EXPECT_EQ(parse_state(run({"worlds", birdfly()}).out).name, "birdfly");
}

TEST(Cli, WorldsJsonRoundTrip) {
  const auto j = cli::Json::parse(run({"worlds", grass(), "--format", "json"}).out);
  const auto state = cli::Model(grass()).state();
  double total = 0.0;
  std::uint64_t w = 0;
  for (const auto& row : j["worlds"]) {
    EXPECT_TRUE(equivalent(parse_sentence(row["objection"].get<std::string>(), grass_o()), state.objection(w),
                           grass_o()));
    total += row["probability"].get<double>();
    ++w;
  }
  EXPECT_EQ(w, 32u);
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Cli, MarkovReportsViolationsAndSummary) {
  const auto r = run({"markov", grass()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("verified 40, vacuous 16, violated 24"), std::string::npos);
  const auto j = cli::Json::parse(run({"markov", grass(), "--format", "json"}).out);
  EXPECT_EQ(j["entries"].size(), 80u);
}

TEST(Cli, OrderIgnoranceCompareExplain) {
  const auto order = run({"order", birdfly(), "fly", "bird"});
  EXPECT_EQ(order.out, "no-more-objectionable: fails\nno-more-believed: holds\nno-more-ignorant: holds\n");
  EXPECT_EQ(run({"ignorance", birdfly(), "fly"}).out, "normal\n");

  const auto cmp = cli::Json::parse(run({"compare", grass(), "P3", "--given", "!P1 & !P2", "--format", "json"}).out);
  EXPECT_TRUE(cmp["rejected"].get<bool>());
  EXPECT_TRUE(cmp["zero_probability"].get<bool>());
  EXPECT_TRUE(cmp["extremes_agree"].get<bool>());

  const auto ex = run({"explain", grass(), "P5 & P4 & P3 & !P2 & P1"});
  EXPECT_EQ(ex.code, 0);
  EXPECT_NE(ex.out.find("P3 | P1 & !P2 : O1\n"), std::string::npos);
  EXPECT_NE(ex.out.find("probability: 0.151875\n"), std::string::npos);
  EXPECT_EQ(run({"explain", grass(), "P1"}).code, 2);
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"worlds", grass(), "--pretty"}, {"markov", grass(), "--format", "json"},
        {"validate", grass(), "--remedy"}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
}

}  // namespace
}  // namespace ocn
