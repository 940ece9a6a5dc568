#pragma once

// Probabilistic mirror of an OCN: the same DAG quantified with conditional
// probabilities, a brute-force joint, and Bayes-conditioned queries.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocn/network.hpp"

namespace ocn {

inline constexpr double kProbabilityTolerance = 1e-9;

// P(P_i | A); P(!P_i | A) is either given explicitly or taken as the complement.
struct ProbabilityRow {
  double p_true = 0.0;
  std::optional<double> p_false;

  double for_sign(bool sign) const { return sign ? p_true : p_false.value_or(1.0 - p_true); }
};

class PcnQuantification {
 public:
  explicit PcnQuantification(const CausalNetwork& net) {
    rows_.resize(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) rows_[i].resize(instantiation_count(net, i));
  }

  void set(const ParentInstantiation& inst, ProbabilityRow row) {
    auto& slot = rows_.at(inst.node).at(inst.index());
    if (slot)
      duplicates_.push_back(inst);
    else
      slot = row;
  }

  const std::optional<ProbabilityRow>& row(const ParentInstantiation& inst) const {
    return rows_.at(inst.node).at(inst.index());
  }
  const ProbabilityRow& at(const ParentInstantiation& inst) const {
    const auto& r = row(inst);
    if (!r) throw InvalidQuantificationError("missing probability row");
    return *r;
  }

  const std::vector<ParentInstantiation>& duplicates() const noexcept { return duplicates_; }

 private:
  std::vector<std::vector<std::optional<ProbabilityRow>>> rows_;
  std::vector<ParentInstantiation> duplicates_;
};

struct PcnIssue {
  enum class Kind { MissingRow, DuplicateRow, Range, Sum };
  Kind kind;
  ParentInstantiation where;
  std::string message;
};

inline const char* to_string(PcnIssue::Kind k) {
  switch (k) {
    case PcnIssue::Kind::MissingRow: return "missing-row";
    case PcnIssue::Kind::DuplicateRow: return "duplicate-row";
    case PcnIssue::Kind::Range: return "range";
    case PcnIssue::Kind::Sum: return "sum";
  }
  return "";
}

struct PcnValidationReport {
  std::vector<PcnIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
};

inline PcnValidationReport validate_pcn(const CausalNetwork& net, const PcnQuantification& q) {
  PcnValidationReport report;
  for (const auto& dup : q.duplicates())
    report.issues.push_back({PcnIssue::Kind::DuplicateRow, dup, "row given more than once"});
  auto in_range = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::uint64_t k = 0; k < instantiation_count(net, i); ++k) {
      const auto inst = ParentInstantiation::from_index(net, i, k);
      const auto& row = q.row(inst);
      if (!row) {
        report.issues.push_back({PcnIssue::Kind::MissingRow, inst, "no probability row"});
        continue;
      }
      if (!in_range(row->p_true))
        report.issues.push_back({PcnIssue::Kind::Range, inst, "P(" + net.node_name(i) + ") = " +
                                                                   std::to_string(row->p_true) + " is outside [0, 1]"});
      if (row->p_false) {
        if (!in_range(*row->p_false))
          report.issues.push_back({PcnIssue::Kind::Range, inst, "P(!" + net.node_name(i) + ") = " +
                                                                     std::to_string(*row->p_false) + " is outside [0, 1]"});
        if (std::abs(row->p_true + *row->p_false - 1.0) > kProbabilityTolerance)
          report.issues.push_back({PcnIssue::Kind::Sum, inst, "P(" + net.node_name(i) + ") + P(!" + net.node_name(i) +
                                                                   ") = " + std::to_string(row->p_true + *row->p_false) +
                                                                   ", expected 1"});
      }
    }
  }
  return report;
}

class JointDistribution {
 public:
  JointDistribution(Vocabulary vocab, std::vector<double> probabilities)
      : vocab_(std::move(vocab)), p_(std::move(probabilities)) {
    if (p_.size() != vocab_.world_count()) throw InvalidQuantificationError("joint size does not match vocabulary");
  }

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  double probability(const World& w) const { return p_.at(w.index()); }
  double probability(std::uint64_t world_index) const { return p_.at(world_index); }
  const std::vector<double>& probabilities() const noexcept { return p_; }

  double total() const {
    double s = 0.0;
    for (double p : p_) s += p;
    return s;
  }

  double mass(const TruthTable& worlds) const {
    double s = 0.0;
    for (std::uint64_t i = 0; i < worlds.size(); ++i)
      if (worlds.test(i)) s += p_[i];
    return s;
  }

 private:
  Vocabulary vocab_;
  std::vector<double> p_;
};

struct ProbabilityFactor {
  ParentInstantiation given;
  bool sign;
  double value;
};

// P(P_i = sign | parents) for each node in topological order.
inline std::vector<ProbabilityFactor> factor_trace(const CausalNetwork& net, const PcnQuantification& q,
                                                   const World& world) {
  if (!(world.vocabulary() == net.nodes())) throw VocabularyError("world is not over the network's nodes");
  std::vector<ProbabilityFactor> out;
  for (auto i : net.topological_order()) {
    auto inst = ParentInstantiation::in_world(net, i, world);
    const bool sign = world.value(i);
    out.push_back({inst, sign, q.at(inst).for_sign(sign)});
  }
  return out;
}

inline JointDistribution assemble_joint(const CausalNetwork& net, const PcnQuantification& q) {
  const auto report = validate_pcn(net, q);
  if (!report.ok()) {
    const auto& first = report.issues.front();
    throw InvalidQuantificationError(std::string("invalid probabilities (") + to_string(first.kind) + " at " +
                                     describe(net, first.where) + "): " + first.message);
  }
  const Vocabulary& l = net.nodes();
  std::vector<double> p(l.world_count());
  for (std::uint64_t w = 0; w < p.size(); ++w) {
    double product = 1.0;
    for (const auto& f : factor_trace(net, q, World(l, w))) product *= f.value;
    p[w] = product;
  }
  return JointDistribution(l, std::move(p));
}

inline double prob_query(const JointDistribution& joint, const Sentence& query,
                         const std::optional<Sentence>& evidence = std::nullopt) {
  detail::require_tag(query, VocabularyTag::L, "queried sentence");
  const TruthTable q = truth_table(query, joint.vocabulary());
  if (!evidence) return joint.mass(q);
  detail::require_tag(*evidence, VocabularyTag::L, "evidence");
  const TruthTable e = truth_table(*evidence, joint.vocabulary());
  const double pe = joint.mass(e);
  if (pe <= 0.0) throw ZeroProbabilityError("evidence '" + render(*evidence) + "' has probability 0");
  return joint.mass(q & e) / pe;
}

inline double prob_query(const CausalNetwork& net, const PcnQuantification& q, const Sentence& query,
                         const std::optional<Sentence>& evidence = std::nullopt) {
  return prob_query(assemble_joint(net, q), query, evidence);
}

// Side-by-side answer of both quantifications to one query.
struct Comparison {
  Sentence objection;  // canonical form
  double probability;
  bool rejected;           // objection is tautologous
  bool zero_probability;   // probability is 0 within tolerance
  bool extremes_agree() const noexcept { return rejected == zero_probability; }
};

inline Comparison compare(const ObjectionState& state, const JointDistribution& joint, const Sentence& q,
                          const std::optional<Sentence>& evidence) {
  const Sentence objection = query(state, q, evidence);
  const double p = prob_query(joint, q, evidence);
  return {objection, p, is_valid(objection), std::abs(p) <= kProbabilityTolerance};
}

inline Comparison compare(const CausalNetwork& net, const OcnQuantification& ocn, const PcnQuantification& pcn,
                          const Sentence& q, const std::optional<Sentence>& evidence = std::nullopt) {
  return compare(assemble_state(net, ocn), assemble_joint(net, pcn), q, evidence);
}

}  // namespace ocn
