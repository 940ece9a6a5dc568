#pragma once

// Causal networks quantified with objections: table validation, chain-rule
// assembly of the world table, evidence queries, and the irrelevance check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ocn/belief.hpp"
#include "ocn/logic.hpp"

namespace ocn {

inline constexpr std::size_t kMaxNetworkNodes = 16;

// Unquantified DAG. Nodes are the atoms of the L vocabulary, in declaration
// order; that order is also the canonical world order.
class CausalNetwork {
 public:
  CausalNetwork(std::string name, const std::vector<std::string>& nodes,
                const std::vector<std::vector<std::string>>& parents)
      : name_(std::move(name)), nodes_(VocabularyTag::L, nodes) {
    if (nodes.size() > kMaxNetworkNodes)
      throw NetworkError("network has " + std::to_string(nodes.size()) + " nodes, limit is " +
                         std::to_string(kMaxNetworkNodes));
    if (parents.size() != nodes.size()) throw NetworkError("parent lists do not match node count");
    parents_.resize(nodes.size());
    children_.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (const auto& p : parents[i]) {
        auto j = nodes_.index_of(p);
        if (!j) throw NetworkError("node '" + nodes[i] + "' has undeclared parent '" + p + "'");
        if (std::find(parents_[i].begin(), parents_[i].end(), *j) != parents_[i].end())
          throw NetworkError("node '" + nodes[i] + "' lists parent '" + p + "' twice");
        parents_[i].push_back(*j);
        children_[*j].push_back(i);
      }
    }
    order_ = kahn_order();
    if (order_.size() != nodes.size()) throw NetworkError("network '" + name_ + "' contains a cycle");
  }

  const std::string& name() const noexcept { return name_; }
  const Vocabulary& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::string& node_name(std::size_t i) const { return nodes_.name(i); }
  std::optional<std::size_t> index_of(std::string_view name) const { return nodes_.index_of(name); }

  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_.at(i); }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_.at(i); }

  // Topological order, ties broken by declaration order.
  const std::vector<std::size_t>& topological_order() const noexcept { return order_; }

  std::vector<bool> descendants(std::size_t i) const {
    std::vector<bool> seen(size(), false);
    std::vector<std::size_t> stack(children_.at(i).begin(), children_.at(i).end());
    while (!stack.empty()) {
      auto j = stack.back();
      stack.pop_back();
      if (seen[j]) continue;
      seen[j] = true;
      stack.insert(stack.end(), children_[j].begin(), children_[j].end());
    }
    return seen;
  }

  // Non-descendants of i other than i itself and its parents.
  std::vector<std::size_t> non_descendants(std::size_t i) const {
    const auto desc = descendants(i);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j == i || desc[j]) continue;
      if (std::find(parents_[i].begin(), parents_[i].end(), j) != parents_[i].end()) continue;
      out.push_back(j);
    }
    return out;
  }

  // Whether `order` lists every node once with parents before children.
  bool is_topological(const std::vector<std::size_t>& order) const {
    if (order.size() != size()) return false;
    std::vector<std::size_t> pos(size(), size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (order[k] >= size() || pos[order[k]] != size()) return false;
      pos[order[k]] = k;
    }
    for (std::size_t i = 0; i < size(); ++i)
      for (auto p : parents_[i])
        if (pos[p] > pos[i]) return false;
    return true;
  }

 private:
  std::vector<std::size_t> kahn_order() const {
    std::vector<std::size_t> indegree(size());
    for (std::size_t i = 0; i < size(); ++i) indegree[i] = parents_[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < size(); ++i)
      if (indegree[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      auto i = ready.top();
      ready.pop();
      order.push_back(i);
      for (auto c : children_[i])
        if (--indegree[c] == 0) ready.push(c);
    }
    return order;
  }

  std::string name_;
  Vocabulary nodes_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> order_;
};

// One sign per parent of `node`: the conjunction [D(i)] a table row is
// conditioned on. Bit k of index() is the sign of the k-th parent.
struct ParentInstantiation {
  std::size_t node = 0;
  std::vector<bool> signs;

  static ParentInstantiation from_index(const CausalNetwork& net, std::size_t node, std::uint64_t index) {
    ParentInstantiation inst{node, std::vector<bool>(net.parents(node).size())};
    for (std::size_t k = 0; k < inst.signs.size(); ++k) inst.signs[k] = (index >> k) & 1U;
    return inst;
  }

  // The instantiation that `world` (over the network's nodes) selects.
  static ParentInstantiation in_world(const CausalNetwork& net, std::size_t node, const World& world) {
    ParentInstantiation inst{node, {}};
    for (auto p : net.parents(node)) inst.signs.push_back(world.value(p));
    return inst;
  }

  std::uint64_t index() const {
    std::uint64_t i = 0;
    for (std::size_t k = 0; k < signs.size(); ++k)
      if (signs[k]) i |= std::uint64_t{1} << k;
    return i;
  }

  // Conjunction of parent literals; true for roots.
  Sentence to_sentence(const CausalNetwork& net) const {
    std::vector<Sentence> literals;
    const auto& parents = net.parents(node);
    for (std::size_t k = 0; k < parents.size(); ++k) {
      Sentence a = Sentence::atom(net.node_name(parents[k]), VocabularyTag::L);
      literals.push_back(signs[k] ? a : make_not(a));
    }
    return Sentence::conjunction(literals);
  }

  friend bool operator==(const ParentInstantiation&, const ParentInstantiation&) = default;
};

inline std::uint64_t instantiation_count(const CausalNetwork& net, std::size_t node) {
  return std::uint64_t{1} << net.parents(node).size();
}

// Phi_A(P_i) and Phi_A(!P_i) for one parent instantiation A.
struct ObjectionRow {
  Sentence positive;
  Sentence negative;

  const Sentence& for_sign(bool sign) const { return sign ? positive : negative; }
};

// Conditional objection tables, 2^(n+1) objections per node with n parents.
// Rows are optional so incomplete tables can be represented and reported.
class OcnQuantification {
 public:
  OcnQuantification(const CausalNetwork& net, Vocabulary o_vocab) : o_vocab_(std::move(o_vocab)) {
    if (o_vocab_.tag() != VocabularyTag::O) throw VocabularyError("objection vocabulary must be tagged O");
    check_disjoint(net.nodes(), o_vocab_);
    o_vocab_.world_count();
    rows_.resize(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) rows_[i].resize(instantiation_count(net, i));
  }

  const Vocabulary& o_vocab() const noexcept { return o_vocab_; }

  // A second row for the same (node, instantiation) keeps the first and is
  // recorded as a duplicate.
  void set(const ParentInstantiation& inst, ObjectionRow row) {
    auto& slot = rows_.at(inst.node).at(inst.index());
    if (slot)
      duplicates_.push_back(inst);
    else
      slot = std::move(row);
  }

  // Overwrites unconditionally.
  void replace(const ParentInstantiation& inst, ObjectionRow row) { rows_.at(inst.node).at(inst.index()) = std::move(row); }

  const std::optional<ObjectionRow>& row(const ParentInstantiation& inst) const {
    return rows_.at(inst.node).at(inst.index());
  }
  const ObjectionRow& at(const ParentInstantiation& inst) const {
    const auto& r = row(inst);
    if (!r) throw InvalidQuantificationError("missing objection row");
    return *r;
  }

  const std::vector<ParentInstantiation>& duplicates() const noexcept { return duplicates_; }

 private:
  Vocabulary o_vocab_;
  std::vector<std::vector<std::optional<ObjectionRow>>> rows_;
  std::vector<ParentInstantiation> duplicates_;
};

// ---------------------------------------------------------------------------
// Validation

struct OcnIssue {
  enum class Kind {
    MissingRow,
    DuplicateRow,
    BadSentence,
    Inconsistent,      // Phi_A(P_i) & Phi_A(!P_i) is satisfiable
    ProductCondition,  // opt-in: an entry violates the product rule's side condition
  };
  Kind kind;
  ParentInstantiation where;
  std::optional<World> witness;  // O-assignment satisfying both objections
  std::string message;
};

inline const char* to_string(OcnIssue::Kind k) {
  switch (k) {
    case OcnIssue::Kind::MissingRow: return "missing-row";
    case OcnIssue::Kind::DuplicateRow: return "duplicate-row";
    case OcnIssue::Kind::BadSentence: return "bad-sentence";
    case OcnIssue::Kind::Inconsistent: return "inconsistent";
    case OcnIssue::Kind::ProductCondition: return "product-condition";
  }
  return "";
}

struct OcnValidationReport {
  std::vector<OcnIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
};

struct OcnValidationOptions {
  // Also report entries b with b not tautologous and b & Phi([D(i)])
  // satisfiable, where Phi([D(i)]) is the objection to the parent
  // instantiation in the assembled state. See apply_remedy().
  bool check_product_condition = false;
};

inline std::string describe(const CausalNetwork& net, const ParentInstantiation& inst) {
  std::string s = net.node_name(inst.node);
  if (!inst.signs.empty()) s += " | " + render(inst.to_sentence(net));
  return s;
}

inline OcnValidationReport validate_ocn(const CausalNetwork& net, const OcnQuantification& q,
                                        const OcnValidationOptions& options = {});

// ---------------------------------------------------------------------------
// Chain-rule assembly

struct ChainTerm {
  ParentInstantiation given;
  bool sign;  // value of the node in the world
  Sentence entry;
};

// The objections whose disjunction is the objection to `world`, one per node
// in topological order: Phi_{[D(i)]}([i]).
inline std::vector<ChainTerm> explain(const CausalNetwork& net, const OcnQuantification& q, const World& world) {
  if (!(world.vocabulary() == net.nodes())) throw VocabularyError("world is not over the network's nodes");
  std::vector<ChainTerm> terms;
  for (auto i : net.topological_order()) {
    auto inst = ParentInstantiation::in_world(net, i, world);
    const bool sign = world.value(i);
    terms.push_back({inst, sign, q.at(inst).for_sign(sign)});
  }
  return terms;
}

namespace detail {

inline ObjectionState assemble_unchecked(const CausalNetwork& net, const OcnQuantification& q,
                                         const std::vector<std::size_t>& order) {
  const Vocabulary& l = net.nodes();
  std::vector<Sentence> objections;
  objections.reserve(l.world_count());
  for (std::uint64_t w = 0; w < l.world_count(); ++w) {
    const World world(l, w);
    std::vector<Sentence> disjuncts;
    for (auto i : order) disjuncts.push_back(q.at(ParentInstantiation::in_world(net, i, world)).for_sign(world.value(i)));
    objections.push_back(Sentence::disjunction(disjuncts));
  }
  try {
    return ObjectionState(l, q.o_vocab(), std::move(objections));
  } catch (const ConsistencyError& e) {
    throw InvalidQuantificationError(std::string("assembled state is inconsistent: ") + e.what());
  }
}

}  // namespace detail

// World table whose entry for w is the disjunction over nodes of the table
// entry selected by w. `order` must be topological; any such order yields an
// equivalent table.
inline ObjectionState assemble_state(const CausalNetwork& net, const OcnQuantification& q,
                                     const std::vector<std::size_t>& order) {
  if (!net.is_topological(order)) throw NetworkError("assembly order is not topological");
  const auto report = validate_ocn(net, q);
  if (!report.ok()) {
    const auto& first = report.issues.front();
    throw InvalidQuantificationError(std::string("invalid quantification (") + to_string(first.kind) +
                                     " at " + describe(net, first.where) + "): " + first.message);
  }
  return detail::assemble_unchecked(net, q, order);
}

inline ObjectionState assemble_state(const CausalNetwork& net, const OcnQuantification& q) {
  return assemble_state(net, q, net.topological_order());
}

inline OcnValidationReport validate_ocn(const CausalNetwork& net, const OcnQuantification& q,
                                        const OcnValidationOptions& options) {
  OcnValidationReport report;
  const Vocabulary& o = q.o_vocab();
  for (const auto& dup : q.duplicates())
    report.issues.push_back({OcnIssue::Kind::DuplicateRow, dup, std::nullopt, "row given more than once"});
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::uint64_t k = 0; k < instantiation_count(net, i); ++k) {
      const auto inst = ParentInstantiation::from_index(net, i, k);
      const auto& row = q.row(inst);
      if (!row) {
        report.issues.push_back({OcnIssue::Kind::MissingRow, inst, std::nullopt, "no objection row"});
        continue;
      }
      try {
        const TruthTable both = truth_table(row->positive, o) & truth_table(row->negative, o);
        if (auto w = both.first()) {
          World witness(o, *w);
          report.issues.push_back({OcnIssue::Kind::Inconsistent, inst, witness,
                                   "objections '" + render(row->positive) + "' and '" + render(row->negative) +
                                       "' both hold under " + render(witness.to_sentence())});
        }
      } catch (const Error& e) {
        report.issues.push_back({OcnIssue::Kind::BadSentence, inst, std::nullopt, e.what()});
      }
    }
  }
  if (options.check_product_condition && report.ok()) {
    const ObjectionState state = detail::assemble_unchecked(net, q, net.topological_order());
    for (std::size_t i = 0; i < net.size(); ++i) {
      for (std::uint64_t k = 0; k < instantiation_count(net, i); ++k) {
        const auto inst = ParentInstantiation::from_index(net, i, k);
        const TruthTable condition = objection_table(state, inst.to_sentence(net));
        for (bool sign : {true, false}) {
          const Sentence& entry = q.at(inst).for_sign(sign);
          const TruthTable t = truth_table(entry, o);
          if (t.all()) continue;
          if (auto w = (t & condition).first()) {
            World witness(o, *w);
            report.issues.push_back(
                {OcnIssue::Kind::ProductCondition, inst, witness,
                 std::string(sign ? "" : "!") + net.node_name(i) + " objection '" + render(entry) +
                     "' is consistent with the parents' objection under " + render(witness.to_sentence())});
          }
        }
      }
    }
  }
  return report;
}

// Rewrites every non-tautologous entry b as b & !Phi([D(i)]), visiting nodes
// in topological order so each Phi([D(i)]) is taken from the already repaired
// ancestors. The result passes the product-condition check.
inline OcnQuantification apply_remedy(const CausalNetwork& net, const OcnQuantification& q) {
  OcnQuantification repaired = q;
  for (auto i : net.topological_order()) {
    const ObjectionState state = assemble_state(net, repaired);
    for (std::uint64_t k = 0; k < instantiation_count(net, i); ++k) {
      const auto inst = ParentInstantiation::from_index(net, i, k);
      const Sentence condition = objection_of(state, inst.to_sentence(net));
      const auto& row = repaired.at(inst);
      repaired.replace(inst, {normalize_conditional(row.positive, condition),
                              normalize_conditional(row.negative, condition)});
    }
  }
  return repaired;
}

// ---------------------------------------------------------------------------
// Queries

inline Sentence query(const ObjectionState& state, const Sentence& q, const std::optional<Sentence>& evidence) {
  if (!evidence) return objection_of(state, q);
  return objection_of(conditionalize(state, *evidence), q);
}

inline Sentence query(const CausalNetwork& net, const OcnQuantification& quant, const Sentence& q,
                      const std::optional<Sentence>& evidence = std::nullopt) {
  return query(assemble_state(net, quant), q, evidence);
}

// ---------------------------------------------------------------------------
// Irrelevance check

struct MarkovEntry {
  enum class Status { Verified, Violated, Vacuous };
  ParentInstantiation given;  // [D(i)]
  bool sign;                  // [i] is P_i or !P_i
  std::vector<std::pair<std::size_t, bool>> context;  // [O(i)], signed non-descendants
  Status status;
  Sentence given_parents;  // Phi_{[D(i)]}([i])
  Sentence given_context;  // Phi_{[D(i)] & [O(i)]}([i])
  // Diagnostic for violations: given_context equals given_parents once the
  // context's own objection is removed, i.e. given_parents & !Phi([D(i)] & [O(i)]).
  bool agrees_modulo_context = false;
};

inline const char* to_string(MarkovEntry::Status s) {
  switch (s) {
    case MarkovEntry::Status::Verified: return "verified";
    case MarkovEntry::Status::Violated: return "violated";
    case MarkovEntry::Status::Vacuous: return "vacuous";
  }
  return "";
}

struct MarkovReport {
  std::vector<MarkovEntry> entries;

  std::size_t count(MarkovEntry::Status s) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [s](const MarkovEntry& e) { return e.status == s; }));
  }
  bool ok() const { return count(MarkovEntry::Status::Violated) == 0; }
};

inline Sentence context_sentence(const CausalNetwork& net, const std::vector<std::pair<std::size_t, bool>>& context) {
  std::vector<Sentence> literals;
  for (const auto& [j, sign] : context) {
    Sentence a = Sentence::atom(net.node_name(j), VocabularyTag::L);
    literals.push_back(sign ? a : make_not(a));
  }
  return Sentence::conjunction(literals);
}

namespace detail {

// Phi_C(B) from the world table, or nullopt when C is rejected.
inline std::optional<TruthTable> conditional_objection(const ObjectionState& state, const TruthTable& condition,
                                                       const TruthTable& target) {
  const TruthTable phi_c = state.conjoined(condition);
  if (phi_c.all()) return std::nullopt;
  const TruthTable phi_cb = state.conjoined(condition & target);
  if (phi_cb.all()) return phi_cb;
  return phi_cb & ~phi_c;
}

}  // namespace detail

// For every node i, sign of P_i, parent instantiation and instantiation of
// the other non-descendants, compares Phi_{[D(i)]}([i]) with
// Phi_{[D(i)] & [O(i)]}([i]) on the assembled state.
inline MarkovReport markov_check(const CausalNetwork& net, const ObjectionState& state) {
  MarkovReport report;
  const Vocabulary& l = net.nodes();
  const Vocabulary& o = state.o_vocab();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto others = net.non_descendants(i);
    const TruthTable node_true = TruthTable::projection(l.size(), i);
    for (bool sign : {true, false}) {
      const TruthTable target = sign ? node_true : ~node_true;
      for (std::uint64_t k = 0; k < instantiation_count(net, i); ++k) {
        const auto inst = ParentInstantiation::from_index(net, i, k);
        const TruthTable parents = truth_table(inst.to_sentence(net), l);
        const auto base = detail::conditional_objection(state, parents, target);
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << others.size()); ++c) {
          MarkovEntry entry{inst, sign, {}, MarkovEntry::Status::Vacuous, Sentence::constant(true),
                            Sentence::constant(true)};
          for (std::size_t m = 0; m < others.size(); ++m) entry.context.emplace_back(others[m], (c >> m) & 1U);
          const TruthTable condition = parents & truth_table(context_sentence(net, entry.context), l);
          const auto detailed = detail::conditional_objection(state, condition, target);
          if (base) entry.given_parents = sentence_from_table(*base, o);
          if (detailed) entry.given_context = sentence_from_table(*detailed, o);
          if (base && detailed) {
            entry.status = *base == *detailed ? MarkovEntry::Status::Verified : MarkovEntry::Status::Violated;
            const TruthTable relative = base->all() ? *base : (*base & ~state.conjoined(condition));
            entry.agrees_modulo_context = relative == *detailed;
          }
          report.entries.push_back(std::move(entry));
        }
      }
    }
  }
  return report;
}

inline MarkovReport markov_check(const CausalNetwork& net, const OcnQuantification& q) {
  return markov_check(net, assemble_state(net, q));
}

}  // namespace ocn
