#pragma once

// Propositional sentences over a declared vocabulary, with exact semantics
// computed by enumerating every truth assignment.

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ocn/error.hpp"

namespace ocn {

// Exhaustive enumeration is capped at 2^20 assignments per vocabulary.
inline constexpr std::size_t kMaxEnumerationAtoms = 20;

// L is the domain language (network nodes), O the objection language.
enum class VocabularyTag { L, O };

inline const char* to_string(VocabularyTag tag) { return tag == VocabularyTag::L ? "L" : "O"; }

inline bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

inline bool is_keyword(std::string_view name) { return name == "true" || name == "false"; }

// ---------------------------------------------------------------------------
// Vocabulary

// An ordered, duplicate-free set of atoms sharing one tag. The order fixes the
// canonical world enumeration: atom i is bit i of a world index.
class Vocabulary {
 public:
  Vocabulary() : Vocabulary(VocabularyTag::L, {}) {}

  Vocabulary(VocabularyTag tag, std::vector<std::string> names) {
    auto data = std::make_shared<Data>();
    data->tag = tag;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!is_identifier(names[i]) || is_keyword(names[i]))
        throw VocabularyError("invalid atom name '" + names[i] + "'");
      if (!data->index.emplace(names[i], i).second)
        throw VocabularyError("duplicate atom '" + names[i] + "'");
    }
    data->names = std::move(names);
    data_ = std::move(data);
  }

  VocabularyTag tag() const noexcept { return data_->tag; }
  std::size_t size() const noexcept { return data_->names.size(); }
  bool empty() const noexcept { return data_->names.empty(); }
  const std::string& name(std::size_t i) const { return data_->names.at(i); }
  const std::vector<std::string>& names() const noexcept { return data_->names; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  // Number of worlds; throws when the vocabulary is too large to enumerate.
  std::uint64_t world_count() const {
    if (size() > kMaxEnumerationAtoms)
      throw EnumerationLimitError("vocabulary of " + std::to_string(size()) +
                                  " atoms exceeds the enumeration limit of " +
                                  std::to_string(kMaxEnumerationAtoms));
    return std::uint64_t{1} << size();
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.data_ == b.data_ || (a.tag() == b.tag() && a.names() == b.names());
  }

 private:
  struct Data {
    VocabularyTag tag = VocabularyTag::L;
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

inline void check_disjoint(const Vocabulary& l, const Vocabulary& o) {
  for (const auto& name : l.names())
    if (o.contains(name))
      throw VocabularyError("atom '" + name + "' declared in both the L and O vocabularies");
}

// ---------------------------------------------------------------------------
// Sentence

// Immutable propositional formula. Copies share structure.
class Sentence {
 public:
  enum class Kind { Const, Atom, Not, And, Or, Implies };

  Sentence() : Sentence(constant(false)) {}

  static Sentence constant(bool value) {
    static const Sentence kTrue(make_node(Kind::Const, true, {}, std::nullopt, {}, {}));
    static const Sentence kFalse(make_node(Kind::Const, false, {}, std::nullopt, {}, {}));
    return value ? kTrue : kFalse;
  }
  static Sentence atom(std::string name, VocabularyTag tag) {
    if (!is_identifier(name) || is_keyword(name))
      throw VocabularyError("invalid atom name '" + name + "'");
    return Sentence(make_node(Kind::Atom, false, std::move(name), tag, {}, {}));
  }
  static Sentence negation(const Sentence& s) {
    return Sentence(make_node(Kind::Not, false, {}, s.tag(), s.node_, {}));
  }
  static Sentence conjunction(const Sentence& a, const Sentence& b) { return binary(Kind::And, a, b); }
  static Sentence disjunction(const Sentence& a, const Sentence& b) { return binary(Kind::Or, a, b); }
  static Sentence implication(const Sentence& a, const Sentence& b) { return binary(Kind::Implies, a, b); }

  // n-ary forms fold into a balanced tree; empty conjunction is true, empty
  // disjunction is false.
  static Sentence conjunction(std::span<const Sentence> parts) { return fold(Kind::And, parts); }
  static Sentence disjunction(std::span<const Sentence> parts) { return fold(Kind::Or, parts); }

  Kind kind() const noexcept { return node_->kind; }
  bool is_const() const noexcept { return kind() == Kind::Const; }
  bool value() const noexcept { return node_->value; }
  const std::string& name() const noexcept { return node_->name; }
  // Tag shared by all atoms, or nullopt for atom-free sentences.
  std::optional<VocabularyTag> tag() const noexcept { return node_->tag; }

  // Not: operand(); binary: lhs(), rhs().
  Sentence operand() const { return Sentence(node_->lhs); }
  Sentence lhs() const { return Sentence(node_->lhs); }
  Sentence rhs() const { return Sentence(node_->rhs); }

  // Structural identity. Use equivalent() for semantic comparison.
  bool same_as(const Sentence& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node {
    Kind kind;
    bool value;
    std::string name;
    std::optional<VocabularyTag> tag;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Sentence(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<const Node> make_node(Kind kind, bool value, std::string name,
                                               std::optional<VocabularyTag> tag,
                                               std::shared_ptr<const Node> lhs,
                                               std::shared_ptr<const Node> rhs) {
    return std::make_shared<const Node>(
        Node{kind, value, std::move(name), tag, std::move(lhs), std::move(rhs)});
  }

  static Sentence binary(Kind kind, const Sentence& a, const Sentence& b) {
    auto tag = a.tag() ? a.tag() : b.tag();
    if (a.tag() && b.tag() && *a.tag() != *b.tag())
      throw VocabularyError("sentence mixes L and O atoms");
    return Sentence(make_node(kind, false, {}, tag, a.node_, b.node_));
  }

  static Sentence fold(Kind kind, std::span<const Sentence> parts) {
    if (parts.empty()) return constant(kind == Kind::And);
    if (parts.size() == 1) return parts.front();
    auto mid = parts.size() / 2;
    return binary(kind, fold(kind, parts.first(mid)), fold(kind, parts.subspan(mid)));
  }

  std::shared_ptr<const Node> node_;
};

inline Sentence make_not(const Sentence& s) { return Sentence::negation(s); }
inline Sentence make_and(const Sentence& a, const Sentence& b) { return Sentence::conjunction(a, b); }
inline Sentence make_or(const Sentence& a, const Sentence& b) { return Sentence::disjunction(a, b); }
inline Sentence make_implies(const Sentence& a, const Sentence& b) { return Sentence::implication(a, b); }

namespace detail {

inline void collect_atoms(const Sentence& s, std::set<std::string>& out) {
  switch (s.kind()) {
    case Sentence::Kind::Const: return;
    case Sentence::Kind::Atom: out.insert(s.name()); return;
    case Sentence::Kind::Not: collect_atoms(s.operand(), out); return;
    default:
      collect_atoms(s.lhs(), out);
      collect_atoms(s.rhs(), out);
  }
}

}  // namespace detail

// Sorted, de-duplicated atom names occurring in s.
inline std::vector<std::string> atoms(const Sentence& s) {
  std::set<std::string> names;
  detail::collect_atoms(s, names);
  return {names.begin(), names.end()};
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline int precedence(Sentence::Kind kind) {
  switch (kind) {
    case Sentence::Kind::Implies: return 1;
    case Sentence::Kind::Or: return 2;
    case Sentence::Kind::And: return 3;
    case Sentence::Kind::Not: return 4;
    default: return 5;
  }
}

inline void flatten(const Sentence& s, Sentence::Kind kind, std::vector<Sentence>& out) {
  if (s.kind() == kind) {
    flatten(s.lhs(), kind, out);
    flatten(s.rhs(), kind, out);
  } else {
    out.push_back(s);
  }
}

inline void render_to(const Sentence& s, int min_prec, std::string& out) {
  const int prec = precedence(s.kind());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (s.kind()) {
    case Sentence::Kind::Const: out += s.value() ? "true" : "false"; break;
    case Sentence::Kind::Atom: out += s.name(); break;
    case Sentence::Kind::Not:
      out += '!';
      render_to(s.operand(), 4, out);
      break;
    case Sentence::Kind::And:
    case Sentence::Kind::Or: {
      std::vector<Sentence> parts;
      flatten(s, s.kind(), parts);
      const char* sep = s.kind() == Sentence::Kind::And ? " & " : " | ";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        render_to(parts[i], prec + 1, out);
      }
      break;
    }
    case Sentence::Kind::Implies:
      render_to(s.lhs(), 2, out);
      out += " => ";
      render_to(s.rhs(), 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

// Text in the formula grammar; parse_sentence(render(s)) is equivalent to s.
inline std::string render(const Sentence& s) {
  std::string out;
  detail::render_to(s, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   implication := disjunction ( "=>" implication )?
//   disjunction := conjunction ( "|" conjunction )*
//   conjunction := unary ( "&" unary )*
//   unary       := "!" unary | "(" implication ")" | "true" | "false" | atom

namespace detail {

class SentenceParser {
 public:
  SentenceParser(std::string_view text, const Vocabulary& vocab) : text_(text), vocab_(vocab) {}

  Sentence parse() {
    Sentence s = implication();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return s;
  }

 private:
  Sentence implication() {
    Sentence lhs = disjunction();
    if (accept("=>")) return make_implies(lhs, implication());
    return lhs;
  }

  Sentence disjunction() {
    Sentence s = conjunction();
    while (accept("|")) s = make_or(s, conjunction());
    return s;
  }

  Sentence conjunction() {
    Sentence s = unary();
    while (accept("&")) s = make_and(s, unary());
    return s;
  }

  Sentence unary() {
    skip_space();
    if (accept("!")) return make_not(unary());
    if (accept("(")) {
      Sentence s = implication();
      if (!accept(")")) fail("expected ')'");
      return s;
    }
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      auto c = static_cast<unsigned char>(text_[pos_]);
      if (!(std::isalnum(c) || c == '_')) break;
      ++pos_;
    }
    std::string_view word = text_.substr(start, pos_ - start);
    if (word.empty() || !is_identifier(word)) {
      pos_ = start;
      fail(word.empty() ? "unexpected '" + std::string(1, text_[start]) + "'"
                        : "invalid identifier '" + std::string(word) + "'");
    }
    if (word == "true") return Sentence::constant(true);
    if (word == "false") return Sentence::constant(false);
    if (!vocab_.contains(word)) throw UnknownAtomError(std::string(word));
    return Sentence::atom(std::string(word), vocab_.tag());
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Sentence parse_sentence(std::string_view text, const Vocabulary& vocab) {
  return detail::SentenceParser(text, vocab).parse();
}

// ---------------------------------------------------------------------------
// World

// One complete truth assignment; bit i of index() is the value of atom i.
class World {
 public:
  World() = default;

  World(Vocabulary vocab, std::uint64_t index) : vocab_(std::move(vocab)), index_(index) {
    if (index_ >= vocab_.world_count()) throw VocabularyError("world index out of range");
  }

  World(Vocabulary vocab, const std::vector<bool>& bits) : vocab_(std::move(vocab)) {
    if (bits.size() != vocab_.size()) throw VocabularyError("world bit count does not match vocabulary");
    vocab_.world_count();
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) index_ |= std::uint64_t{1} << i;
  }

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::uint64_t index() const noexcept { return index_; }
  std::size_t size() const noexcept { return vocab_.size(); }

  bool value(std::size_t i) const { return (index_ >> i) & 1U; }
  bool value(std::string_view name) const {
    auto i = vocab_.index_of(name);
    if (!i) throw UnknownAtomError(std::string(name));
    return value(*i);
  }

  std::vector<bool> bits() const {
    std::vector<bool> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = value(i);
    return out;
  }

  // Conjunction of one literal per atom, in vocabulary order.
  Sentence to_sentence() const {
    std::vector<Sentence> literals;
    literals.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      Sentence a = Sentence::atom(vocab_.name(i), vocab_.tag());
      literals.push_back(value(i) ? a : make_not(a));
    }
    return Sentence::conjunction(literals);
  }

  friend bool operator==(const World& a, const World& b) {
    return a.index_ == b.index_ && a.vocab_ == b.vocab_;
  }
  friend bool operator<(const World& a, const World& b) { return a.index_ < b.index_; }

 private:
  Vocabulary vocab_;
  std::uint64_t index_ = 0;
};

// ---------------------------------------------------------------------------
// TruthTable

// Bit-packed set of worlds over n variables.
class TruthTable {
 public:
  TruthTable() : TruthTable(0, false) {}

  TruthTable(std::size_t num_vars, bool value)
      : num_vars_(num_vars), words_(word_count(num_vars), value ? ~std::uint64_t{0} : 0) {
    mask_tail();
  }

  // Worlds in which variable `var` is true.
  static TruthTable projection(std::size_t num_vars, std::size_t var) {
    static constexpr std::array<std::uint64_t, 6> kPatterns = {
        0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
        0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    assert(var < num_vars);
    TruthTable t(num_vars, false);
    for (std::size_t w = 0; w < t.words_.size(); ++w) {
      if (var < 6)
        t.words_[w] = kPatterns[var];
      else
        t.words_[w] = ((w >> (var - 6)) & 1U) ? ~std::uint64_t{0} : 0;
    }
    t.mask_tail();
    return t;
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << num_vars_; }

  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63U)) & 1U; }
  void set(std::uint64_t i, bool value = true) {
    const auto bit = std::uint64_t{1} << (i & 63U);
    if (value)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }

  TruthTable operator~() const {
    TruthTable t = *this;
    for (auto& w : t.words_) w = ~w;
    t.mask_tail();
    return t;
  }
  TruthTable& operator&=(const TruthTable& o) {
    assert(num_vars_ == o.num_vars_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  TruthTable& operator|=(const TruthTable& o) {
    assert(num_vars_ == o.num_vars_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend TruthTable operator&(TruthTable a, const TruthTable& b) { return a &= b; }
  friend TruthTable operator|(TruthTable a, const TruthTable& b) { return a |= b; }

  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  bool all() const { return (~*this).none(); }

  std::uint64_t count() const {
    std::uint64_t n = 0;
    for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  std::optional<std::uint64_t> first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return (std::uint64_t{i} << 6) + static_cast<std::uint64_t>(std::countr_zero(words_[i]));
    return std::nullopt;
  }

  // Every world of *this is a world of `other`.
  bool subset_of(const TruthTable& other) const {
    assert(num_vars_ == other.num_vars_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  static std::size_t word_count(std::size_t num_vars) {
    return num_vars <= 6 ? 1 : std::size_t{1} << (num_vars - 6);
  }
  void mask_tail() {
    if (num_vars_ < 6) words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << num_vars_)) - 1;
  }

  std::size_t num_vars_;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Semantics

namespace detail {

inline void check_atom(const Sentence& s, const Vocabulary& vocab) {
  if (s.tag() && *s.tag() != vocab.tag())
    throw VocabularyError("atom '" + s.name() + "' belongs to the " + to_string(*s.tag()) +
                          " vocabulary, expected " + to_string(vocab.tag()));
}

inline TruthTable table_of(const Sentence& s, const Vocabulary& vocab) {
  const std::size_t n = vocab.size();
  switch (s.kind()) {
    case Sentence::Kind::Const: return TruthTable(n, s.value());
    case Sentence::Kind::Atom: {
      check_atom(s, vocab);
      auto i = vocab.index_of(s.name());
      if (!i) throw UnknownAtomError(s.name());
      return TruthTable::projection(n, *i);
    }
    case Sentence::Kind::Not: return ~table_of(s.operand(), vocab);
    case Sentence::Kind::And: return table_of(s.lhs(), vocab) & table_of(s.rhs(), vocab);
    case Sentence::Kind::Or: return table_of(s.lhs(), vocab) | table_of(s.rhs(), vocab);
    case Sentence::Kind::Implies: return ~table_of(s.lhs(), vocab) | table_of(s.rhs(), vocab);
  }
  return TruthTable(n, false);
}

inline bool evaluate_at(const Sentence& s, const World& w) {
  switch (s.kind()) {
    case Sentence::Kind::Const: return s.value();
    case Sentence::Kind::Atom: {
      check_atom(s, w.vocabulary());
      auto i = w.vocabulary().index_of(s.name());
      if (!i) throw VocabularyError("atom '" + s.name() + "' is not in the world's vocabulary");
      return w.value(*i);
    }
    case Sentence::Kind::Not: return !evaluate_at(s.operand(), w);
    case Sentence::Kind::And: return evaluate_at(s.lhs(), w) && evaluate_at(s.rhs(), w);
    case Sentence::Kind::Or: return evaluate_at(s.lhs(), w) || evaluate_at(s.rhs(), w);
    case Sentence::Kind::Implies: return !evaluate_at(s.lhs(), w) || evaluate_at(s.rhs(), w);
  }
  return false;
}

// Smallest vocabulary covering both sentences; throws on mixed tags.
inline Vocabulary joint_vocabulary(const Sentence& a, const Sentence& b) {
  if (a.tag() && b.tag() && *a.tag() != *b.tag())
    throw VocabularyError("cannot compare an L sentence with an O sentence");
  std::set<std::string> names;
  collect_atoms(a, names);
  collect_atoms(b, names);
  auto tag = a.tag() ? *a.tag() : b.tag().value_or(VocabularyTag::L);
  return Vocabulary(tag, {names.begin(), names.end()});
}

}  // namespace detail

// Set of worlds over vocab satisfying s.
inline TruthTable truth_table(const Sentence& s, const Vocabulary& vocab) {
  vocab.world_count();
  return detail::table_of(s, vocab);
}

inline bool evaluate(const Sentence& s, const World& w) { return detail::evaluate_at(s, w); }

inline std::vector<World> models(const Sentence& s, const Vocabulary& vocab) {
  const TruthTable t = truth_table(s, vocab);
  std::vector<World> out;
  for (std::uint64_t i = 0; i < t.size(); ++i)
    if (t.test(i)) out.emplace_back(vocab, i);
  return out;
}

inline bool entails(const Sentence& a, const Sentence& b, const Vocabulary& vocab) {
  return truth_table(a, vocab).subset_of(truth_table(b, vocab));
}
inline bool entails(const Sentence& a, const Sentence& b) {
  return entails(a, b, detail::joint_vocabulary(a, b));
}

inline bool equivalent(const Sentence& a, const Sentence& b, const Vocabulary& vocab) {
  return truth_table(a, vocab) == truth_table(b, vocab);
}
inline bool equivalent(const Sentence& a, const Sentence& b) {
  return equivalent(a, b, detail::joint_vocabulary(a, b));
}

inline bool is_valid(const Sentence& s) { return entails(Sentence::constant(true), s); }
inline bool is_unsatisfiable(const Sentence& s) { return entails(s, Sentence::constant(false)); }
inline bool is_satisfiable(const Sentence& s) { return !is_unsatisfiable(s); }

// First satisfying assignment of s over vocab, in canonical order.
inline std::optional<World> first_model(const Sentence& s, const Vocabulary& vocab) {
  auto i = truth_table(s, vocab).first();
  if (!i) return std::nullopt;
  return World(vocab, *i);
}

// Sorted-minterm DNF of a world set: false for the empty set, true for the
// full set, otherwise one full-vocabulary minterm per world in index order.
inline Sentence sentence_from_table(const TruthTable& t, const Vocabulary& vocab) {
  assert(t.num_vars() == vocab.size());
  if (t.none()) return Sentence::constant(false);
  if (t.all()) return Sentence::constant(true);
  std::vector<Sentence> minterms;
  for (std::uint64_t i = 0; i < t.size(); ++i)
    if (t.test(i)) minterms.push_back(World(vocab, i).to_sentence());
  return Sentence::disjunction(minterms);
}

// Unique representative of s's equivalence class over vocab.
inline Sentence canonical_form(const Sentence& s, const Vocabulary& vocab) {
  return sentence_from_table(truth_table(s, vocab), vocab);
}

}  // namespace ocn
