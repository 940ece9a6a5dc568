#pragma once

// Line-oriented text formats. '#' starts a comment.
//
// Network file:
//   network <name>
//   oprops O1 O2 ...
//   node P3 parents P1 P2
//   objection P3 | P1 & !P2 : <Phi_A(P3)> ; <Phi_A(!P3)>
//   prob P3 | P1 & !P2 : 0.9 [; 0.1]
//
// State file (an explicit world table):
//   state <name>
//   lprops bird fly
//   oprops normal
//   world bird & !fly : normal

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ocn/belief.hpp"
#include "ocn/network.hpp"
#include "ocn/pcn.hpp"

namespace ocn {

class FileFormatError : public Error {
 public:
  FileFormatError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct NetworkFile {
  CausalNetwork network;
  std::optional<OcnQuantification> ocn;
  std::optional<PcnQuantification> pcn;
};

struct StateFile {
  std::string name;
  ObjectionState state;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Line {
  std::size_t number;
  std::string keyword;
  std::string rest;
};

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    auto sp = raw.find_first_of(" \t");
    Line line{number, std::string(raw.substr(0, sp)), {}};
    if (sp != std::string_view::npos) line.rest = std::string(trim(raw.substr(sp)));
    out.push_back(std::move(line));
  }
  return out;
}

// "P1 & !P2" -> [(P1, true), (P2, false)]. Empty text is the empty conjunction.
inline std::vector<std::pair<std::string, bool>> parse_literals(std::string_view text, std::size_t line) {
  std::vector<std::pair<std::string, bool>> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    auto amp = text.find('&');
    std::string_view lit = trim(text.substr(0, amp));
    bool sign = true;
    if (!lit.empty() && lit.front() == '!') {
      sign = false;
      lit = trim(lit.substr(1));
    }
    if (!is_identifier(lit) || is_keyword(lit))
      throw FileFormatError("expected a conjunction of literals, got '" + std::string(text) + "'", line);
    out.emplace_back(std::string(lit), sign);
    if (amp == std::string_view::npos) break;
    text = text.substr(amp + 1);
  }
  return out;
}

inline Sentence parse_in_line(std::string_view text, const Vocabulary& vocab, std::size_t line) {
  try {
    return parse_sentence(trim(text), vocab);
  } catch (const Error& e) {
    throw FileFormatError(std::string("in formula '") + std::string(trim(text)) + "': " + e.what(), line);
  }
}

inline double parse_probability(std::string_view text, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw FileFormatError("invalid probability '" + std::string(text) + "'", line);
  return value;
}

// Splits "<lhs> : <a> ; <b>" into lhs and the one or two right-hand parts.
inline std::pair<std::string_view, std::vector<std::string_view>> split_row(std::string_view rest, std::size_t line) {
  auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw FileFormatError("expected ':' in row", line);
  std::string_view lhs = trim(rest.substr(0, colon));
  std::string_view rhs = rest.substr(colon + 1);
  std::vector<std::string_view> parts;
  auto semi = rhs.find(';');
  parts.push_back(trim(rhs.substr(0, semi)));
  if (semi != std::string_view::npos) {
    if (rhs.find(';', semi + 1) != std::string_view::npos) throw FileFormatError("too many ';' in row", line);
    parts.push_back(trim(rhs.substr(semi + 1)));
  }
  for (auto p : parts)
    if (p.empty()) throw FileFormatError("empty value in row", line);
  return {lhs, parts};
}

// "P3 | P1 & !P2" -> instantiation of P3's parents. The condition must give
// every parent exactly once.
inline ParentInstantiation parse_row_target(const CausalNetwork& net, std::string_view lhs, std::size_t line) {
  auto bar = lhs.find('|');
  std::string_view node_text = trim(lhs.substr(0, bar));
  auto node = net.index_of(node_text);
  if (!node) throw FileFormatError("unknown node '" + std::string(node_text) + "'", line);
  const auto literals =
      parse_literals(bar == std::string_view::npos ? std::string_view{} : lhs.substr(bar + 1), line);
  const auto& parents = net.parents(*node);
  ParentInstantiation inst{*node, std::vector<bool>(parents.size())};
  std::vector<bool> seen(parents.size(), false);
  for (const auto& [name, sign] : literals) {
    auto idx = net.index_of(name);
    auto it = idx ? std::find(parents.begin(), parents.end(), *idx) : parents.end();
    if (it == parents.end())
      throw FileFormatError("'" + name + "' is not a parent of '" + std::string(node_text) + "'", line);
    auto k = static_cast<std::size_t>(it - parents.begin());
    if (seen[k]) throw FileFormatError("parent '" + name + "' given twice", line);
    seen[k] = true;
    inst.signs[k] = sign;
  }
  if (literals.size() != parents.size())
    throw FileFormatError("condition must cover all " + std::to_string(parents.size()) + " parents of '" +
                              std::string(node_text) + "'",
                          line);
  return inst;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline NetworkFile parse_network(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines.front().keyword != "network")
    throw FileFormatError("expected 'network <name>'", lines.empty() ? 1 : lines.front().number);
  const std::string name = lines.front().rest;
  if (!is_identifier(name)) throw FileFormatError("invalid network name '" + name + "'", lines.front().number);

  std::optional<std::vector<std::string>> oprops;
  std::vector<std::string> nodes;
  std::vector<std::vector<std::string>> parents;
  std::vector<const detail::Line*> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    if (line.keyword == "oprops") {
      if (oprops) throw FileFormatError("'oprops' given twice", line.number);
      oprops = detail::split_words(line.rest);
    } else if (line.keyword == "node") {
      auto words = detail::split_words(line.rest);
      if (words.empty()) throw FileFormatError("expected a node name", line.number);
      if (words.size() > 1 && words[1] != "parents") throw FileFormatError("expected 'parents'", line.number);
      nodes.push_back(words[0]);
      parents.emplace_back(words.size() > 2 ? words.begin() + 2 : words.end(), words.end());
    } else if (line.keyword == "objection" || line.keyword == "prob") {
      rows.push_back(&line);
    } else {
      throw FileFormatError("unknown directive '" + line.keyword + "'", line.number);
    }
  }

  std::optional<CausalNetwork> net;
  try {
    net.emplace(name, nodes, parents);
  } catch (const Error& e) {
    throw FileFormatError(e.what(), lines.front().number);
  }
  NetworkFile file{*net, std::nullopt, std::nullopt};
  if (oprops) {
    try {
      file.ocn.emplace(*net, Vocabulary(VocabularyTag::O, *oprops));
    } catch (const Error& e) {
      throw FileFormatError(std::string("oprops: ") + e.what(), lines.front().number);
    }
  }

  for (const auto* line : rows) {
    auto [lhs, parts] = detail::split_row(line->rest, line->number);
    const auto inst = detail::parse_row_target(*net, lhs, line->number);
    if (line->keyword == "objection") {
      if (!file.ocn) throw FileFormatError("objection row without 'oprops'", line->number);
      if (parts.size() != 2) throw FileFormatError("objection row needs '<objection> ; <objection>'", line->number);
      const auto& o = file.ocn->o_vocab();
      file.ocn->set(inst, {detail::parse_in_line(parts[0], o, line->number),
                           detail::parse_in_line(parts[1], o, line->number)});
    } else {
      if (!file.pcn) file.pcn.emplace(*net);
      ProbabilityRow row{detail::parse_probability(parts[0], line->number), std::nullopt};
      if (parts.size() == 2) row.p_false = detail::parse_probability(parts[1], line->number);
      file.pcn->set(inst, row);
    }
  }
  return file;
}

inline StateFile parse_state(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines.front().keyword != "state")
    throw FileFormatError("expected 'state <name>'", lines.empty() ? 1 : lines.front().number);
  std::optional<Vocabulary> l;
  std::optional<Vocabulary> o;
  std::vector<const detail::Line*> worlds;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    try {
      if (line.keyword == "lprops") {
        if (l) throw FileFormatError("'lprops' given twice", line.number);
        l.emplace(VocabularyTag::L, detail::split_words(line.rest));
      } else if (line.keyword == "oprops") {
        if (o) throw FileFormatError("'oprops' given twice", line.number);
        o.emplace(VocabularyTag::O, detail::split_words(line.rest));
      } else if (line.keyword == "world") {
        worlds.push_back(&line);
      } else {
        throw FileFormatError("unknown directive '" + line.keyword + "'", line.number);
      }
    } catch (const FileFormatError&) {
      throw;
    } catch (const Error& e) {
      throw FileFormatError(e.what(), line.number);
    }
  }
  if (!l || !o) throw FileFormatError("state file needs 'lprops' and 'oprops'", lines.front().number);

  std::vector<std::pair<World, Sentence>> entries;
  for (const auto* line : worlds) {
    auto [lhs, parts] = detail::split_row(line->rest, line->number);
    if (parts.size() != 1) throw FileFormatError("world row needs exactly one objection", line->number);
    std::vector<bool> bits(l->size());
    std::vector<bool> seen(l->size(), false);
    for (const auto& [name, sign] : detail::parse_literals(lhs, line->number)) {
      auto i = l->index_of(name);
      if (!i) throw FileFormatError("unknown atom '" + name + "'", line->number);
      if (seen[*i]) throw FileFormatError("atom '" + name + "' given twice", line->number);
      seen[*i] = true;
      bits[*i] = sign;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw FileFormatError("world must assign every atom of lprops", line->number);
    entries.emplace_back(World(*l, bits), detail::parse_in_line(parts[0], *o, line->number));
  }
  try {
    return {lines.front().rest, ObjectionState::from_world_table(*l, *o, entries)};
  } catch (const ConsistencyError&) {
    throw;
  } catch (const Error& e) {
    throw FileFormatError(e.what(), lines.front().number);
  }
}

inline NetworkFile load_network(const std::string& path) { return parse_network(detail::read_file(path)); }
inline StateFile load_state(const std::string& path) { return parse_state(detail::read_file(path)); }

// Dispatches on the leading directive.
inline std::variant<NetworkFile, StateFile> load_model(const std::string& path) {
  const std::string text = detail::read_file(path);
  const auto lines = detail::split_lines(text);
  if (!lines.empty() && lines.front().keyword == "state") return parse_state(text);
  return parse_network(text);
}

}  // namespace ocn
