#pragma once

// Command-line front end. run_cli() is separate from main() so tests can
// drive it with in-memory streams.
//
// Exit codes: 0 success, 1 domain error (rejected evidence, failed
// validation), 2 usage or parse error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocn/ocn.hpp"

namespace ocn::cli {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string command;
  std::string file;
  std::vector<std::string> formulas;
  std::optional<std::string> given;
  std::string format = "text";
  bool pretty = false;
  bool remedy = false;
};

inline std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

// A loaded network or state file.
class Model {
 public:
  explicit Model(const std::string& path) : file_(load_model(path)) {}

  bool is_network() const { return std::holds_alternative<NetworkFile>(file_); }
  const NetworkFile& network(const char* command) const {
    if (!is_network()) throw UsageError(std::string("'") + command + "' needs a network file");
    return std::get<NetworkFile>(file_);
  }

  const Vocabulary& l_vocab() const {
    if (is_network()) return std::get<NetworkFile>(file_).network.nodes();
    return std::get<StateFile>(file_).state.l_vocab();
  }

  const std::string& name() const {
    if (is_network()) return std::get<NetworkFile>(file_).network.name();
    return std::get<StateFile>(file_).name;
  }

  bool has_objections() const { return !is_network() || std::get<NetworkFile>(file_).ocn.has_value(); }
  bool has_probabilities() const { return is_network() && std::get<NetworkFile>(file_).pcn.has_value(); }

  const ObjectionState& state() const {
    if (!state_) {
      if (!is_network()) {
        state_ = std::get<StateFile>(file_).state;
      } else {
        const auto& f = std::get<NetworkFile>(file_);
        if (!f.ocn) throw UsageError("file has no objection rows");
        state_ = assemble_state(f.network, *f.ocn);
      }
    }
    return *state_;
  }

  const JointDistribution& joint() const {
    if (!joint_) {
      if (!has_probabilities()) throw UsageError("file has no probability rows");
      const auto& f = std::get<NetworkFile>(file_);
      joint_ = assemble_joint(f.network, *f.pcn);
    }
    return *joint_;
  }

  Sentence parse_l(const std::string& text) const { return parse_sentence(text, l_vocab()); }

 private:
  std::variant<NetworkFile, StateFile> file_;
  mutable std::optional<ObjectionState> state_;
  mutable std::optional<JointDistribution> joint_;
};

namespace detail {

inline std::string objection_text(const Sentence& s, const Vocabulary& o) { return render(canonical_form(s, o)); }

inline void add_objection(Json& j, const char* key, const Sentence& s, const Vocabulary& o, bool pretty) {
  j[key] = objection_text(s, o);
  if (pretty) j[std::string(key) + "_simplified"] = render(simplify_for_display(s, o));
}

inline void print_objection(std::ostream& out, const char* label, const Sentence& s, const Vocabulary& o,
                            bool pretty) {
  if (label)
    out << label << ": ";
  out << objection_text(s, o) << '\n';
  if (pretty) out << (label ? std::string(label) + " " : std::string()) << "simplified: "
                  << render(simplify_for_display(s, o)) << '\n';
}

inline std::string literal(const std::string& name, bool sign) { return sign ? name : "!" + name; }

inline std::string target(const CausalNetwork& net, const ParentInstantiation& inst, bool sign) {
  std::string s = literal(net.node_name(inst.node), sign);
  if (!inst.signs.empty()) s += " | " + render(inst.to_sentence(net));
  return s;
}

inline Json given_json(const std::optional<Sentence>& given) {
  return given ? Json(render(*given)) : Json(nullptr);
}

inline int emit(std::ostream& out, const Options& opt, const Json& j, const std::string& text) {
  if (opt.format == "json")
    out << j.dump(2) << '\n';
  else
    out << text;
  return 0;
}

// --- subcommands -----------------------------------------------------------

inline int run_validate(const Options& opt, const Model& m, std::ostream& out) {
  Json j{{"command", "validate"}, {"file", opt.file}};
  std::ostringstream text;
  bool ok = true;
  if (!m.is_network()) {
    m.state();  // loading already checked the world table
    j["state"] = Json{{"ok", true}, {"issues", Json::array()}};
    text << "state: ok\n";
  } else {
    const auto& f = m.network("validate");
    if (f.ocn) {
      const auto report = validate_ocn(f.network, *f.ocn);
      Json issues = Json::array();
      for (const auto& issue : report.issues) {
        Json ji{{"kind", to_string(issue.kind)}, {"node", f.network.node_name(issue.where.node)},
                {"given", render(issue.where.to_sentence(f.network))}, {"message", issue.message}};
        ji["witness"] = issue.witness ? Json(render(issue.witness->to_sentence())) : Json(nullptr);
        issues.push_back(ji);
        text << "ocn: " << to_string(issue.kind) << " at " << describe(f.network, issue.where) << ": "
             << issue.message << '\n';
      }
      if (report.ok()) {
        // Assembly also checks that the tautology is rejected.
        m.state();
        text << "ocn: ok\n";
      }
      ok = ok && report.ok();
      j["ocn"] = Json{{"ok", report.ok()}, {"issues", issues}};

      if (opt.remedy && report.ok()) {
        const auto product = validate_ocn(f.network, *f.ocn, {.check_product_condition = true});
        const auto repaired = apply_remedy(f.network, *f.ocn);
        Json conditions = Json::array();
        for (const auto& issue : product.issues) {
          conditions.push_back(Json{{"node", f.network.node_name(issue.where.node)},
                                    {"given", render(issue.where.to_sentence(f.network))},
                                    {"message", issue.message}});
          text << "product-condition: " << describe(f.network, issue.where) << ": " << issue.message << '\n';
        }
        Json rows = Json::array();
        text << "# remedied objection rows\n";
        for (auto i : f.network.topological_order()) {
          for (std::uint64_t k = 0; k < instantiation_count(f.network, i); ++k) {
            const auto inst = ParentInstantiation::from_index(f.network, i, k);
            const auto& row = repaired.at(inst);
            const std::string pos = objection_text(row.positive, f.ocn->o_vocab());
            const std::string neg = objection_text(row.negative, f.ocn->o_vocab());
            rows.push_back(Json{{"node", f.network.node_name(i)},
                                {"given", render(inst.to_sentence(f.network))},
                                {"positive", pos},
                                {"negative", neg}});
            text << "objection " << describe(f.network, inst) << " : " << pos << " ; " << neg << '\n';
          }
        }
        j["product_conditions"] = conditions;
        j["remedied"] = rows;
      }
    }
    if (f.pcn) {
      const auto report = validate_pcn(f.network, *f.pcn);
      Json issues = Json::array();
      for (const auto& issue : report.issues) {
        issues.push_back(Json{{"kind", to_string(issue.kind)},
                              {"node", f.network.node_name(issue.where.node)},
                              {"given", render(issue.where.to_sentence(f.network))},
                              {"message", issue.message}});
        text << "pcn: " << to_string(issue.kind) << " at " << describe(f.network, issue.where) << ": "
             << issue.message << '\n';
      }
      if (report.ok()) text << "pcn: ok\n";
      ok = ok && report.ok();
      j["pcn"] = Json{{"ok", report.ok()}, {"issues", issues}};
    }
  }
  j["ok"] = ok;
  emit(out, opt, j, text.str());
  return ok ? 0 : 1;
}

inline int run_query(const Options& opt, const Model& m, std::ostream& out) {
  const Sentence q = m.parse_l(opt.formulas.at(0));
  std::optional<Sentence> given;
  if (opt.given) given = m.parse_l(*opt.given);
  const auto& state = m.state();
  const Sentence objection = query(state, q, given);
  Json j{{"command", "query"}, {"file", opt.file}, {"query", render(q)}, {"given", given_json(given)}};
  add_objection(j, "objection", objection, state.o_vocab(), opt.pretty);
  j["rejected"] = is_valid(objection);
  std::ostringstream text;
  print_objection(text, nullptr, objection, state.o_vocab(), opt.pretty);
  return emit(out, opt, j, text.str());
}

inline int run_prob(const Options& opt, const Model& m, std::ostream& out) {
  m.network("prob");
  const Sentence q = m.parse_l(opt.formulas.at(0));
  std::optional<Sentence> given;
  if (opt.given) given = m.parse_l(*opt.given);
  const double p = prob_query(m.joint(), q, given);
  Json j{{"command", "prob"}, {"file", opt.file}, {"query", render(q)}, {"given", given_json(given)},
         {"probability", p}};
  return emit(out, opt, j, format_probability(p) + "\n");
}

inline int run_worlds(const Options& opt, const Model& m, std::ostream& out) {
  const Vocabulary& l = m.l_vocab();
  const ObjectionState* state = m.has_objections() ? &m.state() : nullptr;
  const JointDistribution* joint = m.has_probabilities() ? &m.joint() : nullptr;
  Json j{{"command", "worlds"}, {"file", opt.file}};
  Json rows = Json::array();
  std::ostringstream text;
  if (state) {
    text << "state " << m.name() << '\n';
    text << "lprops";
    for (const auto& n : l.names()) text << ' ' << n;
    text << "\noprops";
    for (const auto& n : state->o_vocab().names()) text << ' ' << n;
    text << '\n';
  }
  for (std::uint64_t w = 0; w < l.world_count(); ++w) {
    const World world(l, w);
    Json row{{"world", render(world.to_sentence())}};
    std::string line = render(world.to_sentence());
    if (state) {
      add_objection(row, "objection", state->objection(w), state->o_vocab(), opt.pretty);
      line = "world " + line + " : " + objection_text(state->objection(w), state->o_vocab());
    }
    if (joint) {
      row["probability"] = joint->probability(w);
      line += state ? "  # p = " + format_probability(joint->probability(w))
                    : " : " + format_probability(joint->probability(w));
    }
    if (state && opt.pretty)
      line += (joint ? "; simplified: " : "  # simplified: ") +
              render(simplify_for_display(state->objection(w), state->o_vocab()));
    text << line << '\n';
    rows.push_back(row);
  }
  j["worlds"] = rows;
  return emit(out, opt, j, text.str());
}

inline int run_markov(const Options& opt, const Model& m, std::ostream& out) {
  const auto& f = m.network("markov");
  const auto& net = f.network;
  const auto report = markov_check(net, m.state());
  const Vocabulary& o = m.state().o_vocab();
  Json entries = Json::array();
  std::ostringstream text;
  for (const auto& e : report.entries) {
    const std::string ctx = render(context_sentence(net, e.context));
    Json je{{"node", net.node_name(e.given.node)},
            {"sign", e.sign},
            {"parents", render(e.given.to_sentence(net))},
            {"context", ctx},
            {"status", to_string(e.status)},
            {"given_parents", render(e.given_parents)},
            {"given_context", render(e.given_context)}};
    if (e.status == MarkovEntry::Status::Violated) je["agrees_modulo_context"] = e.agrees_modulo_context;
    entries.push_back(je);
    text << to_string(e.status) << "  " << target(net, e.given, e.sign);
    if (!e.context.empty()) text << " ; " << ctx;
    text << '\n';
    if (e.status == MarkovEntry::Status::Violated) {
      text << "    given parents: " << render(opt.pretty ? simplify_for_display(e.given_parents, o) : e.given_parents)
           << '\n'
           << "    given context: " << render(opt.pretty ? simplify_for_display(e.given_context, o) : e.given_context)
           << '\n';
    }
  }
  const auto verified = report.count(MarkovEntry::Status::Verified);
  const auto vacuous = report.count(MarkovEntry::Status::Vacuous);
  const auto violated = report.count(MarkovEntry::Status::Violated);
  text << "verified " << verified << ", vacuous " << vacuous << ", violated " << violated << '\n';
  Json j{{"command", "markov"}, {"file", opt.file},    {"verified", verified},
         {"vacuous", vacuous},  {"violated", violated}, {"entries", entries}};
  emit(out, opt, j, text.str());
  return report.ok() ? 0 : 1;
}

inline int run_ignorance(const Options& opt, const Model& m, std::ostream& out) {
  const Sentence a = m.parse_l(opt.formulas.at(0));
  const auto& state = m.state();
  const Sentence u = ignorance(state, a);
  Json j{{"command", "ignorance"}, {"file", opt.file}, {"sentence", render(a)}};
  add_objection(j, "ignorance", u, state.o_vocab(), opt.pretty);
  j["maximal"] = is_valid(u);
  j["minimal"] = is_unsatisfiable(u);
  std::ostringstream text;
  print_objection(text, nullptr, u, state.o_vocab(), opt.pretty);
  return emit(out, opt, j, text.str());
}

inline int run_order(const Options& opt, const Model& m, std::ostream& out) {
  if (opt.formulas.size() != 2) throw UsageError("'order' needs two formulas");
  const Sentence a = m.parse_l(opt.formulas[0]);
  const Sentence b = m.parse_l(opt.formulas[1]);
  const auto& state = m.state();
  Json verdicts = Json::array();
  std::ostringstream text;
  for (const auto& v : {no_more_objectionable(state, a, b), no_more_believed(state, a, b),
                        no_more_ignorant(state, a, b)}) {
    Json checks = Json::array();
    for (const auto& c : v.checks)
      checks.push_back(Json{{"premise", render(c.premise)}, {"conclusion", render(c.conclusion)}, {"holds", c.holds}});
    verdicts.push_back(Json{{"relation", to_string(v.relation)}, {"holds", v.holds}, {"checks", checks}});
    text << to_string(v.relation) << ": " << (v.holds ? "holds" : "fails") << '\n';
  }
  Json j{{"command", "order"}, {"file", opt.file}, {"a", render(a)}, {"b", render(b)}, {"verdicts", verdicts}};
  return emit(out, opt, j, text.str());
}

inline int run_compare(const Options& opt, const Model& m, std::ostream& out) {
  m.network("compare");
  const Sentence q = m.parse_l(opt.formulas.at(0));
  std::optional<Sentence> given;
  if (opt.given) given = m.parse_l(*opt.given);
  const auto c = compare(m.state(), m.joint(), q, given);
  const Vocabulary& o = m.state().o_vocab();
  Json j{{"command", "compare"}, {"file", opt.file}, {"query", render(q)}, {"given", given_json(given)}};
  add_objection(j, "objection", c.objection, o, opt.pretty);
  j["probability"] = c.probability;
  j["rejected"] = c.rejected;
  j["zero_probability"] = c.zero_probability;
  j["extremes_agree"] = c.extremes_agree();
  std::ostringstream text;
  print_objection(text, "objection", c.objection, o, opt.pretty);
  text << "probability: " << format_probability(c.probability) << '\n'
       << "rejected: " << (c.rejected ? "true" : "false") << '\n'
       << "zero-probability: " << (c.zero_probability ? "true" : "false") << '\n'
       << "extremes-agree: " << (c.extremes_agree() ? "true" : "false") << '\n';
  return emit(out, opt, j, text.str());
}

inline int run_explain(const Options& opt, const Model& m, std::ostream& out) {
  const auto& f = m.network("explain");
  const auto& net = f.network;
  const Sentence s = m.parse_l(opt.formulas.at(0));
  const TruthTable t = truth_table(s, net.nodes());
  if (t.count() != 1) throw UsageError("'explain' needs a formula with exactly one model over the network's nodes");
  const World world(net.nodes(), *t.first());
  Json j{{"command", "explain"}, {"file", opt.file}, {"world", render(world.to_sentence())}};
  std::ostringstream text;
  if (f.ocn) {
    const auto& state = m.state();
    Json terms = Json::array();
    for (const auto& term : explain(net, *f.ocn, world)) {
      terms.push_back(Json{{"node", net.node_name(term.given.node)},
                           {"sign", term.sign},
                           {"given", render(term.given.to_sentence(net))},
                           {"entry", render(term.entry)}});
      text << target(net, term.given, term.sign) << " : " << render(term.entry) << '\n';
    }
    j["terms"] = terms;
    add_objection(j, "objection", state.objection(world), state.o_vocab(), opt.pretty);
    print_objection(text, "objection", state.objection(world), state.o_vocab(), opt.pretty);
  }
  if (f.pcn) {
    Json factors = Json::array();
    text << "factors:\n";
    for (const auto& factor : factor_trace(net, *f.pcn, world)) {
      factors.push_back(Json{{"node", net.node_name(factor.given.node)},
                             {"sign", factor.sign},
                             {"given", render(factor.given.to_sentence(net))},
                             {"value", factor.value}});
      text << target(net, factor.given, factor.sign) << " : " << format_probability(factor.value) << '\n';
    }
    j["factors"] = factors;
    j["probability"] = m.joint().probability(world);
    text << "probability: " << format_probability(m.joint().probability(world)) << '\n';
  }
  return emit(out, opt, j, text.str());
}

}  // namespace detail

inline int dispatch(const Options& opt, std::ostream& out) {
  const Model model(opt.file);
  if (opt.command == "validate") return detail::run_validate(opt, model, out);
  if (opt.command == "query") return detail::run_query(opt, model, out);
  if (opt.command == "prob") return detail::run_prob(opt, model, out);
  if (opt.command == "worlds") return detail::run_worlds(opt, model, out);
  if (opt.command == "markov") return detail::run_markov(opt, model, out);
  if (opt.command == "ignorance") return detail::run_ignorance(opt, model, out);
  if (opt.command == "order") return detail::run_order(opt, model, out);
  if (opt.command == "compare") return detail::run_compare(opt, model, out);
  if (opt.command == "explain") return detail::run_explain(opt, model, out);
  throw UsageError("unknown subcommand '" + opt.command + "'");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Objection-based causal networks"};
  app.name("ocn");
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    int formulas;  // positional formulas required
    bool given;
  };
  const Command commands[] = {
      {"validate", "check consistency conditions of a network or state file", 0, false},
      {"query", "objection to a formula, optionally after observing --given", 1, true},
      {"prob", "probability of a formula, optionally given --given", 1, true},
      {"worlds", "dump the world table", 0, false},
      {"markov", "check the irrelevance condition on every node", 0, false},
      {"ignorance", "ignorance about a formula", 1, false},
      {"order", "objectionability, belief and ignorance orderings of two formulas", 2, false},
      {"compare", "objection and probability of the same query", 1, true},
      {"explain", "chain-rule decomposition of one world", 1, false},
  };
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("file", opt.file, "network (.ocn/.pcn) or state (.obs) file")->required();
    if (cmd.formulas > 0)
      sub->add_option("formula", opt.formulas, "formula(s)")->required()->expected(cmd.formulas);
    if (cmd.given) sub->add_option("--given", opt.given, "evidence formula");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--pretty", opt.pretty, "also print a simplified form of each objection");
    if (std::string(cmd.name) == "validate")
      sub->add_flag("--remedy", opt.remedy, "check product-rule side conditions and print remedied rows");
    sub->callback([&opt, sub] { opt.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, err, err);
    return 2;
  }

  try {
    return dispatch(opt, out);
  } catch (const RejectedEvidenceError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ZeroProbabilityError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InvalidQuantificationError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const EnumerationLimitError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace ocn::cli
