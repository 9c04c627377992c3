#include "cli.hpp"

#include <charconv>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cqrelax/error.hpp"

namespace cqrelax::cli {
namespace {

constexpr const char* kReplHelp =
    "commands:\n"
    "  \\q <query>          evaluate a query\n"
    "  \\relax <query>      rank relaxations of a query\n"
    "  \\set <key> <value>  change a setting (table_agg, tuple_agg, dc_mode,\n"
    "                      min_sim, ops, top, steps, format, force)\n"
    "  \\show               print the current settings\n"
    "  \\rules              list the loaded rules\n"
    "  \\help               this text\n"
    "  \\quit               leave\n"
    "a line without a leading backslash is evaluated as a query\n";

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_unit_interval(std::string_view text, std::string_view what) {
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || !(v >= 0.0 && v <= 1.0))
    throw ParseError(std::string(what) + " must be a number in [0,1], got '" + std::string(text) + "'", 0);
  return v;
}

std::size_t parse_positive(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || v == 0)
    throw ParseError(std::string(what) + " must be a positive integer, got '" + std::string(text) + "'", 0);
  return v;
}

std::string status_line(const AnswerTable& t) {
  return t.empty() ? "FAILING" : "OK(" + std::to_string(t.rows.size()) + " rows)";
}

}  // namespace

Session::Session(SessionConfig config) : config_(std::move(config)) {
  if (!std::filesystem::is_directory(config_.data_dir))
    throw DataError("data directory not found: " + config_.data_dir.string());
  db_ = load_database(config_.data_dir);

  if (!config_.sim_bindings) {
    auto fallback = config_.data_dir / "sim.cfg";
    if (std::filesystem::exists(fallback)) config_.sim_bindings = fallback;
  }
  if (config_.sim_bindings) {
    if (!std::filesystem::exists(*config_.sim_bindings))
      throw DataError("similarity bindings not found: " + config_.sim_bindings->string());
    sim_ = load_similarity_config(*config_.sim_bindings, db_.schemas());
  }
  if (config_.rules_file) {
    if (!std::filesystem::exists(*config_.rules_file))
      throw DataError("rules file not found: " + config_.rules_file->string());
    rules_ = parse_rules(read_file(*config_.rules_file));
    for (const auto& r : rules_) {
      translate(ConjunctiveQuery{r.body, {}}, db_);
      translate(ConjunctiveQuery{{r.head}, {}}, db_);
    }
  }
}

int Session::query(std::string_view text, std::ostream& out) const {
  auto table = evaluate(translate(parse_query(text), db_), db_);
  out << render_table(table, config_.format);
  out << status_line(table) << "\n";
  return table.empty() ? kExitFailing : kExitOk;
}

int Session::relax(std::string_view text, std::ostream& out) const {
  auto q = parse_query(text);
  auto spj = translate(q, db_);
  if (!config_.force) {
    auto table = evaluate(spj, db_);
    if (!table.empty()) {
      out << render_table(table, config_.format);
      out << status_line(table) << "\n";
      out << "query is not failing; use --force (or \\set force on) to relax it anyway\n";
      return kExitOk;
    }
  }
  auto report = cqrelax::relax(spj, db_, rules_, sim_, config_.relax);
  print_report(q, report, out);
  for (const auto& c : report.ranked)
    if (c.answers && !c.answers->empty()) return kExitOk;
  return kExitFailing;
}

void Session::print_report(const ConjunctiveQuery& q, const RelaxReport& report, std::ostream& out) const {
  out << "query: " << to_string(q) << "\n";
  out << "status: " << status_line(report.original_answers) << "\n";
  out << "settings: " << settings() << "\n";
  out << "candidates: " << report.total_candidates << " (showing " << report.ranked.size() << ")\n";
  std::size_t rank = 0;
  for (const auto& c : report.ranked) {
    out << "\n#" << ++rank << " ";
    for (const auto& earlier : c.lineage) out << earlier << " ; ";
    out << c.step.describe() << "\n";
    out << "relaxed: " << to_string(reconstruct_query(c.query)) << "\n";
    out << render_table(*c.answers, config_.format);
    out << "score=" << format_degree(c.answers->score.value_or(0.0)) << "\n";
  }
}

void Session::set(std::string_view key, std::string_view value) {
  auto& policy = config_.relax.policy;
  if (key == "table_agg" || key == "agg") {
    policy.table_agg = parse_aggregation(value);
  } else if (key == "tuple_agg") {
    policy.tuple_agg = parse_aggregation(value);
  } else if (key == "dc_mode") {
    policy.dc_mode = parse_dc_mode(value);
  } else if (key == "min_sim") {
    policy.min_sim = parse_unit_interval(value, "min_sim");
  } else if (key == "ops") {
    config_.relax.ops = OperatorSet::parse(value);
  } else if (key == "top") {
    if (value == "none" || value == "all")
      config_.relax.top_k.reset();
    else
      config_.relax.top_k = parse_positive(value, "top");
  } else if (key == "steps") {
    config_.relax.max_steps = parse_positive(value, "steps");
  } else if (key == "format") {
    config_.format = parse_format(value);
  } else if (key == "force") {
    if (value == "on" || value == "true" || value == "1")
      config_.force = true;
    else if (value == "off" || value == "false" || value == "0")
      config_.force = false;
    else
      throw ParseError("force expects on or off", 0);
  } else {
    throw ParseError("unknown setting '" + std::string(key) + "'", 0);
  }
}

std::string Session::settings() const {
  const auto& p = config_.relax.policy;
  std::ostringstream s;
  s << "ops=" << config_.relax.ops.str() << " table_agg=" << aggregation_name(p.table_agg)
    << " tuple_agg=" << aggregation_name(p.tuple_agg) << " dc_mode=" << dc_mode_name(p.dc_mode)
    << " min_sim=" << format_degree(p.min_sim) << " steps=" << config_.relax.max_steps << " top="
    << (config_.relax.top_k ? std::to_string(*config_.relax.top_k) : std::string("all"));
  return s.str();
}

int Session::repl(std::istream& in, std::ostream& out, bool prompt) {
  std::string line;
  while (true) {
    if (prompt) out << "cqrelax> " << std::flush;
    if (!std::getline(in, line)) break;
    std::string cmd = trim(line);
    if (cmd.empty()) continue;
    try {
      if (cmd[0] != '\\') {
        if (query(cmd, out) == kExitFailing) out << "query is failing; try \\relax " << cmd << "\n";
        continue;
      }
      auto space = cmd.find_first_of(" \t");
      std::string name = cmd.substr(0, space);
      std::string rest = space == std::string::npos ? std::string{} : trim(cmd.substr(space));
      if (name == "\\quit" || name == "\\exit") {
        break;
      } else if (name == "\\q") {
        if (rest.empty()) throw Error("usage: \\q <query> (\\quit leaves)");
        if (query(rest, out) == kExitFailing) out << "query is failing; try \\relax " << rest << "\n";
      } else if (name == "\\relax") {
        relax(rest, out);
      } else if (name == "\\set") {
        auto sp = rest.find_first_of(" \t");
        if (sp == std::string::npos) throw Error("usage: \\set <key> <value>");
        set(rest.substr(0, sp), trim(rest.substr(sp)));
        out << settings() << "\n";
      } else if (name == "\\show") {
        out << settings() << "\n";
      } else if (name == "\\rules") {
        if (rules_.empty()) out << "(no rules loaded)\n";
        for (std::size_t i = 0; i < rules_.size(); ++i) out << "rule#" << i + 1 << ": " << to_string(rules_[i]) << "\n";
      } else {
        if (name != "\\help") out << "unknown command " << name << "\n";
        out << kReplHelp;
      }
    } catch (const ParseError& e) {
      out << "parse error: " << e.what() << "\n";
    } catch (const Error& e) {
      out << "error: " << e.what() << "\n";
    }
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"cqrelax: evaluate conjunctive queries and rank relaxations of failing ones", "cqrelax"};
  app.fallthrough();

  SessionConfig config;
  std::string sim_path, rules_path, ops = "dc,ai,gr", agg = "avg", tuple_agg = "avg", dc_mode = "semantic",
                                    format = "text";
  double min_sim = 0.0;
  std::size_t top = 0, steps = 1;
  bool repl = false;

  app.add_option("--data", config.data_dir, "directory with schema.cfg and one CSV per relation")->required();
  app.add_option("--sim", sim_path, "similarity binding file (default: <data>/sim.cfg if present)");
  app.add_option("--rules", rules_path, "rule file for goal replacement");
  app.add_option("--ops", ops, "relaxation operators: dc,ai,gr or all");
  app.add_option("--agg", agg, "table aggregation: avg|max");
  app.add_option("--tuple-agg", tuple_agg, "tuple aggregation: avg|max");
  app.add_option("--dc-mode", dc_mode, "dropping-condition weighting: syntactic|conditions|semantic");
  app.add_option("--min-sim", min_sim, "drop answer rows below this degree")->check(CLI::Range(0.0, 1.0));
  app.add_option("--top", top, "report only the best k candidates")->check(CLI::PositiveNumber);
  app.add_option("--steps", steps, "maximum relaxation depth")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "table output: text|csv")->check(CLI::IsMember({"text", "csv"}));
  app.add_flag("--force", config.force, "relax queries that already have answers");
  app.add_flag("--repl", repl, "start an interactive session");

  std::string query_text, relax_text;
  auto* query_cmd = app.add_subcommand("query", "evaluate a query and report FAILING or OK(<n> rows)");
  query_cmd->add_option("text", query_text, "conjunctive query, e.g. \"Ill(x,Flu) & Ill(x,Cough)\"")->required();
  auto* relax_cmd = app.add_subcommand("relax", "rank one-step (or --steps) relaxations of a query");
  relax_cmd->add_option("text", relax_text, "conjunctive query")->required();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cqrelax: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitError;
  }

  try {
    if (!sim_path.empty()) config.sim_bindings = sim_path;
    if (!rules_path.empty()) config.rules_file = rules_path;
    config.relax.ops = OperatorSet::parse(ops);
    config.relax.policy.table_agg = parse_aggregation(agg);
    config.relax.policy.tuple_agg = parse_aggregation(tuple_agg);
    config.relax.policy.dc_mode = parse_dc_mode(dc_mode);
    config.relax.policy.min_sim = min_sim;
    config.relax.max_steps = steps;
    if (top > 0) config.relax.top_k = top;
    config.format = parse_format(format);

    Session session(std::move(config));
    if (query_cmd->parsed()) return session.query(query_text, out);
    if (relax_cmd->parsed()) return session.relax(relax_text, out);
    if (repl) return session.repl(in, out);
    err << "cqrelax: nothing to do; give a query or relax subcommand, or --repl\n";
    return kExitError;
  } catch (const ParseError& e) {
    err << "cqrelax: parse error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "cqrelax: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "cqrelax: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace cqrelax::cli
