#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cqrelax/datastore.hpp"
#include "cqrelax/format.hpp"
#include "cqrelax/query.hpp"
#include "cqrelax/search.hpp"
#include "cqrelax/similarity.hpp"

namespace cqrelax::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailing = 1;
inline constexpr int kExitError = 2;

struct SessionConfig {
  std::filesystem::path data_dir;
  std::optional<std::filesystem::path> sim_bindings;  // defaults to <data>/sim.cfg when present
  std::optional<std::filesystem::path> rules_file;
  RelaxOptions relax;
  OutputFormat format = OutputFormat::Text;
  bool force = false;  // relax queries that already have answers
};

/// Loaded database, similarity bindings and rules plus the mutable settings
/// of one interactive or batch session.
class Session {
 public:
  /// Throws Error when a referenced file is missing or malformed.
  explicit Session(SessionConfig config);

  const SessionConfig& config() const noexcept { return config_; }
  const Database& database() const noexcept { return db_; }
  const RuleBase& rules() const noexcept { return rules_; }
  const SimilarityConfig& similarity() const noexcept { return sim_; }

  /// Prints the answer table and `FAILING` or `OK(<n> rows)`.
  int query(std::string_view text, std::ostream& out) const;

  /// Prints the ranked relaxation report. Exit code 0 when some candidate
  /// produced answers, 1 when none did.
  int relax(std::string_view text, std::ostream& out) const;

  /// `\set` keys: table_agg (agg), tuple_agg, dc_mode, min_sim, ops, top,
  /// steps, format, force. Throws ParseError on bad keys or values.
  void set(std::string_view key, std::string_view value);

  std::string settings() const;

  /// Read-eval-print loop until `\quit` or end of input.
  int repl(std::istream& in, std::ostream& out, bool prompt = true);

 private:
  void print_report(const ConjunctiveQuery& q, const RelaxReport& report, std::ostream& out) const;

  SessionConfig config_;
  Database db_;
  SimilarityConfig sim_;
  RuleBase rules_;
};

/// Full command line entry point: option parsing, session setup and
/// dispatch. Errors are reported on `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cqrelax::cli
