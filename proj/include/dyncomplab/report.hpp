#pragma once

#include <dyncomplab/constructions.hpp>
#include <dyncomplab/interpreter.hpp>
#include <dyncomplab/oracle.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dyncomplab
{

struct CheckpointReport
{
  std::size_t checkpoint = 0;
  std::size_t change_index = 0;
  std::string answer;
  std::optional<std::string> oracle;
  /// True when there is no oracle pairing.
  bool match = true;
  /// Wall time of the steps since the previous checkpoint.
  double step_ms = 0.0;
  std::optional<std::string> aux;
};

struct RunReport
{
  std::string target;
  std::vector<CheckpointReport> checkpoints;
  std::vector<std::string> warnings;
  std::size_t skipped = 0;

  bool all_match() const;
  /// Index of the first mismatching checkpoint.
  std::optional<std::size_t> first_mismatch() const;
};

/// Renders a relation as `{(0, 1), (2, 3)}`, a nullary one as `true`/`false`.
std::string relation_text( const Relation& r );
std::string structure_text( const Structure& s );

RunReport run_program( const DynamicProgram& p, const ChangeScript& script, const std::optional<Query>& oracle,
                       const RunOptions& options = {} );

enum class EngineKind
{
  fo_degk,
  fo_logn,
};

EngineKind parse_engine( std::string_view name );
RunReport run_engine( EngineKind engine, std::size_t k, const ChangeScript& script, const std::optional<Query>& oracle );

/// Human-readable table, one line per checkpoint.
std::string format_text( const RunReport& report );
/// One JSON object per checkpoint with fields checkpoint, change_index, answer, oracle, match, step_ms (and aux).
std::string format_jsonl( const RunReport& report );

struct FuzzOptions
{
  /// A catalog program or family name, `fo-degk`, `fo-logn` or `sym`.
  std::string target;
  std::size_t k = 0;
  std::size_t n_min = 4;
  std::size_t n_max = 10;
  std::size_t seeds = 100;
  std::uint64_t first_seed = 1;
  /// Changes per script, or flips per circuit for `sym`.
  std::size_t length = 200;
  /// Number of runs (the first seeds) whose auxiliary state is audited after every step.
  std::size_t audit_runs = 0;
};

struct FuzzFailure
{
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string message;
};

struct FuzzSummary
{
  std::string target;
  std::size_t runs = 0;
  std::size_t checks = 0;
  /// Checks whose oracle answer was true (or non-empty).
  std::size_t positives = 0;
  std::size_t audits = 0;
  /// Oracle calls made from inside engine updates; must stay zero.
  std::size_t oracle_calls_in_apply = 0;
  std::vector<FuzzFailure> failures;

  bool ok() const { return failures.empty() && oracle_calls_in_apply == 0; }
};

/// Resolves a target name and k to a catalog program name, e.g. ("size_k", 3) to "size_k_3".
std::string resolve_program_target( const std::string& target, std::size_t k );

/// Random script suited to a catalog program's input and parameter.
ChangeScript fuzz_script( const std::string& program, std::size_t n, std::size_t length, std::uint64_t seed );

/// Deterministic given the options; each seed is independent.
FuzzSummary fuzz( const FuzzOptions& options );

struct VerifyOptions
{
  std::size_t n_max = 6;
  std::size_t k_max = 2;
  std::size_t samples = 200;
  /// Exhaustive over all collections when n is at most this value.
  std::size_t exhaustive_n = 4;
  std::size_t identity_samples = 1000;
  std::uint64_t seed = 1;
};

struct VerifySummary
{
  std::size_t collections = 0;
  std::size_t identity_checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

VerifySummary verify_constructions( const VerifyOptions& options );

} // namespace dyncomplab
