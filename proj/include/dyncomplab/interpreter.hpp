#pragma once

#include <dyncomplab/core.hpp>
#include <dyncomplab/logic.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dyncomplab
{

enum class Builtin
{
  order,
  bit,
};

std::string_view to_string( Builtin b );
/// `leq/2` for the order, `bit/2` for BIT (bit 1 is the least significant).
RelationDecl builtin_relation( Builtin b );

enum class ProgramClass
{
  dynprop,
  dynfo,
};

std::string_view to_string( ProgramClass c );

struct UpdateRule
{
  ChangeOp op = ChangeOp::insert;
  std::string input;
  std::vector<std::string> params;
  std::string target;
  std::vector<std::string> frees;
  FormulaPtr body;
  std::size_t line = 0;
};

struct InitFact
{
  std::string relation;
  Tuple tuple;
};

struct DynamicProgram
{
  std::string name;
  Schema input;
  Schema aux;
  std::vector<Builtin> builtins;
  std::vector<InitFact> init;
  std::string answer;
  bool requires_effective = false;
  std::optional<ProgramClass> claimed_class;
  std::vector<UpdateRule> rules;

  /// Input relations, then built-ins, then auxiliary relations.
  Schema combined_schema() const;
  const UpdateRule* find_rule( ChangeOp op, std::string_view input_relation, std::string_view target ) const;
};

/// Builds a rule from a body written over plain variables; names in `params` become parameters.
UpdateRule make_rule( ChangeOp op, std::string input, std::vector<std::string> params, std::string target,
                      std::vector<std::string> frees, const FormulaPtr& body );

/*! \brief Parses the `.dyp` program format.
 *
 *   program <name>
 *   class dynprop|dynfo
 *   input <Name>/<arity>
 *   aux <Name>/<arity>
 *   builtin order|bit
 *   init <Name> <id>...
 *   answer <Name>
 *   requires_effective
 *   on ins|del <Rel>(<params>) update <Aux>(<frees>) := <formula>
 *
 * A rule body may continue on following lines that start with whitespace.
 */
DynamicProgram parse_program( std::string_view text );
std::string format_program( const DynamicProgram& p );

std::vector<std::string> validate( const DynamicProgram& p );
std::size_t max_aux_arity( const DynamicProgram& p );

struct CompiledProgram;

enum class EffectiveMode
{
  skip,
  strict,
};

enum class StepOutcome
{
  applied,
  skipped,
};

/*! \brief Input and auxiliary structure of a running program.
 *
 * Copies share the compiled program and are otherwise independent values.
 */
class ProgramState
{
public:
  ProgramState( std::shared_ptr<const DynamicProgram> program, std::size_t n );

  const DynamicProgram& program() const { return *program_; }
  std::size_t domain_size() const { return db_.domain_size(); }

  Structure input() const;
  Structure aux() const;
  /// Input, built-in and auxiliary relations in one structure.
  const Structure& combined() const { return db_; }
  /// Direct access for fault injection in tests.
  Structure& combined_mutable() { return db_; }

  /*! \brief Recomputes every auxiliary relation against the pre-change state, then applies the change.
   *
   * Non-effective changes of programs that require effective changes are
   * skipped or rejected depending on `mode`.
   */
  StepOutcome step( const Change& c, EffectiveMode mode = EffectiveMode::skip );

  const Relation& answer() const;
  /// Value of a nullary answer; for other arities, whether the answer is non-empty.
  bool answer_flag() const;

  bool operator==( const ProgramState& other ) const { return db_ == other.db_; }

private:
  std::shared_ptr<const DynamicProgram> program_;
  std::shared_ptr<const CompiledProgram> compiled_;
  Structure db_;
};

ProgramState init_state( const DynamicProgram& p, std::size_t n );
ProgramState step( const ProgramState& st, const Change& c, EffectiveMode mode = EffectiveMode::skip );

struct CheckpointRecord
{
  std::size_t change_index = 0;
  Relation answer;
  std::optional<Structure> aux;
};

struct RunTrace
{
  std::vector<CheckpointRecord> checkpoints;
  std::vector<std::string> warnings;
  std::size_t skipped = 0;
};

struct RunOptions
{
  bool trace_aux = false;
  EffectiveMode mode = EffectiveMode::skip;
};

RunTrace run( const DynamicProgram& p, const ChangeScript& script, const RunOptions& options = {} );

} // namespace dyncomplab
