#pragma once

#include <dyncomplab/core.hpp>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dyncomplab
{

struct Term
{
  enum class Kind
  {
    variable,
    parameter,
    constant,
  };

  Kind kind = Kind::variable;
  std::string name;
  Element value = 0;

  bool operator==( const Term& ) const = default;
};

Term var( std::string name );
Term param( std::string name );
Term constant( Element value );

enum class NodeKind
{
  truth,
  falsity,
  atom,
  equal,
  negation,
  conjunction,
  disjunction,
  exclusive_or,
  exists,
  forall,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/*! \brief Immutable formula node.
 *
 * Atoms use `relation` and `terms`; equality uses two `terms`;
 * connectives use `children` (n-ary for conjunction, disjunction and
 * exclusive or); quantifiers bind `variable` over their single child.
 */
struct Formula
{
  NodeKind kind = NodeKind::truth;
  std::string relation;
  std::vector<Term> terms;
  std::vector<FormulaPtr> children;
  std::string variable;
};

bool equal( const Formula& a, const Formula& b );
inline bool equal( const FormulaPtr& a, const FormulaPtr& b ) { return equal( *a, *b ); }

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr atom( std::string relation, std::vector<Term> terms );
/// Atom whose arguments are all variables with the given names.
FormulaPtr atom( std::string relation, const std::vector<std::string>& variables );
FormulaPtr eq( Term a, Term b );
FormulaPtr neq( Term a, Term b );
FormulaPtr neg( FormulaPtr f );
/// Empty conjunctions are true, singletons collapse to their element.
FormulaPtr conj( std::vector<FormulaPtr> parts );
/// Empty disjunctions are false, singletons collapse to their element.
FormulaPtr disj( std::vector<FormulaPtr> parts );
FormulaPtr exclusive_or( std::vector<FormulaPtr> parts );
FormulaPtr exists( std::string variable, FormulaPtr body );
FormulaPtr forall( std::string variable, FormulaPtr body );

/// Replaces free occurrences of the named variables.
FormulaPtr substitute( const FormulaPtr& f, const std::map<std::string, Term>& replacement );

/// Turns free variable occurrences with the given names into parameters.
FormulaPtr mark_parameters( const FormulaPtr& f, const std::set<std::string>& names );

struct ParseOptions
{
  std::set<std::string> parameters;
  /// When set, any free variable outside this set is an error.
  std::optional<std::set<std::string>> allowed_free;
};

/*! \brief Parses a formula and resolves its atoms against `schema`.
 *
 * Grammar, loosest binding first: quantifiers (`exists x y. φ`,
 * `forall x. φ`), `->` (right associative), `|`, `^`, `&`, `!`.
 * Atoms are `Name(t, ...)`, nullary atoms `Name()`; equality `s = t`.
 * Terms are identifiers or decimal constants.
 */
FormulaPtr parse_formula( std::string_view text, const Schema& schema, const ParseOptions& options = {} );
std::string pretty( const Formula& f );
inline std::string pretty( const FormulaPtr& f ) { return pretty( *f ); }

enum class FormulaClass
{
  quantifier_free,
  first_order,
};

std::string_view to_string( FormulaClass c );

FormulaClass classify( const Formula& f );
std::set<std::string> free_variables( const Formula& f );
std::set<std::string> parameters( const Formula& f );
std::size_t depth( const Formula& f );

/// Reports unknown relations and arity mismatches; empty when the formula fits.
std::vector<std::string> check_schema( const Formula& f, const Schema& schema );

using Assignment = std::map<std::string, Element>;

/// Reference semantics by direct recursion; quantifiers range over [0, n).
bool evaluate( const Formula& f, const Structure& s, const Assignment& assignment );

/*! \brief Slot-indexed form of a formula bound to a structure layout.
 *
 * Variables and parameters are mapped to slots of an environment array and
 * relations to indices of the structure, so evaluation does no lookups.
 * The structure passed to `evaluate` must have the layout used at compile time.
 */
class CompiledFormula
{
public:
  CompiledFormula() = default;
  CompiledFormula( const Formula& f, const Structure& layout, const std::vector<std::string>& slots );

  bool evaluate( const Structure& s, std::vector<Element>& env ) const;
  std::size_t slot_count() const noexcept { return slot_count_; }
  /// Largest slot index among the node's free names, or -1 when it has none.
  int deepest_slot() const noexcept { return deepest_slot_; }

private:
  struct Node
  {
    NodeKind kind = NodeKind::truth;
    std::size_t relation = 0;
    std::vector<std::int64_t> args; // slot index, or -(constant + 1)
    std::vector<std::size_t> children;
    std::size_t slot = 0;
  };

  std::size_t build( const Formula& f, const Structure& layout, std::vector<std::string>& scope,
                     const std::vector<std::string>& slots );
  bool eval( std::size_t node, const Structure& s, std::vector<Element>& env ) const;

  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  std::size_t slot_count_ = 0;
  int deepest_slot_ = -1;
};

} // namespace dyncomplab
