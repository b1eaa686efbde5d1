#pragma once

#include <dyncomplab/core.hpp>

#include <atomic>
#include <optional>
#include <string>
#include <vector>

namespace dyncomplab
{

// From-scratch evaluation of every maintained query.  Nothing here is shared
// with the programs or engines under test.

enum class QueryKind
{
  parity,
  size_k,
  parity_exists,
  parity_exists_deg,
  parity_exists_deg_logn,
  parity_degree_div3,
  degree_k,
};

struct Query
{
  QueryKind kind = QueryKind::parity;
  std::size_t k = 0;
};

/// Names as used on the command line: parity, size-k, parity-exists, parity-exists-deg,
/// parity-exists-deg-logn, parity-degree-div3, degree-k.
std::string query_name( QueryKind kind );
Query parse_query( std::string_view name, std::size_t k = 0 );
Schema query_schema( QueryKind kind );

/// Number of oracle evaluations performed so far; used to audit engine locality.
std::size_t oracle_call_count();

std::size_t floor_log2( std::size_t n );

std::vector<std::size_t> in_degrees( const Structure& graph );
/// Total degree (in plus out); a self-loop counts twice.
std::vector<std::size_t> total_degrees( const Structure& graph );

/// Nodes with an in-edge from a coloured node, optionally restricted to in-degree ≤ bound.
std::vector<Element> covered_set( const Structure& graph, std::optional<std::size_t> bound = std::nullopt );

/*! \brief Evaluates a query from its definition.
 *
 * Boolean queries yield a nullary relation; degree-k yields the unary
 * relation of nodes with in-degree exactly k.
 */
Relation eval_query_relation( const Query& q, const Structure& s );
/// Boolean value; for relational queries, whether the result is non-empty.
bool eval_query( const Query& q, const Structure& s );

/*! \brief Active nodes whose coloured in-neighbours are exactly A and which have all of B as in-neighbours.
 *
 * Throws Error unless A ⊆ R, B ∩ R = ∅ and A, B are disjoint.
 */
std::vector<Element> n_exists_forall( const Structure& graph, const std::vector<Element>& a,
                                      const std::vector<Element>& b, std::size_t k );
/// Active nodes with an in-edge from every node of C and no coloured in-neighbour outside C.
std::vector<Element> n_coloured_or_uncoloured( const Structure& graph, const std::vector<Element>& c, std::size_t k );
/// Union of the out-neighbourhoods of `sources`.
std::vector<Element> n_exists( const Structure& graph, const std::vector<Element>& sources );
/// Intersection of the out-neighbourhoods of `sources` (all nodes when empty).
std::vector<Element> n_forall( const Structure& graph, const std::vector<Element>& sources );

bool st_reachable( const Structure& graph, Element s, Element t );

struct AuditReport
{
  std::vector<std::string> discrepancies;

  bool ok() const { return discrepancies.empty(); }
  void add( std::string what ) { discrepancies.push_back( std::move( what ) ); }
};

class ProgramState;
class FoDegKEngine;
class FoLogNEngine;

/// Compares every auxiliary relation of a catalog program against its intended meaning.
AuditReport audit_aux( const ProgramState& state );
/// Compares every stored P_I entry of an engine against the definition.
AuditReport audit_aux( const FoDegKEngine& engine );
AuditReport audit_aux( const FoLogNEngine& engine );

} // namespace dyncomplab
