#pragma once

#include <dyncomplab/core.hpp>

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dyncomplab
{

/// Sorted subset of {1, ..., n}.
using IndexSubset = std::vector<std::size_t>;

/// A family of (k+1)-subsets of {1, ..., n}.
struct Collection
{
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<IndexSubset> members;
};

void validate( const Collection& col );
/// Members separated by ';', elements by ',', e.g. "1,3,4;2,3,4".
Collection parse_collection( std::string_view text, std::size_t n, std::size_t k );
std::string format_collection( const Collection& col );

/// All subsets of {1..n} with exactly `size` elements in lexicographic order.
std::vector<IndexSubset> subsets_of_size( std::size_t n, std::size_t size );

struct LowerBoundGraph
{
  Structure graph;
  /// p_i has id i-1.
  std::vector<Element> p;
  /// Subset represented by node p.size() + j, ordered by size and then lexicographically.
  std::vector<IndexSubset> s;

  Element node_of( const IndexSubset& y ) const;
  std::vector<Element> p_nodes( const IndexSubset& x ) const;
};

/*! \brief Graph whose coloured-out-neighbourhood parities encode a collection.
 *
 * Nodes are p_1..p_n followed by all non-empty subsets Y of {1..n} with at
 * most k+1 elements.  There is an edge (p_i, Y) iff i ∈ Y and an odd number
 * of members of the collection contain Y.
 */
LowerBoundGraph lower_bound_graph( const Collection& col );

struct LowerBoundCheck
{
  bool ok = true;
  std::optional<IndexSubset> counterexample;
  std::string reason;
};

/// Checks, for every (k+1)-subset B, that the out-neighbourhood of P_B is odd iff B is a member, and the in-degree bound.
LowerBoundCheck verify_lower_bound_property( const Collection& col, const LowerBoundGraph& g );

/// Parity of |union of out-neighbourhoods of `sources`| equals the sum over non-empty X ⊆ sources of |common out-neighbours of X|, mod 2.
bool inclusion_exclusion_holds( const Structure& graph, const std::vector<Element>& sources );

Collection random_collection( std::mt19937_64& rng, std::size_t n, std::size_t k );

/// Graph with node partition {s, t} ∪ A ∪ B and edges within s×A ∪ A×B ∪ B×t.
struct TwoLayeredGraph
{
  Structure graph; // schema E/2
  Element s = 0;
  Element t = 0;
  std::vector<Element> a;
  std::vector<Element> b;
};

/// Throws Error unless the graph is 2-layered with every B node linked to t.
void validate( const TwoLayeredGraph& g, bool require_isolated_s = false );

/*! \brief Coloured graph with reversed edges used to decide s-t reachability by a parity query.
 *
 * With `extra_t_edges` (the bound-2 variant) t also gets an edge to every
 * node of A ∪ B.
 */
struct Reduction
{
  Structure graph; // coloured graph
  Element s = 0;
  Element t = 0;
  std::vector<Element> a;
  std::vector<Element> b;
  bool extra_t_edges = false;

  /// Degree bound of the target query: 1, or 2 for the variant.
  std::size_t bound() const { return extra_t_edges ? 2 : 1; }
  /// del E(a,b) becomes del E(b,a); ins E(s,a) becomes ins E(s,a) followed by ins R(s).
  std::vector<Change> translate( const Change& c ) const;
};

Reduction two_layered_reduction( const TwoLayeredGraph& g, bool extra_t_edges = false );

TwoLayeredGraph random_two_layered( std::mt19937_64& rng, std::size_t a_size, std::size_t b_size, double density );
/// Deletions of A×B edges followed by one insertion (s, a).
std::vector<Change> random_admissible_changes( std::mt19937_64& rng, const TwoLayeredGraph& g, std::size_t deletions );

struct Fixture
{
  std::string name;
  std::string description;
  Structure graph;
  std::vector<std::string> node_names;
  /// Named change sequences applied to the base graph.
  std::map<std::string, std::vector<Change>> variants;

  Element node( std::string_view name ) const;
};

/// fig1, fig2, fig3, fig4, fig6.
std::vector<std::string> fixture_names();
Fixture figure_fixture( std::string_view name );
/// Base graph inserts, a checkpoint, the variant's changes and a final checkpoint.
ChangeScript fixture_script( const Fixture& f, const std::string& variant );

struct ScriptProfile
{
  Schema relations;
  std::vector<double> weights;
  /// Fraction of possible tuples each relation drifts towards.
  std::vector<double> target_fill;
  std::size_t length = 100;
  double checkpoint_rate = 0.3;
};

/// Profiles: "unary" (U/1), "graph" (E/2), "coloured" (E/2 and R/1, the default).
ScriptProfile script_profile( std::string_view name, std::size_t length = 100 );

/// Seeded sequence of effective changes with random checkpoints, ending in a checkpoint.
ChangeScript random_script( std::size_t n, const ScriptProfile& profile, std::uint64_t seed );

} // namespace dyncomplab
