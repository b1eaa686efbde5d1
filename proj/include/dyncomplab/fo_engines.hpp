#pragma once

#include <dyncomplab/core.hpp>

#include <cstdint>
#include <vector>

namespace dyncomplab
{

/// Non-empty subset of {1, ..., k}; bit i-1 set means index i is present.
using IndexMask = std::uint32_t;

std::vector<std::size_t> indices_of( IndexMask mask );
IndexMask mask_of( const std::vector<std::size_t>& indices );
std::size_t max_index( IndexMask mask );

/// Index set encoded by node v: i is present iff bit i of v is 1, for i up to floor(log2 n).
std::vector<std::size_t> index_set_of( Element v, std::size_t n );

struct IndexedNeighbours
{
  std::vector<Element> nodes;
  /// False when w has fewer than max(I) in-neighbours or more than k.
  bool applicable = false;
};

/// In-neighbours of w at the order positions listed in `mask`.
IndexedNeighbours indexed_in_neighbours( const Structure& graph, Element w, IndexMask mask, std::size_t k );

/*! \brief Unary-auxiliary maintenance of parity-exists-deg for a fixed bound k.
 *
 * Keeps one unary relation P_I per non-empty I ⊆ {1..k}.  An active node w
 * with at least max(I) in-neighbours is in P_I iff all its coloured
 * in-neighbours are among its I-indexed in-neighbours C and the set of active
 * nodes with an edge from every node of C and no other coloured in-neighbour
 * has odd size.  The linear order is the order on node ids.
 */
class FoDegKEngine
{
public:
  FoDegKEngine( std::size_t n, std::size_t k );

  std::size_t domain_size() const { return graph_.domain_size(); }
  std::size_t k() const { return k_; }
  const Structure& graph() const { return graph_; }
  bool answer() const { return ans_; }

  bool p( IndexMask mask, Element w ) const;
  /// The P_I relations, indexed by mask (entry 0 is unused and empty).
  const std::vector<Relation>& p_relations() const { return p_; }
  /// Declarations of the auxiliary payload besides the answer bit.
  Schema aux_schema() const;

  /// Applies a change; non-effective changes are ignored and return false.
  bool apply( const Change& c );

  /// Direct access for fault injection in tests.
  std::vector<Relation>& p_relations_mutable() { return p_; }

private:
  std::size_t k_;
  Structure graph_;
  std::vector<Relation> p_;
  bool ans_ = false;
};

/*! \brief Maintenance of parity-exists-deg for the bound d = floor(log2 n).
 *
 * Same strategy as FoDegKEngine with k = d, but all P_I are stored in one
 * binary relation P: (v, w) ∈ P iff w ∈ P_{I(v)}, with I(v) decoded from the
 * bits of v.  Order and BIT are materialised as built-ins.
 */
class FoLogNEngine
{
public:
  explicit FoLogNEngine( std::size_t n );

  std::size_t domain_size() const { return graph_.domain_size(); }
  std::size_t bound() const { return d_; }
  const Structure& graph() const { return graph_; }
  bool answer() const { return ans_; }

  /// Reads P_I(w) through the binary encoding.
  bool p( IndexMask mask, Element w ) const;
  const Relation& p_relation() const { return p_; }
  const Relation& order() const { return order_; }
  const Relation& bit() const { return bit_; }
  Schema aux_schema() const;

  bool apply( const Change& c );

  Relation& p_relation_mutable() { return p_; }

private:
  std::size_t d_;
  Structure graph_;
  Relation order_;
  Relation bit_;
  Relation p_;
  bool ans_ = false;
};

} // namespace dyncomplab
