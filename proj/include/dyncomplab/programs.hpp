#pragma once

#include <dyncomplab/interpreter.hpp>
#include <dyncomplab/oracle.hpp>

#include <functional>
#include <string>
#include <vector>

namespace dyncomplab
{

/*! \brief Relation names of one linked-list family.
 *
 * A family keeps, per owner (or globally when unowned), a linked list of its
 * elements: `List_i` holds i-step pairs, `First_i`/`Last_i` mark the i-th
 * element from either end, and `count_i` holds exactly when the list has i
 * elements (i = 1..threshold, or 0..threshold when the zero count is stored).
 * `count_gt` holds when there are more than `threshold` elements.
 * The list depth is threshold + 1.
 */
struct ListFamily
{
  std::string list_prefix;
  std::string first_prefix;
  std::string last_prefix;
  std::string count_prefix;
  std::string count_gt;
  std::size_t threshold = 0;
  bool owned = true;
  bool stores_zero = false;

  std::size_t depth() const { return threshold + 1; }
  std::string list( std::size_t i ) const { return list_prefix + std::to_string( i ); }
  std::string first( std::size_t i ) const { return first_prefix + std::to_string( i ); }
  std::string last( std::size_t i ) const { return last_prefix + std::to_string( i ); }
  std::string count( std::size_t i ) const { return count_prefix + std::to_string( i ); }
  Schema schema() const;
};

ListFamily size_family( std::size_t k );
ListFamily in_neighbour_family( std::size_t threshold );
ListFamily coloured_in_neighbour_family( std::size_t threshold );
ListFamily out_nonempty_family();
ListFamily in_nonempty_family();

DynamicProgram parity_program();
DynamicProgram size_k_program( std::size_t k );
DynamicProgram degree_k_relation_program( std::size_t k );
DynamicProgram parity_degree_div3_program();
/// Throws Error for k < 3.
DynamicProgram parity_exists_deg_k_prop_program( std::size_t k );

/// Name of the P relation for ℓ coloured and m uncoloured nodes, e.g. `P_2_1`.
std::string p_relation( std::size_t l, std::size_t m );

struct ProgramCatalogEntry
{
  std::string name;
  std::string family;
  std::size_t k = 0;
  std::string description;
  ProgramClass claimed_class = ProgramClass::dynprop;
  Query query;
  std::size_t arity_claim = 0;
  std::function<DynamicProgram()> build;
};

/// Every shipped program instance; `name` is also the stem of its `.dyp` file.
std::vector<ProgramCatalogEntry> catalog();
const ProgramCatalogEntry& catalog_entry( const std::string& name );

/// Family and parameter of a catalog program name such as `size_k_3`.
std::pair<std::string, std::size_t> split_program_name( const std::string& name );

} // namespace dyncomplab
