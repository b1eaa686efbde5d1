#pragma once

#include <dyncomplab/core.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <vector>

namespace dyncomplab
{

/// Sorted set of input indices.
using InputSet = std::vector<std::uint32_t>;

/*! \brief Depth-two symmetric circuit.
 *
 * Each gate is an and-gate over at most `fanin` inputs; the output applies
 * the symmetric function `table` to the number of activated gates.
 */
struct SymCircuit
{
  std::size_t inputs = 0;
  std::size_t fanin = 0;
  std::vector<InputSet> gates;
  std::vector<bool> table;

  bool operator==( const SymCircuit& ) const = default;
};

/// Throws Error when a gate is empty, repeats or exceeds inputs, is wider than the fan-in, or the table has the wrong length.
void validate( const SymCircuit& c );

/*! \brief Parses the circuit format.
 *
 *   inputs <m>
 *   fanin <k>
 *   gate <i1> <i2> ...      (one line per gate)
 *   sym <b0> <b1> ... <bG>  (table over activated-gate counts 0..G)
 */
SymCircuit parse_circuit( std::string_view text );
std::string format_circuit( const SymCircuit& c );

std::vector<bool> parity_table( std::size_t gates );
std::vector<bool> threshold_table( std::size_t gates, std::size_t at_least );

SymCircuit random_circuit( std::mt19937_64& rng, std::size_t inputs, std::size_t gates, std::size_t fanin );

/// Recomputes the output from scratch.
bool sym_eval_direct( const SymCircuit& c, const std::vector<bool>& assignment );
/// Number of gates containing A whose inputs outside A are all 1, by enumeration.
std::int64_t count_direct( const SymCircuit& c, const std::vector<bool>& assignment, const InputSet& a );

/*! \brief Counter store #(A) for every subset A of some gate's inputs, including the empty set.
 *
 * Flipping input x to 1 adds #(A ∪ {x}) to #(A) for every A not containing
 * x; flipping it to 0 subtracts.  #(∅) is the number of activated gates.
 */
class SymState
{
public:
  SymState( std::shared_ptr<const SymCircuit> circuit, std::vector<bool> assignment );

  const SymCircuit& circuit() const { return *circuit_; }
  const std::vector<bool>& assignment() const { return assignment_; }

  void flip( std::size_t x );
  bool output() const;
  std::int64_t activated() const;

  /// #(A); zero for sets that are not tracked.
  std::int64_t count( const InputSet& a ) const;
  std::size_t tracked() const;
  bool all_non_negative() const;
  std::map<InputSet, std::int64_t> counters() const;

  /// Direct access for fault injection in tests.
  void corrupt( const InputSet& a, std::int64_t value );

  bool operator==( const SymState& other ) const
  {
    return assignment_ == other.assignment_ && counts_ == other.counts_;
  }

private:
  struct Index;

  std::shared_ptr<const SymCircuit> circuit_;
  std::shared_ptr<const Index> index_;
  std::vector<bool> assignment_;
  std::vector<std::int64_t> counts_;
};

SymState sym_init( const SymCircuit& c, const std::vector<bool>& assignment );

} // namespace dyncomplab
