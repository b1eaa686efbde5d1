#include <dyncomplab/symcircuit.hpp>

#include <algorithm>
#include <sstream>

namespace dyncomplab
{

void validate( const SymCircuit& c )
{
  for ( std::size_t g = 0; g < c.gates.size(); ++g )
  {
    const auto& gate = c.gates[g];
    const auto where = "gate " + std::to_string( g ) + ": ";
    if ( gate.empty() )
      throw Error( where + "no inputs" );
    if ( gate.size() > c.fanin )
      throw Error( where + std::to_string( gate.size() ) + " inputs exceed the fan-in bound " +
                   std::to_string( c.fanin ) );
    if ( !std::is_sorted( gate.begin(), gate.end() ) || std::adjacent_find( gate.begin(), gate.end() ) != gate.end() )
      throw Error( where + "inputs must be distinct and sorted" );
    if ( gate.back() >= c.inputs )
      throw Error( where + "input " + std::to_string( gate.back() ) + " out of range" );
  }
  if ( c.table.size() != c.gates.size() + 1 )
    throw Error( "symmetric table has " + std::to_string( c.table.size() ) + " entries, expected " +
                 std::to_string( c.gates.size() + 1 ) );
}

SymCircuit parse_circuit( std::string_view text )
{
  SymCircuit c;
  bool have_inputs = false, have_fanin = false, have_table = false;
  std::istringstream in{ std::string( text ) };
  std::string line;
  std::size_t number = 0;
  while ( std::getline( in, line ) )
  {
    ++number;
    if ( const auto hash = line.find( '#' ); hash != std::string::npos )
      line.erase( hash );
    std::istringstream words( line );
    std::string keyword;
    if ( !( words >> keyword ) )
      continue;
    std::vector<long long> values;
    std::string word;
    while ( words >> word )
    {
      if ( word.find_first_not_of( "0123456789" ) != std::string::npos )
        throw SyntaxError( number, "expected a number, got '" + word + "'" );
      values.push_back( std::stoll( word ) );
    }
    auto single = [&]() {
      if ( values.size() != 1 )
        throw SyntaxError( number, "'" + keyword + "' takes one number" );
      return static_cast<std::size_t>( values[0] );
    };
    if ( keyword == "inputs" )
    {
      c.inputs = single();
      have_inputs = true;
    }
    else if ( keyword == "fanin" )
    {
      c.fanin = single();
      have_fanin = true;
    }
    else if ( keyword == "gate" )
    {
      InputSet gate( values.begin(), values.end() );
      std::sort( gate.begin(), gate.end() );
      c.gates.push_back( std::move( gate ) );
    }
    else if ( keyword == "sym" )
    {
      c.table.clear();
      for ( auto v : values )
      {
        if ( v > 1 )
          throw SyntaxError( number, "table entries are bits" );
        c.table.push_back( v == 1 );
      }
      have_table = true;
    }
    else
      throw SyntaxError( number, "unknown keyword '" + keyword + "'" );
  }
  if ( !have_inputs || !have_fanin || !have_table )
    throw SyntaxError( 0, "a circuit needs 'inputs', 'fanin' and 'sym' lines" );
  validate( c );
  return c;
}

std::string format_circuit( const SymCircuit& c )
{
  std::ostringstream out;
  out << "inputs " << c.inputs << "\nfanin " << c.fanin << "\n";
  for ( const auto& gate : c.gates )
  {
    out << "gate";
    for ( auto i : gate )
      out << ' ' << i;
    out << '\n';
  }
  out << "sym";
  for ( bool b : c.table )
    out << ' ' << ( b ? 1 : 0 );
  out << '\n';
  return out.str();
}

std::vector<bool> parity_table( std::size_t gates )
{
  std::vector<bool> t( gates + 1 );
  for ( std::size_t i = 0; i <= gates; ++i )
    t[i] = i % 2 == 1;
  return t;
}

std::vector<bool> threshold_table( std::size_t gates, std::size_t at_least )
{
  std::vector<bool> t( gates + 1 );
  for ( std::size_t i = 0; i <= gates; ++i )
    t[i] = i >= at_least;
  return t;
}

SymCircuit random_circuit( std::mt19937_64& rng, std::size_t inputs, std::size_t gates, std::size_t fanin )
{
  if ( inputs == 0 || fanin == 0 )
    throw Error( "a random circuit needs inputs and a positive fan-in" );
  SymCircuit c;
  c.inputs = inputs;
  c.fanin = fanin;
  std::vector<std::uint32_t> all( inputs );
  for ( std::uint32_t i = 0; i < inputs; ++i )
    all[i] = i;
  std::uniform_int_distribution<std::size_t> width( 1, std::min( fanin, inputs ) );
  for ( std::size_t g = 0; g < gates; ++g )
  {
    InputSet gate;
    std::sample( all.begin(), all.end(), std::back_inserter( gate ), width( rng ), rng );
    c.gates.push_back( std::move( gate ) );
  }
  std::bernoulli_distribution coin( 0.5 );
  c.table.resize( gates + 1 );
  for ( std::size_t i = 0; i <= gates; ++i )
    c.table[i] = coin( rng );
  return c;
}

bool sym_eval_direct( const SymCircuit& c, const std::vector<bool>& assignment )
{
  std::size_t activated = 0;
  for ( const auto& gate : c.gates )
    if ( std::all_of( gate.begin(), gate.end(), [&]( auto i ) { return assignment.at( i ); } ) )
      ++activated;
  return c.table.at( activated );
}

std::int64_t count_direct( const SymCircuit& c, const std::vector<bool>& assignment, const InputSet& a )
{
  std::int64_t count = 0;
  for ( const auto& gate : c.gates )
  {
    if ( !std::includes( gate.begin(), gate.end(), a.begin(), a.end() ) )
      continue;
    bool activated = true;
    for ( auto i : gate )
      if ( !std::binary_search( a.begin(), a.end(), i ) && !assignment.at( i ) )
        activated = false;
    count += activated ? 1 : 0;
  }
  return count;
}

struct SymState::Index
{
  std::map<InputSet, std::size_t> slot;
  std::vector<InputSet> sets;
  /// For each input x, pairs (slot of B, slot of B minus x) over tracked B containing x.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_input;
};

namespace
{

template<typename Fn>
void for_each_subset( const InputSet& gate, Fn&& fn )
{
  const std::size_t count = std::size_t{ 1 } << gate.size();
  for ( std::size_t bits = 0; bits < count; ++bits )
  {
    InputSet subset;
    for ( std::size_t i = 0; i < gate.size(); ++i )
      if ( ( bits >> i ) & 1u )
        subset.push_back( gate[i] );
    fn( subset, bits );
  }
}

} // namespace

SymState::SymState( std::shared_ptr<const SymCircuit> circuit, std::vector<bool> assignment )
    : circuit_( std::move( circuit ) ), assignment_( std::move( assignment ) )
{
  const auto& c = *circuit_;
  validate( c );
  if ( assignment_.size() != c.inputs )
    throw Error( "assignment has " + std::to_string( assignment_.size() ) + " bits, circuit has " +
                 std::to_string( c.inputs ) + " inputs" );

  auto index = std::make_shared<Index>();
  auto slot_of = [&]( const InputSet& a ) {
    auto [it, fresh] = index->slot.emplace( a, index->sets.size() );
    if ( fresh )
      index->sets.push_back( a );
    return it->second;
  };
  slot_of( {} );
  for ( const auto& gate : c.gates )
    for_each_subset( gate, [&]( const InputSet& a, std::size_t ) { slot_of( a ); } );

  index->by_input.resize( c.inputs );
  for ( std::size_t b = 0; b < index->sets.size(); ++b )
  {
    const auto& set = index->sets[b];
    for ( std::size_t i = 0; i < set.size(); ++i )
    {
      auto smaller = set;
      smaller.erase( smaller.begin() + static_cast<std::ptrdiff_t>( i ) );
      index->by_input[set[i]].emplace_back( b, index->slot.at( smaller ) );
    }
  }

  counts_.assign( index->sets.size(), 0 );
  for ( const auto& gate : c.gates )
  {
    std::size_t ones = 0;
    for ( std::size_t i = 0; i < gate.size(); ++i )
      if ( assignment_[gate[i]] )
        ones |= std::size_t{ 1 } << i;
    const std::size_t all = ( std::size_t{ 1 } << gate.size() ) - 1;
    // the gate counts for A iff every input outside A is set
    for_each_subset( gate, [&]( const InputSet& a, std::size_t bits ) {
      if ( ( ( all & ~bits ) & ~ones ) == 0 )
        ++counts_[index->slot.at( a )];
    } );
  }
  index_ = std::move( index );
}

SymState sym_init( const SymCircuit& c, const std::vector<bool>& assignment )
{
  return SymState( std::make_shared<const SymCircuit>( c ), assignment );
}

void SymState::flip( std::size_t x )
{
  if ( x >= assignment_.size() )
    throw ValidationError( ValidationKind::id_out_of_range, "input " + std::to_string( x ) + " out of range" );
  const std::int64_t sign = assignment_[x] ? -1 : 1;
  // counters of sets containing x are unchanged, so reading them in place is safe
  for ( const auto& [with_x, without_x] : index_->by_input[x] )
    counts_[without_x] += sign * counts_[with_x];
  assignment_[x] = !assignment_[x];
}

std::int64_t SymState::activated() const
{
  return counts_[0];
}

bool SymState::output() const
{
  return circuit_->table.at( static_cast<std::size_t>( activated() ) );
}

std::int64_t SymState::count( const InputSet& a ) const
{
  const auto it = index_->slot.find( a );
  return it == index_->slot.end() ? 0 : counts_[it->second];
}

std::size_t SymState::tracked() const
{
  return counts_.size();
}

bool SymState::all_non_negative() const
{
  return std::all_of( counts_.begin(), counts_.end(), []( std::int64_t v ) { return v >= 0; } );
}

std::map<InputSet, std::int64_t> SymState::counters() const
{
  std::map<InputSet, std::int64_t> result;
  for ( std::size_t i = 0; i < counts_.size(); ++i )
    result.emplace( index_->sets[i], counts_[i] );
  return result;
}

void SymState::corrupt( const InputSet& a, std::int64_t value )
{
  counts_.at( index_->slot.at( a ) ) = value;
}

} // namespace dyncomplab
