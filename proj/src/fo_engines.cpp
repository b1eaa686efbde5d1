#include <dyncomplab/fo_engines.hpp>

#include <algorithm>
#include <bit>
#include <functional>

namespace dyncomplab
{

std::vector<std::size_t> indices_of( IndexMask mask )
{
  std::vector<std::size_t> result;
  for ( std::size_t i = 1; mask; ++i, mask >>= 1 )
    if ( mask & 1u )
      result.push_back( i );
  return result;
}

IndexMask mask_of( const std::vector<std::size_t>& indices )
{
  IndexMask mask = 0;
  for ( auto i : indices )
  {
    if ( i < 1 || i > 32 )
      throw Error( "index " + std::to_string( i ) + " outside 1..32" );
    mask |= IndexMask{ 1 } << ( i - 1 );
  }
  return mask;
}

std::size_t max_index( IndexMask mask )
{
  return static_cast<std::size_t>( std::bit_width( mask ) );
}

namespace
{

std::size_t log_bound( std::size_t n )
{
  return n == 0 ? 0 : static_cast<std::size_t>( std::bit_width( n ) ) - 1;
}

/// Adjacency snapshot of a coloured graph, in-neighbours sorted by the order.
struct GraphView
{
  GraphView( const Structure& g, std::size_t k ) : k( k ), in( g.domain_size() ), coloured( g.domain_size(), false )
  {
    const auto& e = g.relation( "E" );
    const auto& r = g.relation( "R" );
    const auto n = g.domain_size();
    for ( Element v = 0; v < n; ++v )
    {
      coloured[v] = r.contains_offset( v );
      for ( Element w = 0; w < n; ++w )
        if ( e.contains_offset( v * n + w ) )
          in[w].push_back( v );
    }
  }

  bool active( Element w ) const { return in[w].size() <= k; }

  bool has_in( Element w, Element v ) const { return std::binary_search( in[w].begin(), in[w].end(), v ); }

  bool covered( Element w ) const
  {
    return std::any_of( in[w].begin(), in[w].end(), [&]( Element v ) { return coloured[v]; } );
  }

  /// No coloured in-neighbour of w outside the sorted set c.
  bool colours_within( Element w, const std::vector<Element>& c ) const
  {
    return std::all_of( in[w].begin(), in[w].end(),
                        [&]( Element v ) { return !coloured[v] || std::binary_search( c.begin(), c.end(), v ); } );
  }

  /// w is active, has an edge from every node of c and no other coloured in-neighbour.
  bool member( Element w, const std::vector<Element>& c ) const
  {
    return active( w ) && std::includes( in[w].begin(), in[w].end(), c.begin(), c.end() ) && colours_within( w, c );
  }

  std::vector<Element> indexed( Element w, IndexMask mask ) const
  {
    std::vector<Element> result;
    for ( auto i : indices_of( mask ) )
      result.push_back( in[w][i - 1] );
    return result;
  }

  IndexMask mask_in( Element w, const std::vector<Element>& c ) const
  {
    IndexMask mask = 0;
    for ( auto v : c )
      mask |= IndexMask{ 1 } << ( std::lower_bound( in[w].begin(), in[w].end(), v ) - in[w].begin() );
    return mask;
  }

  std::size_t k;
  std::vector<std::vector<Element>> in;
  std::vector<bool> coloured;
};

using StoredP = std::function<bool( IndexMask, Element )>;

/*! Parity of the set of nodes `member` of c in the old graph, read from the store.
 *
 * Any such node w' has c among its in-neighbours at some positions I', and
 * then the stored P_{I'}(w') is exactly that parity.  Without a witness the
 * set is empty.
 */
bool read_parity( const GraphView& g, const StoredP& stored, const std::vector<Element>& c )
{
  for ( Element w = 0; w < g.in.size(); ++w )
    if ( g.member( w, c ) )
      return stored( g.mask_in( w, c ), w );
  return false;
}

struct FoUpdate
{
  bool ans = false;
  std::vector<std::vector<bool>> p; // [mask][w]
};

FoUpdate fo_update( const Structure& before, const Structure& after, std::size_t k, const Change& c, bool ans,
                    const StoredP& stored )
{
  const GraphView g( before, k );
  const GraphView h( after, k );
  const auto n = before.domain_size();
  const bool colour_change = c.relation == "R";
  const Element v = c.tuple[0];

  FoUpdate result;
  if ( colour_change )
    result.ans = ans ^ read_parity( g, stored, { v } );
  else
  {
    const Element w0 = c.tuple[1];
    const bool before_counts = g.active( w0 ) && g.covered( w0 );
    const bool after_counts = h.active( w0 ) && h.covered( w0 );
    result.ans = ans ^ before_counts ^ after_counts;
  }

  const IndexMask masks = IndexMask{ 1 } << k;
  result.p.assign( masks, std::vector<bool>( n, false ) );
  for ( IndexMask mask = 1; mask < masks; ++mask )
    for ( Element w = 0; w < n; ++w )
    {
      if ( !h.active( w ) || h.in[w].size() < max_index( mask ) )
        continue;
      const auto set = h.indexed( w, mask );
      if ( !h.colours_within( w, set ) )
        continue;
      bool parity = read_parity( g, stored, set );
      if ( colour_change )
      {
        // nodes with an edge from v move in or out of the set together
        if ( !std::binary_search( set.begin(), set.end(), v ) )
        {
          auto larger = set;
          larger.insert( std::upper_bound( larger.begin(), larger.end(), v ), v );
          parity ^= read_parity( g, stored, larger );
        }
      }
      else
      {
        const Element w0 = c.tuple[1];
        parity ^= g.member( w0, set ) ^ h.member( w0, set );
      }
      result.p[mask][w] = parity;
    }
  return result;
}

void check_graph_change( const Structure& graph, const Change& c )
{
  if ( c.relation != "E" && c.relation != "R" )
    throw ValidationError( ValidationKind::unknown_relation,
                           "engines accept changes to E and R only, got '" + c.relation + "'" );
  validate_change( graph, c );
}

} // namespace

IndexedNeighbours indexed_in_neighbours( const Structure& graph, Element w, IndexMask mask, std::size_t k )
{
  const GraphView g( graph, k );
  if ( w >= graph.domain_size() )
    throw ValidationError( ValidationKind::id_out_of_range, "node " + std::to_string( w ) + " out of range" );
  if ( mask == 0 || !g.active( w ) || g.in[w].size() < max_index( mask ) )
    return {};
  return { g.indexed( w, mask ), true };
}

std::vector<std::size_t> index_set_of( Element v, std::size_t n )
{
  const auto d = log_bound( n );
  const auto low = d >= 32 ? v : v & ( ( Element{ 1 } << d ) - 1 );
  return indices_of( low );
}

FoDegKEngine::FoDegKEngine( std::size_t n, std::size_t k ) : k_( k ), graph_( n, coloured_graph_schema() )
{
  if ( k > 16 )
    throw Error( "degree bound " + std::to_string( k ) + " is too large for explicit index sets" );
  p_.assign( std::size_t{ 1 } << k, Relation( 1, n ) );
}

bool FoDegKEngine::p( IndexMask mask, Element w ) const
{
  if ( mask == 0 || mask >= p_.size() || w >= domain_size() )
    return false;
  return p_[mask].contains_offset( w );
}

Schema FoDegKEngine::aux_schema() const
{
  Schema s{ { "leq", 2 } };
  for ( IndexMask mask = 1; mask < p_.size(); ++mask )
  {
    std::string name = "P";
    for ( auto i : indices_of( mask ) )
      name += "_" + std::to_string( i );
    s.push_back( { name, 1 } );
  }
  return s;
}

bool FoDegKEngine::apply( const Change& c )
{
  check_graph_change( graph_, c );
  if ( !is_effective( graph_, c ) )
    return false;
  auto next = apply_change( graph_, c );
  const auto update = fo_update( graph_, next, k_, c, ans_, [this]( IndexMask m, Element w ) { return p( m, w ); } );
  for ( IndexMask mask = 1; mask < p_.size(); ++mask )
    for ( Element w = 0; w < domain_size(); ++w )
      p_[mask].set_offset( w, update.p[mask][w] );
  ans_ = update.ans;
  graph_ = std::move( next );
  return true;
}

FoLogNEngine::FoLogNEngine( std::size_t n )
    : d_( log_bound( n ) ), graph_( n, coloured_graph_schema() ), order_( 2, n ), bit_( 2, n ), p_( 2, n )
{
  for ( Element i = 0; i < n; ++i )
    for ( Element j = 0; j < n; ++j )
    {
      if ( i <= j )
        order_.set_offset( i * n + j, true );
      if ( j >= 1 && j <= 32 && ( ( i >> ( j - 1 ) ) & 1u ) )
        bit_.set_offset( i * n + j, true );
    }
}

bool FoLogNEngine::p( IndexMask mask, Element w ) const
{
  const auto n = domain_size();
  if ( mask == 0 || mask >= n || w >= n )
    return false;
  return p_.contains_offset( mask * n + w );
}

Schema FoLogNEngine::aux_schema() const
{
  return { { "leq", 2 }, { "bit", 2 }, { "P", 2 } };
}

bool FoLogNEngine::apply( const Change& c )
{
  check_graph_change( graph_, c );
  if ( !is_effective( graph_, c ) )
    return false;
  auto next = apply_change( graph_, c );
  const auto update = fo_update( graph_, next, d_, c, ans_, [this]( IndexMask m, Element w ) { return p( m, w ); } );
  const auto n = domain_size();
  const Element low = ( Element{ 1 } << d_ ) - 1;
  for ( Element v = 0; v < n; ++v )
  {
    const auto mask = v & low;
    for ( Element w = 0; w < n; ++w )
      p_.set_offset( v * n + w, mask != 0 && update.p[mask][w] );
  }
  ans_ = update.ans;
  graph_ = std::move( next );
  return true;
}

} // namespace dyncomplab
