#include <dyncomplab/oracle.hpp>

#include <dyncomplab/fo_engines.hpp>
#include <dyncomplab/programs.hpp>

#include <algorithm>
#include <deque>
#include <set>

namespace dyncomplab
{

namespace
{

std::atomic<std::size_t> calls{ 0 };

void count_call()
{
  calls.fetch_add( 1, std::memory_order_relaxed );
}

bool has_edge( const Structure& g, Element v, Element w )
{
  const auto n = g.domain_size();
  return g.relation( "E" ).contains_offset( v * n + w );
}

bool is_coloured( const Structure& g, Element v )
{
  return g.relation( "R" ).contains_offset( v );
}

std::vector<Element> in_neighbours( const Structure& g, Element w )
{
  std::vector<Element> result;
  for ( Element v = 0; v < g.domain_size(); ++v )
    if ( has_edge( g, v, w ) )
      result.push_back( v );
  return result;
}

std::string tuple_text( const Tuple& t )
{
  std::string s = "(";
  for ( std::size_t i = 0; i < t.size(); ++i )
    s += ( i ? ", " : "" ) + std::to_string( t[i] );
  return s + ")";
}

void check_element( const Structure& g, Element v )
{
  if ( v >= g.domain_size() )
    throw ValidationError( ValidationKind::id_out_of_range, "node " + std::to_string( v ) + " out of range" );
}

} // namespace

std::string query_name( QueryKind kind )
{
  switch ( kind )
  {
  case QueryKind::parity:
    return "parity";
  case QueryKind::size_k:
    return "size-k";
  case QueryKind::parity_exists:
    return "parity-exists";
  case QueryKind::parity_exists_deg:
    return "parity-exists-deg";
  case QueryKind::parity_exists_deg_logn:
    return "parity-exists-deg-logn";
  case QueryKind::parity_degree_div3:
    return "parity-degree-div3";
  case QueryKind::degree_k:
    return "degree-k";
  }
  return "?";
}

Query parse_query( std::string_view name, std::size_t k )
{
  for ( auto kind : { QueryKind::parity, QueryKind::size_k, QueryKind::parity_exists, QueryKind::parity_exists_deg,
                      QueryKind::parity_exists_deg_logn, QueryKind::parity_degree_div3, QueryKind::degree_k } )
    if ( query_name( kind ) == name )
      return { kind, k };
  throw Error( "unknown query '" + std::string( name ) + "'" );
}

Schema query_schema( QueryKind kind )
{
  switch ( kind )
  {
  case QueryKind::parity:
  case QueryKind::size_k:
    return { { "U", 1 } };
  case QueryKind::parity_degree_div3:
  case QueryKind::degree_k:
    return { { "E", 2 } };
  default:
    return coloured_graph_schema();
  }
}

std::size_t oracle_call_count()
{
  return calls.load( std::memory_order_relaxed );
}

std::size_t floor_log2( std::size_t n )
{
  std::size_t d = 0;
  while ( n >= 2 )
  {
    n /= 2;
    ++d;
  }
  return d;
}

std::vector<std::size_t> in_degrees( const Structure& graph )
{
  const auto n = graph.domain_size();
  std::vector<std::size_t> deg( n, 0 );
  for ( Element v = 0; v < n; ++v )
    for ( Element w = 0; w < n; ++w )
      if ( has_edge( graph, v, w ) )
        ++deg[w];
  return deg;
}

std::vector<std::size_t> total_degrees( const Structure& graph )
{
  const auto n = graph.domain_size();
  std::vector<std::size_t> deg( n, 0 );
  for ( Element v = 0; v < n; ++v )
    for ( Element w = 0; w < n; ++w )
      if ( has_edge( graph, v, w ) )
      {
        ++deg[v];
        ++deg[w];
      }
  return deg;
}

std::vector<Element> covered_set( const Structure& graph, std::optional<std::size_t> bound )
{
  count_call();
  const auto deg = in_degrees( graph );
  std::vector<Element> result;
  for ( Element w = 0; w < graph.domain_size(); ++w )
  {
    if ( bound && deg[w] > *bound )
      continue;
    for ( Element v = 0; v < graph.domain_size(); ++v )
      if ( is_coloured( graph, v ) && has_edge( graph, v, w ) )
      {
        result.push_back( w );
        break;
      }
  }
  return result;
}

Relation eval_query_relation( const Query& q, const Structure& s )
{
  count_call();
  for ( const auto& d : query_schema( q.kind ) )
  {
    const auto arity = find_arity( s.schema(), d.name );
    if ( !arity || *arity != d.arity )
      throw ValidationError( ValidationKind::unknown_relation, "query " + query_name( q.kind ) + " needs relation " +
                                                                   d.name + "/" + std::to_string( d.arity ) );
  }
  const auto n = s.domain_size();
  Relation flag( 0, n );
  auto set_flag = [&]( bool value ) {
    flag.set_offset( 0, value );
    return flag;
  };
  switch ( q.kind )
  {
  case QueryKind::parity:
    return set_flag( s.relation( "U" ).size() % 2 == 1 );
  case QueryKind::size_k:
    return set_flag( s.relation( "U" ).size() == q.k );
  case QueryKind::parity_exists:
    return set_flag( covered_set( s ).size() % 2 == 1 );
  case QueryKind::parity_exists_deg:
    return set_flag( covered_set( s, q.k ).size() % 2 == 1 );
  case QueryKind::parity_exists_deg_logn:
    return set_flag( covered_set( s, floor_log2( n ) ).size() % 2 == 1 );
  case QueryKind::parity_degree_div3:
  {
    std::size_t count = 0;
    for ( auto d : total_degrees( s ) )
      if ( d > 0 && d % 3 == 0 )
        ++count;
    return set_flag( count % 2 == 1 );
  }
  case QueryKind::degree_k:
  {
    Relation result( 1, n );
    const auto deg = in_degrees( s );
    for ( Element w = 0; w < n; ++w )
      result.set_offset( w, deg[w] == q.k );
    return result;
  }
  }
  return flag;
}

bool eval_query( const Query& q, const Structure& s )
{
  return !eval_query_relation( q, s ).empty();
}

std::vector<Element> n_exists_forall( const Structure& graph, const std::vector<Element>& a,
                                      const std::vector<Element>& b, std::size_t k )
{
  count_call();
  for ( auto v : a )
  {
    check_element( graph, v );
    if ( !is_coloured( graph, v ) )
      throw Error( "node " + std::to_string( v ) + " of A is not coloured" );
  }
  for ( auto v : b )
  {
    check_element( graph, v );
    if ( is_coloured( graph, v ) )
      throw Error( "node " + std::to_string( v ) + " of B is coloured" );
  }
  const std::set<Element> as( a.begin(), a.end() );
  const std::set<Element> bs( b.begin(), b.end() );
  if ( as.size() != a.size() || bs.size() != b.size() )
    throw Error( "A and B must not contain repeated nodes" );

  std::vector<Element> result;
  const auto deg = in_degrees( graph );
  for ( Element w = 0; w < graph.domain_size(); ++w )
  {
    if ( deg[w] > k )
      continue;
    bool ok = true;
    for ( Element v = 0; v < graph.domain_size() && ok; ++v )
    {
      const bool edge = has_edge( graph, v, w );
      if ( ( as.count( v ) || bs.count( v ) ) && !edge )
        ok = false;
      if ( edge && is_coloured( graph, v ) && !as.count( v ) )
        ok = false;
    }
    if ( ok )
      result.push_back( w );
  }
  return result;
}

std::vector<Element> n_coloured_or_uncoloured( const Structure& graph, const std::vector<Element>& c, std::size_t k )
{
  count_call();
  std::vector<Element> coloured, uncoloured;
  for ( auto v : c )
  {
    check_element( graph, v );
    ( is_coloured( graph, v ) ? coloured : uncoloured ).push_back( v );
  }
  return n_exists_forall( graph, coloured, uncoloured, k );
}

std::vector<Element> n_exists( const Structure& graph, const std::vector<Element>& sources )
{
  count_call();
  std::vector<Element> result;
  for ( Element w = 0; w < graph.domain_size(); ++w )
    if ( std::any_of( sources.begin(), sources.end(), [&]( Element v ) { return has_edge( graph, v, w ); } ) )
      result.push_back( w );
  return result;
}

std::vector<Element> n_forall( const Structure& graph, const std::vector<Element>& sources )
{
  count_call();
  std::vector<Element> result;
  for ( Element w = 0; w < graph.domain_size(); ++w )
    if ( std::all_of( sources.begin(), sources.end(), [&]( Element v ) { return has_edge( graph, v, w ); } ) )
      result.push_back( w );
  return result;
}

bool st_reachable( const Structure& graph, Element s, Element t )
{
  count_call();
  check_element( graph, s );
  check_element( graph, t );
  std::vector<bool> seen( graph.domain_size(), false );
  std::deque<Element> todo{ s };
  seen[s] = true;
  while ( !todo.empty() )
  {
    const auto v = todo.front();
    todo.pop_front();
    if ( v == t )
      return true;
    for ( Element w = 0; w < graph.domain_size(); ++w )
      if ( !seen[w] && has_edge( graph, v, w ) )
      {
        seen[w] = true;
        todo.push_back( w );
      }
  }
  return false;
}

namespace
{

class Auditor
{
public:
  Auditor( const Structure& s, AuditReport& report ) : s_( s ), report_( report ) {}

  void expect( const std::string& relation, const Tuple& t, bool expected )
  {
    const bool stored = s_.relation( relation ).contains( t );
    if ( stored != expected )
      report_.add( relation + tuple_text( t ) + ( stored ? " spurious" : " missing" ) );
  }

  void expect_flag( const std::string& relation, bool expected ) { expect( relation, {}, expected ); }

  /// Whole-relation comparison against a set of expected tuples.
  void expect_exactly( const std::string& relation, const std::set<Tuple>& expected )
  {
    const auto& r = s_.relation( relation );
    bool any_missing = false;
    for ( const auto& t : expected )
      if ( !r.contains( t ) )
      {
        any_missing = true;
        report_.add( relation + tuple_text( t ) + " missing" );
      }
    if ( any_missing || r.size() != expected.size() )
      r.for_each( [&]( const Tuple& t ) {
        if ( !expected.count( t ) )
          report_.add( relation + tuple_text( t ) + " spurious" );
      } );
  }

  /// Structural check of one list of a list family.
  void list( const ListFamily& f, std::optional<Element> owner, const std::vector<Element>& elements )
  {
    const auto n = s_.domain_size();
    auto key = [&]( Tuple rest ) {
      if ( owner )
        rest.insert( rest.begin(), *owner );
      return rest;
    };
    const std::string who = owner ? " of owner " + std::to_string( *owner ) : "";
    const std::set<Element> members( elements.begin(), elements.end() );

    std::vector<std::optional<Element>> succ( n ), pred( n );
    std::size_t pairs = 0;
    bool shape_ok = true;
    for ( Element x = 0; x < n; ++x )
      for ( Element y = 0; y < n; ++y )
        if ( s_.relation( f.list( 1 ) ).contains( key( { x, y } ) ) )
        {
          ++pairs;
          if ( !members.count( x ) || !members.count( y ) || succ[x] || pred[y] )
            shape_ok = false;
          succ[x] = y;
          pred[y] = x;
        }
    std::vector<Element> order;
    if ( shape_ok && !members.empty() )
    {
      std::optional<Element> head;
      for ( auto x : members )
        if ( !pred[x] )
        {
          shape_ok = shape_ok && !head;
          head = x;
        }
      for ( auto cur = head; cur && order.size() <= members.size(); cur = succ[*cur] )
        order.push_back( *cur );
      shape_ok = shape_ok && head && order.size() == members.size();
    }
    if ( !shape_ok || pairs + ( members.empty() ? 0 : 1 ) != members.size() )
    {
      report_.add( f.list( 1 ) + who + " is not a single path over its " + std::to_string( members.size() ) +
                   " elements" );
      return;
    }

    std::vector<std::optional<std::size_t>> pos( n );
    for ( std::size_t i = 0; i < order.size(); ++i )
      pos[order[i]] = i;
    const auto size = order.size();
    for ( std::size_t i = 1; i <= f.depth(); ++i )
      for ( Element x = 0; x < n; ++x )
      {
        for ( Element y = 0; y < n; ++y )
          expect( f.list( i ), key( { x, y } ), pos[x] && pos[y] && *pos[y] == *pos[x] + i );
        expect( f.first( i ), key( { x } ), pos[x] && *pos[x] == i - 1 );
        expect( f.last( i ), key( { x } ), pos[x] && i <= size && *pos[x] == size - i );
      }
    for ( std::size_t i = f.stores_zero ? 0 : 1; i <= f.threshold; ++i )
      expect( f.count( i ), key( {} ), size == i );
    expect( f.count_gt, key( {} ), size > f.threshold );
  }

  const Structure& s_;
  AuditReport& report_;
};

std::vector<Element> members_of( const Relation& unary )
{
  std::vector<Element> result;
  unary.for_each( [&]( const Tuple& t ) { result.push_back( t[0] ); } );
  return result;
}

std::vector<Element> out_neighbours( const Structure& g, Element v )
{
  std::vector<Element> result;
  for ( Element w = 0; w < g.domain_size(); ++w )
    if ( has_edge( g, v, w ) )
      result.push_back( w );
  return result;
}

std::vector<Element> coloured_in_neighbours( const Structure& g, Element w )
{
  auto in = in_neighbours( g, w );
  std::erase_if( in, [&]( Element v ) { return !is_coloured( g, v ); } );
  return in;
}

/// Ordered (l+m)-tuples that can satisfy the P relation semantics with a non-empty witness set.
std::set<Tuple> expected_p( const Structure& g, std::size_t l, std::size_t m, std::size_t k )
{
  std::set<Tuple> candidates;
  const auto deg = in_degrees( g );
  for ( Element w = 0; w < g.domain_size(); ++w )
  {
    if ( deg[w] > k )
      continue;
    auto a = coloured_in_neighbours( g, w );
    if ( a.size() != l )
      continue;
    auto un = in_neighbours( g, w );
    std::erase_if( un, [&]( Element v ) { return is_coloured( g, v ); } );
    if ( un.size() < m )
      continue;
    // every ordered m-selection of the uncoloured in-neighbours
    std::vector<bool> pick( un.size(), false );
    std::fill( pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>( m ), true );
    do
    {
      std::vector<Element> b;
      for ( std::size_t i = 0; i < un.size(); ++i )
        if ( pick[i] )
          b.push_back( un[i] );
      auto pa = a;
      do
      {
        auto pb = b;
        do
        {
          Tuple t = pa;
          t.insert( t.end(), pb.begin(), pb.end() );
          candidates.insert( t );
        } while ( std::next_permutation( pb.begin(), pb.end() ) );
      } while ( std::next_permutation( pa.begin(), pa.end() ) );
    } while ( std::prev_permutation( pick.begin(), pick.end() ) );
  }
  std::set<Tuple> expected;
  for ( const auto& t : candidates )
  {
    const std::vector<Element> a( t.begin(), t.begin() + static_cast<std::ptrdiff_t>( l ) );
    const std::vector<Element> b( t.begin() + static_cast<std::ptrdiff_t>( l ), t.end() );
    if ( n_exists_forall( g, a, b, k ).size() % 2 == 1 )
      expected.insert( t );
  }
  return expected;
}

} // namespace

AuditReport audit_aux( const ProgramState& state )
{
  AuditReport report;
  const auto& s = state.combined();
  const auto n = s.domain_size();
  Auditor au( s, report );
  const auto [family, k] = split_program_name( state.program().name );

  if ( family == "parity" )
    au.expect_flag( "P", s.relation( "U" ).size() % 2 == 1 );
  else if ( family == "size_k" )
    au.list( size_family( k ), std::nullopt, members_of( s.relation( "U" ) ) );
  else if ( family == "degree_k" )
  {
    for ( Element z = 0; z < n; ++z )
      au.list( in_neighbour_family( k + 1 ), z, in_neighbours( s, z ) );
  }
  else if ( family == "parity_degree_div3" )
  {
    for ( Element z = 0; z < n; ++z )
    {
      au.list( out_nonempty_family(), z, out_neighbours( s, z ) );
      au.list( in_nonempty_family(), z, in_neighbours( s, z ) );
    }
    const auto deg = total_degrees( s );
    for ( Element x = 0; x < n; ++x )
    {
      au.expect( "M_0", { x }, deg[x] > 0 && deg[x] % 3 == 0 );
      au.expect( "M_1", { x }, deg[x] % 3 == 1 );
      au.expect( "M_2", { x }, deg[x] % 3 == 2 );
    }
    au.expect_flag( "P", eval_query( { QueryKind::parity_degree_div3, 0 }, s ) );
  }
  else if ( family == "parity_exists_deg_prop" )
  {
    const auto deg = in_degrees( s );
    for ( Element z = 0; z < n; ++z )
    {
      au.list( in_neighbour_family( k + 1 ), z, in_neighbours( s, z ) );
      au.list( coloured_in_neighbour_family( k + 1 ), z, coloured_in_neighbours( s, z ) );
      au.expect( "Active", { z }, deg[z] >= 1 && deg[z] <= k );
    }
    for ( std::size_t total = 1; total <= k; ++total )
      for ( std::size_t l = 0; l <= total; ++l )
        au.expect_exactly( p_relation( l, total - l ), expected_p( s, l, total - l, k ) );
    au.expect_flag( "Ans", eval_query( { QueryKind::parity_exists_deg, k }, s ) );
  }
  else
    throw Error( "no intended semantics known for program '" + state.program().name + "'" );
  return report;
}

namespace
{

/// Expected P_I(w) from the definition, computing the I-indexed in-neighbours independently.
bool expected_p_index( const Structure& g, IndexMask mask, Element w, std::size_t k )
{
  const auto in = in_neighbours( g, w );
  std::size_t top = 0;
  for ( std::size_t i = 1; i <= 32; ++i )
    if ( ( mask >> ( i - 1 ) ) & 1u )
      top = i;
  if ( in.size() > k || in.size() < top )
    return false;
  std::vector<Element> c;
  for ( std::size_t i = 1; i <= top; ++i )
    if ( ( mask >> ( i - 1 ) ) & 1u )
      c.push_back( in[i - 1] );
  for ( auto v : in )
    if ( is_coloured( g, v ) && std::find( c.begin(), c.end(), v ) == c.end() )
      return false;
  return n_coloured_or_uncoloured( g, c, k ).size() % 2 == 1;
}

template<typename Engine>
void audit_engine( const Engine& engine, std::size_t k, AuditReport& report )
{
  const auto& g = engine.graph();
  for ( IndexMask mask = 1; mask < ( IndexMask{ 1 } << k ); ++mask )
    for ( Element w = 0; w < g.domain_size(); ++w )
    {
      const bool expected = expected_p_index( g, mask, w, k );
      if ( engine.p( mask, w ) != expected )
        report.add( "P_" + std::to_string( mask ) + "(" + std::to_string( w ) + ")" +
                    ( expected ? " missing" : " spurious" ) );
    }
}

} // namespace

AuditReport audit_aux( const FoDegKEngine& engine )
{
  AuditReport report;
  audit_engine( engine, engine.k(), report );
  if ( engine.answer() != eval_query( { QueryKind::parity_exists_deg, engine.k() }, engine.graph() ) )
    report.add( "Ans differs from the query value" );
  return report;
}

AuditReport audit_aux( const FoLogNEngine& engine )
{
  AuditReport report;
  const auto n = engine.domain_size();
  const auto d = floor_log2( n );
  if ( engine.bound() != d )
    report.add( "bound " + std::to_string( engine.bound() ) + " differs from floor(log2 n) = " + std::to_string( d ) );
  audit_engine( engine, d, report );
  // every row v of P must agree with the row of the index set v encodes
  const Element low = ( Element{ 1 } << d ) - 1;
  const auto& p = engine.p_relation();
  for ( Element v = 0; v < n; ++v )
    for ( Element w = 0; w < n; ++w )
    {
      const auto mask = v & low;
      const bool expected = mask != 0 && expected_p_index( engine.graph(), mask, w, d );
      if ( p.contains_offset( v * n + w ) != expected )
        report.add( "P" + tuple_text( { v, w } ) + ( expected ? " missing" : " spurious" ) );
    }
  if ( engine.answer() != eval_query( { QueryKind::parity_exists_deg_logn, 0 }, engine.graph() ) )
    report.add( "Ans differs from the query value" );
  return report;
}

} // namespace dyncomplab
