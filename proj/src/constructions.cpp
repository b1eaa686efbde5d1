#include <dyncomplab/constructions.hpp>

#include <dyncomplab/oracle.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace dyncomplab
{

void validate( const Collection& col )
{
  std::set<IndexSubset> seen;
  for ( const auto& b : col.members )
  {
    if ( b.size() != col.k + 1 )
      throw Error( "collection member has " + std::to_string( b.size() ) + " elements, expected " +
                   std::to_string( col.k + 1 ) );
    if ( !std::is_sorted( b.begin(), b.end() ) || std::adjacent_find( b.begin(), b.end() ) != b.end() )
      throw Error( "collection members must be sets" );
    if ( b.front() < 1 || b.back() > col.n )
      throw Error( "collection member element outside 1.." + std::to_string( col.n ) );
    if ( !seen.insert( b ).second )
      throw Error( "collection lists a member twice" );
  }
}

Collection parse_collection( std::string_view text, std::size_t n, std::size_t k )
{
  Collection col{ n, k, {} };
  std::string member;
  std::istringstream in{ std::string( text ) };
  while ( std::getline( in, member, ';' ) )
  {
    if ( member.find_first_not_of( " \t" ) == std::string::npos )
      continue;
    IndexSubset b;
    std::istringstream items( member );
    std::string item;
    while ( std::getline( items, item, ',' ) )
    {
      const auto first = item.find_first_not_of( " \t" );
      const auto last = item.find_last_not_of( " \t" );
      if ( first == std::string::npos )
        throw Error( "empty element in collection member '" + member + "'" );
      const auto digits = item.substr( first, last - first + 1 );
      if ( digits.find_first_not_of( "0123456789" ) != std::string::npos )
        throw Error( "collection element '" + digits + "' is not a number" );
      b.push_back( std::stoul( digits ) );
    }
    std::sort( b.begin(), b.end() );
    col.members.push_back( std::move( b ) );
  }
  validate( col );
  return col;
}

std::string format_collection( const Collection& col )
{
  std::string out;
  for ( std::size_t i = 0; i < col.members.size(); ++i )
  {
    if ( i )
      out += ';';
    for ( std::size_t j = 0; j < col.members[i].size(); ++j )
      out += ( j ? "," : "" ) + std::to_string( col.members[i][j] );
  }
  return out;
}

std::vector<IndexSubset> subsets_of_size( std::size_t n, std::size_t size )
{
  std::vector<IndexSubset> result;
  if ( size > n )
    return result;
  IndexSubset current( size );
  for ( std::size_t i = 0; i < size; ++i )
    current[i] = i + 1;
  while ( true )
  {
    result.push_back( current );
    std::size_t i = size;
    while ( i > 0 && current[i - 1] == n - size + i )
      --i;
    if ( i == 0 )
      break;
    ++current[i - 1];
    for ( auto j = i; j < size; ++j )
      current[j] = current[j - 1] + 1;
  }
  return result;
}

Element LowerBoundGraph::node_of( const IndexSubset& y ) const
{
  const auto it = std::find( s.begin(), s.end(), y );
  if ( it == s.end() )
    throw Error( "subset is not a node of the graph" );
  return static_cast<Element>( p.size() + static_cast<std::size_t>( it - s.begin() ) );
}

std::vector<Element> LowerBoundGraph::p_nodes( const IndexSubset& x ) const
{
  std::vector<Element> result;
  for ( auto i : x )
    result.push_back( p.at( i - 1 ) );
  return result;
}

LowerBoundGraph lower_bound_graph( const Collection& col )
{
  validate( col );
  if ( col.n < col.k + 1 )
    throw Error( "the construction needs n >= k + 1" );
  LowerBoundGraph g;
  for ( std::size_t size = 1; size <= col.k + 1; ++size )
    for ( auto& y : subsets_of_size( col.n, size ) )
      g.s.push_back( std::move( y ) );
  g.graph = Structure( col.n + g.s.size(), coloured_graph_schema() );
  for ( std::size_t i = 0; i < col.n; ++i )
    g.p.push_back( static_cast<Element>( i ) );
  auto& e = g.graph.relation( "E" );
  for ( std::size_t j = 0; j < g.s.size(); ++j )
  {
    const auto& y = g.s[j];
    std::size_t containing = 0;
    for ( const auto& b : col.members )
      if ( std::includes( b.begin(), b.end(), y.begin(), y.end() ) )
        ++containing;
    if ( containing % 2 == 0 )
      continue;
    const auto node = static_cast<Element>( col.n + j );
    for ( auto i : y )
      e.insert( std::vector<Element>{ g.p[i - 1], node } );
  }
  return g;
}

LowerBoundCheck verify_lower_bound_property( const Collection& col, const LowerBoundGraph& g )
{
  LowerBoundCheck check;
  const auto deg = in_degrees( g.graph );
  for ( Element v = 0; v < deg.size(); ++v )
    if ( deg[v] > col.k + 1 )
    {
      check.ok = false;
      check.reason = "node " + std::to_string( v ) + " has in-degree " + std::to_string( deg[v] );
      return check;
    }
  const std::set<IndexSubset> members( col.members.begin(), col.members.end() );
  for ( const auto& b : subsets_of_size( col.n, col.k + 1 ) )
  {
    const bool odd = n_exists( g.graph, g.p_nodes( b ) ).size() % 2 == 1;
    if ( odd != ( members.count( b ) > 0 ) )
    {
      check.ok = false;
      check.counterexample = b;
      check.reason = std::string( "out-neighbourhood parity is " ) + ( odd ? "odd" : "even" ) + " but the set is " +
                     ( odd ? "not " : "" ) + "a member";
      return check;
    }
  }
  return check;
}

bool inclusion_exclusion_holds( const Structure& graph, const std::vector<Element>& sources )
{
  if ( sources.size() >= 31 )
    throw Error( "too many sources for explicit inclusion-exclusion" );
  const auto lhs = n_exists( graph, sources ).size() % 2;
  std::size_t rhs = 0;
  for ( std::uint32_t bits = 1; bits < ( 1u << sources.size() ); ++bits )
  {
    std::vector<Element> x;
    for ( std::size_t i = 0; i < sources.size(); ++i )
      if ( ( bits >> i ) & 1u )
        x.push_back( sources[i] );
    rhs += n_forall( graph, x ).size();
  }
  return lhs == rhs % 2;
}

Collection random_collection( std::mt19937_64& rng, std::size_t n, std::size_t k )
{
  Collection col{ n, k, {} };
  std::bernoulli_distribution coin( 0.5 );
  for ( auto& b : subsets_of_size( n, k + 1 ) )
    if ( coin( rng ) )
      col.members.push_back( std::move( b ) );
  return col;
}

namespace
{

bool contains( const std::vector<Element>& nodes, Element v )
{
  return std::find( nodes.begin(), nodes.end(), v ) != nodes.end();
}

} // namespace

void validate( const TwoLayeredGraph& g, bool require_isolated_s )
{
  const auto n = g.graph.domain_size();
  std::set<Element> all{ g.s, g.t };
  all.insert( g.a.begin(), g.a.end() );
  all.insert( g.b.begin(), g.b.end() );
  if ( all.size() != 2 + g.a.size() + g.b.size() || all.size() != n || ( n > 0 && *all.rbegin() >= n ) )
    throw Error( "s, t, A and B must partition the nodes" );
  bool ok = true;
  g.graph.relation( "E" ).for_each( [&]( const Tuple& e ) {
    const auto u = e[0], v = e[1];
    const bool layered = ( u == g.s && contains( g.a, v ) ) || ( contains( g.a, u ) && contains( g.b, v ) ) ||
                         ( contains( g.b, u ) && v == g.t );
    if ( !layered || ( require_isolated_s && u == g.s ) )
      ok = false;
  } );
  if ( !ok )
    throw Error( "graph is not 2-layered" );
  for ( auto b : g.b )
    if ( !g.graph.relation( "E" ).contains( std::vector<Element>{ b, g.t } ) )
      throw Error( "node " + std::to_string( b ) + " of B has no edge to t" );
}

Reduction two_layered_reduction( const TwoLayeredGraph& g, bool extra_t_edges )
{
  validate( g, true );
  Reduction r;
  r.graph = Structure( g.graph.domain_size(), coloured_graph_schema() );
  r.s = g.s;
  r.t = g.t;
  r.a = g.a;
  r.b = g.b;
  r.extra_t_edges = extra_t_edges;
  auto& e = r.graph.relation( "E" );
  g.graph.relation( "E" ).for_each( [&]( const Tuple& t ) { e.insert( std::vector<Element>{ t[1], t[0] } ); } );
  if ( extra_t_edges )
  {
    for ( auto v : g.a )
      e.insert( std::vector<Element>{ g.t, v } );
    for ( auto v : g.b )
      e.insert( std::vector<Element>{ g.t, v } );
  }
  return r;
}

std::vector<Change> Reduction::translate( const Change& c ) const
{
  if ( c.relation != "E" || c.tuple.size() != 2 )
    throw Error( "only edge changes of the layered graph can be translated" );
  const auto u = c.tuple[0], v = c.tuple[1];
  if ( c.op == ChangeOp::remove && contains( a, u ) && contains( b, v ) )
    return { del( "E", { v, u } ) };
  if ( c.op == ChangeOp::insert && u == s && contains( a, v ) )
    return { ins( "E", { s, v } ), ins( "R", { s } ) };
  throw Error( "change " + to_string( c ) + " is not admissible for the reduction" );
}

TwoLayeredGraph random_two_layered( std::mt19937_64& rng, std::size_t a_size, std::size_t b_size, double density )
{
  TwoLayeredGraph g;
  const auto n = 2 + a_size + b_size;
  g.graph = Structure( n, { { "E", 2 } } );
  g.s = 0;
  g.t = 1;
  for ( std::size_t i = 0; i < a_size; ++i )
    g.a.push_back( static_cast<Element>( 2 + i ) );
  for ( std::size_t i = 0; i < b_size; ++i )
    g.b.push_back( static_cast<Element>( 2 + a_size + i ) );
  auto& e = g.graph.relation( "E" );
  std::bernoulli_distribution edge( density );
  for ( auto a : g.a )
    for ( auto b : g.b )
      if ( edge( rng ) )
        e.insert( std::vector<Element>{ a, b } );
  for ( auto b : g.b )
    e.insert( std::vector<Element>{ b, g.t } );
  return g;
}

std::vector<Change> random_admissible_changes( std::mt19937_64& rng, const TwoLayeredGraph& g, std::size_t deletions )
{
  std::vector<Tuple> middle;
  g.graph.relation( "E" ).for_each( [&]( const Tuple& t ) {
    if ( contains( g.a, t[0] ) )
      middle.push_back( t );
  } );
  std::shuffle( middle.begin(), middle.end(), rng );
  std::vector<Change> changes;
  for ( std::size_t i = 0; i < std::min( deletions, middle.size() ); ++i )
    changes.push_back( del( "E", middle[i] ) );
  if ( !g.a.empty() )
  {
    std::uniform_int_distribution<std::size_t> pick( 0, g.a.size() - 1 );
    changes.push_back( ins( "E", { g.s, g.a[pick( rng )] } ) );
  }
  return changes;
}

Element Fixture::node( std::string_view name ) const
{
  const auto it = std::find( node_names.begin(), node_names.end(), name );
  if ( it == node_names.end() )
    throw Error( "fixture " + this->name + " has no node '" + std::string( name ) + "'" );
  return static_cast<Element>( it - node_names.begin() );
}

std::vector<std::string> fixture_names()
{
  return { "fig1", "fig2", "fig3", "fig4", "fig6" };
}

namespace
{

std::vector<std::string> numbered( const std::string& prefix, std::size_t count )
{
  std::vector<std::string> names;
  for ( std::size_t i = 1; i <= count; ++i )
    names.push_back( prefix + std::to_string( i ) );
  return names;
}

class FixtureBuilder
{
public:
  FixtureBuilder( std::string name, std::string description, std::vector<std::string> nodes, const Schema& schema )
  {
    f_.name = std::move( name );
    f_.description = std::move( description );
    f_.node_names = std::move( nodes );
    f_.graph = Structure( f_.node_names.size(), schema );
  }

  FixtureBuilder& edges( const std::string& from, const std::vector<std::string>& to )
  {
    for ( const auto& target : to )
      f_.graph.relation( "E" ).insert( std::vector<Element>{ f_.node( from ), f_.node( target ) } );
    return *this;
  }

  FixtureBuilder& colour( const std::vector<std::string>& nodes )
  {
    for ( const auto& v : nodes )
      f_.graph.relation( "R" ).insert( std::vector<Element>{ f_.node( v ) } );
    return *this;
  }

  Element id( const std::string& name ) const { return f_.node( name ); }

  Fixture& get() { return f_; }

private:
  Fixture f_;
};

} // namespace

Fixture figure_fixture( std::string_view name )
{
  if ( name == "fig1" )
  {
    FixtureBuilder b( "fig1", "degree counterexample for nullary auxiliary data; dashed edge positive, dotted negative",
                      { "u1", "u2", "v1", "v2", "v3" }, { { "E", 2 } } );
    b.edges( "u1", { "v1", "v2" } ).edges( "u2", { "v1" } );
    b.get().variants["dashed"] = { ins( "E", { b.id( "u1" ), b.id( "v3" ) } ) };
    b.get().variants["dotted"] = { ins( "E", { b.id( "u2" ), b.id( "v3" ) } ) };
    return b.get();
  }
  if ( name == "fig2" || name == "fig6" )
  {
    const bool six = name == "fig6";
    auto nodes = numbered( "v", 7 );
    const auto ws = numbered( "w", six ? 6 : 5 );
    nodes.insert( nodes.end(), ws.begin(), ws.end() );
    FixtureBuilder b( std::string( name ),
                      six ? "colouring v splits the witness set of w into two disjoint parts"
                          : "coloured and uncoloured in-neighbour sets; A = {v3, v4}, B = {v5}",
                      nodes, coloured_graph_schema() );
    if ( six )
    {
      b.edges( "v1", { "w1", "w2" } ).edges( "v2", { "w2", "w3" } ).edges( "v3", { "w1", "w2", "w3", "w4", "w5" } );
      b.edges( "v4", { "w1", "w2", "w3", "w4", "w5", "w6" } ).edges( "v5", { "w2", "w3", "w4", "w5", "w6" } );
      b.edges( "v6", { "w4" } ).edges( "v7", { "w6" } );
      b.get().variants["colour-v"] = { ins( "R", { b.id( "v2" ) } ) };
    }
    else
    {
      b.edges( "v1", { "w1" } ).edges( "v2", { "w2" } ).edges( "v3", { "w1", "w2", "w3", "w4", "w5" } );
      b.edges( "v4", { "w1", "w2", "w3", "w4", "w5" } ).edges( "v5", { "w2", "w3", "w4", "w5" } );
      b.edges( "v6", { "w3" } ).edges( "v7", { "w5" } );
      b.get().variants["uncolour-v7"] = { del( "R", { b.id( "v7" ) } ) };
    }
    b.colour( { "v3", "v4", "v7" } );
    return b.get();
  }
  if ( name == "fig3" )
  {
    auto nodes = std::vector<std::string>{ "s", "t" };
    for ( const auto& group : { numbered( "a", 5 ), numbered( "b", 5 ) } )
      nodes.insert( nodes.end(), group.begin(), group.end() );
    FixtureBuilder b( "fig3", "2-layered graph; dashed edge gives an s-t path, dotted edge does not", nodes,
                      { { "E", 2 } } );
    b.edges( "a1", { "b2" } ).edges( "a2", { "b1" } ).edges( "a3", { "b3" } ).edges( "a4", { "b3", "b4" } );
    for ( const auto& v : numbered( "b", 5 ) )
      b.edges( v, { "t" } );
    b.get().variants["dashed"] = { ins( "E", { b.id( "s" ), b.id( "a2" ) } ) };
    b.get().variants["dotted"] = { ins( "E", { b.id( "s" ), b.id( "a5" ) } ) };
    return b.get();
  }
  if ( name == "fig4" )
  {
    const auto col = parse_collection( "1,3,4;2,3,4", 4, 2 );
    const auto g = lower_bound_graph( col );
    Fixture f;
    f.name = "fig4";
    f.description = "lower-bound graph for n = 4, k = 2 and the collection {1,3,4}, {2,3,4}";
    f.graph = g.graph;
    f.node_names = numbered( "p", 4 );
    for ( const auto& y : g.s )
    {
      std::string label = "{";
      for ( std::size_t i = 0; i < y.size(); ++i )
        label += ( i ? "," : "" ) + std::to_string( y[i] );
      f.node_names.push_back( label + "}" );
    }
    for ( const auto& [variant, members] : std::vector<std::pair<std::string, IndexSubset>>{
              { "colour-134", { 1, 3, 4 } }, { "colour-123", { 1, 2, 3 } } } )
      for ( auto v : g.p_nodes( members ) )
        f.variants[variant].push_back( ins( "R", { v } ) );
    return f;
  }
  throw Error( "unknown fixture '" + std::string( name ) + "'" );
}

ChangeScript fixture_script( const Fixture& f, const std::string& variant )
{
  ChangeScript script;
  script.domain_size = f.graph.domain_size();
  script.schema = f.graph.schema();
  for ( std::size_t r = 0; r < f.graph.relation_count(); ++r )
    f.graph.relation_at( r ).for_each(
        [&]( const Tuple& t ) { script.entries.push_back( { Change{ ChangeOp::insert, f.graph.name_at( r ), t }, 0 } ); } );
  script.entries.push_back( { Checkpoint{}, 0 } );
  if ( !variant.empty() )
  {
    const auto it = f.variants.find( variant );
    if ( it == f.variants.end() )
      throw Error( "fixture " + f.name + " has no variant '" + variant + "'" );
    for ( const auto& c : it->second )
      script.entries.push_back( { c, 0 } );
    script.entries.push_back( { Checkpoint{}, 0 } );
  }
  return script;
}

ScriptProfile script_profile( std::string_view name, std::size_t length )
{
  ScriptProfile p;
  p.length = length;
  if ( name == "unary" )
  {
    p.relations = { { "U", 1 } };
    p.weights = { 1.0 };
    p.target_fill = { 0.5 };
  }
  else if ( name == "graph" )
  {
    p.relations = { { "E", 2 } };
    p.weights = { 1.0 };
    p.target_fill = { 0.3 };
  }
  else if ( name == "coloured" || name == "default" )
  {
    p.relations = coloured_graph_schema();
    p.weights = { 2.0, 1.0 };
    p.target_fill = { 0.3, 0.5 };
  }
  else
    throw Error( "unknown script profile '" + std::string( name ) + "'" );
  return p;
}

ChangeScript random_script( std::size_t n, const ScriptProfile& profile, std::uint64_t seed )
{
  if ( profile.relations.empty() || profile.weights.size() != profile.relations.size() ||
       profile.target_fill.size() != profile.relations.size() )
    throw Error( "script profile needs one weight and one target fill per relation" );
  std::mt19937_64 rng( seed );
  ChangeScript script;
  script.domain_size = n;
  script.schema = profile.relations;
  Structure s( n, profile.relations );
  std::discrete_distribution<std::size_t> which( profile.weights.begin(), profile.weights.end() );
  std::uniform_real_distribution<double> unit( 0.0, 1.0 );
  std::uniform_int_distribution<Element> node( 0, n == 0 ? 0 : static_cast<Element>( n - 1 ) );

  for ( std::size_t step = 0; step < profile.length && n > 0; ++step )
  {
    const auto r = which( rng );
    const auto& decl = profile.relations[r];
    auto& rel = s.relation( decl.name );
    const auto capacity = rel.capacity();
    const auto size = rel.size();
    const double fill = static_cast<double>( size ) / static_cast<double>( capacity );
    bool insert = unit( rng ) < ( fill < profile.target_fill[r] ? 0.75 : 0.25 );
    if ( size == 0 )
      insert = true;
    if ( size == capacity )
      insert = false;
    Tuple t( decl.arity );
    if ( insert )
    {
      do
        for ( auto& x : t )
          x = node( rng );
      while ( rel.contains( t ) );
    }
    else
    {
      std::uniform_int_distribution<std::size_t> pick( 0, size - 1 );
      auto skip = pick( rng );
      rel.for_each( [&]( const Tuple& member ) {
        if ( skip-- == 0 )
          t = member;
      } );
    }
    Change c{ insert ? ChangeOp::insert : ChangeOp::remove, decl.name, t };
    apply_change_in_place( s, c );
    script.entries.push_back( { std::move( c ), 0 } );
    if ( unit( rng ) < profile.checkpoint_rate )
      script.entries.push_back( { Checkpoint{}, 0 } );
  }
  if ( script.entries.empty() || !script.entries.back().is_checkpoint() )
    script.entries.push_back( { Checkpoint{}, 0 } );
  return script;
}

} // namespace dyncomplab
