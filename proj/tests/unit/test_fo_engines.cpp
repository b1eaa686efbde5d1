#include "doctest.h"

#include <dyncomplab/constructions.hpp>
#include <dyncomplab/fo_engines.hpp>
#include <dyncomplab/oracle.hpp>
#include <dyncomplab/report.hpp>

using namespace dyncomplab;

namespace
{

template<typename Engine>
void load( Engine& engine, const Fixture& f )
{
  for ( const auto& e : fixture_script( f, "" ).entries )
    if ( !e.is_checkpoint() )
      engine.apply( e.change() );
}

bool odd_witnesses( const Structure& g, const std::vector<Element>& c, std::size_t k )
{
  return n_coloured_or_uncoloured( g, c, k ).size() % 2 == 1;
}

} // namespace

TEST_CASE( "index sets" )
{
  CHECK( mask_of( { 1, 3 } ) == 0b101u );
  CHECK( indices_of( 0b110 ) == std::vector<std::size_t>{ 2, 3 } );
  CHECK( max_index( 0b110 ) == 3 );
  CHECK( index_set_of( 5, 8 ) == std::vector<std::size_t>{ 1, 3 } );
  CHECK( index_set_of( 0, 8 ).empty() );
  CHECK( index_set_of( 6, 8 ) == std::vector<std::size_t>{ 2, 3 } );
  // only the low floor(log2 n) bits count
  CHECK( index_set_of( 9, 10 ) == std::vector<std::size_t>{ 1 } );
}

TEST_CASE( "indexed in-neighbours" )
{
  Structure g( 8, coloured_graph_schema() );
  for ( Element v : { 2u, 5u, 7u } )
    g.relation( "E" ).insert( Tuple{ v, 1 } );
  g.relation( "E" ).insert( Tuple{ 4, 3 } );

  const auto a = indexed_in_neighbours( g, 1, mask_of( { 1, 3 } ), 4 );
  CHECK( a.applicable );
  CHECK( a.nodes == std::vector<Element>{ 2, 7 } );
  const auto b = indexed_in_neighbours( g, 3, mask_of( { 1 } ), 4 );
  CHECK( b.nodes == std::vector<Element>{ 4 } );
  CHECK_FALSE( indexed_in_neighbours( g, 3, mask_of( { 2 } ), 4 ).applicable );
  CHECK_FALSE( indexed_in_neighbours( g, 1, mask_of( { 1 } ), 2 ).applicable );

  const auto f = figure_fixture( "fig6" );
  const auto w4 = indexed_in_neighbours( f.graph, f.node( "w4" ), mask_of( { 1, 2, 3 } ), 5 );
  CHECK( w4.nodes == std::vector<Element>{ f.node( "v3" ), f.node( "v4" ), f.node( "v5" ) } );
}

TEST_CASE( "engine initial states" )
{
  FoDegKEngine e( 6, 4 );
  CHECK_FALSE( e.answer() );
  CHECK( audit_aux( e ).ok() );
  CHECK( FoLogNEngine( 8 ).bound() == 3 );
  FoLogNEngine one( 1 );
  CHECK( one.bound() == 0 );
  one.apply( ins( "R", { 0 } ) );
  one.apply( ins( "E", { 0, 0 } ) );
  CHECK_FALSE( one.answer() );
  CHECK_THROWS_AS( FoDegKEngine( 4, 17 ), Error );
}

TEST_CASE( "fo-degk on the fig2 graph" )
{
  auto f = figure_fixture( "fig2" );
  f.graph.relation( "R" ).clear();
  FoDegKEngine e( f.graph.domain_size(), 4 );
  load( e, f );
  CHECK_FALSE( e.answer() );
  e.apply( ins( "R", { f.node( "v3" ) } ) );
  CHECK( e.answer() );
  CHECK( covered_set( e.graph(), 4 ).size() == 5 );
  e.apply( ins( "R", { f.node( "v4" ) } ) );
  CHECK( e.answer() );
  CHECK( audit_aux( e ).ok() );
  CHECK_FALSE( e.apply( ins( "R", { f.node( "v4" ) } ) ) );
  CHECK_THROWS_AS( e.apply( ins( "U", { 0 } ) ), ValidationError );
}

TEST_CASE( "colouring v splits the witness set of w" )
{
  const auto f = figure_fixture( "fig6" );
  const std::size_t k = 5;
  FoDegKEngine e( f.graph.domain_size(), k );
  load( e, f );
  REQUIRE( audit_aux( e ).ok() );

  const auto w = f.node( "w4" ), w2 = f.node( "w2" ), v = f.node( "v2" );
  const auto i = mask_of( { 1, 2, 3 } );
  const auto i2 = mask_of( { 2, 3, 4, 5 } );
  const auto c = indexed_in_neighbours( e.graph(), w, i, k ).nodes;
  auto c_with_v = c;
  c_with_v.insert( c_with_v.begin(), v );
  REQUIRE( indexed_in_neighbours( e.graph(), w2, i2, k ).nodes == c_with_v );

  const bool before_w = e.p( i, w ), before_w2 = e.p( i2, w2 );
  CHECK( before_w == odd_witnesses( e.graph(), c, k ) );
  CHECK( before_w2 == odd_witnesses( e.graph(), c_with_v, k ) );

  e.apply( f.variants.at( "colour-v" ).front() );
  CHECK( e.p( i, w ) == ( before_w != before_w2 ) );
  CHECK( e.p( i, w ) == odd_witnesses( e.graph(), c, k ) );
  CHECK( audit_aux( e ).ok() );
  CHECK( e.answer() == eval_query( { QueryKind::parity_exists_deg, k }, e.graph() ) );
}

TEST_CASE( "engines never consult the oracle while updating" )
{
  FoDegKEngine degk( 9, 3 );
  FoLogNEngine logn( 9 );
  const auto script = random_script( 9, script_profile( "coloured", 150 ), 4 );
  const auto before = oracle_call_count();
  for ( const auto& e : script.entries )
    if ( !e.is_checkpoint() )
    {
      degk.apply( e.change() );
      logn.apply( e.change() );
    }
  CHECK( oracle_call_count() == before );
  CHECK( degk.answer() == eval_query( { QueryKind::parity_exists_deg, 3 }, degk.graph() ) );
  CHECK( logn.answer() == eval_query( { QueryKind::parity_exists_deg_logn }, logn.graph() ) );
}

TEST_CASE( "engine payload shapes" )
{
  FoDegKEngine degk( 6, 3 );
  const auto schema = degk.aux_schema();
  CHECK( schema.front() == RelationDecl{ "leq", 2 } );
  CHECK( schema.size() == 1 + 7 );
  for ( std::size_t i = 1; i < schema.size(); ++i )
    CHECK( schema[i].arity == 1 );
  CHECK( FoLogNEngine( 6 ).aux_schema() == Schema{ { "leq", 2 }, { "bit", 2 }, { "P", 2 } } );
}

TEST_CASE( "short fuzz runs with audits" )
{
  for ( std::size_t k = 1; k <= 5; ++k )
  {
    FuzzOptions o;
    o.target = "fo-degk";
    o.k = k;
    o.seeds = 10;
    o.audit_runs = 10;
    o.length = 80;
    const auto s = fuzz( o );
    INFO( "k = " << k );
    CHECK( s.ok() );
  }
  FuzzOptions o;
  o.target = "fo-logn";
  o.n_min = 2;
  o.n_max = 16;
  o.seeds = 20;
  o.audit_runs = 20;
  o.length = 80;
  CHECK( fuzz( o ).ok() );
}

TEST_CASE( "corrupted P entries are reported" )
{
  FoDegKEngine e( 5, 2 );
  e.apply( ins( "E", { 0, 1 } ) );
  REQUIRE( audit_aux( e ).ok() );
  auto& p = e.p_relations_mutable()[1];
  p.set_offset( 1, !p.contains_offset( 1 ) );
  CHECK_FALSE( audit_aux( e ).ok() );

  FoLogNEngine l( 4 );
  l.apply( ins( "E", { 0, 1 } ) );
  REQUIRE( audit_aux( l ).ok() );
  auto& bin = l.p_relation_mutable();
  bin.set_offset( 1 * 4 + 1, !bin.contains_offset( 1 * 4 + 1 ) );
  CHECK_FALSE( audit_aux( l ).ok() );
}
