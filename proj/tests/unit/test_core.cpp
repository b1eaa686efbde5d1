#include "doctest.h"

#include <dyncomplab/core.hpp>

#include <algorithm>
#include <random>

using namespace dyncomplab;

namespace
{

Structure graph( std::size_t n )
{
  return Structure( n, coloured_graph_schema() );
}

ValidationKind kind_of( auto&& fn )
{
  try
  {
    fn();
  }
  catch ( const ValidationError& e )
  {
    return e.kind();
  }
  FAIL( "expected a validation error" );
  return ValidationKind::not_effective;
}

} // namespace

TEST_CASE( "relation stores tuples at mixed-radix offsets" )
{
  Relation r( 2, 3 );
  CHECK( r.capacity() == 9 );
  CHECK( r.insert( Tuple{ 1, 2 } ) );
  CHECK_FALSE( r.insert( Tuple{ 1, 2 } ) );
  CHECK( r.offset_of( Tuple{ 1, 2 } ) == 5 );
  CHECK( r.contains_offset( 5 ) );
  CHECK( r.tuple_at( 5 ) == Tuple{ 1, 2 } );
  CHECK( r.size() == 1 );
  CHECK( r.erase( Tuple{ 1, 2 } ) );
  CHECK( r.empty() );

  Relation flag( 0, 4 );
  CHECK( flag.capacity() == 1 );
  flag.insert( Tuple{} );
  CHECK( flag.contains( Tuple{} ) );
  CHECK( flag.tuples() == std::vector<Tuple>{ Tuple{} } );
}

TEST_CASE( "apply_change inserts and deletes with set semantics" )
{
  const auto empty = graph( 3 );
  const auto one = apply_change( empty, ins( "E", { 1, 2 } ) );
  CHECK( one.relation( "E" ).tuples() == std::vector<Tuple>{ { 1, 2 } } );
  CHECK( apply_change( one, ins( "E", { 1, 2 } ) ) == one );
  CHECK( apply_change( empty, del( "E", { 1, 2 } ) ) == empty );
  CHECK( one.relation( "R" ).empty() );
}

TEST_CASE( "is_effective" )
{
  auto s = graph( 3 );
  CHECK( is_effective( s, ins( "E", { 1, 2 } ) ) );
  apply_change_in_place( s, ins( "E", { 1, 2 } ) );
  CHECK_FALSE( is_effective( s, ins( "E", { 1, 2 } ) ) );
  CHECK_FALSE( is_effective( graph( 2 ), del( "R", { 0 } ) ) );
}

TEST_CASE( "validation errors are distinguished" )
{
  const auto s = graph( 3 );
  CHECK( kind_of( [&] { apply_change( s, ins( "F", { 0 } ) ); } ) == ValidationKind::unknown_relation );
  CHECK( kind_of( [&] { apply_change( s, ins( "E", { 0 } ) ); } ) == ValidationKind::arity_mismatch );
  CHECK( kind_of( [&] { apply_change( s, ins( "R", { 3 } ) ); } ) == ValidationKind::id_out_of_range );
  CHECK( kind_of( [&] { is_effective( s, del( "E", { 0, 7 } ) ); } ) == ValidationKind::id_out_of_range );

  Structure dup( 2 );
  dup.add_relation( "E", 2 );
  CHECK( kind_of( [&] { dup.add_relation( "E", 2 ); } ) == ValidationKind::duplicate_relation );
}

TEST_CASE( "delete after insert removes the tuple" )
{
  auto s = graph( 4 );
  apply_change_in_place( s, ins( "R", { 1 } ) );
  const auto before = s;
  const auto after = apply_change( apply_change( s, ins( "R", { 2 } ) ), del( "R", { 2 } ) );
  CHECK( after == before );
}

TEST_CASE( "insertion order does not matter" )
{
  std::mt19937_64 rng( 7 );
  std::vector<Change> changes;
  for ( Element v = 0; v < 5; ++v )
    for ( Element w = 0; w < 5; ++w )
      if ( ( v * 3 + w ) % 4 == 1 )
        changes.push_back( ins( "E", { v, w } ) );
  Structure reference = graph( 5 );
  for ( const auto& c : changes )
    apply_change_in_place( reference, c );
  for ( int round = 0; round < 20; ++round )
  {
    std::shuffle( changes.begin(), changes.end(), rng );
    Structure s = graph( 5 );
    for ( const auto& c : changes )
      apply_change_in_place( s, c );
    CHECK( s == reference );
  }
}

TEST_CASE( "parse_script" )
{
  SUBCASE( "one change and one checkpoint" )
  {
    const auto script = parse_script( "domain 3\nins E 1 2\nquery", coloured_graph_schema() );
    CHECK( script.domain_size == 3 );
    CHECK( script.change_count() == 1 );
    CHECK( script.checkpoint_count() == 1 );
    CHECK( script.entries[0].change() == ins( "E", { 1, 2 } ) );
    CHECK( script.entries[1].is_checkpoint() );
    CHECK( script.entries[1].line == 3 );
  }
  SUBCASE( "two changes" )
  {
    const auto script = parse_script( "domain 2\ndel R 0\nins R 1\nquery", coloured_graph_schema() );
    CHECK( script.change_count() == 2 );
    CHECK( script.entries[0].change() == del( "R", { 0 } ) );
  }
  SUBCASE( "declarations and comments" )
  {
    const auto script = parse_script( "# comment\ndomain 4\nrel U/1\nins U 3 # trailing\nquery\n" );
    CHECK( script.schema == Schema{ { "U", 1 } } );
    CHECK( script.change_count() == 1 );
  }
  SUBCASE( "arity mismatch" )
  {
    CHECK( kind_of( [] { parse_script( "domain 3\nins E 1\n", coloured_graph_schema() ); } ) ==
           ValidationKind::arity_mismatch );
  }
  SUBCASE( "syntax errors carry the line" )
  {
    try
    {
      parse_script( "domain 3\n\nfrob E 1 2\n" );
      FAIL( "expected a syntax error" );
    }
    catch ( const SyntaxError& e )
    {
      CHECK( e.line() == 3 );
    }
    CHECK_THROWS_AS( parse_script( "ins E 1 2\n" ), SyntaxError );
    CHECK_THROWS_AS( parse_script( "domain x\n" ), SyntaxError );
  }
}

TEST_CASE( "scripts and structures round-trip through text" )
{
  const auto text = "domain 5\nrel E/2\nrel R/1\nins E 0 1\nins R 4\nquery\ndel E 0 1\nquery\n";
  const auto script = parse_script( text );
  const auto again = parse_script( format_script( script ) );
  CHECK( again.domain_size == script.domain_size );
  CHECK( again.schema == script.schema );
  REQUIRE( again.entries.size() == script.entries.size() );
  for ( std::size_t i = 0; i < again.entries.size(); ++i )
    CHECK( again.entries[i].item == script.entries[i].item );

  auto s = graph( 5 );
  apply_change_in_place( s, ins( "E", { 2, 3 } ) );
  apply_change_in_place( s, ins( "R", { 1 } ) );
  CHECK( materialize( parse_script( format_structure( s ) ) ) == s );
}

TEST_CASE( "empty domain is valid" )
{
  const Structure s( 0, coloured_graph_schema() );
  CHECK( s.relation( "E" ).empty() );
  CHECK( s.relation( "E" ).capacity() == 0 );
}
