#include "doctest.h"

#include <dyncomplab/report.hpp>
#include <dyncomplab/symcircuit.hpp>

using namespace dyncomplab;

namespace
{

SymCircuit two_gates()
{
  SymCircuit c;
  c.inputs = 3;
  c.fanin = 2;
  c.gates = { { 0, 1 }, { 1, 2 } };
  c.table = parity_table( 2 );
  return c;
}

} // namespace

TEST_CASE( "initial counters by enumeration" )
{
  const auto zero = sym_init( two_gates(), { false, false, false } );
  CHECK( zero.activated() == 0 );
  CHECK( zero.count( { 0, 1 } ) == 1 );
  CHECK( zero.count( { 1, 2 } ) == 1 );
  CHECK( zero.count( { 1 } ) == 0 );
  CHECK( zero.count( { 0, 2 } ) == 0 );
  CHECK( zero.tracked() == 6 );

  const auto one = sym_init( two_gates(), { true, true, true } );
  CHECK( one.activated() == 2 );
  CHECK( one.count( { 1 } ) == 2 );
  CHECK( one.count( { 0 } ) == 1 );
  CHECK( one.count( { 2 } ) == 1 );

  SymCircuit empty;
  empty.inputs = 2;
  empty.fanin = 1;
  empty.table = { true };
  const auto e = sym_init( empty, { true, false } );
  CHECK( e.activated() == 0 );
  CHECK( e.output() );
}

TEST_CASE( "flips follow the update equations" )
{
  auto st = sym_init( two_gates(), { false, false, false } );
  st.flip( 1 );
  CHECK( st.count( { 0 } ) == 1 );
  CHECK( st.count( { 2 } ) == 1 );
  CHECK( st.activated() == 0 );
  st.flip( 0 );
  CHECK( st.activated() == 1 );
  CHECK( st.output() );
  CHECK( sym_eval_direct( two_gates(), { true, true, false } ) );
  for ( const auto& [a, value] : st.counters() )
    CHECK( value == count_direct( two_gates(), st.assignment(), a ) );

  const auto before = st;
  st.flip( 2 );
  st.flip( 2 );
  CHECK( st == before );
  CHECK_THROWS_AS( st.flip( 3 ), ValidationError );
}

TEST_CASE( "output tables" )
{
  CHECK_FALSE( parity_table( 4 )[0] );
  CHECK( threshold_table( 5, 1 )[3] );
  CHECK_FALSE( threshold_table( 5, 1 )[0] );
}

TEST_CASE( "circuit text" )
{
  const auto c = two_gates();
  CHECK( parse_circuit( format_circuit( c ) ) == c );
  const auto parsed = parse_circuit( "# comment\ninputs 4\nfanin 2\ngate 3 1\nsym 0 1\n" );
  CHECK( parsed.gates.front() == InputSet{ 1, 3 } );
  CHECK_THROWS_AS( parse_circuit( "inputs 4\nfanin 1\ngate 1 2\nsym 0 1\n" ), Error );
  CHECK_THROWS_AS( parse_circuit( "inputs 4\nfanin 2\ngate 1 2\nsym 0 1 1\n" ), Error );
  CHECK_THROWS_AS( parse_circuit( "inputs 2\nfanin 2\ngate 1 2\nsym 0 1\n" ), Error );
  CHECK_THROWS_AS( parse_circuit( "inputs 2\nfanin 2\nsym 0\nwire 1\n" ), SyntaxError );
}

TEST_CASE( "duplicate gates count with multiplicity" )
{
  SymCircuit c;
  c.inputs = 2;
  c.fanin = 2;
  c.gates = { { 0, 1 }, { 0, 1 } };
  c.table = { false, false, true };
  auto st = sym_init( c, { true, false } );
  CHECK( st.count( { 1 } ) == 2 );
  st.flip( 1 );
  CHECK( st.activated() == 2 );
  CHECK( st.output() );
}

TEST_CASE( "random circuits agree with direct evaluation" )
{
  FuzzOptions o;
  o.target = "sym";
  o.seeds = 40;
  o.length = 300;
  const auto s = fuzz( o );
  CHECK( s.ok() );
  CHECK( s.checks == 40 * 300 );
  CHECK( s.audits > 0 );
}

TEST_CASE( "a corrupted counter is caught" )
{
  auto st = sym_init( two_gates(), { false, true, false } );
  st.corrupt( { 0 }, 5 );
  bool sound = true;
  for ( const auto& [a, value] : st.counters() )
    sound = sound && value == count_direct( two_gates(), st.assignment(), a );
  CHECK_FALSE( sound );
}
