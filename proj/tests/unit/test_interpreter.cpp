#include "doctest.h"

#include <dyncomplab/constructions.hpp>
#include <dyncomplab/interpreter.hpp>
#include <dyncomplab/programs.hpp>
#include <dyncomplab/report.hpp>

#include <random>

using namespace dyncomplab;

namespace
{

/// One step by the textbook definition: every rule body evaluated tuple by tuple on the pre-change state.
Structure naive_step( const DynamicProgram& p, const Structure& before, const Change& c )
{
  Structure after = before;
  for ( const auto& rule : p.rules )
  {
    if ( rule.op != c.op || rule.input != c.relation )
      continue;
    Assignment a;
    for ( std::size_t i = 0; i < rule.params.size(); ++i )
      a[rule.params[i]] = c.tuple[i];
    Relation updated( rule.frees.size(), before.domain_size() );
    for ( std::size_t offset = 0; offset < updated.capacity(); ++offset )
    {
      const auto t = updated.tuple_at( offset );
      for ( std::size_t i = 0; i < t.size(); ++i )
        a[rule.frees[i]] = t[i];
      updated.set_offset( offset, evaluate( *rule.body, before, a ) );
    }
    after.relation( rule.target ) = std::move( updated );
  }
  apply_change_in_place( after, c );
  return after;
}

std::shared_ptr<const DynamicProgram> shared( DynamicProgram p )
{
  return std::make_shared<const DynamicProgram>( std::move( p ) );
}

} // namespace

TEST_CASE( "init_state" )
{
  SUBCASE( "parity starts false" )
  {
    const auto st = init_state( parity_program(), 5 );
    CHECK_FALSE( st.answer_flag() );
  }
  SUBCASE( "size_k starts with only Is_0" )
  {
    const auto st = init_state( size_k_program( 2 ), 4 );
    const auto aux = st.aux();
    for ( std::size_t i = 0; i < aux.relation_count(); ++i )
    {
      INFO( aux.name_at( i ) );
      CHECK( aux.relation_at( i ).empty() == ( aux.name_at( i ) != "Is_0" ) );
    }
  }
  SUBCASE( "empty domain" )
  {
    for ( const auto& e : catalog() )
      CHECK_NOTHROW( init_state( e.build(), 0 ) );
  }
}

TEST_CASE( "step uses the pre-change state" )
{
  auto st = init_state( parity_program(), 3 );
  st.step( ins( "U", { 1 } ) );
  CHECK( st.answer_flag() );
  // repeated insertion keeps the bit, since the rule sees U(1) already holding
  st.step( ins( "U", { 1 } ) );
  CHECK( st.answer_flag() );
}

TEST_CASE( "size_k lists after two insertions" )
{
  auto st = init_state( size_k_program( 2 ), 4 );
  st.step( ins( "U", { 0 } ) );
  st.step( ins( "U", { 1 } ) );
  const auto& s = st.combined();
  CHECK( st.answer_flag() );
  CHECK( s.relation( "Last_1" ).tuples() == std::vector<Tuple>{ { 1 } } );
  CHECK( s.relation( "First_1" ).tuples() == std::vector<Tuple>{ { 0 } } );
  CHECK( s.relation( "List_1" ).tuples() == std::vector<Tuple>{ { 0, 1 } } );
}

TEST_CASE( "non-effective changes are skipped or rejected" )
{
  auto st = init_state( size_k_program( 1 ), 3 );
  st.step( ins( "U", { 0 } ) );
  const auto before = st;
  CHECK( st.step( ins( "U", { 0 } ) ) == StepOutcome::skipped );
  CHECK( st == before );
  CHECK_THROWS_AS( st.step( ins( "U", { 0 } ), EffectiveMode::strict ), ValidationError );
  CHECK_THROWS_AS( st.step( ins( "Is_1", {} ) ), ValidationError );
}

TEST_CASE( "run records answers at checkpoints" )
{
  const auto script = parse_script( "domain 3\nins U 0\nquery\nins U 1\nquery\n", { { "U", 1 } } );
  const auto trace = run( parity_program(), script );
  REQUIRE( trace.checkpoints.size() == 2 );
  CHECK_FALSE( trace.checkpoints[0].answer.empty() );
  CHECK( trace.checkpoints[1].answer.empty() );
  CHECK( trace.checkpoints[0].change_index == 1 );

  const auto empty = run( parity_program(), parse_script( "domain 3\n" ) );
  CHECK( empty.checkpoints.empty() );

  const auto skipped = run( size_k_program( 1 ), parse_script( "domain 3\nins U 0\nins U 0\nquery\n", { { "U", 1 } } ),
                            { true, EffectiveMode::skip } );
  CHECK( skipped.skipped == 1 );
  CHECK( skipped.warnings.size() == 1 );
  REQUIRE( skipped.checkpoints[0].aux.has_value() );
  CHECK( skipped.checkpoints[0].aux->relation( "Is_1" ).size() == 1 );
}

TEST_CASE( "run on the fig1 fixture" )
{
  const auto f = figure_fixture( "fig1" );
  const auto dashed = run( parity_degree_div3_program(), fixture_script( f, "dashed" ) );
  const auto dotted = run( parity_degree_div3_program(), fixture_script( f, "dotted" ) );
  CHECK_FALSE( dashed.checkpoints.back().answer.empty() );
  CHECK( dotted.checkpoints.back().answer.empty() );
}

TEST_CASE( "compiled steps agree with the naive definition" )
{
  for ( const auto& entry : catalog() )
  {
    if ( entry.name == "parity_exists_deg_prop_4" )
      continue; // same code paths as k = 3, and far slower by hand
    const auto program = entry.build();
    const std::size_t n = entry.family == "parity_exists_deg_prop" ? 5 : 6;
    const auto script = fuzz_script( entry.name, n, 60, 5 );
    auto st = init_state( program, n );
    std::size_t steps = 0;
    for ( const auto& e : script.entries )
    {
      if ( e.is_checkpoint() )
        continue;
      const auto expected = naive_step( program, st.combined(), e.change() );
      st.step( e.change() );
      INFO( entry.name << " step " << steps << " " << to_string( e.change() ) );
      CHECK( st.combined() == expected );
      ++steps;
    }
  }
}

TEST_CASE( "recomputation order does not matter" )
{
  auto p = parity_degree_div3_program();
  auto reversed = p;
  std::reverse( reversed.rules.begin(), reversed.rules.end() );
  const auto script = random_script( 6, script_profile( "graph", 60 ), 3 );
  ProgramState a( shared( p ), 6 ), b( shared( reversed ), 6 );
  for ( const auto& e : script.entries )
    if ( !e.is_checkpoint() )
    {
      a.step( e.change() );
      b.step( e.change() );
      CHECK( a.combined() == b.combined() );
    }
}

TEST_CASE( "program text round-trips" )
{
  for ( const auto& entry : catalog() )
  {
    const auto p = entry.build();
    const auto text = format_program( p );
    const auto q = parse_program( text );
    CHECK( format_program( q ) == text );
    CHECK( q.rules.size() == p.rules.size() );
    CHECK( validate( q ).empty() );
  }
}

TEST_CASE( "validate reports problems" )
{
  auto p = parity_program();
  p.rules.pop_back();
  const auto missing = validate( p );
  CHECK_FALSE( missing.empty() );

  auto q = parity_program();
  q.rules.push_back( q.rules.front() );
  CHECK_FALSE( validate( q ).empty() );

  auto r = parity_program();
  r.rules[0].body = parse_formula( "exists y. U(y)", { { "U", 1 }, { "P", 0 } } );
  const auto diagnostics = validate( r );
  CHECK_FALSE( diagnostics.empty() );

  // parsing is lenient; validation and state construction are not
  const auto no_answer = parse_program( "program x\ninput U/1\naux P/0\nanswer Q\n" );
  CHECK_FALSE( validate( no_answer ).empty() );
  CHECK_THROWS_AS( init_state( no_answer, 3 ), Error );
  CHECK_THROWS_AS( parse_program( "program x\nfrobnicate\n" ), SyntaxError );
}

TEST_CASE( "max_aux_arity" )
{
  CHECK( max_aux_arity( parity_program() ) == 0 );
  CHECK( max_aux_arity( size_k_program( 2 ) ) == 2 );
  CHECK( max_aux_arity( parity_exists_deg_k_prop_program( 4 ) ) == 4 );
  CHECK( max_aux_arity( parity_exists_deg_k_prop_program( 3 ) ) == 3 );
}

TEST_CASE( "built-in relations are materialised and read-only" )
{
  const auto p = parse_program( "program order_test\nclass dynfo\ninput U/1\nbuiltin order\nbuiltin bit\naux S/1\n"
                                "answer S\n"
                                "on ins U(a) update S(x) := S(x) | leq(a,x) & bit(x,1)\n"
                                "on del U(a) update S(x) := S(x)\n" );
  auto st = init_state( p, 6 );
  CHECK( st.combined().relation( "leq" ).size() == 21 );
  CHECK( st.combined().relation( "bit" ).contains( Tuple{ 5, 3 } ) );
  CHECK_FALSE( st.combined().relation( "bit" ).contains( Tuple{ 5, 2 } ) );
  st.step( ins( "U", { 2 } ) );
  CHECK( st.answer().tuples() == std::vector<Tuple>{ { 3 }, { 5 } } );
  CHECK_THROWS_AS( st.step( ins( "leq", { 0, 1 } ) ), ValidationError );
}
