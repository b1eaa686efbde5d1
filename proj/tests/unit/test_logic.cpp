#include "doctest.h"

#include "../support/random_formula.hpp"

#include <dyncomplab/logic.hpp>

using namespace dyncomplab;

namespace
{

Schema graph_schema()
{
  return { { "E", 2 }, { "R", 1 }, { "U", 1 }, { "P", 0 } };
}

Structure edge_graph()
{
  Structure s( 3, graph_schema() );
  s.relation( "E" ).insert( Tuple{ 0, 1 } );
  return s;
}

} // namespace

TEST_CASE( "parse_formula builds the expected tree" )
{
  const auto f = parse_formula( "E(x,y) | x=y", graph_schema() );
  REQUIRE( f->kind == NodeKind::disjunction );
  REQUIRE( f->children.size() == 2 );
  CHECK( f->children[0]->kind == NodeKind::atom );
  CHECK( f->children[0]->relation == "E" );
  CHECK( f->children[1]->kind == NodeKind::equal );
}

TEST_CASE( "the parity insertion formula parses and is quantifier-free" )
{
  const auto f = parse_formula( "(!U(a) & !P()) | (U(a) & P())", graph_schema(), { { "a" } } );
  CHECK( classify( *f ) == FormulaClass::quantifier_free );
  CHECK( parameters( *f ) == std::set<std::string>{ "a" } );
  CHECK( free_variables( *f ).empty() );

  Structure s( 2, graph_schema() );
  CHECK( evaluate( *f, s, { { "a", 1 } } ) );
  s.relation( "U" ).insert( Tuple{ 1 } );
  CHECK_FALSE( evaluate( *f, s, { { "a", 1 } } ) );
}

TEST_CASE( "classify" )
{
  CHECK( classify( *parse_formula( "exists z. E(x,z) & R(z)", graph_schema() ) ) == FormulaClass::first_order );
  CHECK( classify( *parse_formula( "E(x,y) ^ R(x)", graph_schema() ) ) == FormulaClass::quantifier_free );
  CHECK( classify( *parse_formula( "forall z. !E(z,x)", graph_schema() ) ) == FormulaClass::first_order );
}

TEST_CASE( "free variables" )
{
  CHECK( free_variables( *parse_formula( "exists z. E(x,z)", graph_schema() ) ) == std::set<std::string>{ "x" } );
  CHECK( free_variables( *parse_formula( "P()", graph_schema() ) ).empty() );
}

TEST_CASE( "evaluate" )
{
  const auto s = edge_graph();
  CHECK( evaluate( *parse_formula( "x=y", graph_schema() ), s, { { "x", 1 }, { "y", 1 } } ) );
  const auto f = parse_formula( "exists z. E(x,z)", graph_schema() );
  CHECK( evaluate( *f, s, { { "x", 0 } } ) );
  CHECK_FALSE( evaluate( *f, s, { { "x", 1 } } ) );
  CHECK( evaluate( *parse_formula( "E(x,y) -> R(x)", graph_schema() ), s, { { "x", 1 }, { "y", 0 } } ) );
  CHECK_FALSE( evaluate( *parse_formula( "E(x,y) -> R(x)", graph_schema() ), s, { { "x", 0 }, { "y", 1 } } ) );
  CHECK( evaluate( *parse_formula( "E(0,1) & !E(1,0)", graph_schema() ), s, {} ) );
  CHECK_THROWS_AS( evaluate( *f, s, {} ), Error );
}

TEST_CASE( "schema errors" )
{
  CHECK_THROWS_AS( parse_formula( "F(x)", graph_schema() ), Error );
  CHECK_THROWS_AS( parse_formula( "E(x)", graph_schema() ), Error );
  CHECK_THROWS_AS( parse_formula( "E(x,y", graph_schema() ), SyntaxError );
  CHECK_THROWS_AS( parse_formula( "E(x,y) & w=x", graph_schema(), { {}, std::set<std::string>{ "x", "y" } } ),
                   Error );
}

TEST_CASE( "pretty output reparses to the same tree" )
{
  const auto f = parse_formula( "E(x,y)&x=y", graph_schema() );
  CHECK( pretty( f ) == "E(x,y) & x=y" );
  CHECK( equal( parse_formula( pretty( f ), graph_schema() ), f ) );

  testing::FormulaGenerator gen( 11 );
  ParseOptions options;
  options.parameters = { "p" };
  for ( int i = 0; i < 500; ++i )
  {
    const auto g = gen.formula( 6 );
    const auto text = pretty( g );
    INFO( text );
    CHECK( equal( parse_formula( text, testing::formula_schema(), options ), g ) );
  }
}

TEST_CASE( "exclusive or and quantifiers follow their definitions" )
{
  testing::FormulaGenerator gen( 12 );
  for ( int i = 0; i < 500; ++i )
  {
    const auto f = gen.formula( 5 );
    const auto n = gen.uniform( 2, 4 );
    const auto s = gen.structure( n );
    const auto a = gen.assignment( n );
    INFO( pretty( f ) );
    CHECK( evaluate( *f, s, a ) == testing::expanded( *f, s, a ) );

    const auto g = gen.formula( 3 );
    const auto x = exclusive_or( { f, g } );
    CHECK( evaluate( *x, s, a ) == ( evaluate( *f, s, a ) != evaluate( *g, s, a ) ) );
    const auto expansion = disj( { conj( { f, neg( g ) } ), conj( { neg( f ), g } ) } );
    CHECK( evaluate( *x, s, a ) == evaluate( *expansion, s, a ) );
  }
}

TEST_CASE( "compiled evaluation agrees with the reference semantics" )
{
  testing::FormulaGenerator gen( 13 );
  const std::vector<std::string> slots = { "x", "y", "z", "p" };
  for ( int i = 0; i < 300; ++i )
  {
    const auto f = gen.formula( 5 );
    const auto n = gen.uniform( 2, 4 );
    const auto s = gen.structure( n );
    const auto a = gen.assignment( n );
    const CompiledFormula compiled( *f, s, slots );
    std::vector<Element> env( compiled.slot_count() );
    for ( std::size_t j = 0; j < slots.size(); ++j )
      env[j] = a.at( slots[j] );
    INFO( pretty( f ) );
    CHECK( compiled.evaluate( s, env ) == evaluate( *f, s, a ) );
  }
}

TEST_CASE( "substitute replaces only free occurrences" )
{
  const auto f = parse_formula( "E(x,y) & exists x. R(x)", graph_schema() );
  const auto g = substitute( f, { { "x", var( "w" ) } } );
  CHECK( pretty( g ) == "E(w,y) & (exists x. R(x))" );
}
