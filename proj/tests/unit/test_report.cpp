#include "doctest.h"

#include <dyncomplab/programs.hpp>
#include <dyncomplab/report.hpp>

#include "json.hpp"

#include <sstream>

using namespace dyncomplab;

TEST_CASE( "relation text" )
{
  Relation r( 2, 3 );
  CHECK( relation_text( r ) == "{}" );
  r.insert( Tuple{ 2, 0 } );
  r.insert( Tuple{ 0, 1 } );
  CHECK( relation_text( r ) == "{(0, 1), (2, 0)}" );
  Relation flag( 0, 3 );
  CHECK( relation_text( flag ) == "false" );
  flag.insert( Tuple{} );
  CHECK( relation_text( flag ) == "true" );
}

TEST_CASE( "running a program against the oracle" )
{
  const auto script = parse_script( "domain 4\nrel U/1\nins U 0\nquery\nins U 1\nquery\ndel U 0\nquery\n" );
  const auto report = run_program( parity_program(), script, Query{ QueryKind::parity } );
  REQUIRE( report.checkpoints.size() == 3 );
  CHECK( report.all_match() );
  CHECK( report.checkpoints[0].answer == "true" );
  CHECK( report.checkpoints[1].answer == "false" );
  CHECK( report.checkpoints[2].change_index == 3 );
  CHECK( format_text( report ).find( "3 checkpoints, all match" ) != std::string::npos );

  std::istringstream lines( format_jsonl( report ) );
  std::string line;
  std::size_t count = 0;
  while ( std::getline( lines, line ) )
  {
    const auto j = nlohmann::json::parse( line );
    CHECK( j.at( "checkpoint" ).get<std::size_t>() == count );
    CHECK( j.at( "match" ).get<bool>() );
    CHECK( j.at( "answer" ) == j.at( "oracle" ) );
    CHECK( j.contains( "step_ms" ) );
    ++count;
  }
  CHECK( count == 3 );
}

TEST_CASE( "a wrong program is reported at the first divergence" )
{
  // deletions leave the flag unchanged
  const auto p = parse_program( read_file( std::string( DYNCOMPLAB_SOURCE_DIR ) + "/tests/data/broken_parity.dyp" ) );
  const auto script = parse_script( "domain 4\nrel U/1\nins U 0\nquery\ndel U 0\nquery\nins U 1\nquery\n" );
  const auto report = run_program( p, script, Query{ QueryKind::parity } );
  CHECK_FALSE( report.all_match() );
  REQUIRE( report.first_mismatch().has_value() );
  CHECK( *report.first_mismatch() == 1 );
  CHECK( format_text( report ).find( "first mismatch at checkpoint 1" ) != std::string::npos );
}

TEST_CASE( "engines through the runner" )
{
  CHECK( parse_engine( "fo-degk" ) == EngineKind::fo_degk );
  CHECK( parse_engine( "fo-logn" ) == EngineKind::fo_logn );
  CHECK_THROWS_AS( parse_engine( "fo" ), Error );
  const auto script = random_script( 8, script_profile( "coloured", 60 ), 7 );
  CHECK( run_engine( EngineKind::fo_degk, 3, script, Query{ QueryKind::parity_exists_deg, 3 } ).all_match() );
  CHECK( run_engine( EngineKind::fo_logn, 0, script, Query{ QueryKind::parity_exists_deg_logn } ).all_match() );
}

TEST_CASE( "fuzz targets" )
{
  CHECK( resolve_program_target( "prop33", 3 ) == "parity_exists_deg_prop_3" );
  CHECK( resolve_program_target( "size_k", 2 ) == "size_k_2" );
  CHECK( resolve_program_target( "parity", 0 ) == "parity" );
  CHECK_THROWS_AS( resolve_program_target( "size_k", 9 ), Error );

  FuzzOptions o;
  o.target = "degree_k";
  o.k = 2;
  o.seeds = 5;
  o.length = 60;
  o.audit_runs = 1;
  const auto a = fuzz( o );
  const auto b = fuzz( o );
  CHECK( a.ok() );
  CHECK( a.runs == 5 );
  CHECK( a.checks == b.checks );
  CHECK( a.positives == b.positives );
  CHECK( a.audits == b.audits );
  CHECK( a.audits > 0 );
}
