#include <dyncomplab/constructions.hpp>
#include <dyncomplab/fo_engines.hpp>
#include <dyncomplab/interpreter.hpp>
#include <dyncomplab/oracle.hpp>
#include <dyncomplab/programs.hpp>
#include <dyncomplab/report.hpp>
#include <dyncomplab/symcircuit.hpp>

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dyncomplab;

namespace
{

/// Wraps parse errors with the file they came from.
template<typename Fn>
auto parse_file( const std::string& path, Fn&& parse )
{
  const auto text = read_file( path );
  try
  {
    return parse( text );
  }
  catch ( const Error& e )
  {
    throw Error( path + ": " + e.what() );
  }
}

/// A `.dyp` path or the name of a catalog program.
DynamicProgram load_program( const std::string& spec )
{
  if ( std::filesystem::exists( spec ) )
    return parse_file( spec, []( const std::string& t ) { return parse_program( t ); } );
  return catalog_entry( spec ).build();
}

void write_output( const std::string& path, const std::string& text )
{
  if ( path.empty() || path == "-" )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw Error( "cannot write " + path );
  out << text;
}

std::uint64_t default_seed()
{
  if ( const char* env = std::getenv( "DYNCOMPLAB_SEED" ) )
    return std::stoull( env );
  return 1;
}

std::vector<std::size_t> parse_numbers( const std::string& text )
{
  std::vector<std::size_t> values;
  std::istringstream in( text );
  std::string word;
  while ( in >> word )
  {
    if ( word.find_first_not_of( "0123456789" ) != std::string::npos )
      throw Error( "expected a number, got '" + word + "'" );
    values.push_back( std::stoul( word ) );
  }
  return values;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Dynamic complexity workbench: run, fuzz and verify dynamic programs" };
  app.require_subcommand( 1 );
  int exit_code = 0;

  // run
  auto* run_cmd = app.add_subcommand( "run", "Run a program or engine on a change script" );
  std::string program_spec, engine_name, script_path, oracle_name;
  std::size_t run_k = 0;
  bool trace_aux = false, jsonl = false, strict = false;
  auto* program_opt = run_cmd->add_option( "--program", program_spec, "Program file (.dyp) or catalog name" );
  run_cmd->add_option( "--engine", engine_name, "fo-degk or fo-logn" )->excludes( program_opt );
  run_cmd->add_option( "--k", run_k, "Degree bound for fo-degk, parameter for the oracle query" );
  run_cmd->add_option( "--script", script_path, "Change script" )->required();
  run_cmd->add_option( "--oracle", oracle_name, "Query to compare against at each checkpoint" );
  run_cmd->add_flag( "--trace-aux", trace_aux, "Include auxiliary relations at checkpoints" );
  run_cmd->add_flag( "--jsonl", jsonl, "One JSON record per checkpoint" );
  run_cmd->add_flag( "--strict", strict, "Reject non-effective changes instead of skipping them" );
  run_cmd->callback( [&] {
    if ( program_spec.empty() == engine_name.empty() )
      throw CLI::ValidationError( "run", "exactly one of --program and --engine is required" );
    std::optional<Query> oracle;
    RunReport report;
    if ( !engine_name.empty() )
    {
      const auto kind = parse_engine( engine_name );
      const auto script =
          parse_file( script_path, []( const std::string& t ) { return parse_script( t, coloured_graph_schema() ); } );
      const auto k = kind == EngineKind::fo_degk ? run_k : floor_log2( script.domain_size );
      if ( !oracle_name.empty() )
        oracle = parse_query( oracle_name, oracle_name == "parity-exists-deg-logn" ? 0 : k );
      report = run_engine( kind, run_k, script, oracle );
    }
    else
    {
      const auto program = load_program( program_spec );
      const auto script =
          parse_file( script_path, [&]( const std::string& t ) { return parse_script( t, program.input ); } );
      if ( !oracle_name.empty() )
        oracle = parse_query( oracle_name, run_k );
      report = run_program( program, script, oracle,
                            RunOptions{ trace_aux, strict ? EffectiveMode::strict : EffectiveMode::skip } );
    }
    std::cout << ( jsonl ? format_jsonl( report ) : format_text( report ) );
    if ( !report.all_match() )
    {
      if ( jsonl )
      {
        const auto bad = *report.first_mismatch();
        std::cerr << "mismatch at checkpoint " << bad << " after change " << report.checkpoints[bad].change_index
                  << "\n";
      }
      exit_code = 1;
    }
  } );

  // fuzz
  auto* fuzz_cmd = app.add_subcommand( "fuzz", "Differential fuzzing against the oracle" );
  FuzzOptions fuzz_options;
  std::size_t fixed_n = 0;
  std::optional<std::uint64_t> fuzz_seed;
  fuzz_cmd->add_option( "--target", fuzz_options.target, "Catalog program or family, fo-degk, fo-logn or sym" )
      ->required();
  fuzz_cmd->add_option( "--k", fuzz_options.k, "Parameter of the target" );
  fuzz_cmd->add_option( "--n", fixed_n, "Domain size (overrides --n-min/--n-max)" );
  fuzz_cmd->add_option( "--n-min", fuzz_options.n_min, "Smallest domain size" )->capture_default_str();
  fuzz_cmd->add_option( "--n-max", fuzz_options.n_max, "Largest domain size" )->capture_default_str();
  fuzz_cmd->add_option( "--seeds", fuzz_options.seeds, "Number of seeds" )->capture_default_str();
  fuzz_cmd->add_option( "--seed", fuzz_seed, "First seed (default: DYNCOMPLAB_SEED or 1)" );
  fuzz_cmd->add_option( "--length", fuzz_options.length, "Changes (or flips) per run" )->capture_default_str();
  fuzz_cmd->add_option( "--audit", fuzz_options.audit_runs, "Audit auxiliary state after every step in this many runs" );
  fuzz_cmd->callback( [&] {
    fuzz_options.first_seed = fuzz_seed.value_or( default_seed() );
    if ( fixed_n )
      fuzz_options.n_min = fuzz_options.n_max = fixed_n;
    const auto summary = fuzz( fuzz_options );
    std::cout << summary.target << ": " << summary.runs << " runs, " << summary.checks << " checks (" << summary.positives
              << " positive), " << summary.audits
              << " audits, " << summary.failures.size() << " failures\n";
    if ( summary.oracle_calls_in_apply )
      std::cout << "oracle called " << summary.oracle_calls_in_apply << " times inside engine updates\n";
    for ( const auto& f : summary.failures )
      std::cout << "  seed " << f.seed << " n=" << f.n << ": " << f.message << "\n";
    if ( !summary.ok() )
      exit_code = 1;
  } );

  // oracle
  auto* oracle_cmd = app.add_subcommand( "oracle", "Evaluate a query from scratch on a structure" );
  std::string query_name_arg, structure_path;
  std::size_t oracle_k = 0;
  oracle_cmd->add_option( "--query", query_name_arg, "Query name" )->required();
  oracle_cmd->add_option( "--k", oracle_k, "Query parameter" );
  oracle_cmd->add_option( "--structure", structure_path, "Structure file" )->required();
  oracle_cmd->callback( [&] {
    const auto q = parse_query( query_name_arg, oracle_k );
    const auto s = parse_file( structure_path, [&]( const std::string& t ) {
      return materialize( parse_script( t, query_schema( q.kind ) ) );
    } );
    std::cout << relation_text( eval_query_relation( q, s ) ) << "\n";
  } );

  // construct
  auto* construct_cmd = app.add_subcommand( "construct", "Generate construction graphs and figure fixtures" );
  construct_cmd->require_subcommand( 1 );
  auto* lower_cmd = construct_cmd->add_subcommand( "lower-bound", "Graph encoding a collection of (k+1)-sets" );
  std::size_t lb_n = 0, lb_k = 0;
  std::string collection_text, output_path;
  lower_cmd->add_option( "--n", lb_n, "Ground set size" )->required();
  lower_cmd->add_option( "--k", lb_k, "Members have k+1 elements" )->required();
  lower_cmd->add_option( "--collection", collection_text, "Members, e.g. \"1,3,4;2,3,4\"" );
  lower_cmd->add_option( "-o,--output", output_path, "Output structure file (default stdout)" );
  lower_cmd->callback( [&] {
    const auto col = parse_collection( collection_text, lb_n, lb_k );
    write_output( output_path, format_structure( lower_bound_graph( col ).graph ) );
  } );

  auto* fixture_cmd = construct_cmd->add_subcommand( "fixture", "Figure fixtures as structures or scripts" );
  std::string fixture_name, variant;
  bool as_script = false, list_fixtures = false;
  fixture_cmd->add_option( "name", fixture_name, "Fixture name" );
  fixture_cmd->add_option( "--variant", variant, "Append a named change sequence (implies --script)" );
  fixture_cmd->add_flag( "--script", as_script, "Emit a change script with checkpoints" );
  fixture_cmd->add_flag( "--list", list_fixtures, "List fixtures, node names and variants" );
  fixture_cmd->add_option( "-o,--output", output_path, "Output file (default stdout)" );
  fixture_cmd->callback( [&] {
    if ( list_fixtures || fixture_name.empty() )
    {
      for ( const auto& name : fixture_names() )
      {
        const auto f = figure_fixture( name );
        std::cout << name << ": " << f.description << "\n  nodes:";
        for ( std::size_t i = 0; i < f.node_names.size(); ++i )
          std::cout << ' ' << f.node_names[i] << '=' << i;
        std::cout << "\n  variants:";
        for ( const auto& [v, changes] : f.variants )
          std::cout << ' ' << v;
        std::cout << "\n";
      }
      return;
    }
    const auto f = figure_fixture( fixture_name );
    std::string header = "# " + f.name + ": " + f.description + "\n# nodes:";
    for ( std::size_t i = 0; i < f.node_names.size(); ++i )
      header += " " + f.node_names[i] + "=" + std::to_string( i );
    header += "\n";
    if ( !variant.empty() )
      header += "# variant " + variant + "\n";
    if ( as_script || !variant.empty() )
      write_output( output_path, header + format_script( fixture_script( f, variant ) ) );
    else
      write_output( output_path, header + format_structure( f.graph ) );
  } );

  // verify-constructions
  auto* verify_cmd = app.add_subcommand( "verify-constructions", "Check the lower-bound graph parity property" );
  VerifyOptions verify_options;
  std::optional<std::uint64_t> verify_seed;
  std::string verify_graph;
  std::size_t verify_n = 0, verify_k = 0;
  verify_cmd->add_option( "--n-max", verify_options.n_max, "Largest ground set" )->capture_default_str();
  verify_cmd->add_option( "--k-max", verify_options.k_max, "Largest k" )->capture_default_str();
  verify_cmd->add_option( "--samples", verify_options.samples, "Random collections per (n, k)" )
      ->capture_default_str();
  verify_cmd->add_option( "--exhaustive-n", verify_options.exhaustive_n, "Enumerate all collections up to this n" )
      ->capture_default_str();
  verify_cmd->add_option( "--identity-samples", verify_options.identity_samples,
                          "Random graphs for the inclusion-exclusion parity check" )
      ->capture_default_str();
  verify_cmd->add_option( "--seed", verify_seed, "Seed (default: DYNCOMPLAB_SEED or 1)" );
  auto* graph_opt = verify_cmd->add_option( "--graph", verify_graph, "Check this structure file instead" );
  verify_cmd->add_option( "--n", verify_n, "Ground set size for --graph" )->needs( graph_opt );
  verify_cmd->add_option( "--k", verify_k, "k for --graph" )->needs( graph_opt );
  verify_cmd->add_option( "--collection", collection_text, "Collection for --graph" )->needs( graph_opt );
  verify_cmd->callback( [&] {
    if ( !verify_graph.empty() )
    {
      const auto col = parse_collection( collection_text, verify_n, verify_k );
      auto g = lower_bound_graph( col );
      g.graph = parse_file( verify_graph, [&]( const std::string& t ) {
        return materialize( parse_script( t, g.graph.schema() ) );
      } );
      const auto check = verify_lower_bound_property( col, g );
      if ( check.ok )
        std::cout << "ok\n";
      else
      {
        std::cout << "violated: " << check.reason;
        if ( check.counterexample )
        {
          std::cout << " (B = {";
          for ( std::size_t i = 0; i < check.counterexample->size(); ++i )
            std::cout << ( i ? "," : "" ) << ( *check.counterexample )[i];
          std::cout << "})";
        }
        std::cout << "\n";
        exit_code = 1;
      }
      return;
    }
    verify_options.seed = verify_seed.value_or( default_seed() );
    const auto summary = verify_constructions( verify_options );
    std::cout << summary.collections << " collections, " << summary.identity_checks << " identity checks, "
              << summary.failures.size() << " failures\n";
    for ( const auto& f : summary.failures )
      std::cout << "  " << f << "\n";
    if ( !summary.ok() )
      exit_code = 1;
  } );

  // sym
  auto* sym_cmd = app.add_subcommand( "sym", "Maintain a symmetric circuit under input flips" );
  std::string circuit_path, flips_text, assignment_text;
  bool sym_check = false;
  sym_cmd->add_option( "--circuit", circuit_path, "Circuit file" )->required();
  sym_cmd->add_option( "--flips", flips_text, "Input indices to flip, e.g. \"1 0 1 5\"" );
  sym_cmd->add_option( "--assignment", assignment_text, "Initial bits, e.g. 0110 (default all zero)" );
  sym_cmd->add_flag( "--check", sym_check, "Compare with direct evaluation and the counter definition" );
  sym_cmd->callback( [&] {
    const auto circuit = std::make_shared<const SymCircuit>(
        parse_file( circuit_path, []( const std::string& t ) { return parse_circuit( t ); } ) );
    std::vector<bool> assignment( circuit->inputs );
    if ( !assignment_text.empty() )
    {
      if ( assignment_text.size() != circuit->inputs ||
           assignment_text.find_first_not_of( "01" ) != std::string::npos )
        throw Error( "assignment must be " + std::to_string( circuit->inputs ) + " bits" );
      for ( std::size_t i = 0; i < assignment.size(); ++i )
        assignment[i] = assignment_text[i] == '1';
    }
    SymState state( circuit, assignment );
    auto report = [&]( const std::string& label ) {
      std::cout << label << ": activated " << state.activated() << ", output " << ( state.output() ? 1 : 0 );
      if ( sym_check )
      {
        bool ok = state.output() == sym_eval_direct( *circuit, state.assignment() );
        for ( const auto& [a, value] : state.counters() )
          ok = ok && value == count_direct( *circuit, state.assignment(), a );
        std::cout << ( ok ? "  ok" : "  MISMATCH" );
        if ( !ok )
          exit_code = 1;
      }
      std::cout << "\n";
    };
    report( "initial" );
    for ( auto x : parse_numbers( flips_text ) )
    {
      state.flip( x );
      report( "flip " + std::to_string( x ) );
    }
  } );

  // validate
  auto* validate_cmd = app.add_subcommand( "validate", "Check a program for rule coverage, arities and class" );
  std::string validate_spec;
  validate_cmd->add_option( "program", validate_spec, "Program file or catalog name" )->required();
  validate_cmd->callback( [&] {
    const auto p = load_program( validate_spec );
    const auto diagnostics = validate( p );
    for ( const auto& d : diagnostics )
      std::cout << d << "\n";
    std::cout << p.name << ": " << diagnostics.size() << " diagnostics, max aux arity " << max_aux_arity( p ) << "\n";
    if ( !diagnostics.empty() )
      exit_code = 1;
  } );

  // fmt
  auto* fmt_cmd = app.add_subcommand( "fmt", "Pretty-print a program" );
  std::string fmt_spec;
  fmt_cmd->add_option( "program", fmt_spec, "Program file or catalog name" )->required();
  fmt_cmd->add_option( "-o,--output", output_path, "Output file (default stdout)" );
  fmt_cmd->callback( [&] { write_output( output_path, format_program( load_program( fmt_spec ) ) ); } );

  // catalog
  auto* catalog_cmd = app.add_subcommand( "catalog", "List shipped programs or export them as .dyp files" );
  std::string export_dir;
  catalog_cmd->add_option( "--export", export_dir, "Write every program to this directory" );
  catalog_cmd->callback( [&] {
    for ( const auto& e : catalog() )
    {
      const auto p = e.build();
      std::cout << e.name << "  [" << to_string( e.claimed_class ) << ", arity " << max_aux_arity( p ) << ", query "
                << query_name( e.query.kind ) << "]  " << e.description << "\n";
      if ( !export_dir.empty() )
        write_output( ( std::filesystem::path( export_dir ) / ( e.name + ".dyp" ) ).string(), format_program( p ) );
    }
  } );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    return app.exit( e );
  }
  catch ( const Error& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
