#include <dyncomplab/report.hpp>

#include <dyncomplab/fo_engines.hpp>
#include <dyncomplab/programs.hpp>
#include <dyncomplab/symcircuit.hpp>

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace dyncomplab
{

bool RunReport::all_match() const
{
  return !first_mismatch().has_value();
}

std::optional<std::size_t> RunReport::first_mismatch() const
{
  for ( std::size_t i = 0; i < checkpoints.size(); ++i )
    if ( !checkpoints[i].match )
      return i;
  return std::nullopt;
}

std::string relation_text( const Relation& r )
{
  if ( r.arity() == 0 )
    return r.empty() ? "false" : "true";
  std::ostringstream out;
  out << '{';
  bool first_tuple = true;
  r.for_each( [&]( const Tuple& t ) {
    out << ( first_tuple ? "" : ", " ) << '(';
    for ( std::size_t i = 0; i < t.size(); ++i )
      out << ( i ? ", " : "" ) << t[i];
    out << ')';
    first_tuple = false;
  } );
  out << '}';
  return out.str();
}

std::string structure_text( const Structure& s )
{
  std::ostringstream out;
  for ( std::size_t i = 0; i < s.relation_count(); ++i )
    out << ( i ? "; " : "" ) << s.name_at( i ) << " = " << relation_text( s.relation_at( i ) );
  return out.str();
}

namespace
{

using Clock = std::chrono::steady_clock;

double elapsed_ms( Clock::time_point since )
{
  return std::chrono::duration<double, std::milli>( Clock::now() - since ).count();
}

/// Oracle results compared by tuple set so that relation shape never matters.
bool same_relation( const Relation& a, const Relation& b )
{
  return a.arity() == b.arity() && a.tuples() == b.tuples();
}

std::string skipped_warning( const ScriptEntry& e )
{
  return "line " + std::to_string( e.line ) + ": skipped non-effective change " + to_string( e.change() );
}

} // namespace

RunReport run_program( const DynamicProgram& p, const ChangeScript& script, const std::optional<Query>& oracle,
                       const RunOptions& options )
{
  RunReport report;
  report.target = p.name;
  ProgramState state( std::make_shared<const DynamicProgram>( p ), script.domain_size );
  std::size_t changes = 0;
  double pending_ms = 0.0;
  for ( const auto& e : script.entries )
  {
    if ( !e.is_checkpoint() )
    {
      const auto start = Clock::now();
      StepOutcome outcome;
      try
      {
        outcome = state.step( e.change(), options.mode );
      }
      catch ( const ValidationError& err )
      {
        throw ValidationError( err.kind(), "line " + std::to_string( e.line ) + ": " + err.what() );
      }
      pending_ms += elapsed_ms( start );
      ++changes;
      if ( outcome == StepOutcome::skipped )
      {
        ++report.skipped;
        report.warnings.push_back( skipped_warning( e ) );
      }
      continue;
    }
    CheckpointReport cp;
    cp.checkpoint = report.checkpoints.size();
    cp.change_index = changes;
    cp.answer = relation_text( state.answer() );
    cp.step_ms = pending_ms;
    pending_ms = 0.0;
    if ( oracle )
    {
      const auto expected = eval_query_relation( *oracle, state.input() );
      cp.oracle = relation_text( expected );
      cp.match = same_relation( state.answer(), expected );
    }
    if ( options.trace_aux )
      cp.aux = structure_text( state.aux() );
    report.checkpoints.push_back( std::move( cp ) );
  }
  return report;
}

EngineKind parse_engine( std::string_view name )
{
  if ( name == "fo-degk" )
    return EngineKind::fo_degk;
  if ( name == "fo-logn" )
    return EngineKind::fo_logn;
  throw Error( "unknown engine '" + std::string( name ) + "' (expected fo-degk or fo-logn)" );
}

namespace
{

template<typename Engine>
RunReport run_engine_impl( Engine& engine, const std::string& target, const ChangeScript& script,
                           const std::optional<Query>& oracle )
{
  RunReport report;
  report.target = target;
  std::size_t changes = 0;
  double pending_ms = 0.0;
  for ( const auto& e : script.entries )
  {
    if ( !e.is_checkpoint() )
    {
      const auto start = Clock::now();
      bool effective;
      try
      {
        effective = engine.apply( e.change() );
      }
      catch ( const ValidationError& err )
      {
        throw ValidationError( err.kind(), "line " + std::to_string( e.line ) + ": " + err.what() );
      }
      pending_ms += elapsed_ms( start );
      ++changes;
      if ( !effective )
      {
        ++report.skipped;
        report.warnings.push_back( skipped_warning( e ) );
      }
      continue;
    }
    CheckpointReport cp;
    cp.checkpoint = report.checkpoints.size();
    cp.change_index = changes;
    cp.answer = engine.answer() ? "true" : "false";
    cp.step_ms = pending_ms;
    pending_ms = 0.0;
    if ( oracle )
    {
      const bool expected = eval_query( *oracle, engine.graph() );
      cp.oracle = expected ? "true" : "false";
      cp.match = expected == engine.answer();
    }
    report.checkpoints.push_back( std::move( cp ) );
  }
  return report;
}

} // namespace

RunReport run_engine( EngineKind engine, std::size_t k, const ChangeScript& script, const std::optional<Query>& oracle )
{
  if ( engine == EngineKind::fo_degk )
  {
    FoDegKEngine e( script.domain_size, k );
    return run_engine_impl( e, "fo-degk(k=" + std::to_string( k ) + ")", script, oracle );
  }
  FoLogNEngine e( script.domain_size );
  return run_engine_impl( e, "fo-logn(d=" + std::to_string( e.bound() ) + ")", script, oracle );
}

std::string format_text( const RunReport& report )
{
  std::ostringstream out;
  out << "target " << report.target << "\n";
  for ( const auto& w : report.warnings )
    out << "warning: " << w << "\n";
  for ( const auto& cp : report.checkpoints )
  {
    out << "#" << cp.checkpoint << " after " << cp.change_index << " changes: " << cp.answer;
    if ( cp.oracle )
      out << "  oracle " << *cp.oracle << ( cp.match ? "  ok" : "  MISMATCH" );
    out << "  (" << std::fixed << std::setprecision( 3 ) << cp.step_ms << " ms)\n";
    if ( cp.aux )
      out << "  aux: " << *cp.aux << "\n";
  }
  if ( const auto bad = report.first_mismatch() )
    out << "first mismatch at checkpoint " << *bad << " (after change " << report.checkpoints[*bad].change_index
        << ")\n";
  else
    out << report.checkpoints.size() << " checkpoints, all match\n";
  return out.str();
}

std::string format_jsonl( const RunReport& report )
{
  std::ostringstream out;
  for ( const auto& cp : report.checkpoints )
  {
    nlohmann::json j;
    j["checkpoint"] = cp.checkpoint;
    j["change_index"] = cp.change_index;
    j["answer"] = cp.answer;
    j["oracle"] = cp.oracle ? nlohmann::json( *cp.oracle ) : nlohmann::json( nullptr );
    j["match"] = cp.match;
    j["step_ms"] = cp.step_ms;
    if ( cp.aux )
      j["aux"] = *cp.aux;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string resolve_program_target( const std::string& target, std::size_t k )
{
  const std::string family = target == "prop33" ? "parity_exists_deg_prop" : target;
  for ( const auto& e : catalog() )
    if ( e.name == family )
      return e.name;
  for ( const auto& e : catalog() )
    if ( e.family == family && e.k == k )
      return e.name;
  throw Error( "no catalog program for target '" + target + "' with k = " + std::to_string( k ) );
}

ChangeScript fuzz_script( const std::string& program, std::size_t n, std::size_t length, std::uint64_t seed )
{
  const auto& entry = catalog_entry( program );
  // Vary the density per seed so sizes and degrees sweep through the interesting thresholds.
  std::mt19937_64 rng( seed ^ 0x9e3779b97f4a7c15ull );
  const double scale = std::uniform_real_distribution<double>( 0.5, 1.6 )( rng );
  const double nn = static_cast<double>( std::max<std::size_t>( n, 1 ) );
  const double k = static_cast<double>( std::max<std::size_t>( entry.k, 1 ) );

  ScriptProfile profile;
  if ( entry.family == "parity" || entry.family == "size_k" )
  {
    profile = script_profile( "unary", length );
    profile.target_fill = { std::min( 0.9, scale * ( entry.family == "parity" ? 0.5 : k / nn ) ) };
  }
  else if ( entry.family == "degree_k" || entry.family == "parity_degree_div3" )
  {
    profile = script_profile( "graph", length );
    profile.target_fill = { std::min( 0.9, scale * ( entry.family == "degree_k" ? k : 1.5 ) / nn ) };
  }
  else
  {
    profile = script_profile( "coloured", length );
    profile.target_fill = { std::min( 0.9, scale * k / nn ), std::min( 0.9, 0.5 * scale ) };
  }
  return random_script( n, profile, seed );
}

namespace
{

std::size_t engine_bound( const FoDegKEngine& e )
{
  return e.k();
}

std::size_t engine_bound( const FoLogNEngine& e )
{
  return e.bound();
}

ChangeScript engine_fuzz_script( std::size_t n, std::size_t k, std::size_t length, std::uint64_t seed )
{
  std::mt19937_64 rng( seed ^ 0x9e3779b97f4a7c15ull );
  const double scale = std::uniform_real_distribution<double>( 0.5, 1.6 )( rng );
  auto profile = script_profile( "coloured", length );
  const double nn = static_cast<double>( std::max<std::size_t>( n, 1 ) );
  profile.target_fill = { std::min( 0.9, scale * static_cast<double>( std::max<std::size_t>( k, 1 ) ) / nn ),
                          std::min( 0.9, 0.5 * scale ) };
  return random_script( n, profile, seed );
}

std::string first_discrepancies( const AuditReport& a )
{
  std::string s = std::to_string( a.discrepancies.size() ) + " aux discrepancies, e.g. " + a.discrepancies.front();
  if ( a.discrepancies.size() > 1 )
    s += "; " + a.discrepancies[1];
  return s;
}

std::size_t pick_n( std::mt19937_64& rng, const FuzzOptions& o )
{
  if ( o.n_min > o.n_max )
    throw Error( "empty n range" );
  return std::uniform_int_distribution<std::size_t>( o.n_min, o.n_max )( rng );
}

void fuzz_program( const FuzzOptions& o, FuzzSummary& summary )
{
  const auto name = resolve_program_target( o.target, o.k );
  summary.target = name;
  const auto& entry = catalog_entry( name );
  const auto program = std::make_shared<const DynamicProgram>( entry.build() );
  for ( std::size_t i = 0; i < o.seeds; ++i )
  {
    const auto seed = o.first_seed + i;
    std::mt19937_64 rng( seed );
    const auto n = pick_n( rng, o );
    const bool audit = i < o.audit_runs;
    const auto script = fuzz_script( name, n, o.length, seed );
    ProgramState state( program, n );
    ++summary.runs;
    std::size_t changes = 0;
    auto fail = [&]( const std::string& what ) {
      summary.failures.push_back( { seed, n, "after change " + std::to_string( changes ) + ": " + what } );
    };
    if ( audit )
    {
      ++summary.audits;
      if ( const auto a = audit_aux( state ); !a.ok() )
      {
        fail( first_discrepancies( a ) );
        continue;
      }
    }
    for ( const auto& e : script.entries )
    {
      if ( e.is_checkpoint() )
      {
        ++summary.checks;
        const auto expected = eval_query_relation( entry.query, state.input() );
        summary.positives += expected.empty() ? 0 : 1;
        if ( !same_relation( state.answer(), expected ) )
        {
          fail( "answer " + relation_text( state.answer() ) + ", oracle " + relation_text( expected ) );
          break;
        }
        continue;
      }
      state.step( e.change() );
      ++changes;
      if ( audit )
      {
        ++summary.audits;
        if ( const auto a = audit_aux( state ); !a.ok() )
        {
          fail( first_discrepancies( a ) + " (last change " + to_string( e.change() ) + ")" );
          break;
        }
      }
    }
  }
}

template<typename Engine, typename Make>
void fuzz_engine( const FuzzOptions& o, FuzzSummary& summary, Make make )
{
  for ( std::size_t i = 0; i < o.seeds; ++i )
  {
    const auto seed = o.first_seed + i;
    std::mt19937_64 rng( seed );
    const auto n = pick_n( rng, o );
    Engine engine = make( n );
    const std::size_t k = engine_bound( engine );
    const Query query{ QueryKind::parity_exists_deg, k };
    const bool audit = i < o.audit_runs;
    const auto script = engine_fuzz_script( n, k, o.length, seed );
    ++summary.runs;
    std::size_t changes = 0;
    auto fail = [&]( const std::string& what ) {
      summary.failures.push_back( { seed, n, "after change " + std::to_string( changes ) + ": " + what } );
    };
    for ( const auto& e : script.entries )
    {
      if ( e.is_checkpoint() )
      {
        ++summary.checks;
        const bool expected = eval_query( query, engine.graph() );
        summary.positives += expected ? 1 : 0;
        if ( expected != engine.answer() )
        {
          fail( std::string( "answer " ) + ( engine.answer() ? "true" : "false" ) + ", oracle " +
                ( expected ? "true" : "false" ) );
          break;
        }
        continue;
      }
      const auto before = oracle_call_count();
      engine.apply( e.change() );
      summary.oracle_calls_in_apply += oracle_call_count() - before;
      ++changes;
      if ( audit )
      {
        ++summary.audits;
        if ( const auto a = audit_aux( engine ); !a.ok() )
        {
          fail( first_discrepancies( a ) + " (last change " + to_string( e.change() ) + ")" );
          break;
        }
      }
    }
  }
}

void fuzz_sym( const FuzzOptions& o, FuzzSummary& summary )
{
  summary.target = "sym";
  for ( std::size_t i = 0; i < o.seeds; ++i )
  {
    const auto seed = o.first_seed + i;
    std::mt19937_64 rng( seed );
    const auto inputs = std::uniform_int_distribution<std::size_t>( 1, 64 )( rng );
    const auto gates = std::uniform_int_distribution<std::size_t>( 0, 200 )( rng );
    const auto fanin = std::uniform_int_distribution<std::size_t>( 1, 6 )( rng );
    const auto circuit = std::make_shared<const SymCircuit>( random_circuit( rng, inputs, gates, fanin ) );
    std::vector<bool> assignment( inputs );
    std::bernoulli_distribution coin( 0.5 );
    for ( std::size_t x = 0; x < inputs; ++x )
      assignment[x] = coin( rng );
    SymState state( circuit, assignment );
    const bool audit_counters = gates <= 40;
    std::uniform_int_distribution<std::size_t> pick( 0, inputs - 1 );
    ++summary.runs;

    std::size_t flips = 0;
    auto fail = [&]( const std::string& what ) {
      summary.failures.push_back( { seed, inputs, "after flip " + std::to_string( flips ) + ": " + what } );
    };
    for ( ; flips < o.length; )
    {
      const auto x = pick( rng );
      if ( flips % 10 == 0 )
      {
        auto twice = state;
        twice.flip( x );
        twice.flip( x );
        if ( !( twice == state ) )
        {
          fail( "flipping input " + std::to_string( x ) + " twice changed the state" );
          break;
        }
      }
      state.flip( x );
      ++flips;
      ++summary.checks;
      const bool expected = sym_eval_direct( *circuit, state.assignment() );
      summary.positives += expected ? 1 : 0;
      if ( state.output() != expected )
      {
        fail( "output differs from direct evaluation" );
        break;
      }
      if ( !state.all_non_negative() )
      {
        fail( "negative counter" );
        break;
      }
      if ( audit_counters )
      {
        ++summary.audits;
        // definition of #(A), enumerated gate by gate
        std::map<InputSet, std::int64_t> expected;
        expected[{}];
        for ( const auto& g : circuit->gates )
          for ( std::size_t bits = 0; bits < ( std::size_t{ 1 } << g.size() ); ++bits )
          {
            InputSet a;
            bool counts = true;
            for ( std::size_t j = 0; j < g.size(); ++j )
              if ( ( bits >> j ) & 1u )
                a.push_back( g[j] );
              else if ( !state.assignment()[g[j]] )
                counts = false;
            expected[a] += counts ? 1 : 0;
          }
        if ( expected != state.counters() )
        {
          fail( "counter store differs from the definition" );
          break;
        }
      }
    }
  }
}

} // namespace

FuzzSummary fuzz( const FuzzOptions& options )
{
  FuzzSummary summary;
  summary.target = options.target;
  if ( options.target == "sym" )
    fuzz_sym( options, summary );
  else if ( options.target == "fo-degk" )
  {
    summary.target = "fo-degk(k=" + std::to_string( options.k ) + ")";
    fuzz_engine<FoDegKEngine>( options, summary, [&]( std::size_t n ) { return FoDegKEngine( n, options.k ); } );
  }
  else if ( options.target == "fo-logn" )
    fuzz_engine<FoLogNEngine>( options, summary, []( std::size_t n ) { return FoLogNEngine( n ); } );
  else
    fuzz_program( options, summary );
  return summary;
}

VerifySummary verify_constructions( const VerifyOptions& options )
{
  VerifySummary summary;
  std::mt19937_64 rng( options.seed );
  auto check = [&]( const Collection& col ) {
    ++summary.collections;
    const auto result = verify_lower_bound_property( col, lower_bound_graph( col ) );
    if ( !result.ok )
      summary.failures.push_back( "n=" + std::to_string( col.n ) + " k=" + std::to_string( col.k ) + " collection {" +
                                  format_collection( col ) + "}: " + result.reason );
  };

  for ( std::size_t k = 0; k <= options.k_max; ++k )
    for ( std::size_t n = k + 1; n <= options.n_max; ++n )
    {
      const auto candidates = subsets_of_size( n, k + 1 );
      if ( n <= options.exhaustive_n && candidates.size() < 63 )
      {
        for ( std::uint64_t bits = 0; bits < ( std::uint64_t{ 1 } << candidates.size() ); ++bits )
        {
          Collection col{ n, k, {} };
          for ( std::size_t i = 0; i < candidates.size(); ++i )
            if ( ( bits >> i ) & 1u )
              col.members.push_back( candidates[i] );
          check( col );
        }
      }
      else
        for ( std::size_t s = 0; s < options.samples; ++s )
          check( random_collection( rng, n, k ) );
    }

  check( parse_collection( "1,3,4;2,3,4", 4, 2 ) );

  for ( std::size_t s = 0; s < options.identity_samples; ++s )
  {
    const auto n = std::uniform_int_distribution<std::size_t>( 2, 12 )( rng );
    const double density = std::uniform_real_distribution<double>( 0.05, 0.6 )( rng );
    Structure g( n, { { "E", 2 } } );
    std::bernoulli_distribution edge( density );
    for ( Element v = 0; v < n; ++v )
      for ( Element w = 0; w < n; ++w )
        if ( edge( rng ) )
          g.relation( "E" ).insert( Tuple{ v, w } );
    std::vector<Element> all( n );
    for ( Element v = 0; v < n; ++v )
      all[v] = v;
    const auto size = std::uniform_int_distribution<std::size_t>( 1, std::min<std::size_t>( 4, n ) )( rng );
    std::vector<Element> sources;
    std::sample( all.begin(), all.end(), std::back_inserter( sources ), size, rng );
    ++summary.identity_checks;
    if ( !inclusion_exclusion_holds( g, sources ) )
      summary.failures.push_back( "inclusion-exclusion parity fails on sample " + std::to_string( s ) );
  }
  return summary;
}

} // namespace dyncomplab
