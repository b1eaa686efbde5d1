// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Seeds, sizes and limits are fixed here so the run is reproducible.

#include <dyncomplab/constructions.hpp>
#include <dyncomplab/fo_engines.hpp>
#include <dyncomplab/oracle.hpp>
#include <dyncomplab/programs.hpp>
#include <dyncomplab/report.hpp>

#include "../support/random_formula.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace dyncomplab;

namespace
{

constexpr std::size_t fuzz_seeds = 500;
constexpr std::size_t audited_runs = 50;
constexpr std::size_t script_length = 200;
constexpr std::size_t max_n = 12;
constexpr std::size_t max_n_k4 = 10;

constexpr double program_budget_s = 300.0;
constexpr double construction_budget_s = 120.0;
constexpr double sym_budget_s = 180.0;
constexpr std::size_t sym_circuit_count = 500;
constexpr std::size_t sym_flips = 1000;
constexpr std::size_t formula_triples = 10000;

struct Outcome
{
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report( int id, const std::string& title, const std::function<Outcome()>& check )
{
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try
  {
    o = check();
  }
  catch ( const std::exception& e )
  {
    o = { false, std::string( "exception: " ) + e.what() };
  }
  const double secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  if ( !o.pass )
    ++failures;
  std::printf( "%s  %d  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs );
  std::fflush( stdout );
}

double elapsed_since( std::chrono::steady_clock::time_point start )
{
  return std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
}

bool is_audit_failure( const FuzzFailure& f )
{
  return f.message.find( "aux discrepancies" ) != std::string::npos;
}

struct ProgramRuns
{
  std::vector<FuzzSummary> summaries;
  double seconds = 0.0;
};

// Criteria 1 and 2 share the runs: the first 50 seeds of every program are audited after each step.
const ProgramRuns& program_runs()
{
  static const ProgramRuns runs = [] {
    const auto start = std::chrono::steady_clock::now();
    ProgramRuns r;
    for ( const auto& entry : catalog() )
    {
      FuzzOptions o;
      o.target = entry.name;
      o.seeds = fuzz_seeds;
      o.audit_runs = audited_runs;
      o.length = script_length;
      o.n_min = 1;
      o.n_max = entry.k == 4 && entry.family == "parity_exists_deg_prop" ? max_n_k4 : max_n;
      r.summaries.push_back( fuzz( o ) );
    }
    r.seconds = elapsed_since( start );
    return r;
  }();
  return runs;
}

std::string first_failure( const FuzzSummary& s )
{
  const auto& f = s.failures.front();
  return s.target + " seed " + std::to_string( f.seed ) + " n=" + std::to_string( f.n ) + ": " + f.message;
}

Outcome differential_programs()
{
  std::ostringstream out;
  std::size_t checks = 0, positives = 0, wrong = 0;
  std::string example;
  for ( const auto& s : program_runs().summaries )
  {
    checks += s.checks;
    positives += s.positives;
    for ( const auto& f : s.failures )
      if ( !is_audit_failure( f ) )
      {
        ++wrong;
        if ( example.empty() )
          example = first_failure( s );
      }
  }
  out << program_runs().summaries.size() << " programs x " << fuzz_seeds << " scripts, " << checks << " checkpoints ("
      << positives << " positive), " << wrong << " disagreements, " << program_runs().seconds << " s of "
      << program_budget_s << " s budget";
  if ( !example.empty() )
    out << "; " << example;
  return { wrong == 0 && program_runs().seconds < program_budget_s, out.str() };
}

Outcome audit_programs()
{
  std::ostringstream out;
  std::size_t audits = 0, bad = 0;
  std::string example;
  for ( const auto& s : program_runs().summaries )
  {
    audits += s.audits;
    for ( const auto& f : s.failures )
      if ( is_audit_failure( f ) )
      {
        ++bad;
        if ( example.empty() )
          example = first_failure( s );
      }
  }
  out << audited_runs << " audited runs per program, " << audits << " audits, " << bad << " runs with discrepancies";
  if ( !example.empty() )
    out << "; " << example;
  return { bad == 0, out.str() };
}

Outcome fo_engines()
{
  std::vector<FuzzSummary> all;
  for ( std::size_t k = 1; k <= 5; ++k )
  {
    FuzzOptions o;
    o.target = "fo-degk";
    o.k = k;
    o.seeds = fuzz_seeds;
    o.audit_runs = audited_runs;
    o.length = script_length;
    o.n_min = 1;
    o.n_max = max_n;
    all.push_back( fuzz( o ) );
  }
  for ( std::size_t n = 2; n <= 16; ++n )
  {
    FuzzOptions o;
    o.target = "fo-logn";
    o.seeds = fuzz_seeds;
    o.audit_runs = audited_runs;
    o.length = script_length;
    o.n_min = n;
    o.n_max = n;
    all.push_back( fuzz( o ) );
  }
  std::size_t checks = 0, positives = 0, audits = 0, calls = 0, failed = 0;
  std::string example;
  for ( const auto& s : all )
  {
    checks += s.checks;
    positives += s.positives;
    audits += s.audits;
    calls += s.oracle_calls_in_apply;
    failed += s.failures.size();
    if ( example.empty() && !s.failures.empty() )
      example = first_failure( s );
  }
  std::ostringstream out;
  out << "fo-degk k=1..5 and fo-logn n=2..16, " << fuzz_seeds << " seeds each: " << checks << " checkpoints ("
      << positives << " positive), " << audits << " audits, " << failed << " failing runs, " << calls
      << " oracle calls inside apply";
  if ( !example.empty() )
    out << "; " << example;
  return { failed == 0 && calls == 0, out.str() };
}

Structure with_changes( Structure g, const std::vector<Change>& changes )
{
  for ( const auto& c : changes )
    apply_change_in_place( g, c );
  return g;
}

bool final_answer( const DynamicProgram& p, const ChangeScript& script )
{
  const auto r = run_program( p, script, std::nullopt );
  return r.checkpoints.back().answer == "true";
}

Outcome figures()
{
  std::vector<std::string> broken;
  auto expect = [&]( bool ok, const std::string& what ) {
    if ( !ok )
      broken.push_back( what );
  };

  const auto fig1 = figure_fixture( "fig1" );
  const auto div3 = parity_degree_div3_program();
  const Query div3_query{ QueryKind::parity_degree_div3 };
  expect( final_answer( div3, fixture_script( fig1, "dashed" ) ), "fig1 dashed program answer" );
  expect( !final_answer( div3, fixture_script( fig1, "dotted" ) ), "fig1 dotted program answer" );
  expect( eval_query( div3_query, with_changes( fig1.graph, fig1.variants.at( "dashed" ) ) ), "fig1 dashed oracle" );
  expect( !eval_query( div3_query, with_changes( fig1.graph, fig1.variants.at( "dotted" ) ) ), "fig1 dotted oracle" );

  const auto fig2 = figure_fixture( "fig2" );
  const auto n2 = n_exists_forall( fig2.graph, { fig2.node( "v3" ), fig2.node( "v4" ) }, { fig2.node( "v5" ) }, 4 );
  expect( n2 == std::vector<Element>{ fig2.node( "w2" ), fig2.node( "w3" ), fig2.node( "w4" ) }, "fig2 witness set" );

  const auto fig3 = figure_fixture( "fig3" );
  TwoLayeredGraph layered;
  layered.graph = fig3.graph;
  layered.s = fig3.node( "s" );
  layered.t = fig3.node( "t" );
  for ( std::size_t i = 0; i < fig3.node_names.size(); ++i )
  {
    if ( fig3.node_names[i][0] == 'a' )
      layered.a.push_back( static_cast<Element>( i ) );
    if ( fig3.node_names[i][0] == 'b' )
      layered.b.push_back( static_cast<Element>( i ) );
  }
  validate( layered, true );
  for ( bool variant : { false, true } )
  {
    const auto r = two_layered_reduction( layered, variant );
    for ( const auto& [name, positive] : { std::pair<std::string, bool>{ "dashed", false }, { "dotted", true } } )
    {
      auto g = r.graph;
      for ( const auto& c : fig3.variants.at( name ) )
        for ( const auto& d : r.translate( c ) )
          apply_change_in_place( g, d );
      expect( eval_query( { QueryKind::parity_exists_deg, r.bound() }, g ) == positive,
              "fig3 " + name + ( variant ? " (bound 2)" : "" ) );
    }
  }

  const auto fig4 = figure_fixture( "fig4" );
  std::set<std::pair<std::string, std::string>> edges;
  fig4.graph.relation( "E" ).for_each(
      [&]( const Tuple& t ) { edges.insert( { fig4.node_names[t[0]], fig4.node_names[t[1]] } ); } );
  const std::set<std::pair<std::string, std::string>> golden = {
      { "p1", "{1}" },     { "p1", "{1,3}" },   { "p3", "{1,3}" },   { "p1", "{1,4}" },   { "p4", "{1,4}" },
      { "p1", "{1,3,4}" }, { "p3", "{1,3,4}" }, { "p4", "{1,3,4}" }, { "p2", "{2}" },     { "p2", "{2,3}" },
      { "p3", "{2,3}" },   { "p2", "{2,4}" },   { "p4", "{2,4}" },   { "p2", "{2,3,4}" }, { "p3", "{2,3,4}" },
      { "p4", "{2,3,4}" },
  };
  expect( edges == golden, "fig4 edge set" );
  const Query deg3{ QueryKind::parity_exists_deg, 3 };
  expect( eval_query( deg3, with_changes( fig4.graph, fig4.variants.at( "colour-134" ) ) ), "fig4 {p1,p3,p4} odd" );
  expect( !eval_query( deg3, with_changes( fig4.graph, fig4.variants.at( "colour-123" ) ) ), "fig4 {p1,p2,p3} even" );
  for ( const auto& variant : { "colour-134", "colour-123" } )
  {
    const auto r = run_engine( EngineKind::fo_degk, 3, fixture_script( fig4, variant ), deg3 );
    expect( r.all_match(), std::string( "fig4 " ) + variant + " engine" );
  }

  // the committed files must be what the generators produce
  const std::string dir = std::string( DYNCOMPLAB_SOURCE_DIR ) + "/fixtures/";
  for ( const auto& name : fixture_names() )
  {
    const auto f = figure_fixture( name );
    expect( materialize( parse_script( read_file( dir + name + ".str" ) ) ) == f.graph, name + ".str" );
    for ( const auto& [variant, changes] : f.variants )
    {
      const auto file = name + "_" + variant + ".chg";
      expect( format_script( parse_script( read_file( dir + file ) ) ) == format_script( fixture_script( f, variant ) ),
              file );
    }
  }

  std::string detail = "fig1, fig2, fig3, fig4 and committed fixture files";
  if ( !broken.empty() )
  {
    detail = "failed:";
    for ( const auto& b : broken )
      detail += " [" + b + "]";
  }
  return { broken.empty(), detail };
}

Outcome constructions()
{
  const auto start = std::chrono::steady_clock::now();
  VerifyOptions o;
  o.n_max = 6;
  o.k_max = 2;
  o.samples = 200;
  o.exhaustive_n = 4;
  o.identity_samples = 1000;
  const auto s = verify_constructions( o );
  const double secs = elapsed_since( start );
  std::ostringstream out;
  out << s.collections << " collections (n <= 6, k <= 2), " << s.identity_checks << " identity samples, "
      << s.failures.size() << " failures, " << secs << " s of " << construction_budget_s << " s budget";
  if ( !s.failures.empty() )
    out << "; " << s.failures.front();
  return { s.ok() && secs < construction_budget_s, out.str() };
}

Outcome sym_circuits()
{
  const auto start = std::chrono::steady_clock::now();
  FuzzOptions o;
  o.target = "sym";
  o.seeds = sym_circuit_count;
  o.length = sym_flips;
  const auto s = fuzz( o );
  const double secs = elapsed_since( start );
  std::ostringstream out;
  out << s.runs << " circuits x " << sym_flips << " flips, " << s.checks << " output checks, " << s.audits
      << " counter audits, " << s.failures.size() << " failures, " << secs << " s of " << sym_budget_s << " s budget";
  if ( !s.failures.empty() )
    out << "; " << first_failure( s );
  return { s.ok() && secs < sym_budget_s, out.str() };
}

Outcome static_checks()
{
  std::vector<std::string> broken;
  std::size_t rules = 0;
  for ( const auto& entry : catalog() )
  {
    const auto p = entry.build();
    if ( !validate( p ).empty() )
      broken.push_back( entry.name + " has diagnostics" );
    if ( entry.claimed_class == ProgramClass::dynprop )
      for ( const auto& rule : p.rules )
      {
        ++rules;
        if ( classify( *rule.body ) != FormulaClass::quantifier_free )
          broken.push_back( entry.name + " has a quantified rule" );
      }
  }
  for ( std::size_t k = 3; k <= 5; ++k )
    if ( max_aux_arity( parity_exists_deg_k_prop_program( k ) ) != std::max<std::size_t>( 3, k ) )
      broken.push_back( "prop arity for k=" + std::to_string( k ) );
  for ( std::size_t k = 1; k <= 4; ++k )
    if ( max_aux_arity( size_k_program( k ) ) != 2 )
      broken.push_back( "size_k arity for k=" + std::to_string( k ) );
  if ( max_aux_arity( parity_program() ) != 0 )
    broken.push_back( "parity arity" );

  for ( std::size_t k = 1; k <= 5; ++k )
  {
    const auto schema = FoDegKEngine( 8, k ).aux_schema();
    std::size_t unary = 0, other = 0;
    for ( const auto& d : schema )
    {
      if ( d.name == "leq" )
        continue;
      ( d.arity == 1 ? unary : other ) += 1;
    }
    if ( other != 0 || unary != ( std::size_t{ 1 } << k ) - 1 )
      broken.push_back( "fo-degk payload for k=" + std::to_string( k ) );
  }
  std::size_t binary = 0, other = 0;
  for ( const auto& d : FoLogNEngine( 8 ).aux_schema() )
  {
    if ( d.name == "leq" || d.name == "bit" )
      continue;
    ( d.arity == 2 ? binary : other ) += 1;
  }
  if ( binary != 1 || other != 0 )
    broken.push_back( "fo-logn payload" );

  std::string detail = std::to_string( rules ) + " DynProp rules quantifier-free, arities and payload shapes as claimed";
  if ( !broken.empty() )
  {
    detail = "failed:";
    for ( const auto& b : broken )
      detail += " [" + b + "]";
  }
  return { broken.empty(), detail };
}

Outcome logic_kernel()
{
  testing::FormulaGenerator gen( 2024 );
  ParseOptions options;
  options.parameters = { "p" };
  const std::vector<std::string> slots = { "x", "y", "z", "p" };
  std::size_t violations = 0;
  std::string example;
  auto violated = [&]( const std::string& law, const FormulaPtr& f ) {
    if ( violations++ == 0 )
      example = law + " on " + pretty( f );
  };

  for ( std::size_t i = 0; i < formula_triples; ++i )
  {
    const auto f = gen.formula( gen.uniform( 1, 6 ) );
    const auto g = gen.formula( 3 );
    const auto n = gen.uniform( 2, 4 );
    const auto s = gen.structure( n );
    const auto a = gen.assignment( n );

    if ( !equal( parse_formula( pretty( f ), testing::formula_schema(), options ), f ) )
      violated( "round-trip", f );

    const bool v = evaluate( *f, s, a );
    const bool w = evaluate( *g, s, a );
    if ( v != testing::expanded( *f, s, a ) )
      violated( "quantifier/xor expansion", f );

    const CompiledFormula compiled( *f, s, slots );
    std::vector<Element> env( compiled.slot_count() );
    for ( std::size_t j = 0; j < slots.size(); ++j )
      env[j] = a.at( slots[j] );
    if ( compiled.evaluate( s, env ) != v )
      violated( "compiled evaluation", f );

    if ( evaluate( *exclusive_or( { f, g } ), s, a ) != ( v != w ) )
      violated( "xor of two", f );
    if ( evaluate( *exclusive_or( { f, f } ), s, a ) )
      violated( "self xor", f );
    if ( evaluate( *exclusive_or( { f, g } ), s, a ) !=
         evaluate( *disj( { conj( { f, neg( g ) } ), conj( { neg( f ), g } ) } ), s, a ) )
      violated( "xor expansion", f );

    for ( const char* x : { "x", "y", "z" } )
    {
      if ( evaluate( *neg( exists( x, f ) ), s, a ) != evaluate( *forall( x, neg( f ) ), s, a ) )
        violated( "quantifier duality", f );
      // a quantifier over a variable that is not free is vacuous on a non-empty domain
      if ( !free_variables( *f ).contains( x ) && evaluate( *exists( x, f ), s, a ) != v )
        violated( "vacuous quantifier", f );
    }
  }
  std::ostringstream out;
  out << formula_triples << " (formula, structure, assignment) triples, " << violations << " violations";
  if ( !example.empty() )
    out << "; first: " << example;
  return { violations == 0, out.str() };
}

} // namespace

int main()
{
  report( 1, "differential correctness of the DynProp programs", differential_programs );
  report( 2, "auxiliary relation audit", audit_programs );
  report( 3, "FO engines", fo_engines );
  report( 4, "figure fixtures", figures );
  report( 5, "lower-bound construction", constructions );
  report( 6, "Sym circuits", sym_circuits );
  report( 7, "structural claims", static_checks );
  report( 8, "logic kernel laws", logic_kernel );
  std::printf( "%d of 8 criteria failed\n", failures );
  return failures == 0 ? 0 : 1;
}
