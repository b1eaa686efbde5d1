#include <dyncomplab/constructions.hpp>
#include <dyncomplab/oracle.hpp>
#include <dyncomplab/programs.hpp>
#include <dyncomplab/report.hpp>
#include <dyncomplab/symcircuit.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dyncomplab;

namespace
{

DynamicProgram load_program( const std::string& name_or_text )
{
  if ( name_or_text.find( '\n' ) != std::string::npos )
    return parse_program( name_or_text );
  return catalog_entry( name_or_text ).build();
}

py::list checkpoint_list( const RunReport& r )
{
  py::list out;
  for ( const auto& c : r.checkpoints )
  {
    py::dict d;
    d["checkpoint"] = c.checkpoint;
    d["change_index"] = c.change_index;
    d["answer"] = c.answer;
    d["oracle"] = c.oracle ? py::object( py::str( *c.oracle ) ) : py::object( py::none() );
    d["match"] = c.match;
    out.append( d );
  }
  return out;
}

std::vector<std::vector<Element>> tuples_of( const Relation& r )
{
  std::vector<std::vector<Element>> out;
  for ( const auto& t : r.tuples() )
    out.emplace_back( t.begin(), t.end() );
  return out;
}

} // namespace

PYBIND11_MODULE( _dyncomplab, m )
{
  m.doc() = "Dynamic programs, oracles and constructions for parity-style graph queries";

  py::register_exception<ValidationError>( m, "ValidationError" );
  py::register_exception<Error>( m, "Error" );

  py::class_<Structure>( m, "Structure" )
      .def_property_readonly( "domain_size", &Structure::domain_size )
      .def( "relation_names",
            []( const Structure& s ) {
              std::vector<std::string> names;
              for ( std::size_t i = 0; i < s.relation_count(); ++i )
                names.push_back( s.name_at( i ) );
              return names;
            } )
      .def( "tuples", []( const Structure& s, const std::string& name ) { return tuples_of( s.relation( name ) ); } )
      .def( "__str__", &structure_text );

  m.def( "catalog", [] {
    std::vector<std::string> names;
    for ( const auto& e : catalog() )
      names.push_back( e.name );
    return names;
  } );

  m.def(
      "run",
      []( const std::string& program, const std::string& script, const std::optional<std::string>& oracle, std::size_t k ) {
        const auto p = load_program( program );
        std::optional<Query> q;
        if ( oracle )
          q = parse_query( *oracle, k );
        return checkpoint_list( run_program( p, parse_script( script, p.input ), q ) );
      },
      py::arg( "program" ), py::arg( "script" ), py::arg( "oracle" ) = std::nullopt, py::arg( "k" ) = 0,
      "Runs a catalog program (by name) or program text on a change script; returns one dict per checkpoint." );

  m.def(
      "run_engine",
      []( const std::string& engine, std::size_t k, const std::string& script ) {
        const auto kind = parse_engine( engine );
        const auto parsed = parse_script( script, coloured_graph_schema() );
        const auto query = kind == EngineKind::fo_degk ? Query{ QueryKind::parity_exists_deg, k }
                                                       : Query{ QueryKind::parity_exists_deg_logn };
        return checkpoint_list( run_engine( kind, k, parsed, query ) );
      },
      py::arg( "engine" ), py::arg( "k" ) = 0, py::arg( "script" ) );

  m.def(
      "materialize", []( const std::string& script ) { return materialize( parse_script( script ) ); },
      py::arg( "script" ) );

  m.def(
      "eval_query",
      []( const std::string& query, const Structure& s, std::size_t k ) { return eval_query( parse_query( query, k ), s ); },
      py::arg( "query" ), py::arg( "structure" ), py::arg( "k" ) = 0 );

  m.def( "covered_set", []( const Structure& s, std::optional<std::size_t> bound ) { return covered_set( s, bound ); },
         py::arg( "structure" ), py::arg( "bound" ) = std::nullopt );

  m.def(
      "fuzz",
      []( const std::string& target, std::size_t k, std::size_t seeds, std::size_t length, std::size_t n_min,
          std::size_t n_max, std::uint64_t first_seed, std::size_t audit_runs ) {
        FuzzOptions o;
        o.target = target;
        o.k = k;
        o.seeds = seeds;
        o.length = length;
        o.n_min = n_min;
        o.n_max = n_max;
        o.first_seed = first_seed;
        o.audit_runs = audit_runs;
        const auto s = fuzz( o );
        py::dict d;
        d["target"] = s.target;
        d["runs"] = s.runs;
        d["checks"] = s.checks;
        d["positives"] = s.positives;
        d["audits"] = s.audits;
        d["oracle_calls_in_apply"] = s.oracle_calls_in_apply;
        py::list failures;
        for ( const auto& f : s.failures )
          failures.append( py::make_tuple( f.seed, f.n, f.message ) );
        d["failures"] = failures;
        return d;
      },
      py::arg( "target" ), py::arg( "k" ) = 0, py::arg( "seeds" ) = 100, py::arg( "length" ) = 200,
      py::arg( "n_min" ) = 4, py::arg( "n_max" ) = 10, py::arg( "first_seed" ) = 1, py::arg( "audit_runs" ) = 0 );

  m.def(
      "verify_lower_bound",
      []( std::size_t n, std::size_t k, const std::string& collection ) {
        const auto col = parse_collection( collection, n, k );
        const auto check = verify_lower_bound_property( col, lower_bound_graph( col ) );
        return check.ok;
      },
      py::arg( "n" ), py::arg( "k" ), py::arg( "collection" ) );

  m.def(
      "lower_bound_edges",
      []( std::size_t n, std::size_t k, const std::string& collection ) {
        return tuples_of( lower_bound_graph( parse_collection( collection, n, k ) ).graph.relation( "E" ) );
      },
      py::arg( "n" ), py::arg( "k" ), py::arg( "collection" ) );

  m.def( "fixture_names", &fixture_names );
  m.def(
      "fixture",
      []( const std::string& name ) {
        const auto f = figure_fixture( name );
        py::dict d;
        d["description"] = f.description;
        d["nodes"] = f.node_names;
        d["graph"] = f.graph;
        std::vector<std::string> variants;
        for ( const auto& [v, changes] : f.variants )
          variants.push_back( v );
        d["variants"] = variants;
        return d;
      },
      py::arg( "name" ) );
  m.def(
      "fixture_script", []( const std::string& name, const std::string& variant ) {
        return format_script( fixture_script( figure_fixture( name ), variant ) );
      },
      py::arg( "name" ), py::arg( "variant" ) = "" );

  py::class_<SymState>( m, "SymState" )
      .def( py::init( []( const std::string& circuit, const std::vector<bool>& assignment ) {
              return SymState( std::make_shared<const SymCircuit>( parse_circuit( circuit ) ), assignment );
            } ),
            py::arg( "circuit" ), py::arg( "assignment" ) )
      .def( "flip", &SymState::flip )
      .def( "output", &SymState::output )
      .def( "activated", &SymState::activated );
}
