#include <dyncomplab/interpreter.hpp>

#include <algorithm>
#include <map>
#include <regex>
#include <sstream>

namespace dyncomplab
{

std::string_view to_string( Builtin b )
{
  return b == Builtin::order ? "order" : "bit";
}

RelationDecl builtin_relation( Builtin b )
{
  return b == Builtin::order ? RelationDecl{ "leq", 2 } : RelationDecl{ "bit", 2 };
}

std::string_view to_string( ProgramClass c )
{
  return c == ProgramClass::dynprop ? "dynprop" : "dynfo";
}

Schema DynamicProgram::combined_schema() const
{
  Schema schema = input;
  for ( auto b : builtins )
    schema.push_back( builtin_relation( b ) );
  schema.insert( schema.end(), aux.begin(), aux.end() );
  return schema;
}

const UpdateRule* DynamicProgram::find_rule( ChangeOp op, std::string_view input_relation,
                                             std::string_view target ) const
{
  for ( const auto& r : rules )
    if ( r.op == op && r.input == input_relation && r.target == target )
      return &r;
  return nullptr;
}

UpdateRule make_rule( ChangeOp op, std::string input, std::vector<std::string> params, std::string target,
                      std::vector<std::string> frees, const FormulaPtr& body )
{
  UpdateRule rule;
  rule.op = op;
  rule.input = std::move( input );
  rule.body = mark_parameters( body, std::set<std::string>( params.begin(), params.end() ) );
  rule.params = std::move( params );
  rule.target = std::move( target );
  rule.frees = std::move( frees );
  return rule;
}

/* program files */

namespace
{

std::string trim( std::string_view s )
{
  const auto first = s.find_first_not_of( " \t\r" );
  if ( first == std::string_view::npos )
    return {};
  const auto last = s.find_last_not_of( " \t\r" );
  return std::string( s.substr( first, last - first + 1 ) );
}

std::vector<std::string> split_names( const std::string& list )
{
  std::vector<std::string> names;
  std::string current;
  for ( char c : list + "," )
  {
    if ( c == ',' )
    {
      auto t = trim( current );
      if ( !t.empty() )
        names.push_back( t );
      current.clear();
    }
    else
      current += c;
  }
  return names;
}

RelationDecl parse_decl( const std::string& word, std::size_t line )
{
  static const std::regex pattern( R"(([A-Za-z_][A-Za-z0-9_]*)/([0-9]+))" );
  std::smatch m;
  if ( !std::regex_match( word, m, pattern ) )
    throw SyntaxError( line, "expected <Name>/<arity>, got '" + word + "'" );
  return { m[1].str(), static_cast<std::size_t>( std::stoul( m[2].str() ) ) };
}

std::string join( const std::vector<std::string>& names )
{
  std::string out;
  for ( std::size_t i = 0; i < names.size(); ++i )
    out += ( i ? "," : "" ) + names[i];
  return out;
}

struct PendingRule
{
  std::size_t line;
  std::string text;
};

} // namespace

DynamicProgram parse_program( std::string_view text )
{
  DynamicProgram p;
  std::vector<PendingRule> pending;

  std::istringstream in{ std::string( text ) };
  std::string raw;
  std::size_t line_no = 0;
  while ( std::getline( in, raw ) )
  {
    ++line_no;
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    const auto line = trim( raw );
    if ( line.empty() )
      continue;
    if ( raw[0] == ' ' || raw[0] == '\t' )
    {
      if ( pending.empty() )
        throw SyntaxError( line_no, "continuation line outside a rule" );
      pending.back().text += " " + line;
      continue;
    }

    std::istringstream words( line );
    std::string keyword;
    words >> keyword;
    std::vector<std::string> args;
    for ( std::string w; words >> w; )
      args.push_back( w );

    auto need = [&]( std::size_t count ) {
      if ( args.size() != count )
        throw SyntaxError( line_no, "'" + keyword + "' expects " + std::to_string( count ) + " argument(s)" );
    };

    if ( keyword == "on" )
      pending.push_back( { line_no, line } );
    else if ( !pending.empty() )
      throw SyntaxError( line_no, "declarations must precede the rules" );
    else if ( keyword == "program" )
    {
      need( 1 );
      p.name = args[0];
    }
    else if ( keyword == "class" )
    {
      need( 1 );
      if ( args[0] == "dynprop" )
        p.claimed_class = ProgramClass::dynprop;
      else if ( args[0] == "dynfo" )
        p.claimed_class = ProgramClass::dynfo;
      else
        throw SyntaxError( line_no, "unknown class '" + args[0] + "'" );
    }
    else if ( keyword == "input" || keyword == "aux" )
    {
      need( 1 );
      ( keyword == "input" ? p.input : p.aux ).push_back( parse_decl( args[0], line_no ) );
    }
    else if ( keyword == "builtin" )
    {
      need( 1 );
      if ( args[0] == "order" )
        p.builtins.push_back( Builtin::order );
      else if ( args[0] == "bit" )
        p.builtins.push_back( Builtin::bit );
      else
        throw SyntaxError( line_no, "unknown builtin '" + args[0] + "'" );
    }
    else if ( keyword == "init" )
    {
      if ( args.empty() )
        throw SyntaxError( line_no, "'init' expects a relation name" );
      InitFact fact{ args[0], {} };
      for ( std::size_t i = 1; i < args.size(); ++i )
      {
        if ( args[i].find_first_not_of( "0123456789" ) != std::string::npos )
          throw SyntaxError( line_no, "invalid element id '" + args[i] + "'" );
        fact.tuple.push_back( static_cast<Element>( std::stoul( args[i] ) ) );
      }
      p.init.push_back( std::move( fact ) );
    }
    else if ( keyword == "answer" )
    {
      need( 1 );
      p.answer = args[0];
    }
    else if ( keyword == "requires_effective" )
    {
      need( 0 );
      p.requires_effective = true;
    }
    else
      throw SyntaxError( line_no, "unknown directive '" + keyword + "'" );
  }

  static const std::regex rule_pattern(
      R"(on\s+(ins|del)\s+([A-Za-z_][A-Za-z0-9_]*)\s*\(([^)]*)\)\s+update\s+([A-Za-z_][A-Za-z0-9_]*)\s*\(([^)]*)\)\s*:=\s*(.+))" );
  const auto schema = p.combined_schema();
  for ( const auto& pr : pending )
  {
    std::smatch m;
    if ( !std::regex_match( pr.text, m, rule_pattern ) )
      throw SyntaxError( pr.line, "malformed rule; expected 'on ins|del R(params) update S(frees) := formula'" );
    UpdateRule rule;
    rule.op = m[1].str() == "ins" ? ChangeOp::insert : ChangeOp::remove;
    rule.input = m[2].str();
    rule.params = split_names( m[3].str() );
    rule.target = m[4].str();
    rule.frees = split_names( m[5].str() );
    rule.line = pr.line;
    ParseOptions options;
    options.parameters = { rule.params.begin(), rule.params.end() };
    options.allowed_free = std::set<std::string>( rule.frees.begin(), rule.frees.end() );
    try
    {
      rule.body = parse_formula( m[6].str(), schema, options );
    }
    catch ( const SyntaxError& e )
    {
      throw SyntaxError( pr.line, e.what() );
    }
    catch ( const ValidationError& e )
    {
      throw ValidationError( e.kind(), "line " + std::to_string( pr.line ) + ": " + e.what() );
    }
    p.rules.push_back( std::move( rule ) );
  }
  return p;
}

std::string format_program( const DynamicProgram& p )
{
  std::ostringstream out;
  if ( !p.name.empty() )
    out << "program " << p.name << "\n";
  if ( p.claimed_class )
    out << "class " << to_string( *p.claimed_class ) << "\n";
  for ( const auto& d : p.input )
    out << "input " << d.name << "/" << d.arity << "\n";
  for ( auto b : p.builtins )
    out << "builtin " << to_string( b ) << "\n";
  for ( const auto& d : p.aux )
    out << "aux " << d.name << "/" << d.arity << "\n";
  for ( const auto& f : p.init )
  {
    out << "init " << f.relation;
    for ( auto e : f.tuple )
      out << " " << e;
    out << "\n";
  }
  if ( !p.answer.empty() )
    out << "answer " << p.answer << "\n";
  if ( p.requires_effective )
    out << "requires_effective\n";

  for ( const auto& r : p.rules )
  {
    out << "\non " << ( r.op == ChangeOp::insert ? "ins " : "del " ) << r.input << "(" << join( r.params )
        << ") update " << r.target << "(" << join( r.frees ) << ") := ";
    const auto text = pretty( r.body );
    if ( r.body->kind != NodeKind::disjunction || text.size() <= 90 )
    {
      out << text << "\n";
      continue;
    }
    for ( std::size_t i = 0; i < r.body->children.size(); ++i )
    {
      const auto& c = *r.body->children[i];
      const bool parens = c.kind == NodeKind::disjunction || c.kind == NodeKind::exists || c.kind == NodeKind::forall;
      const auto part = parens ? "(" + pretty( c ) + ")" : pretty( c );
      out << ( i ? "\n    | " : "" ) << part;
    }
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> validate( const DynamicProgram& p )
{
  std::vector<std::string> diagnostics;
  const auto schema = p.combined_schema();

  std::map<std::string, int> seen;
  for ( const auto& d : schema )
    if ( ++seen[d.name] == 2 )
      diagnostics.push_back( "relation " + d.name + " declared more than once" );

  for ( const auto& f : p.init )
  {
    const auto arity = find_arity( p.aux, f.relation );
    if ( !arity )
      diagnostics.push_back( "init refers to unknown auxiliary relation " + f.relation );
    else if ( *arity != f.tuple.size() )
      diagnostics.push_back( "init tuple for " + f.relation + " has wrong arity" );
  }
  if ( p.answer.empty() )
    diagnostics.push_back( "no answer relation declared" );
  else if ( !find_arity( p.aux, p.answer ) )
    diagnostics.push_back( "answer relation " + p.answer + " is not an auxiliary relation" );

  std::map<std::tuple<ChangeOp, std::string, std::string>, int> coverage;
  for ( const auto& r : p.rules )
  {
    const auto where = "rule on " + std::string( r.op == ChangeOp::insert ? "ins " : "del " ) + r.input +
                       " for " + r.target;
    ++coverage[{ r.op, r.input, r.target }];
    const auto in_arity = find_arity( p.input, r.input );
    if ( !in_arity )
      diagnostics.push_back( where + ": " + r.input + " is not an input relation" );
    else if ( *in_arity != r.params.size() )
      diagnostics.push_back( where + ": expected " + std::to_string( *in_arity ) + " parameters, got " +
                             std::to_string( r.params.size() ) );
    const auto aux_arity = find_arity( p.aux, r.target );
    if ( !aux_arity )
      diagnostics.push_back( where + ": " + r.target + " is not an auxiliary relation" );
    else if ( *aux_arity != r.frees.size() )
      diagnostics.push_back( where + ": expected " + std::to_string( *aux_arity ) + " free variables, got " +
                             std::to_string( r.frees.size() ) );

    std::set<std::string> names;
    for ( const auto& n : r.params )
      if ( !names.insert( n ).second )
        diagnostics.push_back( where + ": name " + n + " used twice" );
    for ( const auto& n : r.frees )
      if ( !names.insert( n ).second )
        diagnostics.push_back( where + ": name " + n + " used twice" );

    if ( !r.body )
    {
      diagnostics.push_back( where + ": missing body" );
      continue;
    }
    for ( const auto& problem : check_schema( *r.body, schema ) )
      diagnostics.push_back( where + ": " + problem );
    for ( const auto& v : free_variables( *r.body ) )
      if ( std::find( r.frees.begin(), r.frees.end(), v ) == r.frees.end() )
        diagnostics.push_back( where + ": unbound variable " + v );
    for ( const auto& v : parameters( *r.body ) )
      if ( std::find( r.params.begin(), r.params.end(), v ) == r.params.end() )
        diagnostics.push_back( where + ": unknown parameter " + v );
    if ( p.claimed_class == ProgramClass::dynprop && classify( *r.body ) != FormulaClass::quantifier_free )
      diagnostics.push_back( where + ": quantifier in a program claimed to be quantifier-free" );
  }

  for ( const auto& in : p.input )
    for ( auto op : { ChangeOp::insert, ChangeOp::remove } )
      for ( const auto& a : p.aux )
      {
        const auto count = coverage[{ op, in.name, a.name }];
        const auto where = std::string( op == ChangeOp::insert ? "ins " : "del " ) + in.name + " / " + a.name;
        if ( count == 0 )
          diagnostics.push_back( "missing rule for " + where );
        else if ( count > 1 )
          diagnostics.push_back( "duplicate rules for " + where );
      }
  return diagnostics;
}

std::size_t max_aux_arity( const DynamicProgram& p )
{
  std::size_t arity = 0;
  for ( const auto& d : p.aux )
    arity = std::max( arity, d.arity );
  return arity;
}

/* runtime */

struct CompiledRule
{
  std::size_t target = 0;
  std::size_t arity = 0;
  std::size_t param_count = 0;
  bool identity = false;
  std::optional<CompiledFormula> guard;
  // levels[0] holds conjuncts over parameters only, levels[j] those whose deepest free is the j-th
  std::vector<std::vector<CompiledFormula>> levels;
};

struct CompiledProgram
{
  std::map<std::pair<ChangeOp, std::string>, std::vector<CompiledRule>> rules;
  std::vector<std::size_t> input_indices;
  std::vector<std::size_t> aux_indices;
  std::size_t answer = 0;
};

namespace
{

bool is_target_atom( const Formula& f, const UpdateRule& r )
{
  if ( f.kind != NodeKind::atom || f.relation != r.target || f.terms.size() != r.frees.size() )
    return false;
  for ( std::size_t i = 0; i < r.frees.size(); ++i )
    if ( f.terms[i].kind != Term::Kind::variable || f.terms[i].name != r.frees[i] )
      return false;
  return true;
}

/// Recognises `(!g & S(x̄)) | (g & rest)` with g mentioning at most the first free variable.
std::optional<std::pair<FormulaPtr, FormulaPtr>> guarded_frame( const UpdateRule& r )
{
  const auto& body = *r.body;
  if ( body.kind != NodeKind::disjunction || body.children.size() != 2 || r.frees.empty() )
    return std::nullopt;
  for ( int keep = 0; keep < 2; ++keep )
  {
    const auto& old_part = *body.children[keep];
    const auto& new_part = *body.children[1 - keep];
    if ( old_part.kind != NodeKind::conjunction || old_part.children.size() != 2 ||
         new_part.kind != NodeKind::conjunction || new_part.children.size() < 2 )
      continue;
    const auto& negated = *old_part.children[0];
    if ( negated.kind != NodeKind::negation || !is_target_atom( *old_part.children[1], r ) )
      continue;
    const auto& guard = negated.children[0];
    if ( !equal( *guard, *new_part.children[0] ) )
      continue;
    const auto vars = free_variables( *guard );
    if ( vars.size() > 1 || ( vars.size() == 1 && *vars.begin() != r.frees[0] ) )
      continue;
    std::vector<FormulaPtr> rest( new_part.children.begin() + 1, new_part.children.end() );
    return std::make_pair( guard, conj( std::move( rest ) ) );
  }
  return std::nullopt;
}

std::shared_ptr<const CompiledProgram> compile( const DynamicProgram& p, const Structure& layout )
{
  auto cp = std::make_shared<CompiledProgram>();
  for ( const auto& d : p.input )
    cp->input_indices.push_back( *layout.index_of( d.name ) );
  for ( const auto& d : p.aux )
    cp->aux_indices.push_back( *layout.index_of( d.name ) );
  cp->answer = *layout.index_of( p.answer );

  for ( const auto& r : p.rules )
  {
    CompiledRule cr;
    cr.target = *layout.index_of( r.target );
    cr.arity = r.frees.size();
    cr.param_count = r.params.size();
    std::vector<std::string> slots = r.params;
    slots.insert( slots.end(), r.frees.begin(), r.frees.end() );

    FormulaPtr plan_body = r.body;
    if ( is_target_atom( *r.body, r ) )
      cr.identity = true;
    else if ( auto frame = guarded_frame( r ) )
    {
      cr.guard.emplace( *frame->first, layout, slots );
      plan_body = frame->second;
    }

    cr.levels.resize( cr.arity + 1 );
    if ( !cr.identity )
    {
      std::vector<FormulaPtr> conjuncts;
      if ( plan_body->kind == NodeKind::conjunction )
        conjuncts = plan_body->children;
      else
        conjuncts = { plan_body };
      for ( const auto& c : conjuncts )
      {
        CompiledFormula cf( *c, layout, slots );
        const int deepest = cf.deepest_slot();
        const auto level = deepest < static_cast<int>( cr.param_count )
                               ? 0
                               : static_cast<std::size_t>( deepest ) - cr.param_count + 1;
        cr.levels[level].push_back( std::move( cf ) );
      }
    }
    cp->rules[{ r.op, r.input }].push_back( std::move( cr ) );
  }
  return cp;
}

class RuleEvaluator
{
public:
  RuleEvaluator( const CompiledRule& rule, const Structure& db, std::span<const Element> params )
      : rule_( rule ), db_( db ), n_( db.domain_size() ), old_( db.relation_at( rule.target ) ),
        result_( rule.arity, n_ )
  {
    std::size_t slots = rule.param_count + rule.arity;
    for ( const auto& level : rule.levels )
      for ( const auto& cf : level )
        slots = std::max( slots, cf.slot_count() );
    if ( rule.guard )
      slots = std::max( slots, rule.guard->slot_count() );
    env_.assign( slots, 0 );
    std::copy( params.begin(), params.end(), env_.begin() );
    slice_ = 1;
    for ( std::size_t i = 1; i < rule.arity; ++i )
      slice_ *= n_;
  }

  Relation run()
  {
    if ( rule_.identity )
      return old_;
    if ( !holds( 0 ) )
      return result_;
    enumerate( 0, 0 );
    return std::move( result_ );
  }

private:
  bool holds( std::size_t level )
  {
    for ( const auto& cf : rule_.levels[level] )
      if ( !cf.evaluate( db_, env_ ) )
        return false;
    return true;
  }

  void enumerate( std::size_t level, std::size_t prefix )
  {
    if ( level == rule_.arity )
    {
      result_.set_offset( prefix, true );
      return;
    }
    auto& slot = env_[rule_.param_count + level];
    for ( std::size_t d = 0; d < n_; ++d )
    {
      slot = static_cast<Element>( d );
      const auto offset = prefix * n_ + d;
      if ( level == 0 && rule_.guard && !rule_.guard->evaluate( db_, env_ ) )
      {
        const auto base = offset * slice_;
        for ( std::size_t i = 0; i < slice_; ++i )
          if ( old_.contains_offset( base + i ) )
            result_.set_offset( base + i, true );
        continue;
      }
      if ( holds( level + 1 ) )
        enumerate( level + 1, offset );
    }
  }

  const CompiledRule& rule_;
  const Structure& db_;
  std::size_t n_;
  const Relation& old_;
  Relation result_;
  std::vector<Element> env_;
  std::size_t slice_ = 1;
};

void materialize_builtin( Relation& rel, Builtin b, std::size_t n )
{
  for ( std::size_t i = 0; i < n; ++i )
    for ( std::size_t j = 0; j < n; ++j )
    {
      const bool value = b == Builtin::order ? i <= j : ( j >= 1 && j <= 32 && ( ( i >> ( j - 1 ) ) & 1u ) );
      if ( value )
        rel.set_offset( i * n + j, true );
    }
}

} // namespace

ProgramState::ProgramState( std::shared_ptr<const DynamicProgram> program, std::size_t n )
    : program_( std::move( program ) ), db_( n, program_->combined_schema() )
{
  const auto diagnostics = validate( *program_ );
  if ( !diagnostics.empty() )
    throw Error( "invalid program: " + diagnostics.front() );
  for ( auto b : program_->builtins )
    materialize_builtin( db_.relation( builtin_relation( b ).name ), b, n );
  for ( const auto& f : program_->init )
  {
    for ( auto e : f.tuple )
      if ( e >= n )
        throw ValidationError( ValidationKind::id_out_of_range,
                               "init fact for " + f.relation + " needs element " + std::to_string( e ) +
                                   " outside the domain" );
    db_.relation( f.relation ).insert( f.tuple );
  }
  compiled_ = compile( *program_, db_ );
}

Structure ProgramState::input() const
{
  Structure s( db_.domain_size() );
  for ( const auto& d : program_->input )
  {
    s.add_relation( d.name, d.arity );
    s.relation( d.name ) = db_.relation( d.name );
  }
  return s;
}

Structure ProgramState::aux() const
{
  Structure s( db_.domain_size() );
  for ( const auto& d : program_->aux )
  {
    s.add_relation( d.name, d.arity );
    s.relation( d.name ) = db_.relation( d.name );
  }
  return s;
}

StepOutcome ProgramState::step( const Change& c, EffectiveMode mode )
{
  if ( !find_arity( program_->input, c.relation ) )
  {
    if ( db_.has_relation( c.relation ) )
      throw ValidationError( ValidationKind::read_only_relation,
                             "relation " + c.relation + " is not an input relation and cannot be changed" );
    throw ValidationError( ValidationKind::unknown_relation, "unknown relation " + c.relation );
  }
  validate_change( db_, c );
  if ( program_->requires_effective && !is_effective( db_, c ) )
  {
    if ( mode == EffectiveMode::strict )
      throw ValidationError( ValidationKind::not_effective, "non-effective change " + to_string( c ) );
    return StepOutcome::skipped;
  }

  const auto it = compiled_->rules.find( { c.op, c.relation } );
  std::vector<std::pair<std::size_t, Relation>> updated;
  if ( it != compiled_->rules.end() )
    for ( const auto& rule : it->second )
      updated.emplace_back( rule.target, RuleEvaluator( rule, db_, c.tuple ).run() );
  for ( auto& [index, rel] : updated )
    db_.relation_at( index ) = std::move( rel );
  apply_change_in_place( db_, c );
  return StepOutcome::applied;
}

const Relation& ProgramState::answer() const
{
  return db_.relation_at( compiled_->answer );
}

bool ProgramState::answer_flag() const
{
  return !answer().empty();
}

ProgramState init_state( const DynamicProgram& p, std::size_t n )
{
  return ProgramState( std::make_shared<const DynamicProgram>( p ), n );
}

ProgramState step( const ProgramState& st, const Change& c, EffectiveMode mode )
{
  ProgramState next = st;
  next.step( c, mode );
  return next;
}

RunTrace run( const DynamicProgram& p, const ChangeScript& script, const RunOptions& options )
{
  RunTrace trace;
  auto state = init_state( p, script.domain_size );
  std::size_t changes = 0;
  for ( const auto& entry : script.entries )
  {
    if ( entry.is_checkpoint() )
    {
      CheckpointRecord record{ changes, state.answer(), std::nullopt };
      if ( options.trace_aux )
        record.aux = state.aux();
      trace.checkpoints.push_back( std::move( record ) );
      continue;
    }
    ++changes;
    if ( state.step( entry.change(), options.mode ) == StepOutcome::skipped )
    {
      ++trace.skipped;
      trace.warnings.push_back( "line " + std::to_string( entry.line ) + ": skipped non-effective change " +
                                to_string( entry.change() ) );
    }
  }
  return trace;
}

} // namespace dyncomplab
