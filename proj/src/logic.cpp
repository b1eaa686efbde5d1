#include <dyncomplab/logic.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>

namespace dyncomplab
{

Term var( std::string name )
{
  return { Term::Kind::variable, std::move( name ), 0 };
}

Term param( std::string name )
{
  return { Term::Kind::parameter, std::move( name ), 0 };
}

Term constant( Element value )
{
  return { Term::Kind::constant, {}, value };
}

bool equal( const Formula& a, const Formula& b )
{
  if ( a.kind != b.kind || a.relation != b.relation || a.terms != b.terms || a.variable != b.variable ||
       a.children.size() != b.children.size() )
    return false;
  for ( std::size_t i = 0; i < a.children.size(); ++i )
    if ( !equal( *a.children[i], *b.children[i] ) )
      return false;
  return true;
}

namespace
{

FormulaPtr make( Formula f )
{
  return std::make_shared<const Formula>( std::move( f ) );
}

FormulaPtr nary( NodeKind kind, std::vector<FormulaPtr> parts, FormulaPtr empty )
{
  if ( parts.empty() )
    return empty;
  if ( parts.size() == 1 )
    return parts.front();
  Formula f;
  f.kind = kind;
  f.children = std::move( parts );
  return make( std::move( f ) );
}

} // namespace

FormulaPtr f_true()
{
  static const auto t = make( Formula{ NodeKind::truth, {}, {}, {}, {} } );
  return t;
}

FormulaPtr f_false()
{
  static const auto f = make( Formula{ NodeKind::falsity, {}, {}, {}, {} } );
  return f;
}

FormulaPtr atom( std::string relation, std::vector<Term> terms )
{
  Formula f;
  f.kind = NodeKind::atom;
  f.relation = std::move( relation );
  f.terms = std::move( terms );
  return make( std::move( f ) );
}

FormulaPtr atom( std::string relation, const std::vector<std::string>& variables )
{
  std::vector<Term> terms;
  for ( const auto& v : variables )
    terms.push_back( var( v ) );
  return atom( std::move( relation ), std::move( terms ) );
}

FormulaPtr eq( Term a, Term b )
{
  Formula f;
  f.kind = NodeKind::equal;
  f.terms = { std::move( a ), std::move( b ) };
  return make( std::move( f ) );
}

FormulaPtr neq( Term a, Term b )
{
  return neg( eq( std::move( a ), std::move( b ) ) );
}

FormulaPtr neg( FormulaPtr child )
{
  Formula f;
  f.kind = NodeKind::negation;
  f.children = { std::move( child ) };
  return make( std::move( f ) );
}

FormulaPtr conj( std::vector<FormulaPtr> parts )
{
  return nary( NodeKind::conjunction, std::move( parts ), f_true() );
}

FormulaPtr disj( std::vector<FormulaPtr> parts )
{
  return nary( NodeKind::disjunction, std::move( parts ), f_false() );
}

FormulaPtr exclusive_or( std::vector<FormulaPtr> parts )
{
  return nary( NodeKind::exclusive_or, std::move( parts ), f_false() );
}

FormulaPtr exists( std::string variable, FormulaPtr body )
{
  Formula f;
  f.kind = NodeKind::exists;
  f.variable = std::move( variable );
  f.children = { std::move( body ) };
  return make( std::move( f ) );
}

FormulaPtr forall( std::string variable, FormulaPtr body )
{
  Formula f;
  f.kind = NodeKind::forall;
  f.variable = std::move( variable );
  f.children = { std::move( body ) };
  return make( std::move( f ) );
}

namespace
{

FormulaPtr mark_rec( const FormulaPtr& f, const std::set<std::string>& names, std::vector<std::string>& bound )
{
  auto convert = [&]( Term t ) {
    if ( t.kind == Term::Kind::variable && names.count( t.name ) &&
         std::find( bound.begin(), bound.end(), t.name ) == bound.end() )
      t.kind = Term::Kind::parameter;
    return t;
  };
  Formula copy = *f;
  for ( auto& t : copy.terms )
    t = convert( t );
  const bool binds = f->kind == NodeKind::exists || f->kind == NodeKind::forall;
  if ( binds )
    bound.push_back( f->variable );
  for ( auto& c : copy.children )
    c = mark_rec( c, names, bound );
  if ( binds )
    bound.pop_back();
  return make( std::move( copy ) );
}

} // namespace

FormulaPtr substitute( const FormulaPtr& f, const std::map<std::string, Term>& replacement )
{
  Formula copy = *f;
  const bool binds = f->kind == NodeKind::exists || f->kind == NodeKind::forall;
  if ( binds && replacement.count( f->variable ) )
  {
    auto inner = replacement;
    inner.erase( f->variable );
    copy.children[0] = substitute( f->children[0], inner );
    return make( std::move( copy ) );
  }
  for ( auto& t : copy.terms )
    if ( t.kind == Term::Kind::variable )
      if ( auto it = replacement.find( t.name ); it != replacement.end() )
        t = it->second;
  for ( auto& c : copy.children )
    c = substitute( c, replacement );
  return make( std::move( copy ) );
}

FormulaPtr mark_parameters( const FormulaPtr& f, const std::set<std::string>& names )
{
  std::vector<std::string> bound;
  return mark_rec( f, names, bound );
}

/* parser */

namespace
{

enum class Tok
{
  ident,
  number,
  lparen,
  rparen,
  comma,
  equals,
  bang,
  amp,
  bar,
  caret,
  arrow,
  dot,
  end,
};

struct Token
{
  Tok kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize( std::string_view text )
{
  std::vector<Token> tokens;
  std::size_t i = 0;
  while ( i < text.size() )
  {
    const char c = text[i];
    if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      ++i;
      continue;
    }
    const auto start = i;
    if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      while ( i < text.size() && ( std::isalnum( static_cast<unsigned char>( text[i] ) ) || text[i] == '_' ) )
        ++i;
      tokens.push_back( { Tok::ident, std::string( text.substr( start, i - start ) ), start } );
      continue;
    }
    if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      while ( i < text.size() && std::isdigit( static_cast<unsigned char>( text[i] ) ) )
        ++i;
      tokens.push_back( { Tok::number, std::string( text.substr( start, i - start ) ), start } );
      continue;
    }
    if ( c == '-' && i + 1 < text.size() && text[i + 1] == '>' )
    {
      tokens.push_back( { Tok::arrow, "->", start } );
      i += 2;
      continue;
    }
    Tok kind;
    switch ( c )
    {
    case '(':
      kind = Tok::lparen;
      break;
    case ')':
      kind = Tok::rparen;
      break;
    case ',':
      kind = Tok::comma;
      break;
    case '=':
      kind = Tok::equals;
      break;
    case '!':
      kind = Tok::bang;
      break;
    case '&':
      kind = Tok::amp;
      break;
    case '|':
      kind = Tok::bar;
      break;
    case '^':
      kind = Tok::caret;
      break;
    case '.':
      kind = Tok::dot;
      break;
    default:
      throw SyntaxError( 0, "unexpected character '" + std::string( 1, c ) + "' at column " +
                                std::to_string( start + 1 ) );
    }
    tokens.push_back( { kind, std::string( 1, c ), start } );
    ++i;
  }
  tokens.push_back( { Tok::end, "end of input", text.size() } );
  return tokens;
}

bool is_keyword( const std::string& s )
{
  return s == "exists" || s == "forall" || s == "true" || s == "false";
}

class Parser
{
public:
  Parser( std::string_view text, const Schema& schema, const ParseOptions& options )
      : tokens_( tokenize( text ) ), schema_( schema ), options_( options )
  {
  }

  FormulaPtr parse()
  {
    auto f = formula();
    expect( Tok::end, "end of input" );
    return f;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool accept( Tok kind )
  {
    if ( peek().kind != kind )
      return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail( const std::string& what ) const
  {
    throw SyntaxError( 0, what + " at column " + std::to_string( peek().column + 1 ) );
  }

  const Token& expect( Tok kind, const std::string& what )
  {
    if ( peek().kind != kind )
      fail( "expected " + what + ", found '" + peek().text + "'" );
    return next();
  }

  bool at_quantifier() const
  {
    return peek().kind == Tok::ident && ( peek().text == "exists" || peek().text == "forall" );
  }

  FormulaPtr formula()
  {
    if ( at_quantifier() )
      return quantifier();
    return implication();
  }

  FormulaPtr quantifier()
  {
    const bool is_exists = next().text == "exists";
    std::vector<std::string> names;
    while ( peek().kind == Tok::ident && !is_keyword( peek().text ) )
      names.push_back( next().text );
    if ( names.empty() )
      fail( "expected a variable after quantifier" );
    expect( Tok::dot, "'.'" );
    for ( const auto& n : names )
      bound_.push_back( n );
    auto body = formula();
    for ( std::size_t i = 0; i < names.size(); ++i )
      bound_.pop_back();
    for ( auto it = names.rbegin(); it != names.rend(); ++it )
      body = is_exists ? exists( *it, body ) : forall( *it, body );
    return body;
  }

  FormulaPtr implication()
  {
    auto lhs = chain( Tok::bar, NodeKind::disjunction );
    if ( accept( Tok::arrow ) )
      return disj( { neg( lhs ), formula() } );
    return lhs;
  }

  FormulaPtr chain( Tok op, NodeKind kind )
  {
    auto operand = [&]() {
      if ( kind == NodeKind::disjunction )
        return chain( Tok::caret, NodeKind::exclusive_or );
      if ( kind == NodeKind::exclusive_or )
        return chain( Tok::amp, NodeKind::conjunction );
      return unary();
    };
    std::vector<FormulaPtr> parts{ operand() };
    while ( accept( op ) )
      parts.push_back( operand() );
    if ( parts.size() == 1 )
      return parts.front();
    Formula f;
    f.kind = kind;
    f.children = std::move( parts );
    return make( std::move( f ) );
  }

  FormulaPtr unary()
  {
    if ( accept( Tok::bang ) )
      return neg( unary() );
    if ( at_quantifier() )
      return quantifier();
    return primary();
  }

  Term term()
  {
    const auto& t = peek();
    if ( t.kind == Tok::number )
    {
      next();
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars( t.text.data(), t.text.data() + t.text.size(), value );
      if ( ec != std::errc{} || value > 0xffffffffu )
        fail( "constant out of range" );
      return constant( static_cast<Element>( value ) );
    }
    if ( t.kind != Tok::ident || is_keyword( t.text ) )
      fail( "expected a term, found '" + t.text + "'" );
    next();
    const bool is_bound = std::find( bound_.begin(), bound_.end(), t.text ) != bound_.end();
    if ( !is_bound && options_.parameters.count( t.text ) )
      return param( t.text );
    if ( !is_bound && options_.allowed_free && !options_.allowed_free->count( t.text ) )
      throw SyntaxError( 0, "unbound variable '" + t.text + "'" );
    return var( t.text );
  }

  FormulaPtr primary()
  {
    if ( accept( Tok::lparen ) )
    {
      auto f = formula();
      expect( Tok::rparen, "')'" );
      return f;
    }
    if ( peek().kind == Tok::ident && peek().text == "true" )
    {
      next();
      return f_true();
    }
    if ( peek().kind == Tok::ident && peek().text == "false" )
    {
      next();
      return f_false();
    }
    if ( peek().kind == Tok::ident && tokens_[pos_ + 1].kind == Tok::lparen )
    {
      const auto name = next().text;
      next();
      std::vector<Term> terms;
      if ( !accept( Tok::rparen ) )
      {
        terms.push_back( term() );
        while ( accept( Tok::comma ) )
          terms.push_back( term() );
        expect( Tok::rparen, "')'" );
      }
      const auto arity = find_arity( schema_, name );
      if ( !arity )
        throw ValidationError( ValidationKind::unknown_relation, "unknown relation " + name );
      if ( *arity != terms.size() )
        throw ValidationError( ValidationKind::arity_mismatch,
                               "relation " + name + " has arity " + std::to_string( *arity ) + ", used with " +
                                   std::to_string( terms.size() ) + " arguments" );
      return atom( name, std::move( terms ) );
    }
    auto lhs = term();
    expect( Tok::equals, "'='" );
    auto rhs = term();
    return eq( std::move( lhs ), std::move( rhs ) );
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Schema& schema_;
  const ParseOptions& options_;
  std::vector<std::string> bound_;
};

int precedence( NodeKind kind )
{
  switch ( kind )
  {
  case NodeKind::exists:
  case NodeKind::forall:
    return 0;
  case NodeKind::disjunction:
    return 1;
  case NodeKind::exclusive_or:
    return 2;
  case NodeKind::conjunction:
    return 3;
  case NodeKind::negation:
    return 4;
  default:
    return 5;
  }
}

std::string term_text( const Term& t )
{
  return t.kind == Term::Kind::constant ? std::to_string( t.value ) : t.name;
}

void print( const Formula& f, std::string& out )
{
  auto child = [&]( const Formula& c, bool parens ) {
    if ( parens )
      out += '(';
    print( c, out );
    if ( parens )
      out += ')';
  };
  switch ( f.kind )
  {
  case NodeKind::truth:
    out += "true";
    return;
  case NodeKind::falsity:
    out += "false";
    return;
  case NodeKind::atom:
    out += f.relation;
    out += '(';
    for ( std::size_t i = 0; i < f.terms.size(); ++i )
    {
      if ( i )
        out += ',';
      out += term_text( f.terms[i] );
    }
    out += ')';
    return;
  case NodeKind::equal:
    out += term_text( f.terms[0] ) + "=" + term_text( f.terms[1] );
    return;
  case NodeKind::negation:
    out += '!';
    child( *f.children[0], precedence( f.children[0]->kind ) < 4 );
    return;
  case NodeKind::conjunction:
  case NodeKind::disjunction:
  case NodeKind::exclusive_or:
  {
    const char* op = f.kind == NodeKind::conjunction ? " & " : f.kind == NodeKind::disjunction ? " | " : " ^ ";
    for ( std::size_t i = 0; i < f.children.size(); ++i )
    {
      if ( i )
        out += op;
      child( *f.children[i], precedence( f.children[i]->kind ) <= precedence( f.kind ) );
    }
    return;
  }
  case NodeKind::exists:
  case NodeKind::forall:
    out += f.kind == NodeKind::exists ? "exists " : "forall ";
    out += f.variable;
    out += ". ";
    print( *f.children[0], out );
    return;
  }
}

void collect_names( const Formula& f, std::vector<std::string>& bound, std::set<std::string>& vars,
                    std::set<std::string>& params )
{
  for ( const auto& t : f.terms )
  {
    if ( t.kind == Term::Kind::parameter )
      params.insert( t.name );
    else if ( t.kind == Term::Kind::variable && std::find( bound.begin(), bound.end(), t.name ) == bound.end() )
      vars.insert( t.name );
  }
  const bool binds = f.kind == NodeKind::exists || f.kind == NodeKind::forall;
  if ( binds )
    bound.push_back( f.variable );
  for ( const auto& c : f.children )
    collect_names( *c, bound, vars, params );
  if ( binds )
    bound.pop_back();
}

Element lookup( const Term& t, const Assignment& a )
{
  if ( t.kind == Term::Kind::constant )
    return t.value;
  const auto it = a.find( t.name );
  if ( it == a.end() )
    throw Error( "no binding for '" + t.name + "'" );
  return it->second;
}

} // namespace

FormulaPtr parse_formula( std::string_view text, const Schema& schema, const ParseOptions& options )
{
  return Parser( text, schema, options ).parse();
}

std::string pretty( const Formula& f )
{
  std::string out;
  print( f, out );
  return out;
}

std::string_view to_string( FormulaClass c )
{
  return c == FormulaClass::quantifier_free ? "quantifier-free" : "first-order";
}

FormulaClass classify( const Formula& f )
{
  if ( f.kind == NodeKind::exists || f.kind == NodeKind::forall )
    return FormulaClass::first_order;
  for ( const auto& c : f.children )
    if ( classify( *c ) == FormulaClass::first_order )
      return FormulaClass::first_order;
  return FormulaClass::quantifier_free;
}

std::set<std::string> free_variables( const Formula& f )
{
  std::vector<std::string> bound;
  std::set<std::string> vars, params;
  collect_names( f, bound, vars, params );
  return vars;
}

std::set<std::string> parameters( const Formula& f )
{
  std::vector<std::string> bound;
  std::set<std::string> vars, params;
  collect_names( f, bound, vars, params );
  return params;
}

std::size_t depth( const Formula& f )
{
  std::size_t d = 0;
  for ( const auto& c : f.children )
    d = std::max( d, depth( *c ) );
  return d + 1;
}

std::vector<std::string> check_schema( const Formula& f, const Schema& schema )
{
  std::vector<std::string> problems;
  if ( f.kind == NodeKind::atom )
  {
    const auto arity = find_arity( schema, f.relation );
    if ( !arity )
      problems.push_back( "unknown relation " + f.relation );
    else if ( *arity != f.terms.size() )
      problems.push_back( "relation " + f.relation + " has arity " + std::to_string( *arity ) + ", used with " +
                          std::to_string( f.terms.size() ) + " arguments" );
  }
  for ( const auto& c : f.children )
  {
    auto sub = check_schema( *c, schema );
    problems.insert( problems.end(), sub.begin(), sub.end() );
  }
  return problems;
}

bool evaluate( const Formula& f, const Structure& s, const Assignment& assignment )
{
  switch ( f.kind )
  {
  case NodeKind::truth:
    return true;
  case NodeKind::falsity:
    return false;
  case NodeKind::atom:
  {
    Tuple t;
    for ( const auto& term : f.terms )
      t.push_back( lookup( term, assignment ) );
    return s.relation( f.relation ).contains( t );
  }
  case NodeKind::equal:
    return lookup( f.terms[0], assignment ) == lookup( f.terms[1], assignment );
  case NodeKind::negation:
    return !evaluate( *f.children[0], s, assignment );
  case NodeKind::conjunction:
    for ( const auto& c : f.children )
      if ( !evaluate( *c, s, assignment ) )
        return false;
    return true;
  case NodeKind::disjunction:
    for ( const auto& c : f.children )
      if ( evaluate( *c, s, assignment ) )
        return true;
    return false;
  case NodeKind::exclusive_or:
  {
    bool value = false;
    for ( const auto& c : f.children )
      value ^= evaluate( *c, s, assignment );
    return value;
  }
  case NodeKind::exists:
  case NodeKind::forall:
  {
    const bool is_exists = f.kind == NodeKind::exists;
    Assignment inner = assignment;
    for ( std::size_t d = 0; d < s.domain_size(); ++d )
    {
      inner[f.variable] = static_cast<Element>( d );
      if ( evaluate( *f.children[0], s, inner ) == is_exists )
        return is_exists;
    }
    return !is_exists;
  }
  }
  return false;
}

CompiledFormula::CompiledFormula( const Formula& f, const Structure& layout, const std::vector<std::string>& slots )
{
  slot_count_ = slots.size();
  std::vector<std::string> scope;
  root_ = build( f, layout, scope, slots );
}

std::size_t CompiledFormula::build( const Formula& f, const Structure& layout, std::vector<std::string>& scope,
                                    const std::vector<std::string>& slots )
{
  Node node;
  node.kind = f.kind;
  auto slot_of = [&]( const Term& t ) -> std::int64_t {
    if ( t.kind == Term::Kind::constant )
      return -static_cast<std::int64_t>( t.value ) - 1;
    if ( t.kind == Term::Kind::variable )
    {
      // innermost binder wins; bound slots live after the free ones
      for ( std::size_t i = scope.size(); i-- > 0; )
        if ( scope[i] == t.name )
          return static_cast<std::int64_t>( slots.size() + i );
    }
    const auto it = std::find( slots.begin(), slots.end(), t.name );
    if ( it == slots.end() )
      throw Error( "no slot for '" + t.name + "'" );
    const auto index = static_cast<int>( it - slots.begin() );
    deepest_slot_ = std::max( deepest_slot_, index );
    return index;
  };

  switch ( f.kind )
  {
  case NodeKind::atom:
  {
    const auto idx = layout.index_of( f.relation );
    if ( !idx )
      throw ValidationError( ValidationKind::unknown_relation, "unknown relation " + f.relation );
    if ( layout.relation_at( *idx ).arity() != f.terms.size() )
      throw ValidationError( ValidationKind::arity_mismatch, "relation " + f.relation + " used with wrong arity" );
    node.relation = *idx;
    for ( const auto& t : f.terms )
      node.args.push_back( slot_of( t ) );
    break;
  }
  case NodeKind::equal:
    node.args = { slot_of( f.terms[0] ), slot_of( f.terms[1] ) };
    break;
  case NodeKind::exists:
  case NodeKind::forall:
    scope.push_back( f.variable );
    node.slot = slots.size() + scope.size() - 1;
    slot_count_ = std::max( slot_count_, node.slot + 1 );
    node.children.push_back( build( *f.children[0], layout, scope, slots ) );
    scope.pop_back();
    break;
  default:
    for ( const auto& c : f.children )
      node.children.push_back( build( *c, layout, scope, slots ) );
    break;
  }
  nodes_.push_back( std::move( node ) );
  return nodes_.size() - 1;
}

bool CompiledFormula::evaluate( const Structure& s, std::vector<Element>& env ) const
{
  if ( env.size() < slot_count_ )
    env.resize( slot_count_ );
  return eval( root_, s, env );
}

bool CompiledFormula::eval( std::size_t index, const Structure& s, std::vector<Element>& env ) const
{
  const auto& node = nodes_[index];
  auto value = [&]( std::int64_t arg ) -> Element {
    return arg >= 0 ? env[static_cast<std::size_t>( arg )] : static_cast<Element>( -arg - 1 );
  };
  switch ( node.kind )
  {
  case NodeKind::truth:
    return true;
  case NodeKind::falsity:
    return false;
  case NodeKind::atom:
  {
    const auto& rel = s.relation_at( node.relation );
    const auto n = rel.domain_size();
    std::size_t offset = 0;
    for ( auto arg : node.args )
    {
      const auto e = value( arg );
      if ( e >= n )
        return false;
      offset = offset * n + e;
    }
    return rel.contains_offset( offset );
  }
  case NodeKind::equal:
    return value( node.args[0] ) == value( node.args[1] );
  case NodeKind::negation:
    return !eval( node.children[0], s, env );
  case NodeKind::conjunction:
    for ( auto c : node.children )
      if ( !eval( c, s, env ) )
        return false;
    return true;
  case NodeKind::disjunction:
    for ( auto c : node.children )
      if ( eval( c, s, env ) )
        return true;
    return false;
  case NodeKind::exclusive_or:
  {
    bool result = false;
    for ( auto c : node.children )
      result ^= eval( c, s, env );
    return result;
  }
  case NodeKind::exists:
  case NodeKind::forall:
  {
    const bool is_exists = node.kind == NodeKind::exists;
    const auto saved = env[node.slot];
    bool result = !is_exists;
    for ( std::size_t d = 0; d < s.domain_size(); ++d )
    {
      env[node.slot] = static_cast<Element>( d );
      if ( eval( node.children[0], s, env ) == is_exists )
      {
        result = is_exists;
        break;
      }
    }
    env[node.slot] = saved;
    return result;
  }
  }
  return false;
}

} // namespace dyncomplab
