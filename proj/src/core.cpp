#include <dyncomplab/core.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dyncomplab
{

namespace
{

constexpr std::size_t max_relation_slots = std::size_t{ 1 } << 30;

std::vector<std::string_view> split_words( std::string_view line )
{
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    while ( i < line.size() && ( line[i] == ' ' || line[i] == '\t' || line[i] == '\r' ) )
      ++i;
    const auto start = i;
    while ( i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' )
      ++i;
    if ( i > start )
      words.push_back( line.substr( start, i - start ) );
  }
  return words;
}

std::optional<std::size_t> parse_count( std::string_view word )
{
  std::size_t value = 0;
  const auto* end = word.data() + word.size();
  auto [ptr, ec] = std::from_chars( word.data(), end, value );
  if ( ec != std::errc{} || ptr != end )
    return std::nullopt;
  return value;
}

} // namespace

std::string_view to_string( ValidationKind kind )
{
  switch ( kind )
  {
  case ValidationKind::unknown_relation:
    return "unknown relation";
  case ValidationKind::arity_mismatch:
    return "arity mismatch";
  case ValidationKind::id_out_of_range:
    return "element id out of range";
  case ValidationKind::read_only_relation:
    return "read-only relation";
  case ValidationKind::duplicate_relation:
    return "duplicate relation";
  case ValidationKind::not_effective:
    return "non-effective change";
  }
  return "validation error";
}

SyntaxError::SyntaxError( std::size_t line, const std::string& what )
    : Error( line ? "line " + std::to_string( line ) + ": " + what : what ), line_( line )
{
}

std::optional<std::size_t> find_arity( const Schema& schema, std::string_view name )
{
  for ( const auto& decl : schema )
    if ( decl.name == name )
      return decl.arity;
  return std::nullopt;
}

Relation::Relation( std::size_t arity, std::size_t domain_size )
    : arity_( arity ), domain_( domain_size ), slots_( 1 )
{
  for ( std::size_t i = 0; i < arity; ++i )
  {
    if ( domain_size != 0 && slots_ > max_relation_slots / domain_size )
      throw Error( "relation of arity " + std::to_string( arity ) + " over domain " +
                   std::to_string( domain_size ) + " exceeds the dense storage limit" );
    slots_ *= domain_size;
  }
  bits_.assign( ( slots_ + 63 ) / 64 + ( slots_ == 0 ? 1 : 0 ), 0 );
}

void Relation::check_tuple( std::span<const Element> tuple ) const
{
  if ( tuple.size() != arity_ )
    throw ValidationError( ValidationKind::arity_mismatch,
                           "expected a tuple of length " + std::to_string( arity_ ) + ", got " +
                               std::to_string( tuple.size() ) );
  for ( auto e : tuple )
    if ( e >= domain_ )
      throw ValidationError( ValidationKind::id_out_of_range,
                             "element " + std::to_string( e ) + " is outside the domain [0, " +
                                 std::to_string( domain_ ) + ")" );
}

std::size_t Relation::offset_of( std::span<const Element> tuple ) const
{
  check_tuple( tuple );
  std::size_t offset = 0;
  for ( auto e : tuple )
    offset = offset * domain_ + e;
  return offset;
}

Tuple Relation::tuple_at( std::size_t offset ) const
{
  Tuple t( arity_ );
  for ( std::size_t i = arity_; i-- > 0; )
  {
    t[i] = static_cast<Element>( offset % domain_ );
    offset /= domain_;
  }
  return t;
}

bool Relation::contains( std::span<const Element> tuple ) const
{
  return contains_offset( offset_of( tuple ) );
}

bool Relation::insert( std::span<const Element> tuple )
{
  const auto off = offset_of( tuple );
  if ( contains_offset( off ) )
    return false;
  set_offset( off, true );
  return true;
}

bool Relation::erase( std::span<const Element> tuple )
{
  const auto off = offset_of( tuple );
  if ( !contains_offset( off ) )
    return false;
  set_offset( off, false );
  return true;
}

std::size_t Relation::size() const noexcept
{
  std::size_t count = 0;
  for ( auto w : bits_ )
    count += static_cast<std::size_t>( __builtin_popcountll( w ) );
  return count;
}

void Relation::clear() noexcept
{
  std::fill( bits_.begin(), bits_.end(), 0 );
}

std::vector<Tuple> Relation::tuples() const
{
  std::vector<Tuple> result;
  for_each( [&]( Tuple t ) { result.push_back( std::move( t ) ); } );
  return result;
}

Structure::Structure( std::size_t domain_size, const Schema& schema )
    : domain_( domain_size )
{
  for ( const auto& decl : schema )
    add_relation( decl.name, decl.arity );
}

void Structure::add_relation( const std::string& name, std::size_t arity )
{
  if ( has_relation( name ) )
    throw ValidationError( ValidationKind::duplicate_relation, "relation " + name + " declared twice" );
  names_.push_back( name );
  relations_.emplace_back( arity, domain_ );
}

bool Structure::has_relation( std::string_view name ) const
{
  return index_of( name ).has_value();
}

std::optional<std::size_t> Structure::index_of( std::string_view name ) const
{
  for ( std::size_t i = 0; i < names_.size(); ++i )
    if ( names_[i] == name )
      return i;
  return std::nullopt;
}

const Relation& Structure::relation( std::string_view name ) const
{
  if ( auto idx = index_of( name ) )
    return relations_[*idx];
  throw ValidationError( ValidationKind::unknown_relation, "unknown relation " + std::string( name ) );
}

Relation& Structure::relation( std::string_view name )
{
  if ( auto idx = index_of( name ) )
    return relations_[*idx];
  throw ValidationError( ValidationKind::unknown_relation, "unknown relation " + std::string( name ) );
}

Schema Structure::schema() const
{
  Schema result;
  for ( std::size_t i = 0; i < names_.size(); ++i )
    result.push_back( { names_[i], relations_[i].arity() } );
  return result;
}

std::string to_string( const Change& change )
{
  std::string out = change.op == ChangeOp::insert ? "ins " : "del ";
  out += change.relation;
  for ( auto e : change.tuple )
    out += " " + std::to_string( e );
  return out;
}

Change ins( std::string relation, Tuple tuple )
{
  return { ChangeOp::insert, std::move( relation ), std::move( tuple ) };
}

Change del( std::string relation, Tuple tuple )
{
  return { ChangeOp::remove, std::move( relation ), std::move( tuple ) };
}

void validate_change( const Structure& s, const Change& c )
{
  const auto idx = s.index_of( c.relation );
  if ( !idx )
    throw ValidationError( ValidationKind::unknown_relation, "unknown relation " + c.relation );
  const auto& rel = s.relation_at( *idx );
  if ( c.tuple.size() != rel.arity() )
    throw ValidationError( ValidationKind::arity_mismatch,
                           "relation " + c.relation + " has arity " + std::to_string( rel.arity() ) +
                               ", change has " + std::to_string( c.tuple.size() ) + " ids" );
  for ( auto e : c.tuple )
    if ( e >= s.domain_size() )
      throw ValidationError( ValidationKind::id_out_of_range,
                             "element " + std::to_string( e ) + " is outside the domain [0, " +
                                 std::to_string( s.domain_size() ) + ")" );
}

bool apply_change_in_place( Structure& s, const Change& c )
{
  validate_change( s, c );
  auto& rel = s.relation( c.relation );
  return c.op == ChangeOp::insert ? rel.insert( c.tuple ) : rel.erase( c.tuple );
}

Structure apply_change( const Structure& s, const Change& c )
{
  Structure result = s;
  apply_change_in_place( result, c );
  return result;
}

bool is_effective( const Structure& s, const Change& c )
{
  validate_change( s, c );
  const bool present = s.relation( c.relation ).contains( c.tuple );
  return c.op == ChangeOp::insert ? !present : present;
}

std::size_t ChangeScript::change_count() const
{
  return static_cast<std::size_t>(
      std::count_if( entries.begin(), entries.end(), []( const auto& e ) { return !e.is_checkpoint(); } ) );
}

std::size_t ChangeScript::checkpoint_count() const
{
  return entries.size() - change_count();
}

ChangeScript parse_script( std::string_view text, const Schema& known )
{
  ChangeScript script;
  bool have_domain = false;
  Schema declared;

  auto arity_of = [&]( std::string_view name ) -> std::optional<std::size_t> {
    if ( auto a = find_arity( declared, name ) )
      return a;
    return find_arity( known, name );
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while ( pos <= text.size() )
  {
    auto end = text.find( '\n', pos );
    if ( end == std::string_view::npos )
      end = text.size();
    auto line = text.substr( pos, end - pos );
    pos = end + 1;
    ++line_no;

    if ( auto hash = line.find( '#' ); hash != std::string_view::npos )
      line = line.substr( 0, hash );
    const auto words = split_words( line );
    if ( words.empty() )
    {
      if ( end == text.size() )
        break;
      continue;
    }

    const auto keyword = words[0];
    if ( keyword == "domain" )
    {
      if ( have_domain )
        throw SyntaxError( line_no, "domain declared twice" );
      if ( words.size() != 2 )
        throw SyntaxError( line_no, "expected 'domain <n>'" );
      const auto n = parse_count( words[1] );
      if ( !n )
        throw SyntaxError( line_no, "invalid domain size '" + std::string( words[1] ) + "'" );
      script.domain_size = *n;
      have_domain = true;
    }
    else if ( !have_domain )
    {
      throw SyntaxError( line_no, "script must start with 'domain <n>'" );
    }
    else if ( keyword == "rel" )
    {
      if ( words.size() != 2 )
        throw SyntaxError( line_no, "expected 'rel <Name>/<arity>'" );
      const auto slash = words[1].find( '/' );
      if ( slash == std::string_view::npos )
        throw SyntaxError( line_no, "expected 'rel <Name>/<arity>'" );
      const auto name = std::string( words[1].substr( 0, slash ) );
      const auto arity = parse_count( words[1].substr( slash + 1 ) );
      if ( name.empty() || !arity )
        throw SyntaxError( line_no, "malformed relation declaration '" + std::string( words[1] ) + "'" );
      if ( find_arity( declared, name ) )
        throw SyntaxError( line_no, "relation " + name + " declared twice" );
      declared.push_back( { name, *arity } );
    }
    else if ( keyword == "ins" || keyword == "del" )
    {
      if ( words.size() < 2 )
        throw SyntaxError( line_no, "expected '" + std::string( keyword ) + " <Name> <id>...'" );
      Change c;
      c.op = keyword == "ins" ? ChangeOp::insert : ChangeOp::remove;
      c.relation = std::string( words[1] );
      for ( std::size_t i = 2; i < words.size(); ++i )
      {
        const auto id = parse_count( words[i] );
        if ( !id )
          throw SyntaxError( line_no, "invalid element id '" + std::string( words[i] ) + "'" );
        c.tuple.push_back( static_cast<Element>( *id ) );
      }
      const auto arity = arity_of( c.relation );
      if ( !arity )
        throw ValidationError( ValidationKind::unknown_relation,
                               "line " + std::to_string( line_no ) + ": unknown relation " + c.relation );
      if ( *arity != c.tuple.size() )
        throw ValidationError( ValidationKind::arity_mismatch,
                               "line " + std::to_string( line_no ) + ": relation " + c.relation +
                                   " has arity " + std::to_string( *arity ) + ", got " +
                                   std::to_string( c.tuple.size() ) + " ids" );
      for ( auto e : c.tuple )
        if ( e >= script.domain_size )
          throw ValidationError( ValidationKind::id_out_of_range,
                                 "line " + std::to_string( line_no ) + ": element " + std::to_string( e ) +
                                     " is outside the domain [0, " + std::to_string( script.domain_size ) +
                                     ")" );
      script.entries.push_back( { std::move( c ), line_no } );
    }
    else if ( keyword == "query" )
    {
      if ( words.size() != 1 )
        throw SyntaxError( line_no, "'query' takes no arguments" );
      script.entries.push_back( { Checkpoint{}, line_no } );
    }
    else
    {
      throw SyntaxError( line_no, "unknown directive '" + std::string( keyword ) + "'" );
    }

    if ( end == text.size() )
      break;
  }

  if ( !have_domain )
    throw SyntaxError( line_no, "missing 'domain <n>' line" );

  // Every relation the script touches ends up in its schema, declared ones first.
  script.schema = declared;
  for ( const auto& entry : script.entries )
    if ( !entry.is_checkpoint() && !find_arity( script.schema, entry.change().relation ) )
      script.schema.push_back( { entry.change().relation, entry.change().tuple.size() } );
  return script;
}

std::string format_script( const ChangeScript& script )
{
  std::ostringstream out;
  out << "domain " << script.domain_size << "\n";
  for ( const auto& decl : script.schema )
    out << "rel " << decl.name << "/" << decl.arity << "\n";
  for ( const auto& entry : script.entries )
  {
    if ( entry.is_checkpoint() )
      out << "query\n";
    else
      out << to_string( entry.change() ) << "\n";
  }
  return out.str();
}

Structure materialize( const ChangeScript& script )
{
  Structure s( script.domain_size, script.schema );
  for ( const auto& entry : script.entries )
    if ( !entry.is_checkpoint() )
      apply_change_in_place( s, entry.change() );
  return s;
}

std::string format_structure( const Structure& s )
{
  ChangeScript script;
  script.domain_size = s.domain_size();
  script.schema = s.schema();
  for ( std::size_t i = 0; i < s.relation_count(); ++i )
    s.relation_at( i ).for_each( [&]( Tuple t ) {
      script.entries.push_back( { ins( s.name_at( i ), std::move( t ) ), 0 } );
    } );
  return format_script( script );
}

std::string read_file( const std::string& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw Error( "cannot open " + path );
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Schema coloured_graph_schema()
{
  return { { "E", 2 }, { "R", 1 } };
}

} // namespace dyncomplab
