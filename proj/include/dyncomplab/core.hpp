#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dyncomplab
{

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class ValidationKind
{
  unknown_relation,
  arity_mismatch,
  id_out_of_range,
  read_only_relation,
  duplicate_relation,
  not_effective,
};

std::string_view to_string( ValidationKind kind );

class ValidationError : public Error
{
public:
  ValidationError( ValidationKind kind, const std::string& what )
      : Error( what ), kind_( kind )
  {
  }

  ValidationKind kind() const noexcept { return kind_; }

private:
  ValidationKind kind_;
};

/// Parse failure carrying a 1-based line number (0 when not line-oriented).
class SyntaxError : public Error
{
public:
  SyntaxError( std::size_t line, const std::string& what );

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

struct RelationDecl
{
  std::string name;
  std::size_t arity = 0;

  bool operator==( const RelationDecl& ) const = default;
};

using Schema = std::vector<RelationDecl>;

std::optional<std::size_t> find_arity( const Schema& schema, std::string_view name );

/*! \brief Dense bitset relation of fixed arity over the domain [0, n).
 *
 * A tuple (t_1, ..., t_a) is stored at the mixed-radix offset
 * t_1 * n^(a-1) + ... + t_a.  A nullary relation has exactly one slot,
 * holding the empty tuple or not.
 */
class Relation
{
public:
  Relation() = default;
  Relation( std::size_t arity, std::size_t domain_size );

  std::size_t arity() const noexcept { return arity_; }
  std::size_t domain_size() const noexcept { return domain_; }
  std::size_t capacity() const noexcept { return slots_; }

  bool contains( std::span<const Element> tuple ) const;
  bool contains_offset( std::size_t offset ) const noexcept
  {
    return ( bits_[offset >> 6] >> ( offset & 63 ) ) & 1u;
  }

  /// Returns true iff the relation changed.
  bool insert( std::span<const Element> tuple );
  bool erase( std::span<const Element> tuple );
  void set_offset( std::size_t offset, bool value ) noexcept
  {
    const auto mask = std::uint64_t{ 1 } << ( offset & 63 );
    if ( value )
      bits_[offset >> 6] |= mask;
    else
      bits_[offset >> 6] &= ~mask;
  }

  std::size_t offset_of( std::span<const Element> tuple ) const;
  Tuple tuple_at( std::size_t offset ) const;

  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  void clear() noexcept;

  /// All member tuples in lexicographic order.
  std::vector<Tuple> tuples() const;

  template<typename Fn>
  void for_each( Fn&& fn ) const
  {
    for ( std::size_t w = 0; w < bits_.size(); ++w )
    {
      auto word = bits_[w];
      while ( word )
      {
        const auto bit = static_cast<std::size_t>( __builtin_ctzll( word ) );
        fn( tuple_at( w * 64 + bit ) );
        word &= word - 1;
      }
    }
  }

  bool operator==( const Relation& ) const = default;

private:
  void check_tuple( std::span<const Element> tuple ) const;

  std::size_t arity_ = 0;
  std::size_t domain_ = 0;
  std::size_t slots_ = 1;
  std::vector<std::uint64_t> bits_ = std::vector<std::uint64_t>( 1, 0 );
};

/// Finite relational structure: a domain [0, n) and uniquely named relations.
class Structure
{
public:
  Structure() = default;
  explicit Structure( std::size_t domain_size, const Schema& schema = {} );

  std::size_t domain_size() const noexcept { return domain_; }

  void add_relation( const std::string& name, std::size_t arity );
  bool has_relation( std::string_view name ) const;
  std::optional<std::size_t> index_of( std::string_view name ) const;

  const Relation& relation( std::string_view name ) const;
  Relation& relation( std::string_view name );
  const Relation& relation_at( std::size_t index ) const { return relations_[index]; }
  Relation& relation_at( std::size_t index ) { return relations_[index]; }
  const std::string& name_at( std::size_t index ) const { return names_[index]; }
  std::size_t relation_count() const noexcept { return relations_.size(); }

  Schema schema() const;

  bool operator==( const Structure& ) const = default;

private:
  std::size_t domain_ = 0;
  std::vector<std::string> names_;
  std::vector<Relation> relations_;
};

enum class ChangeOp
{
  insert,
  remove,
};

struct Change
{
  ChangeOp op = ChangeOp::insert;
  std::string relation;
  Tuple tuple;

  bool operator==( const Change& ) const = default;
};

std::string to_string( const Change& change );

Change ins( std::string relation, Tuple tuple );
Change del( std::string relation, Tuple tuple );

/// Throws ValidationError unless the change fits the structure.
void validate_change( const Structure& s, const Change& c );

Structure apply_change( const Structure& s, const Change& c );
/// In-place variant; returns true iff the structure changed.
bool apply_change_in_place( Structure& s, const Change& c );
bool is_effective( const Structure& s, const Change& c );

struct Checkpoint
{
  bool operator==( const Checkpoint& ) const = default;
};

struct ScriptEntry
{
  std::variant<Change, Checkpoint> item;
  std::size_t line = 0;

  bool is_checkpoint() const { return std::holds_alternative<Checkpoint>( item ); }
  const Change& change() const { return std::get<Change>( item ); }

  bool operator==( const ScriptEntry& ) const = default;
};

struct ChangeScript
{
  std::size_t domain_size = 0;
  Schema schema;
  std::vector<ScriptEntry> entries;

  std::size_t change_count() const;
  std::size_t checkpoint_count() const;

  bool operator==( const ChangeScript& ) const = default;
};

/*! \brief Parses the line-based change-script format.
 *
 *   domain <n>            (required, first non-comment line)
 *   rel <Name>/<arity>    (optional declarations)
 *   ins <Name> <id>...
 *   del <Name> <id>...
 *   query
 *
 * Relations not declared by `rel` lines are resolved against `known`.
 */
ChangeScript parse_script( std::string_view text, const Schema& known = {} );
std::string format_script( const ChangeScript& script );

/// Builds the structure obtained by applying every change of the script to the empty structure.
Structure materialize( const ChangeScript& script );
/// Writes a structure as an insert-only script (the structure file format).
std::string format_structure( const Structure& s );

std::string read_file( const std::string& path );

/// The standard coloured-graph schema: E/2 (edges) and R/1 (coloured nodes).
Schema coloured_graph_schema();

} // namespace dyncomplab
