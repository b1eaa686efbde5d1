#include <dyncomplab/programs.hpp>

#include <algorithm>
#include <stdexcept>

namespace dyncomplab
{

Schema ListFamily::schema() const
{
  const std::size_t extra = owned ? 1 : 0;
  Schema s;
  for ( std::size_t i = 1; i <= depth(); ++i )
    s.push_back( { list( i ), 2 + extra } );
  for ( std::size_t i = 1; i <= depth(); ++i )
    s.push_back( { first( i ), 1 + extra } );
  for ( std::size_t i = 1; i <= depth(); ++i )
    s.push_back( { last( i ), 1 + extra } );
  for ( std::size_t i = stores_zero ? 0 : 1; i <= threshold; ++i )
    s.push_back( { count( i ), extra } );
  s.push_back( { count_gt, extra } );
  return s;
}

ListFamily size_family( std::size_t k )
{
  return { "List_", "First_", "Last_", "Is_", "Is_gt", k, false, true };
}

ListFamily in_neighbour_family( std::size_t threshold )
{
  return { "InList_", "InFirst_", "InLast_", "N_", "N_gt", threshold, true, false };
}

ListFamily coloured_in_neighbour_family( std::size_t threshold )
{
  return { "ColList_", "ColFirst_", "ColLast_", "Nc_", "Nc_gt", threshold, true, false };
}

ListFamily out_nonempty_family()
{
  return { "OutList_", "OutFirst_", "OutLast_", "OutCnt_", "OutNz", 0, true, false };
}

ListFamily in_nonempty_family()
{
  return { "InList_", "InFirst_", "InLast_", "InCnt_", "InNz", 0, true, false };
}

std::string p_relation( std::size_t l, std::size_t m )
{
  return "P_" + std::to_string( l ) + "_" + std::to_string( m );
}

namespace
{

std::vector<std::string> names( const std::string& prefix, std::size_t count )
{
  std::vector<std::string> result;
  for ( std::size_t i = 1; i <= count; ++i )
    result.push_back( prefix + std::to_string( i ) );
  return result;
}

std::vector<std::string> cat( std::vector<std::string> a, const std::vector<std::string>& b )
{
  a.insert( a.end(), b.begin(), b.end() );
  return a;
}

/// Formula builders for one list family with a fixed owner variable.
class FamilyFormulas
{
public:
  FamilyFormulas( const ListFamily& f, std::string owner ) : f_( f ), owner_( std::move( owner ) ) {}

  FormulaPtr list( std::size_t i, const std::string& a, const std::string& b ) const
  {
    return atom( f_.list( i ), with_owner( { a, b } ) );
  }
  FormulaPtr first( std::size_t i, const std::string& a ) const { return atom( f_.first( i ), with_owner( { a } ) ); }
  FormulaPtr last( std::size_t i, const std::string& a ) const { return atom( f_.last( i ), with_owner( { a } ) ); }
  FormulaPtr gt() const { return atom( f_.count_gt, with_owner( {} ) ); }

  /// Exactly i elements; the zero count is derived when it is not stored.
  FormulaPtr count( std::size_t i ) const
  {
    if ( i > 0 || f_.stores_zero )
      return atom( f_.count( i ), with_owner( {} ) );
    std::vector<FormulaPtr> none;
    for ( std::size_t j = 1; j <= f_.threshold; ++j )
      none.push_back( neg( count( j ) ) );
    none.push_back( neg( gt() ) );
    return conj( std::move( none ) );
  }

  std::vector<std::string> with_owner( std::vector<std::string> rest ) const
  {
    if ( f_.owned )
      rest.insert( rest.begin(), owner_ );
    return rest;
  }

private:
  const ListFamily& f_;
  std::string owner_;
};

struct FamilyUpdate
{
  std::string target;
  std::vector<std::string> frees;
  FormulaPtr fresh; // value for owners the change applies to
};

/// Updates when element u joins the list (of every owner satisfying the guard).
std::vector<FamilyUpdate> family_insert( const ListFamily& f, const std::string& owner, const std::string& u )
{
  const FamilyFormulas F( f, owner );
  const auto D = f.depth();
  std::vector<FamilyUpdate> out;
  for ( std::size_t i = 1; i <= D; ++i )
    out.push_back( { f.list( i ), F.with_owner( { "x", "y" } ),
                     disj( { F.list( i, "x", "y" ), conj( { F.last( i, "x" ), eq( var( u ), var( "y" ) ) } ) } ) } );
  for ( std::size_t i = 1; i <= D; ++i )
    out.push_back( { f.first( i ), F.with_owner( { "x" } ),
                     disj( { F.first( i, "x" ), conj( { eq( var( u ), var( "x" ) ), F.count( i - 1 ) } ) } ) } );
  for ( std::size_t i = 1; i <= D; ++i )
    out.push_back( { f.last( i ), F.with_owner( { "x" } ), i == 1 ? eq( var( u ), var( "x" ) ) : F.last( i - 1, "x" ) } );
  if ( f.stores_zero )
    out.push_back( { f.count( 0 ), F.with_owner( {} ), f_false() } );
  for ( std::size_t i = 1; i <= f.threshold; ++i )
    out.push_back( { f.count( i ), F.with_owner( {} ), F.count( i - 1 ) } );
  out.push_back( { f.count_gt, F.with_owner( {} ), disj( { F.count( f.threshold ), F.gt() } ) } );
  return out;
}

/// Updates when element u leaves the list.
std::vector<FamilyUpdate> family_delete( const ListFamily& f, const std::string& owner, const std::string& u )
{
  const FamilyFormulas F( f, owner );
  const auto D = f.depth();
  std::vector<FamilyUpdate> out;
  for ( std::size_t i = 1; i <= D; ++i )
  {
    std::vector<FormulaPtr> keep{ neq( var( u ), var( "x" ) ) };
    for ( std::size_t ip = 1; ip <= i; ++ip )
      keep.push_back( neg( F.list( ip, "x", u ) ) );
    keep.push_back( F.list( i, "x", "y" ) );
    std::vector<FormulaPtr> bridge;
    for ( std::size_t j = 1; j <= i; ++j )
      bridge.push_back( conj( { F.list( j, "x", u ), F.list( i + 1 - j, u, "y" ) } ) );
    std::vector<FormulaPtr> parts{ conj( std::move( keep ) ) };
    parts.insert( parts.end(), bridge.begin(), bridge.end() );
    out.push_back( { f.list( i ), F.with_owner( { "x", "y" } ), disj( std::move( parts ) ) } );
  }
  auto end_update = [&]( bool is_first, std::size_t i ) {
    auto mark = [&]( std::size_t j, const std::string& a ) { return is_first ? F.first( j, a ) : F.last( j, a ); };
    std::vector<FormulaPtr> keep;
    for ( std::size_t ip = 1; ip <= i; ++ip )
      keep.push_back( neg( mark( ip, u ) ) );
    keep.push_back( mark( i, "x" ) );
    std::vector<FormulaPtr> parts{ conj( std::move( keep ) ) };
    for ( std::size_t ip = 1; ip <= i; ++ip )
      parts.push_back(
          conj( { mark( ip, u ), is_first ? F.list( i - ip + 1, u, "x" ) : F.list( i - ip + 1, "x", u ) } ) );
    return disj( std::move( parts ) );
  };
  for ( std::size_t i = 1; i <= D; ++i )
    out.push_back( { f.first( i ), F.with_owner( { "x" } ), end_update( true, i ) } );
  for ( std::size_t i = 1; i <= D; ++i )
    out.push_back( { f.last( i ), F.with_owner( { "x" } ), end_update( false, i ) } );

  auto exactly_after = [&]( std::size_t count ) {
    std::vector<FormulaPtr> parts;
    for ( std::size_t j = 1; j <= D; ++j )
      for ( std::size_t jp = 1; jp <= D; ++jp )
        if ( j + jp == count + 2 )
          parts.push_back( conj( { F.first( j, u ), F.last( jp, u ) } ) );
    return disj( std::move( parts ) );
  };
  for ( std::size_t i = f.stores_zero ? 0 : 1; i <= f.threshold; ++i )
    out.push_back( { f.count( i ), F.with_owner( {} ), exactly_after( i ) } );
  std::vector<FormulaPtr> stays{ F.gt() };
  for ( std::size_t j = 1; j <= D; ++j )
    for ( std::size_t jp = 1; jp <= D; ++jp )
      if ( j + jp == f.threshold + 2 )
        stays.push_back( disj( { neg( F.first( j, u ) ), neg( F.last( jp, u ) ) } ) );
  out.push_back( { f.count_gt, F.with_owner( {} ), conj( std::move( stays ) ) } );
  return out;
}

FormulaPtr fresh_of( const std::vector<FamilyUpdate>& updates, const std::string& target )
{
  for ( const auto& u : updates )
    if ( u.target == target )
      return u.fresh;
  throw std::logic_error( "no update for " + target );
}

/// Body `(!g & S(z, ...)) | (g & fresh)`; unguarded families use the fresh value directly.
FormulaPtr guarded( const FormulaPtr& guard, const std::string& target, const std::vector<std::string>& frees,
                    const FormulaPtr& fresh )
{
  if ( !guard )
    return fresh;
  return disj( { conj( { neg( guard ), atom( target, frees ) } ), conj( { guard, fresh } ) } );
}

void add_family_rules( DynamicProgram& p, const ListFamily& f, ChangeOp op, const std::string& input,
                       const std::vector<std::string>& params, const FormulaPtr& guard, const std::string& element )
{
  const auto updates = op == ChangeOp::insert ? family_insert( f, "z", element ) : family_delete( f, "z", element );
  for ( const auto& u : updates )
    p.rules.push_back( make_rule( op, input, params, u.target, u.frees, guarded( guard, u.target, u.frees, u.fresh ) ) );
}

void add_identity_rules( DynamicProgram& p, const Schema& relations, ChangeOp op, const std::string& input,
                         const std::vector<std::string>& params )
{
  for ( const auto& d : relations )
  {
    const auto frees = names( "x", d.arity );
    p.rules.push_back( make_rule( op, input, params, d.name, frees, atom( d.name, frees ) ) );
  }
}

void append( Schema& s, const Schema& more )
{
  s.insert( s.end(), more.begin(), more.end() );
}

} // namespace

DynamicProgram parity_program()
{
  DynamicProgram p;
  p.name = "parity";
  p.claimed_class = ProgramClass::dynprop;
  p.input = { { "U", 1 } };
  p.aux = { { "P", 0 } };
  p.answer = "P";
  const auto U = atom( "U", { "a" } );
  const auto P = atom( "P", std::vector<std::string>{} );
  p.rules.push_back( make_rule( ChangeOp::insert, "U", { "a" }, "P", {},
                                disj( { conj( { neg( U ), neg( P ) } ), conj( { U, P } ) } ) ) );
  p.rules.push_back( make_rule( ChangeOp::remove, "U", { "a" }, "P", {},
                                disj( { conj( { U, neg( P ) } ), conj( { neg( U ), P } ) } ) ) );
  return p;
}

DynamicProgram size_k_program( std::size_t k )
{
  if ( k < 1 )
    throw Error( "size-k needs k >= 1" );
  const auto f = size_family( k );
  DynamicProgram p;
  p.name = "size_k_" + std::to_string( k );
  p.claimed_class = ProgramClass::dynprop;
  p.input = { { "U", 1 } };
  p.aux = f.schema();
  p.init = { { f.count( 0 ), {} } };
  p.answer = f.count( k );
  p.requires_effective = true;
  add_family_rules( p, f, ChangeOp::insert, "U", { "u" }, nullptr, "u" );
  add_family_rules( p, f, ChangeOp::remove, "U", { "u" }, nullptr, "u" );
  return p;
}

DynamicProgram degree_k_relation_program( std::size_t k )
{
  if ( k < 1 )
    throw Error( "degree-k needs k >= 1" );
  const auto f = in_neighbour_family( k + 1 );
  DynamicProgram p;
  p.name = "degree_k_" + std::to_string( k );
  p.claimed_class = ProgramClass::dynprop;
  p.input = { { "E", 2 } };
  p.aux = f.schema();
  p.answer = f.count( k );
  p.requires_effective = true;
  const auto at_w = eq( var( "z" ), var( "w" ) );
  add_family_rules( p, f, ChangeOp::insert, "E", { "v", "w" }, at_w, "v" );
  add_family_rules( p, f, ChangeOp::remove, "E", { "v", "w" }, at_w, "v" );
  return p;
}

DynamicProgram parity_degree_div3_program()
{
  const auto out_f = out_nonempty_family();
  const auto in_f = in_nonempty_family();
  DynamicProgram p;
  p.name = "parity_degree_div3";
  p.claimed_class = ProgramClass::dynprop;
  p.input = { { "E", 2 } };
  append( p.aux, out_f.schema() );
  append( p.aux, in_f.schema() );
  p.aux.push_back( { "M_0", 1 } );
  p.aux.push_back( { "M_1", 1 } );
  p.aux.push_back( { "M_2", 1 } );
  p.aux.push_back( { "P", 0 } );
  p.answer = "P";
  p.requires_effective = true;

  const std::vector<std::string> params{ "v", "w" };
  const auto at = []( const std::string& owner, const std::string& node ) { return eq( var( owner ), var( node ) ); };
  // the source's out-list gains or loses the target, the target's in-list the source
  add_family_rules( p, out_f, ChangeOp::insert, "E", params, at( "z", "v" ), "w" );
  add_family_rules( p, out_f, ChangeOp::remove, "E", params, at( "z", "v" ), "w" );
  add_family_rules( p, in_f, ChangeOp::insert, "E", params, at( "z", "w" ), "v" );
  add_family_rules( p, in_f, ChangeOp::remove, "E", params, at( "z", "w" ), "v" );

  auto M = []( std::size_t i, const std::string& x ) { return atom( "M_" + std::to_string( i ), { x } ); };
  const auto is_v = at( "x", "v" );
  const auto is_w = at( "x", "w" );
  const auto s0 = conj( { neg( is_v ), neg( is_w ) } );
  const auto s1 = exclusive_or( { is_v, is_w } );
  const auto s2 = conj( { is_v, is_w } );
  const auto res0 = conj( { neg( M( 1, "x" ) ), neg( M( 2, "x" ) ) } );

  // whether x still has an edge after deleting (v,w)
  const auto out_after = guarded( is_v, out_f.count_gt, { "x" },
                                  substitute( fresh_of( family_delete( out_f, "x", "w" ), out_f.count_gt ), {} ) );
  const auto in_after = guarded( is_w, in_f.count_gt, { "x" },
                                 fresh_of( family_delete( in_f, "x", "v" ), in_f.count_gt ) );
  const auto nonzero_after = disj( { out_after, in_after } );

  std::map<ChangeOp, std::vector<FormulaPtr>> m_new;
  m_new[ChangeOp::insert] = {
      disj( { conj( { s0, M( 0, "x" ) } ), conj( { s1, M( 2, "x" ) } ), conj( { s2, M( 1, "x" ) } ) } ),
      disj( { conj( { s0, M( 1, "x" ) } ), conj( { s1, res0 } ), conj( { s2, M( 2, "x" ) } ) } ),
      disj( { conj( { s0, M( 2, "x" ) } ), conj( { s1, M( 1, "x" ) } ), conj( { s2, res0 } ) } ),
  };
  m_new[ChangeOp::remove] = {
      disj( { conj( { s0, M( 0, "x" ) } ), conj( { s1, M( 1, "x" ), nonzero_after } ),
              conj( { s2, M( 2, "x" ), nonzero_after } ) } ),
      disj( { conj( { s0, M( 1, "x" ) } ), conj( { s1, M( 2, "x" ) } ), conj( { s2, res0 } ) } ),
      disj( { conj( { s0, M( 2, "x" ) } ), conj( { s1, res0 } ), conj( { s2, M( 1, "x" ) } ) } ),
  };

  for ( auto op : { ChangeOp::insert, ChangeOp::remove } )
  {
    for ( std::size_t i = 0; i < 3; ++i )
      p.rules.push_back( make_rule( op, "E", params, "M_" + std::to_string( i ), { "x" }, m_new[op][i] ) );
    const auto m0_at = [&]( const std::string& node ) {
      return exclusive_or( { M( 0, node ), substitute( m_new[op][0], { { "x", var( node ) } } ) } );
    };
    const auto body = exclusive_or(
        { atom( "P", std::vector<std::string>{} ), m0_at( "v" ), conj( { neq( var( "v" ), var( "w" ) ), m0_at( "w" ) } ) } );
    p.rules.push_back( make_rule( op, "E", params, "P", {}, body ) );
  }
  return p;
}

DynamicProgram parity_exists_deg_k_prop_program( std::size_t k )
{
  if ( k < 3 )
    throw Error( "the quantifier-free program for parity-exists-deg needs k >= 3" );
  const auto in_f = in_neighbour_family( k + 1 );
  const auto col_f = coloured_in_neighbour_family( k + 1 );

  DynamicProgram p;
  p.name = "parity_exists_deg_prop_" + std::to_string( k );
  p.claimed_class = ProgramClass::dynprop;
  p.input = { { "E", 2 }, { "R", 1 } };
  append( p.aux, in_f.schema() );
  append( p.aux, col_f.schema() );
  p.aux.push_back( { "Active", 1 } );
  for ( std::size_t total = 1; total <= k; ++total )
    for ( std::size_t l = total + 1; l-- > 0; )
      p.aux.push_back( { p_relation( l, total - l ), total } );
  p.aux.push_back( { "Ans", 0 } );
  p.answer = "Ans";
  p.requires_effective = true;

  const std::vector<std::string> edge{ "v", "w" };
  const std::vector<std::string> colour{ "v" };
  const auto E = []( const std::string& a, const std::string& b ) { return atom( "E", { a, b } ); };
  const auto R = []( const std::string& a ) { return atom( "R", { a } ); };
  const auto same = []( const std::string& a, const std::string& b ) { return eq( var( a ), var( b ) ); };
  const auto Ans = atom( "Ans", std::vector<std::string>{} );

  /* list families */
  const auto at_w = same( "z", "w" );
  add_family_rules( p, in_f, ChangeOp::insert, "E", edge, at_w, "v" );
  add_family_rules( p, in_f, ChangeOp::remove, "E", edge, at_w, "v" );
  add_identity_rules( p, in_f.schema(), ChangeOp::insert, "R", colour );
  add_identity_rules( p, in_f.schema(), ChangeOp::remove, "R", colour );
  const auto coloured_edge = conj( { at_w, R( "v" ) } );
  add_family_rules( p, col_f, ChangeOp::insert, "E", edge, coloured_edge, "v" );
  add_family_rules( p, col_f, ChangeOp::remove, "E", edge, coloured_edge, "v" );
  add_family_rules( p, col_f, ChangeOp::insert, "R", colour, E( "v", "z" ), "v" );
  add_family_rules( p, col_f, ChangeOp::remove, "R", colour, E( "v", "z" ), "v" );

  /* Active = N_1 ∪ ... ∪ N_k */
  for ( auto op : { ChangeOp::insert, ChangeOp::remove } )
  {
    const auto updates = op == ChangeOp::insert ? family_insert( in_f, "z", "v" ) : family_delete( in_f, "z", "v" );
    std::vector<FormulaPtr> active;
    for ( std::size_t i = 1; i <= k; ++i )
      active.push_back( fresh_of( updates, in_f.count( i ) ) );
    p.rules.push_back( make_rule( op, "E", edge, "Active", { "z" }, guarded( at_w, "Active", { "z" }, disj( active ) ) ) );
    p.rules.push_back( make_rule( op, "R", colour, "Active", { "z" }, atom( "Active", { "z" } ) ) );
  }

  const FamilyFormulas In( in_f, "w" );
  const FamilyFormulas Col( col_f, "w" );
  auto any_in_degree = [&]( std::size_t from, std::size_t to ) {
    std::vector<FormulaPtr> parts;
    for ( std::size_t i = from; i <= to; ++i )
      parts.push_back( In.count( i ) );
    return disj( std::move( parts ) );
  };
  auto any_coloured = [&]( std::size_t from, std::size_t to ) {
    std::vector<FormulaPtr> parts;
    for ( std::size_t i = from; i <= to; ++i )
      parts.push_back( Col.count( i ) );
    return disj( std::move( parts ) );
  };

  /* Ans */
  p.rules.push_back( make_rule( ChangeOp::insert, "R", colour, "Ans", {},
                                exclusive_or( { Ans, atom( p_relation( 0, 1 ), { "v" } ) } ) ) );
  p.rules.push_back( make_rule( ChangeOp::remove, "R", colour, "Ans", {},
                                exclusive_or( { Ans, atom( p_relation( 1, 0 ), { "v" } ) } ) ) );
  p.rules.push_back( make_rule(
      ChangeOp::insert, "E", edge, "Ans", {},
      exclusive_or( { Ans, disj( { conj( { In.count( k ), any_coloured( 1, k ) } ),
                                   conj( { R( "v" ), Col.count( 0 ), any_in_degree( 0, k - 1 ) } ) } ) } ) ) );
  p.rules.push_back( make_rule(
      ChangeOp::remove, "E", edge, "Ans", {},
      exclusive_or( { Ans, disj( { conj( { In.count( k + 1 ), any_coloured( 1, k + 1 ),
                                           disj( { neg( R( "v" ) ), neg( Col.count( 1 ) ) } ) } ),
                                   conj( { R( "v" ), Col.count( 1 ), any_in_degree( 1, k ) } ) } ) } ) ) );

  /* P_{l,m} */
  for ( std::size_t total = 1; total <= k; ++total )
    for ( std::size_t l = 0; l <= total; ++l )
    {
      const std::size_t m = total - l;
      const auto xs = names( "x", l );
      const auto ys = names( "y", m );
      const auto frees = cat( xs, ys );
      const auto target = p_relation( l, m );
      const auto P = atom( target, frees );

      auto distinct = [&]() {
        std::vector<FormulaPtr> parts;
        for ( const auto* group : { &xs, &ys } )
          for ( std::size_t i = 0; i < group->size(); ++i )
            for ( std::size_t j = 0; j < group->size(); ++j )
              if ( i != j )
                parts.push_back( neq( var( ( *group )[i] ), var( ( *group )[j] ) ) );
        return parts;
      };
      std::vector<FormulaPtr> theta = distinct();
      for ( const auto& x : xs )
        theta.push_back( R( x ) );
      for ( const auto& y : ys )
        theta.push_back( neg( R( y ) ) );

      std::vector<FormulaPtr> v_outside;
      for ( const auto& name : frees )
        v_outside.push_back( neq( var( "v" ), var( name ) ) );

      /* colouring v */
      {
        std::vector<FormulaPtr> body = distinct();
        for ( const auto& x : xs )
          body.push_back( disj( { R( x ), same( x, "v" ) } ) );
        for ( const auto& y : ys )
          body.push_back( conj( { neg( R( y ) ), neq( var( y ), var( "v" ) ) } ) );
        std::vector<FormulaPtr> cases;
        for ( std::size_t i = 0; i < l; ++i )
        {
          auto rest = xs;
          rest.erase( rest.begin() + static_cast<std::ptrdiff_t>( i ) );
          cases.push_back( conj( { same( "v", xs[i] ),
                                   atom( p_relation( l - 1, m + 1 ), cat( cat( rest, ys ), { "v" } ) ) } ) );
        }
        auto untouched = v_outside;
        if ( total < k )
          untouched.push_back( exclusive_or( { P, atom( p_relation( l, m + 1 ), cat( frees, { "v" } ) ) } ) );
        else
          untouched.push_back( P );
        cases.push_back( conj( untouched ) );
        body.push_back( disj( cases ) );
        p.rules.push_back( make_rule( ChangeOp::insert, "R", colour, target, frees, conj( body ) ) );
      }

      /* uncolouring v */
      {
        std::vector<FormulaPtr> body = distinct();
        for ( const auto& x : xs )
          body.push_back( conj( { R( x ), neq( var( x ), var( "v" ) ) } ) );
        for ( const auto& y : ys )
          body.push_back( disj( { neg( R( y ) ), same( y, "v" ) } ) );
        std::vector<FormulaPtr> cases;
        for ( std::size_t i = 0; i < m; ++i )
        {
          auto rest = ys;
          rest.erase( rest.begin() + static_cast<std::ptrdiff_t>( i ) );
          cases.push_back( conj( { same( "v", ys[i] ),
                                   atom( p_relation( l + 1, m - 1 ), cat( cat( xs, { "v" } ), rest ) ) } ) );
        }
        auto untouched = v_outside;
        if ( total < k )
          untouched.push_back( exclusive_or( { P, atom( p_relation( l + 1, m ), cat( cat( xs, { "v" } ), ys ) ) } ) );
        else
          untouched.push_back( P );
        cases.push_back( conj( untouched ) );
        body.push_back( disj( cases ) );
        p.rules.push_back( make_rule( ChangeOp::remove, "R", colour, target, frees, conj( body ) ) );
      }

      std::vector<FormulaPtr> edges_from_all;
      for ( const auto& name : frees )
        edges_from_all.push_back( E( name, "w" ) );
      auto edges_from_all_but = [&]( const std::string& skip ) {
        std::vector<FormulaPtr> parts;
        for ( const auto& name : frees )
          if ( name != skip )
            parts.push_back( E( name, "w" ) );
        return parts;
      };

      /* inserting (v,w) */
      {
        // w leaves: it becomes inactive, or gains a coloured in-neighbour while active
        auto psi1 = edges_from_all;
        psi1.push_back( Col.count( l ) );
        psi1.push_back( disj( { In.count( k ), conj( { R( "v" ), atom( "Active", { "w" } ) } ) } ) );
        std::vector<FormulaPtr> psi2, psi3;
        for ( const auto& x : xs )
        {
          auto parts = edges_from_all_but( x );
          parts.insert( parts.begin(), same( "v", x ) );
          parts.push_back( Col.count( l - 1 ) );
          parts.push_back( any_in_degree( 0, k - 1 ) );
          psi2.push_back( conj( parts ) );
        }
        for ( const auto& y : ys )
        {
          auto parts = edges_from_all_but( y );
          parts.insert( parts.begin(), same( "v", y ) );
          parts.push_back( Col.count( l ) );
          parts.push_back( any_in_degree( 0, k - 1 ) );
          psi3.push_back( conj( parts ) );
        }
        auto body = theta;
        body.push_back( exclusive_or( { P, disj( { conj( psi1 ), disj( psi2 ), disj( psi3 ) } ) } ) );
        p.rules.push_back( make_rule( ChangeOp::insert, "E", edge, target, frees, conj( body ) ) );
      }

      /* deleting (v,w) */
      {
        auto psi1 = edges_from_all;
        psi1.push_back( Col.count( l ) );
        psi1.push_back( any_in_degree( 1, k ) );
        std::vector<FormulaPtr> v_inside;
        for ( const auto& name : frees )
          v_inside.push_back( same( name, "v" ) );
        psi1.push_back( disj( v_inside ) );

        std::vector<FormulaPtr> psi2;
        for ( const auto& name : frees )
          psi2.push_back( conj( { neq( var( "v" ), var( name ) ), E( name, "w" ) } ) );
        psi2.push_back( disj( { conj( { In.count( k + 1 ), neg( R( "v" ) ), Col.count( l ) } ),
                                conj( { In.count( k + 1 ), R( "v" ), Col.count( l + 1 ) } ),
                                conj( { any_in_degree( 1, k ), R( "v" ), Col.count( l + 1 ) } ) } ) );
        auto body = theta;
        body.push_back( exclusive_or( { P, disj( { conj( psi1 ), conj( psi2 ) } ) } ) );
        p.rules.push_back( make_rule( ChangeOp::remove, "E", edge, target, frees, conj( body ) ) );
      }
    }
  return p;
}

std::vector<ProgramCatalogEntry> catalog()
{
  std::vector<ProgramCatalogEntry> entries;
  entries.push_back( { "parity", "parity", 0, "parity of a unary relation with a single flipped bit",
                       ProgramClass::dynprop, { QueryKind::parity, 0 }, 0, [] { return parity_program(); } } );
  for ( std::size_t k = 1; k <= 4; ++k )
    entries.push_back( { "size_k_" + std::to_string( k ), "size_k", k, "|U| = k via k-lists with binary relations",
                         ProgramClass::dynprop, { QueryKind::size_k, k }, 2, [k] { return size_k_program( k ); } } );
  for ( std::size_t k = 1; k <= 3; ++k )
    entries.push_back( { "degree_k_" + std::to_string( k ), "degree_k", k,
                         "nodes of in-degree exactly k via per-node in-neighbour lists", ProgramClass::dynprop,
                         { QueryKind::degree_k, k }, 3, [k] { return degree_k_relation_program( k ); } } );
  entries.push_back( { "parity_degree_div3", "parity_degree_div3", 0,
                       "parity of the nodes of nonzero total degree divisible by 3", ProgramClass::dynprop,
                       { QueryKind::parity_degree_div3, 0 }, 3, [] { return parity_degree_div3_program(); } } );
  for ( std::size_t k = 3; k <= 4; ++k )
    entries.push_back( { "parity_exists_deg_prop_" + std::to_string( k ), "parity_exists_deg_prop", k,
                         "parity of covered nodes of in-degree at most k with k-ary relations",
                         ProgramClass::dynprop, { QueryKind::parity_exists_deg, k }, std::max<std::size_t>( 3, k ),
                         [k] { return parity_exists_deg_k_prop_program( k ); } } );
  return entries;
}

const ProgramCatalogEntry& catalog_entry( const std::string& name )
{
  static const auto entries = catalog();
  for ( const auto& e : entries )
    if ( e.name == name )
      return e;
  throw Error( "unknown catalog program '" + name + "'" );
}

std::pair<std::string, std::size_t> split_program_name( const std::string& name )
{
  const auto underscore = name.rfind( '_' );
  if ( underscore != std::string::npos && underscore + 1 < name.size() &&
       name.find_first_not_of( "0123456789", underscore + 1 ) == std::string::npos )
    return { name.substr( 0, underscore ), std::stoul( name.substr( underscore + 1 ) ) };
  return { name, 0 };
}

} // namespace dyncomplab
