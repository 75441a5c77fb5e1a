#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbrank/order.hpp"
#include "fbrank/weyl.hpp"
#include "json.hpp"

namespace fbrank {

enum class SystemKind { I, It, Ip, Itp, Iph };

std::string to_string(SystemKind k);
SystemKind parse_system_kind(const std::string& s);  // I, It, Ip, Itp, Iph

// How slack constants a_pq, b_i, c_i, d enter a primed system.
struct SlackSpec {
  enum class Kind { Symbolic, Zero, Random };
  Kind kind = Kind::Symbolic;
  std::uint64_t seed = 0;

  static SlackSpec parse(const std::string& s);  // sym | zero | random:SEED
  std::string to_string() const;
  // Values keyed by slack variable name; empty for symbolic slack.
  std::map<std::string, Rational> values(const VarUniverse& u) const;
};

template <class Op>
struct Named {
  std::string name;
  Op op;
};

struct SystemDescriptor {
  SystemKind kind = SystemKind::I;
  int n = 1;
  SlackSpec slack;
  UniversePtr universe;
  Mode mode = Mode::D;
  std::vector<Named<PolyOperator>> generators;

  std::vector<PolyOperator> ops() const;
  const PolyOperator& at(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Fisher-Bingham system: A_pq, B, C_ij (i<j), E.
SystemDescriptor make_I(int n);
// Diagonal system At_i, B, Ct_ij, Et; with_offdiagonal adds dx_ij (i<j)
// and uses the full universe, otherwise the diagonal-only universe.
SystemDescriptor make_I_tilde(int n, bool with_offdiagonal = true);
SystemDescriptor make_I_prime(int n, const SlackSpec& slack = {});
SystemDescriptor make_I_tilde_prime(int n, const SlackSpec& slack = {});
SystemDescriptor make_I_prime_h(int n);
SystemDescriptor make_system(SystemKind kind, int n, const SlackSpec& slack = {});

// Single operators in a given universe and mode. Indices are 1-based and
// may be given in either order where the formula is antisymmetric.
PolyOperator op_C(const UniversePtr& u, Mode mode, int i, int j);       // generator of I
PolyOperator op_C_diag(const UniversePtr& u, Mode mode, int i, int j);  // 2(x_ii-x_jj) d_i d_j + F_ij
PolyOperator op_F(const UniversePtr& u, Mode mode, int i, int j);       // y_i d_j - y_j d_i
PolyOperator op_B(const UniversePtr& u, Mode mode);
PolyOperator op_E(const UniversePtr& u, Mode mode);
PolyOperator op_E_diag(const UniversePtr& u, Mode mode);
PolyOperator op_A_diag(const UniversePtr& u, Mode mode, int i);  // dx_ii - dy_i^2
// Homogenized primed C for any ordered pair i != j, and its split into
// the slack part and the rest.
PolyOperator op_Cph(const UniversePtr& u, int i, int j);
PolyOperator op_Cph_hat(const UniversePtr& u, int i, int j);
PolyOperator op_Cph_check(const UniversePtr& u, int i, int j);
// The second listing of the diagonal primed A differs in sign from the
// first; this returns the listed text form x_ii d_i^2 - x_ii dx_ii - a_ii^3.
PolyOperator op_Atp_listed_variant(const UniversePtr& u, int i);

// a_ij = 2(x_ii - x_jj) as a rational function.
RationalFunction coeff_a(const VarUniverse& u, int i, int j);

// D_k = d_k B - sum_{l<k} d_l a_lk^{-1} C_lk in mode R.
RatOperator op_D(const UniversePtr& u, int k);

// Diagonal-only universe, mode R: {A_i, B, C_ij, E} and the claimed basis
// {A_i, B, C_ij, D_k, E}.
std::vector<Named<RatOperator>> diagonal_generators(int n);
std::vector<Named<RatOperator>> prop2_basis(int n);

template <class Op>
std::vector<Op> ops_of(const std::vector<Named<Op>>& v) {
  std::vector<Op> out;
  for (const auto& x : v) out.push_back(x.op);
  return out;
}

// Generators viewed in mode R over the same universe.
std::vector<Named<RatOperator>> to_rational(const SystemDescriptor& s);

}  // namespace fbrank
