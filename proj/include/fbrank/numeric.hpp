#pragma once

// Floating-point companion to the exact engine: quadrature of the
// Fisher-Bingham integral Z(x, y, r) over the n-sphere of radius r for
// n in {1, 2}, annihilation residuals of symbolic generators, and the
// Pfaffian system derived from the diagonal Groebner basis.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbrank/groebner.hpp"
#include "fbrank/weyl.hpp"
#include "json.hpp"

namespace fbrank {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalPoint {
  int n = 1;
  std::vector<std::vector<double>> x;  // symmetric (n+1) x (n+1)
  std::vector<double> y;               // n+1
  double r = 1;

  static EvalPoint origin(int n, double r = 1);
  // |x_ij| <= 1, |y_i| <= 1, r in [0.5, 1.5], diagonal entries pairwise at
  // least 0.1 apart. Off-diagonal entries are zero when diagonal is set.
  static EvalPoint random(int n, std::mt19937_64& rng, bool diagonal = false);

  bool is_diagonal() const;
  // Throws std::invalid_argument when r <= 0, x is not symmetric or the
  // shapes do not match n.
  void validate() const;

  // {"n": 1, "x": [["0.1", "0"], ...], "y": [...], "r": "1"}; numbers are
  // decimal strings (plain JSON numbers are accepted on input).
  nlohmann::json to_json() const;
  static EvalPoint from_json(const nlohmann::json& j);

  // Straight-line interpolation (1-s) a + s b.
  static EvalPoint lerp(const EvalPoint& a, const EvalPoint& b, double s);
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  // Central-difference step for r-derivatives, relative to r.
  double fd_step = 1e-5;
  // Larger relative step for second r-derivatives, where cancellation
  // dominates at 1e-5.
  double fd_step2 = 1e-3;
};

// Moment exponents of t_1..t_{n+1} and the order of the r-derivative.
struct DerivativeSpec {
  std::vector<int> t_power;
  int r_order = 0;
};

// Derivative d^alpha Z for a monomial in the differential variables of u
// (dx_ij inserts t_i t_j, dy_i inserts t_i, dr is a finite difference).
DerivativeSpec derivative_of(const Monomial& m, const VarUniverse& u);

double quadrature_Z(const EvalPoint& p, const DerivativeSpec& d = {}, const QuadratureOptions& o = {});

struct Applied {
  double value = 0;  // (op Z)(p)
  double scale = 0;  // sum over terms of |coefficient * derivative|
};

// Applies a D-mode operator (any universe without slack) to Z at p.
Applied apply_to_Z(const PolyOperator& op, const EvalPoint& p, const QuadratureOptions& o = {});
Applied apply_to_Z(const RatOperator& op, const EvalPoint& p, const QuadratureOptions& o = {});

// |op Z(p)| / scale; 0 for the zero operator.
double annihilation_residual(const PolyOperator& op, const EvalPoint& p, const QuadratureOptions& o = {});

struct PfaffianSystem {
  int n = 1;
  UniversePtr universe;                  // diagonal-only
  std::vector<Monomial> standard;        // 1, d_1, d_2, d_2^2, ..., d_m, d_m^2
  std::vector<VarIndex> variables;       // x_11..x_mm, y_1..y_m, r
  // P[v][row][col]: d_v (s_row Z) = sum_col P[v][row][col] s_col Z.
  std::vector<std::vector<std::vector<RationalFunction>>> P;

  std::size_t size() const { return standard.size(); }
  std::string variable_name(std::size_t v) const;
  nlohmann::json to_json() const;

  // Numeric matrices at a point; throws SingularPath on a vanishing
  // denominator.
  std::vector<std::vector<std::vector<double>>> evaluate(const EvalPoint& p) const;
};

// Normal forms of d_v s against the diagonal Groebner basis.
PfaffianSystem build_pfaffian(int n, StepBudget* budget = nullptr);

struct FlatnessReport {
  bool holds = true;
  std::size_t pairs = 0;
  // First failing pair and entry, if any.
  nlohmann::json witness;
};

// Exact check of d_u P_v - d_v P_u = P_u P_v - P_v P_u for every pair.
FlatnessReport check_flatness(const PfaffianSystem& P);

// Vector (s_k Z)(p) by quadrature.
std::vector<double> pfaffian_vector(const PfaffianSystem& P, const EvalPoint& p, const QuadratureOptions& o = {});

// Classical RK4 along the segment from -> to. Without an initial vector,
// it is computed by quadrature at `from`. Throws SingularPath when the
// segment comes within 0.05 of a locus x_ii = x_jj or of r = 0.
std::vector<double> integrate_pfaffian(const PfaffianSystem& P, const EvalPoint& from, const EvalPoint& to, int steps,
                                       const std::vector<double>* initial = nullptr);

}  // namespace fbrank
