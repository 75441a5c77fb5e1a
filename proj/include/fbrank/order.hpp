#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fbrank/monomial.hpp"
#include "fbrank/universe.hpp"
#include "json.hpp"

namespace fbrank {

// Integer weights w_v on differential variables. The induced (-w,w)
// grading gives each commutative variable the negated weight of its
// differential partner; slack variables and h get weight 0.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(UniversePtr universe);

  void set(VarIndex differential, std::int64_t w);
  std::int64_t of_differential(VarIndex differential) const;
  // Weight of any variable under the (-w,w,0) grading.
  std::int64_t paired(VarIndex v) const;
  std::vector<std::int64_t> paired_table() const;
  bool is_zero() const;
  const UniversePtr& universe() const { return universe_; }

  nlohmann::json to_json() const;

 private:
  UniversePtr universe_;
  std::vector<std::int64_t> w_;  // indexed by VarIndex, zero off the differentials
};

std::int64_t weight_degree(const Monomial& m, const WeightVector& w);

enum class InnerOrder { Lex, GradedLex, GradedRevLex };

struct TotalDegreeLayer {};

struct WeightLayer {
  std::string label;
  std::vector<std::int64_t> weights;  // indexed by VarIndex
};

// Variables inside a block are listed most significant first.
struct Block {
  std::string label;
  std::vector<VarIndex> vars;
  InnerOrder inner = InnerOrder::GradedLex;
};

struct BlockLayer {
  std::vector<Block> blocks;
};

using OrderLayer = std::variant<TotalDegreeLayer, WeightLayer, BlockLayer>;

// A term order described as data: layers are compared in sequence and a
// final lexicographic comparison by variable index breaks remaining ties.
class TermOrder {
 public:
  TermOrder() = default;
  TermOrder(std::string name, UniversePtr universe, std::vector<OrderLayer> layers);

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  const std::string& name() const { return name_; }
  const UniversePtr& universe() const { return universe_; }
  const std::vector<OrderLayer>& layers() const { return layers_; }

  nlohmann::json to_json() const;

 private:
  std::string name_;
  UniversePtr universe_;
  std::vector<OrderLayer> layers_;
};

// Weight vector w: 1 on dx_ij (i != j), 0 on dx_ii, dy_k and dr.
WeightVector make_weight(UniversePtr universe);

// Block order dr >> {dx_ii} >> {dy_k}, graded lex inside each block with
// dx_11 > ... and dy_1 > .... Off-diagonal dx_ij, when present in the
// universe, form an extra graded lex block between dr and {dx_ii}.
TermOrder make_prop2_order(UniversePtr universe);

struct HOrderOptions {
  // Inner direction of the {c_k} and {y_k} tie-breaker blocks.
  bool reverse_c = false;
  bool reverse_y = false;
};

// Total degree, then (-w,w,0)-degree, then the block chain
// d >> r >> {a_pq} >> {b_k} >> {c_k} >> {y_k} >> dr >> {dx_ij, i<j}
//   >> {dx_ii} >> {dy_k} >> {x_ij, i<j} >> {x_ii} >> h
// with lexicographic inner orders.
TermOrder make_h_order(UniversePtr universe, HOrderOptions options = {});

// The same chain written out literally for n = 1 by variable name.
TermOrder make_h_order_n1_preset(UniversePtr universe);

// Graded lexicographic over the variable index.
TermOrder make_grlex_order(UniversePtr universe);

std::string to_string(InnerOrder inner);

}  // namespace fbrank
