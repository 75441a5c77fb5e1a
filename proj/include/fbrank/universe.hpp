#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fbrank {

using VarIndex = std::uint16_t;

enum class VarKind { Commutative, Differential, Slack, Homogenizer };

struct Variable {
  std::string name;
  VarKind kind;
  // Conjugate variable for commutative/differential pairs, -1 otherwise.
  int partner = -1;
};

// The variables of the Weyl algebra attached to the n-sphere, optionally
// restricted to the diagonal of x, extended by the slack constants
// a_pq, b_i, c_i, d and by the homogenizing variable h.
//
// Index layout is stable for a given (n, options):
//   x_ij (i<=j, row major), y_k, r, dx_ij, dy_k, dr, a_pq, b_i, c_i, d, h
// Off-diagonal x_ij / dx_ij are absent in diagonal-only universes.
class VarUniverse {
 public:
  struct Options {
    bool diagonal_only = false;
    bool slack = false;
    bool homogenized = false;
  };

  VarUniverse(int n, Options options);

  static std::shared_ptr<const VarUniverse> make(int n, Options options) {
    return std::make_shared<const VarUniverse>(n, options);
  }

  int n() const { return n_; }
  int dim() const { return n_ + 1; }
  const Options& options() const { return options_; }
  std::size_t size() const { return vars_.size(); }
  const Variable& var(VarIndex v) const { return vars_.at(v); }
  const std::string& name(VarIndex v) const { return vars_.at(v).name; }
  VarKind kind(VarIndex v) const { return vars_.at(v).kind; }
  bool is_differential(VarIndex v) const { return kind(v) == VarKind::Differential; }
  bool is_commutative(VarIndex v) const { return kind(v) == VarKind::Commutative; }
  int partner(VarIndex v) const { return vars_.at(v).partner; }

  // 1-based indices as in the mathematics; x(i,j) == x(j,i).
  VarIndex x(int i, int j) const;
  VarIndex y(int k) const;
  VarIndex r() const;
  VarIndex dx(int i, int j) const;
  VarIndex dy(int k) const;
  VarIndex dr() const;
  VarIndex a(int p, int q) const;
  VarIndex b(int i) const;
  VarIndex c(int i) const;
  VarIndex d() const;
  VarIndex h() const;

  bool has_x(int i, int j) const;
  std::optional<VarIndex> find(std::string_view name) const;

  std::vector<VarIndex> of_kind(VarKind kind) const;
  std::vector<VarIndex> differentials() const { return of_kind(VarKind::Differential); }
  std::vector<VarIndex> commutatives() const { return of_kind(VarKind::Commutative); }

  std::string describe() const;

  friend bool operator==(const VarUniverse& a, const VarUniverse& b) {
    return a.n_ == b.n_ && a.options_.diagonal_only == b.options_.diagonal_only &&
           a.options_.slack == b.options_.slack &&
           a.options_.homogenized == b.options_.homogenized;
  }

 private:
  VarIndex add(std::string name, VarKind kind);
  VarIndex lookup(const std::string& name) const;

  int n_;
  Options options_;
  std::vector<Variable> vars_;
  std::unordered_map<std::string, VarIndex> by_name_;
};

using UniversePtr = std::shared_ptr<const VarUniverse>;

// Name fragment for an index pair: "12" for small indices, "10_11" otherwise.
std::string pair_suffix(int i, int j);

}  // namespace fbrank
