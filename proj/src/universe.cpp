#include "fbrank/universe.hpp"

#include <sstream>
#include <stdexcept>

namespace fbrank {

std::string pair_suffix(int i, int j) {
  if (i < 10 && j < 10) return std::to_string(i) + std::to_string(j);
  return std::to_string(i) + "_" + std::to_string(j);
}

VarUniverse::VarUniverse(int n, Options options) : n_(n), options_(options) {
  if (n < 1) throw std::invalid_argument("VarUniverse: n must be >= 1");
  const int m = n + 1;
  auto keep = [&](int i, int j) { return i == j || !options_.diagonal_only; };

  std::vector<VarIndex> xs, ys;
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j)
      if (keep(i, j)) xs.push_back(add("x" + pair_suffix(i, j), VarKind::Commutative));
  for (int k = 1; k <= m; ++k) ys.push_back(add("y" + std::to_string(k), VarKind::Commutative));
  VarIndex rr = add("r", VarKind::Commutative);

  std::size_t pos = 0;
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j)
      if (keep(i, j)) {
        VarIndex dv = add("dx" + pair_suffix(i, j), VarKind::Differential);
        vars_[dv].partner = xs[pos];
        vars_[xs[pos]].partner = dv;
        ++pos;
      }
  for (int k = 1; k <= m; ++k) {
    VarIndex dv = add("dy" + std::to_string(k), VarKind::Differential);
    vars_[dv].partner = ys[k - 1];
    vars_[ys[k - 1]].partner = dv;
  }
  VarIndex dr = add("dr", VarKind::Differential);
  vars_[dr].partner = rr;
  vars_[rr].partner = dr;

  if (options_.slack) {
    for (int p = 1; p <= m; ++p)
      for (int q = p; q <= m; ++q)
        if (keep(p, q)) add("a" + pair_suffix(p, q), VarKind::Slack);
    for (int i = 1; i <= m; ++i) add("b" + std::to_string(i), VarKind::Slack);
    for (int i = 1; i <= m; ++i) add("c" + std::to_string(i), VarKind::Slack);
    add("d", VarKind::Slack);
  }
  if (options_.homogenized) add("h", VarKind::Homogenizer);
}

VarIndex VarUniverse::add(std::string name, VarKind kind) {
  if (vars_.size() >= 0xFFFF) throw std::length_error("VarUniverse: too many variables");
  auto idx = static_cast<VarIndex>(vars_.size());
  by_name_.emplace(name, idx);
  vars_.push_back(Variable{std::move(name), kind, -1});
  return idx;
}

VarIndex VarUniverse::lookup(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    throw std::out_of_range("variable '" + name + "' not in universe " + describe());
  return it->second;
}

std::optional<VarIndex> VarUniverse::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

bool VarUniverse::has_x(int i, int j) const {
  if (i > j) std::swap(i, j);
  return i >= 1 && j <= dim() && (i == j || !options_.diagonal_only);
}

VarIndex VarUniverse::x(int i, int j) const {
  if (i > j) std::swap(i, j);
  return lookup("x" + pair_suffix(i, j));
}
VarIndex VarUniverse::y(int k) const { return lookup("y" + std::to_string(k)); }
VarIndex VarUniverse::r() const { return lookup("r"); }
VarIndex VarUniverse::dx(int i, int j) const {
  if (i > j) std::swap(i, j);
  return lookup("dx" + pair_suffix(i, j));
}
VarIndex VarUniverse::dy(int k) const { return lookup("dy" + std::to_string(k)); }
VarIndex VarUniverse::dr() const { return lookup("dr"); }
VarIndex VarUniverse::a(int p, int q) const {
  if (p > q) std::swap(p, q);
  return lookup("a" + pair_suffix(p, q));
}
VarIndex VarUniverse::b(int i) const { return lookup("b" + std::to_string(i)); }
VarIndex VarUniverse::c(int i) const { return lookup("c" + std::to_string(i)); }
VarIndex VarUniverse::d() const { return lookup("d"); }
VarIndex VarUniverse::h() const { return lookup("h"); }

std::vector<VarIndex> VarUniverse::of_kind(VarKind k) const {
  std::vector<VarIndex> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].kind == k) out.push_back(static_cast<VarIndex>(i));
  return out;
}

std::string VarUniverse::describe() const {
  std::ostringstream os;
  os << "n=" << n_ << (options_.diagonal_only ? ",diagonal" : "")
     << (options_.slack ? ",slack" : "") << (options_.homogenized ? ",h" : "");
  return os.str();
}

}  // namespace fbrank
