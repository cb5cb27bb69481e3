// Lattice points of Z^n (n <= 3) and finite enumeration windows.
#ifndef TORUSCAUCHY_LATTICE_HPP
#define TORUSCAUCHY_LATTICE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace toruscauchy {

// A frequency ξ ∈ Z^n. Coordinates beyond dim() are kept at zero so the
// comparison/encoding helpers never branch on the dimension.
class LatticePoint {
 public:
  LatticePoint() : coords_{0, 0, 0}, dim_(1) {}

  LatticePoint(std::initializer_list<std::int64_t> cs) : coords_{0, 0, 0} {
    if (cs.size() < 1 || cs.size() > 3)
      throw std::invalid_argument("LatticePoint: dimension must be 1, 2 or 3");
    dim_ = static_cast<int>(cs.size());
    int i = 0;
    for (auto c : cs) coords_[i++] = c;
  }

  explicit LatticePoint(const std::vector<std::int64_t>& cs) : coords_{0, 0, 0} {
    if (cs.size() < 1 || cs.size() > 3)
      throw std::invalid_argument("LatticePoint: dimension must be 1, 2 or 3");
    dim_ = static_cast<int>(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) coords_[i] = cs[i];
  }

  int dim() const { return dim_; }
  std::int64_t operator[](int i) const { return coords_[i]; }

  std::int64_t square_norm() const {
    std::int64_t s = 0;
    for (int i = 0; i < dim_; ++i) s += coords_[i] * coords_[i];
    return s;
  }

  // Euclidean norm |ξ|.
  double norm() const { return std::sqrt(static_cast<double>(square_norm())); }

  // max(|ξ|, 1): used wherever a logarithm or negative power of |ξ| appears,
  // so ξ = 0 never produces a singular value.
  double norm_guard() const { return std::max(norm(), 1.0); }

  bool is_zero() const { return square_norm() == 0; }

  bool operator==(const LatticePoint& o) const {
    return dim_ == o.dim_ && coords_ == o.coords_;
  }
  bool operator!=(const LatticePoint& o) const { return !(*this == o); }

  // Lexicographic order; the window enumeration below relies on it.
  bool operator<(const LatticePoint& o) const { return coords_ < o.coords_; }

  std::string to_string() const {
    std::string s = std::to_string(coords_[0]);
    for (int i = 1; i < dim_; ++i) s += " " + std::to_string(coords_[i]);
    return s;
  }

 private:
  std::array<std::int64_t, 3> coords_;
  int dim_;
};

// All ξ ∈ Z^n with |ξ| ≤ Ξ, enumerated lexicographically (deterministic,
// always containing ξ = 0).
class LatticeWindow {
 public:
  LatticeWindow(int dim, std::int64_t radius) : dim_(dim), radius_(radius) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("LatticeWindow: dimension must be 1, 2 or 3");
    if (radius < 1) throw std::invalid_argument("LatticeWindow: radius must be positive");
    const std::int64_t r2 = radius * radius;
    std::vector<std::int64_t> c(static_cast<std::size_t>(dim), 0);
    enumerate(c, 0, r2);
    for (std::size_t i = 0; i < points_.size(); ++i) index_[encode(points_[i])] = i;
  }

  int dim() const { return dim_; }
  std::int64_t radius() const { return radius_; }
  const std::vector<LatticePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  bool contains(const LatticePoint& p) const {
    return p.dim() == dim_ && index_.count(encode(p)) > 0;
  }

  // Position of p in the enumeration; throws if outside the window.
  std::size_t index_of(const LatticePoint& p) const {
    auto it = index_.find(encode(p));
    if (p.dim() != dim_ || it == index_.end())
      throw std::out_of_range("LatticeWindow: point outside window");
    return it->second;
  }

 private:
  void enumerate(std::vector<std::int64_t>& c, int pos, std::int64_t r2) {
    if (pos == dim_) {
      std::int64_t s = 0;
      for (auto v : c) s += v * v;
      if (s <= r2) points_.push_back(LatticePoint(c));
      return;
    }
    for (std::int64_t v = -radius_; v <= radius_; ++v) {
      c[static_cast<std::size_t>(pos)] = v;
      enumerate(c, pos + 1, r2);
    }
  }

  std::int64_t encode(const LatticePoint& p) const {
    const std::int64_t b = 2 * radius_ + 1;
    std::int64_t key = 0;
    for (int i = 0; i < dim_; ++i) key = key * b + (p[i] + radius_);
    return key;
  }

  int dim_;
  std::int64_t radius_;
  std::vector<LatticePoint> points_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_LATTICE_HPP
