#pragma once

// Periodic N x N node fields on the unit torus and the fourth-order
// difference stencils that act on them.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagflow {

/// Throws std::invalid_argument unless n is even and at least 8.
inline void require_grid_size(int n) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
  }
}

/// Values of type T at the nodes x = (i/n, j/n) of an n x n periodic grid.
/// Storage is row-major in (i, j): node (i, j) lives at i * n + j.
template <class T>
class NodeField {
 public:
  NodeField() = default;
  explicit NodeField(int n, T fill = T{}) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {
    require_grid_size(n);
  }

  int n() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  std::size_t size() const { return data_.size(); }

  /// Periodic access; any integer index is wrapped.
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const NodeField&) const = default;

 private:
  std::size_t index(int i, int j) const {
    const int ii = ((i % n_) + n_) % n_;
    const int jj = ((j % n_) + n_) % n_;
    return static_cast<std::size_t>(ii) * n_ + jj;
  }

  int n_ = 0;
  std::vector<T> data_;
};

using GridField = NodeField<double>;

enum class Axis : int { X = 0, Y = 1 };

/// Fourth-order centered first derivative (-f2 + 8 f1 - 8 f-1 + f-2) / (12 h).
GridField diff(const GridField& f, Axis axis);

/// Fourth-order centered second derivative
/// (-f2 + 16 f1 - 30 f0 + 16 f-1 - f-2) / (12 h^2).
GridField diff2(const GridField& f, Axis axis);

/// Samples a function of (x, y) at the grid nodes.
GridField sample(int n, const std::function<double(double, double)>& fn);

/// Translates a field by (di, dj) nodes: out(i, j) = f(i - di, j - dj).
template <class T>
NodeField<T> shifted(const NodeField<T>& f, int di, int dj) {
  NodeField<T> out(f.n());
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j) out(i, j) = f(i - di, j - dj);
  return out;
}

double max_abs(const GridField& f);

/// Sum with Neumaier compensation; the result depends only on the values and
/// their storage order.
double compensated_sum(const std::vector<double>& values);

}  // namespace lagflow
