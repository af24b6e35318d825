#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace bf::diff {

struct ShapeMismatch : std::runtime_error {
  explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteValue : std::runtime_error {
  explicit NonFiniteValue(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteGradient : std::runtime_error {
  explicit NonFiniteGradient(const std::string& what) : std::runtime_error(what) {}
};

// Dense 2-D array of 64-bit reals. Scalars are [1,1]; vectors are rows.
class Array {
 public:
  Array() = default;
  Array(int rows, int cols) : shape_{rows, cols}, v_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw ShapeMismatch("negative array dimension");
  }

  static Array zeros(int rows, int cols) { return Array(rows, cols); }
  static Array full(int rows, int cols, double value) {
    Array a(rows, cols);
    for (double& x : a.v_) x = value;
    return a;
  }
  static Array scalar(double value) { return full(1, 1, value); }
  static Array row(std::initializer_list<double> values) {
    Array a(1, static_cast<int>(values.size()));
    int i = 0;
    for (double x : values) a.v_[i++] = x;
    return a;
  }
  static Array from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    Array a(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c) throw ShapeMismatch("ragged initializer");
      for (double x : row) a.v_[i++] = x;
    }
    return a;
  }

  int rows() const { return shape_[0]; }
  int cols() const { return shape_[1]; }
  size_t size() const { return v_.size(); }
  const std::vector<int>& shape() const { return shape_; }
  bool same_shape(const Array& o) const { return shape_ == o.shape_; }

  double& at(int r, int c) { return v_[static_cast<size_t>(r) * shape_[1] + c]; }
  double at(int r, int c) const { return v_[static_cast<size_t>(r) * shape_[1] + c]; }
  double& operator[](size_t i) { return v_[i]; }
  double operator[](size_t i) const { return v_[i]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  double scalar_value() const {
    if (size() != 1) throw ShapeMismatch("scalar_value on non-scalar array");
    return v_[0];
  }

  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  friend bool operator==(const Array& a, const Array& b) {
    return a.shape_ == b.shape_ && a.v_ == b.v_;
  }

 private:
  std::vector<int> shape_{0, 0};
  std::vector<double> v_;
};

}  // namespace bf::diff
