#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "bf/diff/array.hpp"

namespace bf::diff {

enum class Init { kZero, kXavier };

// Named parameters plus Adam moments. Iteration order is sorted by name, so
// updates and serialization are deterministic. Initial values depend only on
// (seed, name, shape), never on creation order.
class ParamStore {
 public:
  ParamStore() = default;
  explicit ParamStore(uint64_t seed) : seed_(seed) {}

  Array& create(const std::string& name, int rows, int cols, Init init);
  bool has(const std::string& name) const { return params_.count(name) > 0; }
  Array& get(const std::string& name);
  const Array& get(const std::string& name) const;

  const std::map<std::string, Array>& params() const { return params_; }
  uint64_t seed() const { return seed_; }
  long step() const { return step_; }

  // Standard Adam with bias correction; parameters without a gradient entry
  // are left untouched.
  void adam_step(const std::map<std::string, Array>& grads, double lr, double beta1 = 0.9,
                 double beta2 = 0.999, double eps = 1e-8);

  // Named-tensor file; round-trips bit-exactly (raw little-endian doubles).
  void save(const std::string& path) const;
  static ParamStore load(const std::string& path);

  friend bool operator==(const ParamStore& a, const ParamStore& b) {
    return a.seed_ == b.seed_ && a.step_ == b.step_ && a.params_ == b.params_ &&
           a.m_ == b.m_ && a.v_ == b.v_;
  }

 private:
  uint64_t seed_ = 0;
  long step_ = 0;
  std::map<std::string, Array> params_;
  std::map<std::string, Array> m_;
  std::map<std::string, Array> v_;
};

}  // namespace bf::diff
