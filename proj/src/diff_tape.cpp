#include "bf/diff/tape.hpp"

#include <cstring>
#include <fstream>

#include "bf/diff/param_store.hpp"
#include "bf/util/fnv.hpp"
#include "bf/util/rng.hpp"

namespace bf::diff {

int Tape::constant(Array value) {
  return emplace(std::move(value), false, nullptr, "constant");
}

int Tape::leaf(Array value) {
  return emplace(std::move(value), true, nullptr, "leaf");
}

int Tape::param(ParamStore& store, const std::string& name) {
  auto it = param_nodes_.find(name);
  if (it != param_nodes_.end()) return it->second;
  const int id = leaf(store.get(name));
  param_nodes_.emplace(name, id);
  return id;
}

int Tape::emplace(Array value, bool needs_grad, std::function<void(Tape&)> back,
                  const char* op_name) {
  if (!value.all_finite())
    throw NonFiniteValue(std::string("non-finite value produced by ") + op_name);
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void Tape::backward(int loss_id) {
  if (nodes_[loss_id].value.size() != 1)
    throw ShapeMismatch("backward requires a scalar loss node");
  for (Node& n : nodes_)
    if (n.needs_grad) n.grad = Array(n.value.rows(), n.value.cols());
  if (!nodes_[loss_id].needs_grad)
    nodes_[loss_id].grad = Array(1, 1);
  nodes_[loss_id].grad[0] = 1.0;

  for (int id = loss_id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || !n.back) continue;
    n.back(*this);
  }
  for (const Node& n : nodes_) {
    if (!n.needs_grad) continue;
    if (!n.grad.all_finite()) throw NonFiniteGradient("non-finite gradient on tape");
  }
}

std::map<std::string, Array> Tape::param_grads() const {
  std::map<std::string, Array> out;
  for (const auto& [name, id] : param_nodes_) out.emplace(name, nodes_[id].grad);
  return out;
}

Array& ParamStore::create(const std::string& name, int rows, int cols, Init init) {
  if (params_.count(name)) throw ShapeMismatch("duplicate parameter name: " + name);
  Array a(rows, cols);
  if (init == Init::kXavier) {
    // Initial values depend only on (seed, name, shape).
    util::Rng rng(util::derive_seed(seed_, util::fnv1a64(name) ^
                                               (static_cast<uint64_t>(rows) << 32 | cols)));
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform(-bound, bound);
  }
  return params_.emplace(name, std::move(a)).first->second;
}

Array& ParamStore::get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ShapeMismatch("unknown parameter: " + name);
  return it->second;
}

const Array& ParamStore::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ShapeMismatch("unknown parameter: " + name);
  return it->second;
}

void ParamStore::adam_step(const std::map<std::string, Array>& grads, double lr, double beta1,
                           double beta2, double eps) {
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_));
  for (auto& [name, p] : params_) {
    auto git = grads.find(name);
    if (git == grads.end()) continue;
    const Array& g = git->second;
    if (!g.same_shape(p)) throw ShapeMismatch("gradient shape mismatch for " + name);
    if (!g.all_finite()) throw NonFiniteGradient("non-finite gradient for " + name);
    Array& m = m_.try_emplace(name, Array(p.rows(), p.cols())).first->second;
    Array& v = v_.try_emplace(name, Array(p.rows(), p.cols())).first->second;
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

namespace {

constexpr char kMagic[8] = {'B', 'F', 'T', 'E', 'N', 'S', 'R', '1'};

void write_u64(std::ofstream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
uint64_t read_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_section(std::ofstream& out, uint8_t kind, const std::string& name, const Array& a) {
  out.put(static_cast<char>(kind));
  write_u64(out, name.size());
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u64(out, static_cast<uint64_t>(a.rows()));
  write_u64(out, static_cast<uint64_t>(a.cols()));
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
}

}  // namespace

void ParamStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, seed_);
  write_u64(out, static_cast<uint64_t>(step_));
  write_u64(out, params_.size() + m_.size() + v_.size());
  for (const auto& [name, a] : params_) write_section(out, 0, name, a);
  for (const auto& [name, a] : m_) write_section(out, 1, name, a);
  for (const auto& [name, a] : v_) write_section(out, 2, name, a);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ParamStore ParamStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a parameter file: " + path);
  ParamStore store;
  store.seed_ = read_u64(in);
  store.step_ = static_cast<long>(read_u64(in));
  const uint64_t n = read_u64(in);
  for (uint64_t i = 0; i < n; ++i) {
    const int kind = in.get();
    const uint64_t name_len = read_u64(in);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    const uint64_t rows = read_u64(in);
    const uint64_t cols = read_u64(in);
    Array a(static_cast<int>(rows), static_cast<int>(cols));
    in.read(reinterpret_cast<char*>(a.data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated parameter file: " + path);
    if (kind == 0)
      store.params_.emplace(std::move(name), std::move(a));
    else if (kind == 1)
      store.m_.emplace(std::move(name), std::move(a));
    else
      store.v_.emplace(std::move(name), std::move(a));
  }
  return store;
}

}  // namespace bf::diff
