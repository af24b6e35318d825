#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bf/diff/array.hpp"

namespace bf::diff {

class ParamStore;

// Recorded operator graph for one forward pass. Node creation order is the
// topological order, so backward() is a single reverse sweep.
class Tape {
 public:
  // Leaf that never needs a gradient (targets, detached teacher features).
  int constant(Array value);

  // Leaf with a gradient slot (inputs under test, parameter values).
  int leaf(Array value);

  // Leaf bound to a named parameter; memoized so each parameter appears on
  // the tape once and accumulates its gradient there.
  int param(ParamStore& store, const std::string& name);

  const Array& val(int id) const { return nodes_[id].value; }
  const Array& grad(int id) const { return nodes_[id].grad; }

  // Reverse sweep from a scalar loss node. Gradients of all leaves (and
  // intermediates) become available afterwards.
  void backward(int loss_id);

  // Name -> gradient for every parameter touched by this tape.
  std::map<std::string, Array> param_grads() const;

  // Internal: used by op implementations.
  struct Node {
    Array value;
    Array grad;
    bool needs_grad = false;
    std::function<void(Tape&)> back;  // empty for leaves
  };
  int emplace(Array value, bool needs_grad, std::function<void(Tape&)> back,
              const char* op_name);
  Node& node(int id) { return nodes_[id]; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  Array& grad_ref(int id) { return nodes_[id].grad; }
  size_t node_count() const { return nodes_.size(); }

 private:
  std::vector<Node> nodes_;
  std::map<std::string, int> param_nodes_;
};

}  // namespace bf::diff
