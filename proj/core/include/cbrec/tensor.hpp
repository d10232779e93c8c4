#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cbrec::ad {

using Shape = std::vector<int>;

int64_t shape_numel(const Shape& s);
std::string shape_to_string(const Shape& s);

// Scoped switch that disables trace recording (inference mode).
class NoGradGuard {
public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;
};

bool grad_enabled();

template <typename T>
struct Node {
  Shape shape;
  std::vector<T> value;
  bool requires_grad = false;
  std::vector<T> grad; // sized lazily by backward()
  std::vector<std::shared_ptr<Node<T>>> inputs;
  std::function<void(Node<T>&)> backprop;
  const char* op = "leaf";

  int64_t numel() const { return int64_t(value.size()); }
  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), T(0));
  }
};

// Value handle over a shared graph node. Copies alias the same storage.
template <typename T>
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, T fill);
  static Tensor from_vector(Shape shape, std::vector<T> data, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int dim(int i) const { return node_->shape[i]; }
  int rank() const { return int(node_->shape.size()); }
  int64_t numel() const { return node_->numel(); }
  bool requires_grad() const { return node_->requires_grad; }

  std::span<const T> data() const { return node_->value; }
  // In-place access for leaves (parameter updates, input staging). Mutating a
  // non-leaf invalidates nothing structurally but is never needed.
  std::span<T> mutable_data() { return node_->value; }
  std::span<const T> grad() const { return node_->grad; }
  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  void zero_grad() {
    if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), T(0));
  }

  T scalar() const { return node_->value.at(0); }

  std::shared_ptr<Node<T>>& node() { return node_; }
  const std::shared_ptr<Node<T>>& node() const { return node_; }

private:
  std::shared_ptr<Node<T>> node_;
};

// Reverse-mode accumulation from a scalar loss. Traverses the trace in
// deterministic topological order, visiting each node exactly once; grads of
// reachable requires_grad tensors are accumulated additively (repeated calls
// keep adding).
template <typename T>
void backward(const Tensor<T>& loss);

extern template struct Node<float>;
extern template struct Node<double>;
extern template class Tensor<float>;
extern template class Tensor<double>;
extern template void backward<float>(const Tensor<float>&);
extern template void backward<double>(const Tensor<double>&);

} // namespace cbrec::ad
