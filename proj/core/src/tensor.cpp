#include "cbrec/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "cbrec/errors.hpp"

namespace cbrec::ad {

namespace {
thread_local int g_no_grad_depth = 0;
}

NoGradGuard::NoGradGuard() { ++g_no_grad_depth; }
NoGradGuard::~NoGradGuard() { --g_no_grad_depth; }
bool grad_enabled() { return g_no_grad_depth == 0; }

int64_t shape_numel(const Shape& s) {
  int64_t n = 1;
  for (int d : s) n *= d;
  return n;
}

std::string shape_to_string(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape, bool requires_grad) {
  auto node = std::make_shared<Node<T>>();
  node->value.assign(size_t(shape_numel(shape)), T(0));
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor<T>(std::move(node));
}

template <typename T>
Tensor<T> Tensor<T>::full(Shape shape, T fill) {
  Tensor<T> t = zeros(std::move(shape), false);
  std::fill(t.node()->value.begin(), t.node()->value.end(), fill);
  return t;
}

template <typename T>
Tensor<T> Tensor<T>::from_vector(Shape shape, std::vector<T> data, bool requires_grad) {
  if (int64_t(data.size()) != shape_numel(shape))
    throw DimensionError("from_vector: data length does not match shape " +
                         shape_to_string(shape));
  auto node = std::make_shared<Node<T>>();
  node->shape = std::move(shape);
  node->value = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor<T>(std::move(node));
}

template <typename T>
void backward(const Tensor<T>& loss) {
  if (!loss.defined() || loss.numel() != 1)
    throw DimensionError("backward: loss must be a defined scalar tensor");
  Node<T>* root = loss.node().get();
  if (!root->requires_grad) return;

  // Iterative post-order DFS; children are visited in input order, so the
  // resulting topological order is deterministic for a given graph.
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> visited;
  std::vector<std::pair<Node<T>*, size_t>> stack;
  stack.emplace_back(root, 0);
  visited.insert(root);
  while (!stack.empty()) {
    Node<T>* node = stack.back().first;
    const size_t next_child = stack.back().second;
    if (next_child < node->inputs.size()) {
      stack.back().second = next_child + 1;
      Node<T>* child = node->inputs[next_child].get();
      if (child->requires_grad && !visited.count(child)) {
        visited.insert(child);
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node<T>* node : order) node->ensure_grad();
  root->grad[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<T>* node = *it;
    if (node->backprop) node->backprop(*node);
  }
}

template struct Node<float>;
template struct Node<double>;
template class Tensor<float>;
template class Tensor<double>;
template void backward<float>(const Tensor<float>&);
template void backward<double>(const Tensor<double>&);

} // namespace cbrec::ad
