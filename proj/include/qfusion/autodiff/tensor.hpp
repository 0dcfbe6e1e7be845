// Copyright 2026 The qfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file tensor.hpp
 * Reverse-mode automatic differentiation over dense row-major matrices.
 *
 * Every value in a computation is a `Tensor<Scalar>`, a cheap handle to a
 * shared `Node` that owns the forward value, the accumulated gradient and a
 * closure that pushes the node's gradient into its parents. Graphs are built
 * eagerly by the free functions in ops.hpp and released when the last handle
 * to the output goes away. Leaves created with `Tensor::parameter` persist
 * across graphs and accumulate gradients until `zero_grad` is called.
 *
 * All tensors are two-dimensional (rows x cols); a batch of vectors is one
 * row per sample.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qfusion/core/error.hpp"

namespace qfusion::autodiff {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar> struct Node {
    Matrix<Scalar> value;
    Matrix<Scalar> grad;
    bool requires_grad = false;
    bool is_leaf = true;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node &)> backward_fn;
};

template <typename Scalar> class Tensor {
  public:
    using NodeT = Node<Scalar>;
    using MatrixT = Matrix<Scalar>;

    Tensor() = default;
    explicit Tensor(std::shared_ptr<NodeT> node) : node_(std::move(node)) {}

    /// Input data; never receives a gradient.
    static Tensor constant(MatrixT value) { return make_leaf(std::move(value), false); }

    /// Trainable leaf; gradients accumulate across backward passes.
    static Tensor parameter(MatrixT value) { return make_leaf(std::move(value), true); }

    [[nodiscard]] bool defined() const { return static_cast<bool>(node_); }
    [[nodiscard]] Eigen::Index rows() const { return node_->value.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return node_->value.cols(); }
    [[nodiscard]] Eigen::Index size() const { return node_->value.size(); }
    [[nodiscard]] bool requires_grad() const { return node_->requires_grad; }

    [[nodiscard]] const MatrixT &value() const { return node_->value; }
    [[nodiscard]] const MatrixT &grad() const { return node_->grad; }
    /// Direct access for optimizers and initializers; shape must not change.
    [[nodiscard]] MatrixT &mutable_value() { return node_->value; }
    [[nodiscard]] MatrixT &mutable_grad() { return node_->grad; }

    [[nodiscard]] Scalar item() const {
        if (size() != 1) {
            throw UsageError("item() on tensor of shape " +
                             detail::shape_str(rows(), cols()));
        }
        return node_->value(0, 0);
    }

    void zero_grad() { node_->grad.setZero(); }

    [[nodiscard]] const std::shared_ptr<NodeT> &node() const { return node_; }

  private:
    static Tensor make_leaf(MatrixT value, bool requires_grad) {
        auto node = std::make_shared<NodeT>();
        node->grad = MatrixT::Zero(value.rows(), value.cols());
        node->value = std::move(value);
        node->requires_grad = requires_grad;
        node->is_leaf = true;
        return Tensor(std::move(node));
    }

    std::shared_ptr<NodeT> node_;
};

/**
 * Create the output node of an operation.
 *
 * The backward closure receives the output node; it reads `out.grad` and adds
 * into the grads of parents that require them. When no parent requires a
 * gradient the closure and the parent links are dropped.
 */
template <typename Scalar, typename Backward>
Tensor<Scalar> make_result(Matrix<Scalar> value, std::vector<Tensor<Scalar>> parents,
                           Backward &&backward) {
    auto node = std::make_shared<Node<Scalar>>();
    node->grad = Matrix<Scalar>::Zero(value.rows(), value.cols());
    node->value = std::move(value);
    node->is_leaf = false;
    for (const auto &p : parents) {
        if (p.requires_grad()) {
            node->requires_grad = true;
            break;
        }
    }
    if (node->requires_grad) {
        node->parents.reserve(parents.size());
        for (const auto &p : parents) {
            node->parents.push_back(p.node());
        }
        node->backward_fn = std::forward<Backward>(backward);
    }
    return Tensor<Scalar>(std::move(node));
}

namespace detail {

template <typename Scalar>
std::vector<Node<Scalar> *> topological_order(Node<Scalar> *root) {
    std::vector<Node<Scalar> *> order;
    std::unordered_set<Node<Scalar> *> visited;
    // Iterative post-order DFS; (node, next-parent cursor).
    std::vector<std::pair<Node<Scalar> *, std::size_t>> stack;
    stack.emplace_back(root, 0);
    visited.insert(root);
    while (!stack.empty()) {
        auto &[node, cursor] = stack.back();
        if (cursor < node->parents.size()) {
            Node<Scalar> *parent = node->parents[cursor++].get();
            if (parent->requires_grad && visited.insert(parent).second) {
                stack.emplace_back(parent, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    return order;
}

} // namespace detail

/**
 * Back-propagate from a scalar loss. Seeds d(loss)/d(loss) = 1, resets the
 * gradients of intermediate nodes, and accumulates into every reachable leaf
 * that requires a gradient.
 */
template <typename Scalar> void backward(const Tensor<Scalar> &loss) {
    if (!loss.defined() || loss.size() != 1) {
        throw UsageError("backward() requires a scalar loss, got shape " +
                         (loss.defined() ? qfusion::detail::shape_str(loss.rows(), loss.cols())
                                         : std::string("<undefined>")));
    }
    if (!loss.requires_grad()) {
        return;
    }
    auto order = detail::topological_order(loss.node().get());
    for (auto *node : order) {
        if (!node->is_leaf) {
            node->grad.setZero();
        }
    }
    loss.node()->grad(0, 0) += Scalar(1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node<Scalar> *node = *it;
        if (node->backward_fn) {
            node->backward_fn(*node);
        }
    }
}

/// Convenience: zero the gradients of a parameter list.
template <typename Scalar> void zero_grad(std::vector<Tensor<Scalar>> &params) {
    for (auto &p : params) {
        p.zero_grad();
    }
}

} // namespace qfusion::autodiff
