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
 * @file ops.hpp
 * Differentiable operations on `Tensor<Scalar>`. Each function computes its
 * forward value eagerly and registers the matching vector-Jacobian product.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qfusion/autodiff/tensor.hpp"

namespace qfusion::autodiff {

namespace detail {

template <typename Scalar> inline bool wants_grad(const Tensor<Scalar> &t) {
    return t.defined() && t.requires_grad();
}

template <typename Scalar>
void require_same_shape(const Tensor<Scalar> &a, const Tensor<Scalar> &b, const char *op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " +
                             qfusion::detail::shape_str(a.rows(), a.cols()) + " vs " +
                             qfusion::detail::shape_str(b.rows(), b.cols()));
    }
}

} // namespace detail

template <typename Scalar>
Tensor<Scalar> matmul(const Tensor<Scalar> &a, const Tensor<Scalar> &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions differ " +
                             qfusion::detail::shape_str(a.rows(), a.cols()) + " x " +
                             qfusion::detail::shape_str(b.rows(), b.cols()));
    }
    Matrix<Scalar> out = a.value() * b.value();
    return make_result<Scalar>(std::move(out), {a, b}, [a, b](Node<Scalar> &self) {
        if (detail::wants_grad(a)) {
            a.node()->grad.noalias() += self.grad * b.value().transpose();
        }
        if (detail::wants_grad(b)) {
            b.node()->grad.noalias() += a.value().transpose() * self.grad;
        }
    });
}

/// x * weightᵀ + bias, with weight stored (out x in) and bias (1 x out).
/// `bias` may be an undefined tensor.
template <typename Scalar>
Tensor<Scalar> linear(const Tensor<Scalar> &x, const Tensor<Scalar> &weight,
                      const Tensor<Scalar> &bias) {
    if (x.cols() != weight.cols()) {
        throw DimensionError("linear: input width " + std::to_string(x.cols()) +
                             " does not match weight " +
                             qfusion::detail::shape_str(weight.rows(), weight.cols()));
    }
    if (bias.defined() && (bias.rows() != 1 || bias.cols() != weight.rows())) {
        throw DimensionError("linear: bias shape " +
                             qfusion::detail::shape_str(bias.rows(), bias.cols()));
    }
    Matrix<Scalar> out = x.value() * weight.value().transpose();
    if (bias.defined()) {
        out.rowwise() += bias.value().row(0);
    }
    std::vector<Tensor<Scalar>> parents{x, weight};
    if (bias.defined()) {
        parents.push_back(bias);
    }
    return make_result<Scalar>(std::move(out), std::move(parents),
                               [x, weight, bias](Node<Scalar> &self) {
                                   if (detail::wants_grad(x)) {
                                       x.node()->grad.noalias() += self.grad * weight.value();
                                   }
                                   if (detail::wants_grad(weight)) {
                                       weight.node()->grad.noalias() +=
                                           self.grad.transpose() * x.value();
                                   }
                                   if (detail::wants_grad(bias)) {
                                       bias.node()->grad += self.grad.colwise().sum();
                                   }
                               });
}

template <typename Scalar>
Tensor<Scalar> add(const Tensor<Scalar> &a, const Tensor<Scalar> &b) {
    detail::require_same_shape(a, b, "add");
    Matrix<Scalar> out = a.value() + b.value();
    return make_result<Scalar>(std::move(out), {a, b}, [a, b](Node<Scalar> &self) {
        if (detail::wants_grad(a)) {
            a.node()->grad += self.grad;
        }
        if (detail::wants_grad(b)) {
            b.node()->grad += self.grad;
        }
    });
}

template <typename Scalar>
Tensor<Scalar> sub(const Tensor<Scalar> &a, const Tensor<Scalar> &b) {
    detail::require_same_shape(a, b, "sub");
    Matrix<Scalar> out = a.value() - b.value();
    return make_result<Scalar>(std::move(out), {a, b}, [a, b](Node<Scalar> &self) {
        if (detail::wants_grad(a)) {
            a.node()->grad += self.grad;
        }
        if (detail::wants_grad(b)) {
            b.node()->grad -= self.grad;
        }
    });
}

/// Elementwise product.
template <typename Scalar>
Tensor<Scalar> mul(const Tensor<Scalar> &a, const Tensor<Scalar> &b) {
    detail::require_same_shape(a, b, "mul");
    Matrix<Scalar> out = a.value().cwiseProduct(b.value());
    return make_result<Scalar>(std::move(out), {a, b}, [a, b](Node<Scalar> &self) {
        if (detail::wants_grad(a)) {
            a.node()->grad += self.grad.cwiseProduct(b.value());
        }
        if (detail::wants_grad(b)) {
            b.node()->grad += self.grad.cwiseProduct(a.value());
        }
    });
}

template <typename Scalar> Tensor<Scalar> scale(const Tensor<Scalar> &a, Scalar factor) {
    Matrix<Scalar> out = a.value() * factor;
    return make_result<Scalar>(std::move(out), {a}, [a, factor](Node<Scalar> &self) {
        a.node()->grad += self.grad * factor;
    });
}

/// x (n x m) plus a (1 x m) row added to every row.
template <typename Scalar>
Tensor<Scalar> add_row(const Tensor<Scalar> &x, const Tensor<Scalar> &row) {
    if (row.rows() != 1 || row.cols() != x.cols()) {
        throw DimensionError("add_row: row shape " +
                             qfusion::detail::shape_str(row.rows(), row.cols()));
    }
    Matrix<Scalar> out = x.value();
    out.rowwise() += row.value().row(0);
    return make_result<Scalar>(std::move(out), {x, row}, [x, row](Node<Scalar> &self) {
        if (detail::wants_grad(x)) {
            x.node()->grad += self.grad;
        }
        if (detail::wants_grad(row)) {
            row.node()->grad += self.grad.colwise().sum();
        }
    });
}

/// Row i of x gets row (i mod table.rows()) of `table` added.
template <typename Scalar>
Tensor<Scalar> add_tiled_rows(const Tensor<Scalar> &x, const Tensor<Scalar> &table) {
    const Eigen::Index period = table.rows();
    if (table.cols() != x.cols() || period == 0 || x.rows() % period != 0) {
        throw DimensionError("add_tiled_rows: table " +
                             qfusion::detail::shape_str(table.rows(), table.cols()) +
                             " does not tile " + qfusion::detail::shape_str(x.rows(), x.cols()));
    }
    Matrix<Scalar> out = x.value();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        out.row(r) += table.value().row(r % period);
    }
    return make_result<Scalar>(std::move(out), {x, table},
                               [x, table, period](Node<Scalar> &self) {
                                   if (detail::wants_grad(x)) {
                                       x.node()->grad += self.grad;
                                   }
                                   if (detail::wants_grad(table)) {
                                       auto &g = table.node()->grad;
                                       for (Eigen::Index r = 0; r < self.grad.rows(); ++r) {
                                           g.row(r % period) += self.grad.row(r);
                                       }
                                   }
                               });
}

template <typename Scalar> Tensor<Scalar> sum(const Tensor<Scalar> &x) {
    Matrix<Scalar> out(1, 1);
    out(0, 0) = x.value().sum();
    return make_result<Scalar>(std::move(out), {x}, [x](Node<Scalar> &self) {
        x.node()->grad.array() += self.grad(0, 0);
    });
}

template <typename Scalar> Tensor<Scalar> mean(const Tensor<Scalar> &x) {
    const auto n = static_cast<Scalar>(x.size());
    Matrix<Scalar> out(1, 1);
    out(0, 0) = x.value().sum() / n;
    return make_result<Scalar>(std::move(out), {x}, [x, n](Node<Scalar> &self) {
        x.node()->grad.array() += self.grad(0, 0) / n;
    });
}

namespace detail {
template <typename Scalar> constexpr Scalar kGeluCoeff = Scalar(0.044715);
template <typename Scalar> inline Scalar gelu_inner_scale() {
    return std::sqrt(Scalar(2) / std::numbers::pi_v<Scalar>);
}
} // namespace detail

/// GELU, tanh approximation: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3))).
template <typename Scalar> Tensor<Scalar> gelu(const Tensor<Scalar> &x) {
    const Scalar c = detail::gelu_inner_scale<Scalar>();
    const Scalar k = detail::kGeluCoeff<Scalar>;
    Matrix<Scalar> t = (c * (x.value().array() + k * x.value().array().cube())).tanh().matrix();
    Matrix<Scalar> out = (Scalar(0.5) * x.value().array() * (Scalar(1) + t.array())).matrix();
    return make_result<Scalar>(std::move(out), {x}, [x, t, c, k](Node<Scalar> &self) {
        const auto xa = x.value().array();
        const auto ta = t.array();
        auto dydx = Scalar(0.5) * (Scalar(1) + ta) +
                    Scalar(0.5) * xa * (Scalar(1) - ta.square()) * c *
                        (Scalar(1) + Scalar(3) * k * xa.square());
        x.node()->grad.array() += self.grad.array() * dydx;
    });
}

template <typename Scalar> Tensor<Scalar> sigmoid(const Tensor<Scalar> &x) {
    Matrix<Scalar> out =
        (Scalar(1) / (Scalar(1) + (-x.value().array()).exp())).matrix();
    Matrix<Scalar> y = out;
    return make_result<Scalar>(std::move(out), {x}, [x, y](Node<Scalar> &self) {
        x.node()->grad.array() +=
            self.grad.array() * y.array() * (Scalar(1) - y.array());
    });
}

template <typename Scalar> Tensor<Scalar> tanh(const Tensor<Scalar> &x) {
    Matrix<Scalar> out = x.value().array().tanh().matrix();
    Matrix<Scalar> y = out;
    return make_result<Scalar>(std::move(out), {x}, [x, y](Node<Scalar> &self) {
        x.node()->grad.array() += self.grad.array() * (Scalar(1) - y.array().square());
    });
}

namespace detail {
template <typename Scalar> Matrix<Scalar> softmax_rows_value(const Matrix<Scalar> &x) {
    Matrix<Scalar> y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const Scalar m = x.row(r).maxCoeff();
        y.row(r) = (x.row(r).array() - m).exp().matrix();
        y.row(r) /= y.row(r).sum();
    }
    return y;
}
} // namespace detail

template <typename Scalar> Tensor<Scalar> softmax_rows(const Tensor<Scalar> &x) {
    Matrix<Scalar> out = detail::softmax_rows_value(x.value());
    Matrix<Scalar> y = out;
    return make_result<Scalar>(std::move(out), {x}, [x, y](Node<Scalar> &self) {
        const auto dot = (self.grad.cwiseProduct(y)).rowwise().sum();
        x.node()->grad.array() +=
            y.array() * (self.grad.colwise() - dot).array();
    });
}

/**
 * Row-wise LayerNorm with population variance and `eps` inside the square
 * root, followed by the affine map gain ⊙ x̂ + bias (both 1 x D).
 */
template <typename Scalar>
Tensor<Scalar> layer_norm(const Tensor<Scalar> &x, const Tensor<Scalar> &gain,
                          const Tensor<Scalar> &bias, Scalar eps = Scalar(1e-5)) {
    const Eigen::Index width = x.cols();
    if (width < 1 || gain.rows() != 1 || gain.cols() != width || bias.rows() != 1 ||
        bias.cols() != width) {
        throw DimensionError("layer_norm: gain/bias must be 1x" + std::to_string(width));
    }
    const auto n = static_cast<Scalar>(width);
    Matrix<Scalar> xhat(x.rows(), width);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_std(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const Scalar mu = x.value().row(r).sum() / n;
        const auto centered = (x.value().row(r).array() - mu).eval();
        const Scalar var = centered.square().sum() / n;
        inv_std(r) = Scalar(1) / std::sqrt(var + eps);
        xhat.row(r) = (centered * inv_std(r)).matrix();
    }
    Matrix<Scalar> out = xhat.array().rowwise() * gain.value().row(0).array();
    out.rowwise() += bias.value().row(0);
    return make_result<Scalar>(
        std::move(out), {x, gain, bias}, [x, gain, bias, xhat, inv_std, n](Node<Scalar> &self) {
            if (detail::wants_grad(gain)) {
                gain.node()->grad += self.grad.cwiseProduct(xhat).colwise().sum();
            }
            if (detail::wants_grad(bias)) {
                bias.node()->grad += self.grad.colwise().sum();
            }
            if (detail::wants_grad(x)) {
                Matrix<Scalar> dxhat = self.grad.array().rowwise() * gain.value().row(0).array();
                for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
                    const Scalar s1 = dxhat.row(r).sum();
                    const Scalar s2 = dxhat.row(r).dot(xhat.row(r));
                    x.node()->grad.row(r).array() +=
                        (inv_std(r) / n) *
                        (n * dxhat.row(r).array() - s1 - xhat.row(r).array() * s2);
                }
            }
        });
}

/**
 * Inverted dropout: in training mode each element is zeroed with probability
 * `p` and survivors are scaled by 1/(1-p). In evaluation mode, or with p = 0,
 * the input tensor itself is returned.
 */
template <typename Scalar, typename Rng>
Tensor<Scalar> dropout(const Tensor<Scalar> &x, double p, bool training, Rng &rng) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw ConfigError("dropout probability must lie in [0, 1), got " + std::to_string(p));
    }
    if (!training || p == 0.0) {
        return x;
    }
    const Scalar keep_scale = Scalar(1.0 / (1.0 - p));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix<Scalar> mask(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < mask.size(); ++i) {
        mask.data()[i] = unif(rng) < p ? Scalar(0) : keep_scale;
    }
    Matrix<Scalar> out = x.value().cwiseProduct(mask);
    return make_result<Scalar>(std::move(out), {x}, [x, mask](Node<Scalar> &self) {
        x.node()->grad += self.grad.cwiseProduct(mask);
    });
}

template <typename Scalar>
Tensor<Scalar> concat_cols(const Tensor<Scalar> &a, const Tensor<Scalar> &b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("concat_cols: row counts differ " + std::to_string(a.rows()) +
                             " vs " + std::to_string(b.rows()));
    }
    Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
    out.leftCols(a.cols()) = a.value();
    out.rightCols(b.cols()) = b.value();
    const Eigen::Index ac = a.cols();
    const Eigen::Index bc = b.cols();
    return make_result<Scalar>(std::move(out), {a, b}, [a, b, ac, bc](Node<Scalar> &self) {
        if (detail::wants_grad(a)) {
            a.node()->grad += self.grad.leftCols(ac);
        }
        if (detail::wants_grad(b)) {
            b.node()->grad += self.grad.rightCols(bc);
        }
    });
}

/// Row-major reshape; element order is preserved.
template <typename Scalar>
Tensor<Scalar> reshape(const Tensor<Scalar> &x, Eigen::Index rows, Eigen::Index cols) {
    if (rows * cols != x.size()) {
        throw DimensionError("reshape: cannot view " +
                             qfusion::detail::shape_str(x.rows(), x.cols()) + " as " +
                             qfusion::detail::shape_str(rows, cols));
    }
    Matrix<Scalar> out = Eigen::Map<const Matrix<Scalar>>(x.value().data(), rows, cols);
    const Eigen::Index r0 = x.rows();
    const Eigen::Index c0 = x.cols();
    return make_result<Scalar>(std::move(out), {x}, [x, r0, c0](Node<Scalar> &self) {
        x.node()->grad += Eigen::Map<const Matrix<Scalar>>(self.grad.data(), r0, c0);
    });
}

/**
 * Build a token sequence per sample: for sample b the output holds
 * `lead.row(b)` followed by rows b*count ... b*count+count-1 of `tokens`.
 * Output has lead.rows() * (count + 1) rows.
 */
template <typename Scalar>
Tensor<Scalar> prepend_token(const Tensor<Scalar> &lead, const Tensor<Scalar> &tokens,
                             Eigen::Index count) {
    const Eigen::Index batch = lead.rows();
    if (lead.cols() != tokens.cols() || tokens.rows() != batch * count) {
        throw DimensionError("prepend_token: expected tokens " +
                             qfusion::detail::shape_str(batch * count, lead.cols()) + ", got " +
                             qfusion::detail::shape_str(tokens.rows(), tokens.cols()));
    }
    const Eigen::Index seq = count + 1;
    Matrix<Scalar> out(batch * seq, lead.cols());
    for (Eigen::Index b = 0; b < batch; ++b) {
        out.row(b * seq) = lead.value().row(b);
        out.middleRows(b * seq + 1, count) = tokens.value().middleRows(b * count, count);
    }
    return make_result<Scalar>(
        std::move(out), {lead, tokens}, [lead, tokens, batch, count, seq](Node<Scalar> &self) {
            for (Eigen::Index b = 0; b < batch; ++b) {
                if (detail::wants_grad(lead)) {
                    lead.node()->grad.row(b) += self.grad.row(b * seq);
                }
                if (detail::wants_grad(tokens)) {
                    tokens.node()->grad.middleRows(b * count, count) +=
                        self.grad.middleRows(b * seq + 1, count);
                }
            }
        });
}

/// Rows offset, offset + stride, offset + 2 stride, ...
template <typename Scalar>
Tensor<Scalar> take_rows(const Tensor<Scalar> &x, Eigen::Index stride, Eigen::Index offset) {
    if (stride < 1 || offset < 0 || offset >= stride || x.rows() % stride != 0) {
        throw DimensionError("take_rows: bad stride/offset for " +
                             qfusion::detail::shape_str(x.rows(), x.cols()));
    }
    const Eigen::Index n = x.rows() / stride;
    Matrix<Scalar> out(n, x.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        out.row(i) = x.value().row(i * stride + offset);
    }
    return make_result<Scalar>(std::move(out), {x}, [x, n, stride, offset](Node<Scalar> &self) {
        for (Eigen::Index i = 0; i < n; ++i) {
            x.node()->grad.row(i * stride + offset) += self.grad.row(i);
        }
    });
}

/**
 * Convex gate: sigmoid(a) * x + (1 - sigmoid(a)) * y for a 1 x 1 logit `a`.
 */
template <typename Scalar>
Tensor<Scalar> gate_mix(const Tensor<Scalar> &a, const Tensor<Scalar> &x,
                        const Tensor<Scalar> &y) {
    if (a.size() != 1) {
        throw DimensionError("gate_mix: gate logit must be 1x1");
    }
    detail::require_same_shape(x, y, "gate_mix");
    const Scalar alpha = Scalar(1) / (Scalar(1) + std::exp(-a.value()(0, 0)));
    Matrix<Scalar> out = alpha * x.value() + (Scalar(1) - alpha) * y.value();
    return make_result<Scalar>(std::move(out), {a, x, y}, [a, x, y, alpha](Node<Scalar> &self) {
        if (detail::wants_grad(a)) {
            const Scalar d = self.grad.cwiseProduct(x.value() - y.value()).sum();
            a.node()->grad(0, 0) += d * alpha * (Scalar(1) - alpha);
        }
        if (detail::wants_grad(x)) {
            x.node()->grad += alpha * self.grad;
        }
        if (detail::wants_grad(y)) {
            y.node()->grad += (Scalar(1) - alpha) * self.grad;
        }
    });
}

/**
 * Multi-head scaled dot-product attention over sequences packed as
 * consecutive row blocks of length `seq_len`. q, k, v are (B*seq_len) x D;
 * head h uses columns [h*D/H, (h+1)*D/H). Scores are scaled by 1/sqrt(D/H).
 *
 * If `weights_out` is non-null it receives the B*H attention matrices
 * (seq_len x seq_len each), ordered sample-major.
 */
template <typename Scalar>
Tensor<Scalar> scaled_dot_product_attention(const Tensor<Scalar> &q, const Tensor<Scalar> &k,
                                            const Tensor<Scalar> &v, Eigen::Index seq_len,
                                            Eigen::Index heads,
                                            std::vector<Matrix<Scalar>> *weights_out = nullptr) {
    detail::require_same_shape(q, k, "attention");
    detail::require_same_shape(q, v, "attention");
    const Eigen::Index width = q.cols();
    if (heads < 1 || width % heads != 0) {
        throw ConfigError("attention: width " + std::to_string(width) +
                          " not divisible by head count " + std::to_string(heads));
    }
    if (seq_len < 1 || q.rows() % seq_len != 0) {
        throw DimensionError("attention: rows not a multiple of sequence length");
    }
    const Eigen::Index batch = q.rows() / seq_len;
    const Eigen::Index dh = width / heads;
    const Scalar inv_scale = Scalar(1) / std::sqrt(static_cast<Scalar>(dh));

    std::vector<Matrix<Scalar>> probs(static_cast<std::size_t>(batch * heads));
    Matrix<Scalar> out(q.rows(), width);
    for (Eigen::Index b = 0; b < batch; ++b) {
        for (Eigen::Index h = 0; h < heads; ++h) {
            const auto qh = q.value().block(b * seq_len, h * dh, seq_len, dh);
            const auto kh = k.value().block(b * seq_len, h * dh, seq_len, dh);
            const auto vh = v.value().block(b * seq_len, h * dh, seq_len, dh);
            Matrix<Scalar> scores = (qh * kh.transpose()) * inv_scale;
            auto &p = probs[static_cast<std::size_t>(b * heads + h)];
            p = detail::softmax_rows_value(scores);
            out.block(b * seq_len, h * dh, seq_len, dh).noalias() = p * vh;
        }
    }
    if (weights_out != nullptr) {
        *weights_out = probs;
    }
    return make_result<Scalar>(
        std::move(out), {q, k, v},
        [q, k, v, probs = std::move(probs), batch, heads, seq_len, dh,
         inv_scale](Node<Scalar> &self) {
            for (Eigen::Index b = 0; b < batch; ++b) {
                for (Eigen::Index h = 0; h < heads; ++h) {
                    const auto &p = probs[static_cast<std::size_t>(b * heads + h)];
                    const auto go = self.grad.block(b * seq_len, h * dh, seq_len, dh);
                    const auto qh = q.value().block(b * seq_len, h * dh, seq_len, dh);
                    const auto kh = k.value().block(b * seq_len, h * dh, seq_len, dh);
                    const auto vh = v.value().block(b * seq_len, h * dh, seq_len, dh);
                    if (detail::wants_grad(v)) {
                        v.node()->grad.block(b * seq_len, h * dh, seq_len, dh).noalias() +=
                            p.transpose() * go;
                    }
                    Matrix<Scalar> dp = go * vh.transpose();
                    const auto dot = dp.cwiseProduct(p).rowwise().sum();
                    Matrix<Scalar> ds = (p.array() * (dp.colwise() - dot).array()).matrix();
                    ds *= inv_scale;
                    if (detail::wants_grad(q)) {
                        q.node()->grad.block(b * seq_len, h * dh, seq_len, dh).noalias() +=
                            ds * kh;
                    }
                    if (detail::wants_grad(k)) {
                        k.node()->grad.block(b * seq_len, h * dh, seq_len, dh).noalias() +=
                            ds.transpose() * qh;
                    }
                }
            }
        });
}

} // namespace qfusion::autodiff
