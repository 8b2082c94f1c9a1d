// Copyright 2026 The gensug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gensug/ndgrad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

namespace gensug::nd {

namespace {

using ImplPtr = std::shared_ptr<TensorImpl>;

bool wants_record(std::initializer_list<const Tensor*> inputs) {
  if (active_graph() == nullptr) return false;
  for (const auto* t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

bool wants_record(std::span<const Tensor> inputs) {
  if (active_graph() == nullptr) return false;
  for (const auto& t : inputs) {
    if (t.requires_grad()) return true;
  }
  return false;
}

Tensor new_output(Shape shape, bool record) {
  return Tensor::zeros(std::move(shape), record);
}

void record(OpKind kind, std::vector<ImplPtr> inputs, const Tensor& out,
            std::function<void(const NodeRecord&)> fn) {
  active_graph()->record(
      NodeRecord{kind, std::move(inputs), out.impl(), std::move(fn)});
}

void require_rank2(const char* op, const Tensor& a) {
  if (a.rank() != 2) throw ShapeError(op, {a.shape()}, "expected rank 2");
}

void require_same(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) throw ShapeError(op, {a.shape(), b.shape()});
}

// Elementwise unary op: forward f(x), derivative expressed via (x, y).
template <typename Fwd, typename Deriv>
Tensor unary(OpKind kind, const Tensor& a, Fwd fwd, Deriv deriv) {
  const bool rec = wants_record({&a});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = fwd(x[i]);
  if (rec) {
    record(kind, {a.impl()}, out, [deriv](const NodeRecord& n) {
      auto& in = *n.inputs[0];
      if (!in.requires_grad) return;
      const auto& gy = n.output->grad;
      const auto& yv = n.output->data;
      for (std::size_t i = 0; i < gy.size(); ++i) {
        in.grad[i] += gy[i] * deriv(in.data[i], yv[i]);
      }
    });
  }
  return out;
}

double stable_sigmoid(double x) {
  if (x >= 0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2("matmul", a);
  require_rank2("matmul", b);
  const std::size_t n = a.shape()[0], k = a.shape()[1], m = b.shape()[1];
  if (b.shape()[0] != k) throw ShapeError("matmul", {a.shape(), b.shape()});
  const bool rec = wants_record({&a, &b});
  Tensor out = new_output({n, m}, rec);
  const double* A = a.data().data();
  const double* B = b.data().data();
  double* C = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = C + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = A[i * k + p];
      if (av == 0.0) continue;
      const double* brow = B + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
  if (rec) {
    record(OpKind::kMatMul, {a.impl(), b.impl()}, out,
           [n, k, m](const NodeRecord& nd) {
             const auto& ia = *nd.inputs[0];
             const auto& ib = *nd.inputs[1];
             const double* G = nd.output->grad.data();
             if (ia.requires_grad) {
               double* GA = nd.inputs[0]->grad.data();
               const double* Bv = ib.data.data();
               for (std::size_t i = 0; i < n; ++i) {
                 for (std::size_t p = 0; p < k; ++p) {
                   double acc = 0.0;
                   for (std::size_t j = 0; j < m; ++j) {
                     acc += G[i * m + j] * Bv[p * m + j];
                   }
                   GA[i * k + p] += acc;
                 }
               }
             }
             if (ib.requires_grad) {
               double* GB = nd.inputs[1]->grad.data();
               const double* Av = ia.data.data();
               for (std::size_t i = 0; i < n; ++i) {
                 for (std::size_t p = 0; p < k; ++p) {
                   const double av = Av[i * k + p];
                   if (av == 0.0) continue;
                   for (std::size_t j = 0; j < m; ++j) {
                     GB[p * m + j] += av * G[i * m + j];
                   }
                 }
               }
             }
           });
  }
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  require_rank2("matmul_nt", a);
  require_rank2("matmul_nt", b);
  const std::size_t n = a.shape()[0], k = a.shape()[1], m = b.shape()[0];
  if (b.shape()[1] != k) throw ShapeError("matmul_nt", {a.shape(), b.shape()});
  const bool rec = wants_record({&a, &b});
  Tensor out = new_output({n, m}, rec);
  const double* A = a.data().data();
  const double* B = b.data().data();
  double* C = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = A + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const double* brow = B + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      C[i * m + j] = acc;
    }
  }
  if (rec) {
    record(OpKind::kMatMulNT, {a.impl(), b.impl()}, out,
           [n, k, m](const NodeRecord& nd) {
             const auto& ia = *nd.inputs[0];
             const auto& ib = *nd.inputs[1];
             const double* G = nd.output->grad.data();
             double* GA = ia.requires_grad ? nd.inputs[0]->grad.data() : nullptr;
             double* GB = ib.requires_grad ? nd.inputs[1]->grad.data() : nullptr;
             const double* Av = ia.data.data();
             const double* Bv = ib.data.data();
             for (std::size_t i = 0; i < n; ++i) {
               for (std::size_t j = 0; j < m; ++j) {
                 const double g = G[i * m + j];
                 if (g == 0.0) continue;
                 if (GA) {
                   for (std::size_t p = 0; p < k; ++p) GA[i * k + p] += g * Bv[j * k + p];
                 }
                 if (GB) {
                   for (std::size_t p = 0; p < k; ++p) GB[j * k + p] += g * Av[i * k + p];
                 }
               }
             }
           });
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  require_rank2("transpose", a);
  const std::size_t n = a.shape()[0], m = a.shape()[1];
  const bool rec = wants_record({&a});
  Tensor out = new_output({m, n}, rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) y[j * n + i] = x[i * m + j];
  if (rec) {
    record(OpKind::kTranspose, {a.impl()}, out, [n, m](const NodeRecord& nd) {
      auto& gx = nd.inputs[0]->grad;
      const auto& gy = nd.output->grad;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) gx[i * m + j] += gy[j * n + i];
    });
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same("add", a, b);
  const bool rec = wants_record({&a, &b});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data(), z = b.data();
  auto y = out.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + z[i];
  if (rec) {
    record(OpKind::kAdd, {a.impl(), b.impl()}, out, [](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      for (const auto& in : nd.inputs) {
        if (!in->requires_grad) continue;
        for (std::size_t i = 0; i < g.size(); ++i) in->grad[i] += g[i];
      }
    });
  }
  return out;
}

Tensor add_bias(const Tensor& a, const Tensor& bias) {
  require_rank2("add_bias", a);
  const std::size_t n = a.shape()[0], m = a.shape()[1];
  if (bias.numel() != m) throw ShapeError("add_bias", {a.shape(), bias.shape()});
  const bool rec = wants_record({&a, &bias});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data(), bv = bias.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) y[i * m + j] = x[i * m + j] + bv[j];
  if (rec) {
    record(OpKind::kAddBias, {a.impl(), bias.impl()}, out,
           [n, m](const NodeRecord& nd) {
             const auto& g = nd.output->grad;
             if (nd.inputs[0]->requires_grad) {
               auto& ga = nd.inputs[0]->grad;
               for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
             }
             if (nd.inputs[1]->requires_grad) {
               auto& gb = nd.inputs[1]->grad;
               for (std::size_t i = 0; i < n; ++i)
                 for (std::size_t j = 0; j < m; ++j) gb[j] += g[i * m + j];
             }
           });
  }
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same("sub", a, b);
  const bool rec = wants_record({&a, &b});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data(), z = b.data();
  auto y = out.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - z[i];
  if (rec) {
    record(OpKind::kSub, {a.impl(), b.impl()}, out, [](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      if (nd.inputs[0]->requires_grad) {
        auto& ga = nd.inputs[0]->grad;
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
      }
      if (nd.inputs[1]->requires_grad) {
        auto& gb = nd.inputs[1]->grad;
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
      }
    });
  }
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same("mul", a, b);
  const bool rec = wants_record({&a, &b});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data(), z = b.data();
  auto y = out.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * z[i];
  if (rec) {
    record(OpKind::kMul, {a.impl(), b.impl()}, out, [](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      auto& ia = *nd.inputs[0];
      auto& ib = *nd.inputs[1];
      if (ia.requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) ia.grad[i] += g[i] * ib.data[i];
      if (ib.requires_grad)
        for (std::size_t i = 0; i < g.size(); ++i) ib.grad[i] += g[i] * ia.data[i];
    });
  }
  return out;
}

Tensor scale(const Tensor& a, double s) {
  return unary(
      OpKind::kScale, a, [s](double x) { return s * x; },
      [s](double, double) { return s; });
}

Tensor add_scalar(const Tensor& a, double s) {
  return unary(
      OpKind::kAddScalar, a, [s](double x) { return x + s; },
      [](double, double) { return 1.0; });
}

Tensor neg(const Tensor& a) { return scale(a, -1.0); }

Tensor relu(const Tensor& a) {
  return unary(
      OpKind::kRelu, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor hinge(const Tensor& a) {
  return unary(
      OpKind::kHinge, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor tanh(const Tensor& a) {
  return unary(
      OpKind::kTanh, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor exp(const Tensor& a) {
  return unary(
      OpKind::kExp, a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  for (double v : a.data()) {
    if (!(v > 0.0)) throw std::domain_error("log: non-positive input " + std::to_string(v));
  }
  return unary(
      OpKind::kLog, a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      OpKind::kSigmoid, a, [](double x) { return stable_sigmoid(x); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor log_sigmoid(const Tensor& a) {
  return unary(
      OpKind::kLogSigmoid, a,
      [](double x) { return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x))); },
      [](double x, double) { return stable_sigmoid(-x); });
}

Tensor square(const Tensor& a) {
  return unary(
      OpKind::kSquare, a, [](double x) { return x * x; },
      [](double x, double) { return 2.0 * x; });
}

Tensor softmax(const Tensor& a) {
  const std::size_t m = a.cols(), n = a.numel() / m;
  const bool rec = wants_record({&a});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* xr = x.data() + i * m;
    double* yr = y.data() + i * m;
    const double mx = *std::max_element(xr, xr + m);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      s += yr[j];
    }
    for (std::size_t j = 0; j < m; ++j) yr[j] /= s;
  }
  if (rec) {
    record(OpKind::kSoftmax, {a.impl()}, out, [n, m](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      const auto& yv = nd.output->data;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < m; ++j) dot += g[i * m + j] * yv[i * m + j];
        for (std::size_t j = 0; j < m; ++j)
          gx[i * m + j] += yv[i * m + j] * (g[i * m + j] - dot);
      }
    });
  }
  return out;
}

Tensor log_softmax(const Tensor& a) {
  const std::size_t m = a.cols(), n = a.numel() / m;
  const bool rec = wants_record({&a});
  Tensor out = new_output(a.shape(), rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* xr = x.data() + i * m;
    double* yr = y.data() + i * m;
    const double mx = *std::max_element(xr, xr + m);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::exp(xr[j] - mx);
    const double lse = mx + std::log(s);
    for (std::size_t j = 0; j < m; ++j) yr[j] = xr[j] - lse;
  }
  if (rec) {
    record(OpKind::kLogSoftmax, {a.impl()}, out, [n, m](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      const auto& yv = nd.output->data;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < n; ++i) {
        double gs = 0.0;
        for (std::size_t j = 0; j < m; ++j) gs += g[i * m + j];
        for (std::size_t j = 0; j < m; ++j)
          gx[i * m + j] += g[i * m + j] - std::exp(yv[i * m + j]) * gs;
      }
    });
  }
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  double eps) {
  const std::size_t m = x.cols(), n = x.numel() / m;
  if (gamma.numel() != m || beta.numel() != m) {
    throw ShapeError("layer_norm", {x.shape(), gamma.shape(), beta.shape()});
  }
  const bool rec = wants_record({&x, &gamma, &beta});
  Tensor out = new_output(x.shape(), rec);
  std::vector<double> xhat(n * m), inv_std(n);
  auto xv = x.data(), gv = gamma.data(), bv = beta.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* xr = xv.data() + i * m;
    double mu = 0.0;
    for (std::size_t j = 0; j < m; ++j) mu += xr[j];
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t j = 0; j < m; ++j) var += (xr[j] - mu) * (xr[j] - mu);
    var /= static_cast<double>(m);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < m; ++j) {
      xhat[i * m + j] = (xr[j] - mu) * inv_std[i];
      y[i * m + j] = xhat[i * m + j] * gv[j] + bv[j];
    }
  }
  if (rec) {
    record(OpKind::kLayerNorm, {x.impl(), gamma.impl(), beta.impl()}, out,
           [n, m, xhat = std::move(xhat), inv_std = std::move(inv_std)](
               const NodeRecord& nd) {
             const auto& g = nd.output->grad;
             auto& ix = *nd.inputs[0];
             auto& ig = *nd.inputs[1];
             auto& ib = *nd.inputs[2];
             std::vector<double> dxhat(m);
             for (std::size_t i = 0; i < n; ++i) {
               double mean_d = 0.0, mean_dx = 0.0;
               for (std::size_t j = 0; j < m; ++j) {
                 const double gij = g[i * m + j];
                 if (ig.requires_grad) ig.grad[j] += gij * xhat[i * m + j];
                 if (ib.requires_grad) ib.grad[j] += gij;
                 dxhat[j] = gij * ig.data[j];
                 mean_d += dxhat[j];
                 mean_dx += dxhat[j] * xhat[i * m + j];
               }
               if (!ix.requires_grad) continue;
               mean_d /= static_cast<double>(m);
               mean_dx /= static_cast<double>(m);
               for (std::size_t j = 0; j < m; ++j) {
                 ix.grad[i * m + j] +=
                     inv_std[i] * (dxhat[j] - mean_d - xhat[i * m + j] * mean_dx);
               }
             }
           });
  }
  return out;
}

Tensor l2_normalize(const Tensor& a) {
  const std::size_t m = a.cols(), n = a.numel() / m;
  const bool rec = wants_record({&a});
  Tensor out = new_output(a.shape(), rec);
  std::vector<double> norms(n);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += x[i * m + j] * x[i * m + j];
    norms[i] = std::max(std::sqrt(s), 1e-12);
    for (std::size_t j = 0; j < m; ++j) y[i * m + j] = x[i * m + j] / norms[i];
  }
  if (rec) {
    record(OpKind::kL2Normalize, {a.impl()}, out,
           [n, m, norms = std::move(norms)](const NodeRecord& nd) {
             const auto& g = nd.output->grad;
             const auto& yv = nd.output->data;
             auto& gx = nd.inputs[0]->grad;
             for (std::size_t i = 0; i < n; ++i) {
               double dot = 0.0;
               for (std::size_t j = 0; j < m; ++j) dot += g[i * m + j] * yv[i * m + j];
               for (std::size_t j = 0; j < m; ++j)
                 gx[i * m + j] += (g[i * m + j] - yv[i * m + j] * dot) / norms[i];
             }
           });
  }
  return out;
}

Tensor mean(const Tensor& a) {
  const bool rec = wants_record({&a});
  Tensor out = new_output({1}, rec);
  double s = 0.0;
  for (double v : a.data()) s += v;
  const double inv = 1.0 / static_cast<double>(a.numel());
  out.data()[0] = s * inv;
  if (rec) {
    record(OpKind::kMean, {a.impl()}, out, [inv](const NodeRecord& nd) {
      const double g = nd.output->grad[0] * inv;
      for (auto& v : nd.inputs[0]->grad) v += g;
    });
  }
  return out;
}

Tensor sum(const Tensor& a) {
  const bool rec = wants_record({&a});
  Tensor out = new_output({1}, rec);
  double s = 0.0;
  for (double v : a.data()) s += v;
  out.data()[0] = s;
  if (rec) {
    record(OpKind::kSum, {a.impl()}, out, [](const NodeRecord& nd) {
      const double g = nd.output->grad[0];
      for (auto& v : nd.inputs[0]->grad) v += g;
    });
  }
  return out;
}

Tensor logsumexp(const Tensor& a) {
  const bool rec = wants_record({&a});
  Tensor out = new_output({1}, rec);
  auto x = a.data();
  const double mx = *std::max_element(x.begin(), x.end());
  double s = 0.0;
  for (double v : x) s += std::exp(v - mx);
  const double lse = mx + std::log(s);
  out.data()[0] = lse;
  if (rec) {
    record(OpKind::kLogSumExp, {a.impl()}, out, [lse](const NodeRecord& nd) {
      const double g = nd.output->grad[0];
      const auto& xv = nd.inputs[0]->data;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < xv.size(); ++i) gx[i] += g * std::exp(xv[i] - lse);
    });
  }
  return out;
}

Tensor row_sum(const Tensor& a) {
  const std::size_t m = a.cols(), n = a.numel() / m;
  const bool rec = wants_record({&a});
  Tensor out = new_output({n}, rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += x[i * m + j];
    y[i] = s;
  }
  if (rec) {
    record(OpKind::kRowSum, {a.impl()}, out, [n, m](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) gx[i * m + j] += g[i];
    });
  }
  return out;
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_rows", {}, "no inputs");
  const std::size_t m = parts[0].cols();
  std::size_t rows = 0;
  std::vector<Shape> shapes;
  for (const auto& p : parts) {
    shapes.push_back(p.shape());
    if (p.rank() > 2 || p.cols() != m) {
      throw ShapeError("concat_rows", shapes, "column counts differ");
    }
    rows += p.rows();
  }
  const bool rec = wants_record(parts);
  Tensor out = new_output({rows, m}, rec);
  auto y = out.data();
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.data().begin(), p.data().end(), y.begin() + off);
    off += p.numel();
  }
  if (rec) {
    std::vector<ImplPtr> ins;
    for (const auto& p : parts) ins.push_back(p.impl());
    record(OpKind::kConcatRows, std::move(ins), out, [](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      std::size_t o = 0;
      for (const auto& in : nd.inputs) {
        const std::size_t len = in->data.size();
        if (in->requires_grad)
          for (std::size_t i = 0; i < len; ++i) in->grad[i] += g[o + i];
        o += len;
      }
    });
  }
  return out;
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_cols", {}, "no inputs");
  const std::size_t n = parts[0].rows();
  bool all_rank1 = true;
  std::size_t total = 0;
  std::vector<Shape> shapes;
  for (const auto& p : parts) {
    shapes.push_back(p.shape());
    if (p.rank() > 2 || p.rows() != n) {
      throw ShapeError("concat_cols", shapes, "row counts differ");
    }
    all_rank1 = all_rank1 && p.rank() == 1;
    total += p.cols();
  }
  const bool rec = wants_record(parts);
  Tensor out = new_output(all_rank1 ? Shape{total} : Shape{n, total}, rec);
  auto y = out.data();
  std::vector<std::size_t> widths;
  std::size_t c0 = 0;
  for (const auto& p : parts) {
    const std::size_t w = p.cols();
    widths.push_back(w);
    auto x = p.data();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j) y[i * total + c0 + j] = x[i * w + j];
    c0 += w;
  }
  if (rec) {
    std::vector<ImplPtr> ins;
    for (const auto& p : parts) ins.push_back(p.impl());
    record(OpKind::kConcatCols, std::move(ins), out,
           [n, total, widths = std::move(widths)](const NodeRecord& nd) {
             const auto& g = nd.output->grad;
             std::size_t c = 0;
             for (std::size_t k = 0; k < nd.inputs.size(); ++k) {
               const auto& in = nd.inputs[k];
               const std::size_t w = widths[k];
               if (in->requires_grad) {
                 for (std::size_t i = 0; i < n; ++i)
                   for (std::size_t j = 0; j < w; ++j)
                     in->grad[i * w + j] += g[i * total + c + j];
               }
               c += w;
             }
           });
  }
  return out;
}

Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count) {
  const std::size_t n = a.rows(), m = a.cols();
  if (count == 0 || start + count > n) {
    throw ShapeError("slice_rows", {a.shape()},
                     "rows [" + std::to_string(start) + ", " +
                         std::to_string(start + count) + ") out of range");
  }
  const bool rec = wants_record({&a});
  Tensor out = new_output(a.rank() == 1 ? Shape{m} : Shape{count, m}, rec);
  auto x = a.data();
  std::copy(x.begin() + start * m, x.begin() + (start + count) * m,
            out.data().begin());
  if (rec) {
    record(OpKind::kSliceRows, {a.impl()}, out, [start, m](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < g.size(); ++i) gx[start * m + i] += g[i];
    });
  }
  return out;
}

Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t count) {
  const std::size_t n = a.rows(), m = a.cols();
  if (count == 0 || start + count > m) {
    throw ShapeError("slice_cols", {a.shape()},
                     "cols [" + std::to_string(start) + ", " +
                         std::to_string(start + count) + ") out of range");
  }
  const bool rec = wants_record({&a});
  Tensor out = new_output(a.rank() == 1 ? Shape{count} : Shape{n, count}, rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < count; ++j) y[i * count + j] = x[i * m + start + j];
  if (rec) {
    record(OpKind::kSliceCols, {a.impl()}, out,
           [n, m, start, count](const NodeRecord& nd) {
             const auto& g = nd.output->grad;
             auto& gx = nd.inputs[0]->grad;
             for (std::size_t i = 0; i < n; ++i)
               for (std::size_t j = 0; j < count; ++j)
                 gx[i * m + start + j] += g[i * count + j];
           });
  }
  return out;
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_numel(shape) != a.numel()) {
    throw ShapeError("reshape", {a.shape(), shape}, "element counts differ");
  }
  const bool rec = wants_record({&a});
  Tensor out = new_output(std::move(shape), rec);
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  if (rec) {
    record(OpKind::kReshape, {a.impl()}, out, [](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    });
  }
  return out;
}

Tensor embedding(const Tensor& table, std::span<const int> ids) {
  require_rank2("embedding", table);
  const std::size_t vocab = table.shape()[0], d = table.shape()[1];
  if (ids.empty()) throw ShapeError("embedding", {table.shape()}, "no ids");
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
      throw ShapeError("embedding", {table.shape()},
                       "id " + std::to_string(id) + " out of range");
    }
  }
  const bool rec = wants_record({&table});
  Tensor out = new_output({ids.size(), d}, rec);
  auto x = table.data();
  auto y = out.data();
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const std::size_t row = static_cast<std::size_t>(ids[r]);
    std::copy(x.begin() + row * d, x.begin() + (row + 1) * d, y.begin() + r * d);
  }
  if (rec) {
    std::vector<int> idv(ids.begin(), ids.end());
    record(OpKind::kEmbedding, {table.impl()}, out,
           [d, idv = std::move(idv)](const NodeRecord& nd) {
             const auto& g = nd.output->grad;
             auto& gt = nd.inputs[0]->grad;
             for (std::size_t r = 0; r < idv.size(); ++r) {
               const std::size_t row = static_cast<std::size_t>(idv[r]);
               for (std::size_t j = 0; j < d; ++j) gt[row * d + j] += g[r * d + j];
             }
           });
  }
  return out;
}

Tensor pick(const Tensor& a, std::span<const int> index) {
  const std::size_t m = a.cols(), n = a.numel() / m;
  if (index.size() != n) {
    throw ShapeError("pick", {a.shape(), Shape{index.size()}},
                     "one index per row required");
  }
  for (int ix : index) {
    if (ix < 0 || static_cast<std::size_t>(ix) >= m) {
      throw ShapeError("pick", {a.shape()}, "index " + std::to_string(ix) + " out of range");
    }
  }
  const bool rec = wants_record({&a});
  Tensor out = new_output({n}, rec);
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i * m + static_cast<std::size_t>(index[i])];
  if (rec) {
    std::vector<int> idv(index.begin(), index.end());
    record(OpKind::kPick, {a.impl()}, out, [m, idv = std::move(idv)](const NodeRecord& nd) {
      const auto& g = nd.output->grad;
      auto& gx = nd.inputs[0]->grad;
      for (std::size_t i = 0; i < idv.size(); ++i)
        gx[i * m + static_cast<std::size_t>(idv[i])] += g[i];
    });
  }
  return out;
}

Tensor detach(const Tensor& a) {
  Tensor out = a.clone();
  out.set_requires_grad(false);
  return out;
}

}  // namespace gensug::nd
