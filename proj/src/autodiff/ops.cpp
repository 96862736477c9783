// Copyright 2026 The seedcomp Authors
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

#include "seedcomp/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "seedcomp/core/errors.hpp"
#include "seedcomp/kernels/dense.hpp"

namespace seedcomp::ad {

using detail::grad_of;
using detail::make_result;

namespace {

struct AxisSplit {
  std::size_t outer;
  std::size_t n;
  std::size_t inner;
};

AxisSplit split_at(const Shape& shape, std::size_t axis, const char* op) {
  if (axis >= shape.size()) {
    throw ShapeError(std::string(op) + ": axis " + std::to_string(axis) +
                     " out of range for shape " + shape_str(shape));
  }
  AxisSplit s{1, shape[axis], 1};
  for (std::size_t i = 0; i < axis; ++i) s.outer *= shape[i];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) s.inner *= shape[i];
  return s;
}

void require_defined(const Tensor& t, const char* op) {
  if (!t.defined()) throw ShapeError(std::string(op) + ": undefined operand");
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  require_defined(a, op);
  require_defined(b, op);
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
}

Shape drop_axis(const Shape& shape, std::size_t axis) {
  Shape out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != axis) out.push_back(shape[i]);
  }
  return out;
}

}  // namespace

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require_defined(x, "linear");
  require_defined(weight, "linear");
  if (x.rank() < 1 || weight.rank() != 2 || x.shape().back() != weight.dim(1)) {
    throw ShapeError("linear: cannot apply weight " + shape_str(weight.shape()) +
                     " to input " + shape_str(x.shape()));
  }
  const kernels::DenseDims d{x.numel() / weight.dim(1), weight.dim(1), weight.dim(0)};
  if (bias.defined() && bias.shape() != Shape{d.out}) {
    throw ShapeError("linear: bias shape " + shape_str(bias.shape()) +
                     " does not match " + std::to_string(d.out) + " outputs");
  }
  Shape out_shape = x.shape();
  out_shape.back() = d.out;
  std::vector<double> y(d.rows * d.out);
  std::span<const double> b;
  if (bias.defined()) b = bias.values();
  kernels::parallel::linear_forward(x.values(), weight.values(), b, d, y);

  std::vector<Tensor> inputs{x, weight};
  if (bias.defined()) inputs.push_back(bias);
  return make_result(std::move(out_shape), std::move(y), std::move(inputs), "linear",
                     [d](const Node& out) {
                       Node& xn = *out.inputs[0];
                       Node& wn = *out.inputs[1];
                       if (xn.requires_grad) {
                         kernels::parallel::linear_backward_input(out.grad, wn.value, d,
                                                                  grad_of(xn));
                       }
                       const bool has_bias = out.inputs.size() > 2;
                       const bool bias_grad = has_bias && out.inputs[2]->requires_grad;
                       if (wn.requires_grad || bias_grad) {
                         std::vector<double> scratch_w;
                         std::span<double> dw;
                         if (wn.requires_grad) {
                           dw = grad_of(wn);
                         } else {
                           scratch_w.assign(wn.value.size(), 0.0);
                           dw = scratch_w;
                         }
                         std::span<double> db;
                         if (bias_grad) db = grad_of(*out.inputs[2]);
                         kernels::parallel::linear_backward_params(out.grad, xn.value, d,
                                                                   dw, db);
                       }
                     });
}

Tensor relu(const Tensor& x) {
  require_defined(x, "relu");
  std::vector<double> y(x.numel());
  auto xv = x.values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  return make_result(x.shape(), std::move(y), {x}, "relu", [](const Node& out) {
    Node& xn = *out.inputs[0];
    auto& g = grad_of(xn);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (xn.value[i] > 0.0) g[i] += out.grad[i];
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> y(a.numel());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] + bv[i];
  return make_result(a.shape(), std::move(y), {a, b}, "add", [](const Node& out) {
    for (auto& in : out.inputs) {
      if (!in->requires_grad) continue;
      auto& g = grad_of(*in);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> y(a.numel());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] - bv[i];
  return make_result(a.shape(), std::move(y), {a, b}, "sub", [](const Node& out) {
    if (out.inputs[0]->requires_grad) {
      auto& g = grad_of(*out.inputs[0]);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i];
    }
    if (out.inputs[1]->requires_grad) {
      auto& g = grad_of(*out.inputs[1]);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= out.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> y(a.numel());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
  return make_result(a.shape(), std::move(y), {a, b}, "mul", [](const Node& out) {
    Node& an = *out.inputs[0];
    Node& bn = *out.inputs[1];
    if (an.requires_grad) {
      auto& g = grad_of(an);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] * bn.value[i];
    }
    if (bn.requires_grad) {
      auto& g = grad_of(bn);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] * an.value[i];
    }
  });
}

Tensor scale(const Tensor& x, double s) {
  require_defined(x, "scale");
  std::vector<double> y(x.numel());
  auto xv = x.values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = xv[i] * s;
  return make_result(x.shape(), std::move(y), {x}, "scale", [s](const Node& out) {
    auto& g = grad_of(*out.inputs[0]);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] * s;
  });
}

Tensor add_scalar(const Tensor& x, double s) {
  require_defined(x, "add_scalar");
  std::vector<double> y(x.numel());
  auto xv = x.values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = xv[i] + s;
  return make_result(x.shape(), std::move(y), {x}, "add_scalar", [](const Node& out) {
    auto& g = grad_of(*out.inputs[0]);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i];
  });
}

Tensor sum(const Tensor& x) {
  require_defined(x, "sum");
  double acc = 0.0;
  for (double v : x.values()) acc += v;
  return make_result({}, {acc}, {x}, "sum", [](const Node& out) {
    auto& g = grad_of(*out.inputs[0]);
    for (auto& gi : g) gi += out.grad[0];
  });
}

Tensor mean(const Tensor& x) {
  require_defined(x, "mean");
  if (x.numel() == 0) throw ShapeError("mean: empty tensor");
  double acc = 0.0;
  for (double v : x.values()) acc += v;
  const double inv = 1.0 / static_cast<double>(x.numel());
  return make_result({}, {acc * inv}, {x}, "mean", [inv](const Node& out) {
    auto& g = grad_of(*out.inputs[0]);
    for (auto& gi : g) gi += out.grad[0] * inv;
  });
}

Tensor sum(const Tensor& x, std::size_t axis) {
  require_defined(x, "sum");
  const auto s = split_at(x.shape(), axis, "sum");
  std::vector<double> y(s.outer * s.inner, 0.0);
  auto xv = x.values();
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t j = 0; j < s.n; ++j) {
      const double* row = xv.data() + (o * s.n + j) * s.inner;
      double* dst = y.data() + o * s.inner;
      for (std::size_t c = 0; c < s.inner; ++c) dst[c] += row[c];
    }
  }
  return make_result(drop_axis(x.shape(), axis), std::move(y), {x}, "sum_axis",
                     [s](const Node& out) {
                       auto& g = grad_of(*out.inputs[0]);
                       for (std::size_t o = 0; o < s.outer; ++o) {
                         const double* src = out.grad.data() + o * s.inner;
                         for (std::size_t j = 0; j < s.n; ++j) {
                           double* dst = g.data() + (o * s.n + j) * s.inner;
                           for (std::size_t c = 0; c < s.inner; ++c) dst[c] += src[c];
                         }
                       }
                     });
}

Tensor max(const Tensor& x, std::size_t axis) {
  require_defined(x, "max");
  const auto s = split_at(x.shape(), axis, "max");
  if (s.n == 0) throw ShapeError("max: empty reduction axis");
  std::vector<double> y(s.outer * s.inner);
  std::vector<std::size_t> arg(s.outer * s.inner);
  auto xv = x.values();
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t c = 0; c < s.inner; ++c) {
      std::size_t best = 0;
      double bv = xv[o * s.n * s.inner + c];
      for (std::size_t j = 1; j < s.n; ++j) {
        const double v = xv[(o * s.n + j) * s.inner + c];
        if (v > bv) {
          bv = v;
          best = j;
        }
      }
      y[o * s.inner + c] = bv;
      arg[o * s.inner + c] = (o * s.n + best) * s.inner + c;
    }
  }
  return make_result(drop_axis(x.shape(), axis), std::move(y), {x}, "max_axis",
                     [arg = std::move(arg)](const Node& out) {
                       auto& g = grad_of(*out.inputs[0]);
                       for (std::size_t i = 0; i < arg.size(); ++i) g[arg[i]] += out.grad[i];
                     });
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  require_defined(x, "softmax");
  const auto s = split_at(x.shape(), axis, "softmax");
  std::vector<double> y(x.numel());
  auto xv = x.values();
  const auto outer = static_cast<std::int64_t>(s.outer);
#pragma omp parallel for schedule(static) if (x.numel() > 65536)
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::size_t c = 0; c < s.inner; ++c) {
      const std::size_t base = static_cast<std::size_t>(o) * s.n * s.inner + c;
      double mx = xv[base];
      for (std::size_t j = 1; j < s.n; ++j) mx = std::max(mx, xv[base + j * s.inner]);
      double z = 0.0;
      for (std::size_t j = 0; j < s.n; ++j) {
        const double e = std::exp(xv[base + j * s.inner] - mx);
        y[base + j * s.inner] = e;
        z += e;
      }
      for (std::size_t j = 0; j < s.n; ++j) y[base + j * s.inner] /= z;
    }
  }
  return make_result(x.shape(), std::move(y), {x}, "softmax", [s](const Node& out) {
      auto& g = grad_of(*out.inputs[0]);
      for (std::size_t o = 0; o < s.outer; ++o) {
        for (std::size_t c = 0; c < s.inner; ++c) {
          const std::size_t base = o * s.n * s.inner + c;
          double dot = 0.0;
          for (std::size_t j = 0; j < s.n; ++j) {
            dot += out.grad[base + j * s.inner] * out.value[base + j * s.inner];
          }
          for (std::size_t j = 0; j < s.n; ++j) {
            const std::size_t at = base + j * s.inner;
            g[at] += out.value[at] * (out.grad[at] - dot);
          }
        }
      }
  });
}

Tensor log_softmax(const Tensor& x, std::size_t axis) {
  require_defined(x, "log_softmax");
  const auto s = split_at(x.shape(), axis, "log_softmax");
  std::vector<double> y(x.numel());
  auto xv = x.values();
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t c = 0; c < s.inner; ++c) {
      const std::size_t base = o * s.n * s.inner + c;
      double mx = xv[base];
      for (std::size_t j = 1; j < s.n; ++j) mx = std::max(mx, xv[base + j * s.inner]);
      double z = 0.0;
      for (std::size_t j = 0; j < s.n; ++j) z += std::exp(xv[base + j * s.inner] - mx);
      const double lz = mx + std::log(z);
      for (std::size_t j = 0; j < s.n; ++j) {
        y[base + j * s.inner] = xv[base + j * s.inner] - lz;
      }
    }
  }
  return make_result(x.shape(), std::move(y), {x}, "log_softmax", [s](const Node& out) {
      auto& g = grad_of(*out.inputs[0]);
      for (std::size_t o = 0; o < s.outer; ++o) {
        for (std::size_t c = 0; c < s.inner; ++c) {
          const std::size_t base = o * s.n * s.inner + c;
          double gsum = 0.0;
          for (std::size_t j = 0; j < s.n; ++j) gsum += out.grad[base + j * s.inner];
          for (std::size_t j = 0; j < s.n; ++j) {
            const std::size_t at = base + j * s.inner;
            g[at] += out.grad[at] - std::exp(out.value[at]) * gsum;
          }
        }
      }
  });
}

Tensor concat(const std::vector<Tensor>& xs, std::size_t axis) {
  if (xs.empty()) throw ShapeError("concat: no operands");
  for (const auto& t : xs) require_defined(t, "concat");
  const Shape& ref = xs.front().shape();
  if (axis >= ref.size()) throw ShapeError("concat: axis out of range");
  Shape out_shape = ref;
  out_shape[axis] = 0;
  std::vector<std::size_t> widths;
  for (const auto& t : xs) {
    const Shape& sh = t.shape();
    bool ok = sh.size() == ref.size();
    for (std::size_t i = 0; ok && i < sh.size(); ++i) {
      if (i != axis && sh[i] != ref[i]) ok = false;
    }
    if (!ok) {
      throw ShapeError("concat: incompatible shapes " + shape_str(ref) + " and " +
                       shape_str(sh) + " along axis " + std::to_string(axis));
    }
    out_shape[axis] += sh[axis];
  }
  const auto s = split_at(out_shape, axis, "concat");
  for (const auto& t : xs) widths.push_back(t.shape()[axis] * s.inner);
  const std::size_t out_row = s.n * s.inner;
  std::vector<double> y(shape_numel(out_shape));
  std::size_t offset = 0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    auto v = xs[t].values();
    for (std::size_t o = 0; o < s.outer; ++o) {
      std::copy_n(v.data() + o * widths[t], widths[t], y.data() + o * out_row + offset);
    }
    offset += widths[t];
  }
  return make_result(std::move(out_shape), std::move(y), xs, "concat",
                     [widths, out_row, outer = s.outer](const Node& out) {
                       std::size_t off = 0;
                       for (std::size_t t = 0; t < out.inputs.size(); ++t) {
                         Node& in = *out.inputs[t];
                         if (in.requires_grad) {
                           auto& g = grad_of(in);
                           for (std::size_t o = 0; o < outer; ++o) {
                             const double* src = out.grad.data() + o * out_row + off;
                             double* dst = g.data() + o * widths[t];
                             for (std::size_t c = 0; c < widths[t]; ++c) dst[c] += src[c];
                           }
                         }
                         off += widths[t];
                       }
                     });
}

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> index) {
  require_defined(x, "gather_rows");
  if (x.rank() < 1) throw ShapeError("gather_rows: scalar input");
  const std::size_t rows = x.dim(0);
  const std::size_t width = rows == 0 ? 0 : x.numel() / rows;
  for (auto i : index) {
    if (i >= rows) {
      throw IndexError("gather_rows: index " + std::to_string(i) + " out of range for " +
                       std::to_string(rows) + " rows");
    }
  }
  Shape out_shape = x.shape();
  out_shape[0] = index.size();
  std::vector<double> y(index.size() * width);
  auto xv = x.values();
  for (std::size_t r = 0; r < index.size(); ++r) {
    std::copy_n(xv.data() + index[r] * width, width, y.data() + r * width);
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return make_result(std::move(out_shape), std::move(y), {x}, "gather_rows",
                     [idx = std::move(idx), width](const Node& out) {
                       auto& g = grad_of(*out.inputs[0]);
                       for (std::size_t r = 0; r < idx.size(); ++r) {
                         const double* src = out.grad.data() + r * width;
                         double* dst = g.data() + idx[r] * width;
                         for (std::size_t c = 0; c < width; ++c) dst[c] += src[c];
                       }
                     });
}

Tensor reshape(const Tensor& x, Shape shape) {
  require_defined(x, "reshape");
  if (shape_numel(shape) != x.numel()) {
    throw ShapeError("reshape: cannot view " + shape_str(x.shape()) + " as " +
                     shape_str(shape));
  }
  std::vector<double> y(x.values().begin(), x.values().end());
  return make_result(std::move(shape), std::move(y), {x}, "reshape", [](const Node& out) {
    auto& g = grad_of(*out.inputs[0]);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i];
  });
}

Tensor broadcast_last(const Tensor& x, std::size_t width) {
  require_defined(x, "broadcast_last");
  if (x.rank() < 1 || x.shape().back() != 1) {
    throw ShapeError("broadcast_last: trailing extent must be 1, got " +
                     shape_str(x.shape()));
  }
  Shape out_shape = x.shape();
  out_shape.back() = width;
  const std::size_t rows = x.numel();
  std::vector<double> y(rows * width);
  auto xv = x.values();
  for (std::size_t r = 0; r < rows; ++r) {
    std::fill_n(y.data() + r * width, width, xv[r]);
  }
  return make_result(std::move(out_shape), std::move(y), {x}, "broadcast_last",
                     [rows, width](const Node& out) {
                       auto& g = grad_of(*out.inputs[0]);
                       for (std::size_t r = 0; r < rows; ++r) {
                         double acc = 0.0;
                         for (std::size_t c = 0; c < width; ++c) acc += out.grad[r * width + c];
                         g[r] += acc;
                       }
                     });
}

Tensor row_norm(const Tensor& x) {
  require_defined(x, "row_norm");
  if (x.rank() < 1) throw ShapeError("row_norm: scalar input");
  const std::size_t width = x.shape().back();
  const std::size_t rows = width == 0 ? 0 : x.numel() / width;
  std::vector<double> y(rows);
  auto xv = x.values();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < width; ++c) acc += xv[r * width + c] * xv[r * width + c];
    y[r] = std::sqrt(acc);
  }
  Shape out_shape(x.shape().begin(), x.shape().end() - 1);
  return make_result(std::move(out_shape), std::move(y), {x}, "row_norm",
                     [rows, width](const Node& out) {
                       Node& xn = *out.inputs[0];
                       auto& g = grad_of(xn);
                       for (std::size_t r = 0; r < rows; ++r) {
                         const double n = out.value[r];
                         if (n == 0.0) continue;
                         const double f = out.grad[r] / n;
                         for (std::size_t c = 0; c < width; ++c) {
                           g[r * width + c] += f * xn.value[r * width + c];
                         }
                       }
                     });
}

}  // namespace seedcomp::ad
