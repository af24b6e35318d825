#include "bf/diff/ops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace bf::diff {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap emap(const Array& a) { return ECMap(a.data(), a.rows(), a.cols()); }
EMap emap(Array& a) { return EMap(a.data(), a.rows(), a.cols()); }

void require(bool cond, const char* what) {
  if (!cond) throw ShapeMismatch(what);
}

// Creates the output node, then installs a backward closure that can see its
// own id. The closure must only accumulate into parents that need gradients.
template <typename BackFn>
int make_op(Tape& t, Array value, bool needs_grad, const char* name, BackFn&& back) {
  const int out = t.emplace(std::move(value), needs_grad, nullptr, name);
  if (needs_grad)
    t.node(out).back = [out, back = std::forward<BackFn>(back)](Tape& t2) {
      back(t2, t2.grad_ref(out));
    };
  return out;
}

}  // namespace

int add(Tape& t, int a, int b) {
  const Array& av = t.val(a);
  const Array& bv = t.val(b);
  require(av.same_shape(bv), "add: shape mismatch");
  Array out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return make_op(t, std::move(out), t.needs_grad(a) || t.needs_grad(b), "add",
                 [a, b](Tape& t2, const Array& g) {
                   if (t2.needs_grad(a)) {
                     Array& ga = t2.grad_ref(a);
                     for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                   }
                   if (t2.needs_grad(b)) {
                     Array& gb = t2.grad_ref(b);
                     for (size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
                   }
                 });
}

int sub(Tape& t, int a, int b) {
  const Array& av = t.val(a);
  const Array& bv = t.val(b);
  require(av.same_shape(bv), "sub: shape mismatch");
  Array out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return make_op(t, std::move(out), t.needs_grad(a) || t.needs_grad(b), "sub",
                 [a, b](Tape& t2, const Array& g) {
                   if (t2.needs_grad(a)) {
                     Array& ga = t2.grad_ref(a);
                     for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                   }
                   if (t2.needs_grad(b)) {
                     Array& gb = t2.grad_ref(b);
                     for (size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                   }
                 });
}

int mul(Tape& t, int a, int b) {
  const Array& av = t.val(a);
  const Array& bv = t.val(b);
  require(av.same_shape(bv), "mul: shape mismatch");
  Array out = av;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return make_op(t, std::move(out), t.needs_grad(a) || t.needs_grad(b), "mul",
                 [a, b](Tape& t2, const Array& g) {
                   const Array& av2 = t2.val(a);
                   const Array& bv2 = t2.val(b);
                   if (t2.needs_grad(a)) {
                     Array& ga = t2.grad_ref(a);
                     for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv2[i];
                   }
                   if (t2.needs_grad(b)) {
                     Array& gb = t2.grad_ref(b);
                     for (size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av2[i];
                   }
                 });
}

int scale(Tape& t, int a, double s) {
  Array out = t.val(a);
  for (size_t i = 0; i < out.size(); ++i) out[i] *= s;
  return make_op(t, std::move(out), t.needs_grad(a), "scale",
                 [a, s](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(a)) return;
                   Array& ga = t2.grad_ref(a);
                   for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
                 });
}

int add_rowvec(Tape& t, int x, int v) {
  const Array& xv = t.val(x);
  const Array& vv = t.val(v);
  require(vv.rows() == 1 && vv.cols() == xv.cols(), "add_rowvec: v must be [1, cols(x)]");
  Array out = xv;
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out.at(r, c) += vv.at(0, c);
  return make_op(t, std::move(out), t.needs_grad(x) || t.needs_grad(v), "add_rowvec",
                 [x, v](Tape& t2, const Array& g) {
                   if (t2.needs_grad(x)) {
                     Array& gx = t2.grad_ref(x);
                     for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                   }
                   if (t2.needs_grad(v)) {
                     Array& gv = t2.grad_ref(v);
                     for (int r = 0; r < g.rows(); ++r)
                       for (int c = 0; c < g.cols(); ++c) gv.at(0, c) += g.at(r, c);
                   }
                 });
}

int mul_rowvec(Tape& t, int x, int v) {
  const Array& xv = t.val(x);
  const Array& vv = t.val(v);
  require(vv.rows() == 1 && vv.cols() == xv.cols(), "mul_rowvec: v must be [1, cols(x)]");
  Array out = xv;
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out.at(r, c) *= vv.at(0, c);
  return make_op(t, std::move(out), t.needs_grad(x) || t.needs_grad(v), "mul_rowvec",
                 [x, v](Tape& t2, const Array& g) {
                   const Array& xv2 = t2.val(x);
                   const Array& vv2 = t2.val(v);
                   if (t2.needs_grad(x)) {
                     Array& gx = t2.grad_ref(x);
                     for (int r = 0; r < g.rows(); ++r)
                       for (int c = 0; c < g.cols(); ++c) gx.at(r, c) += g.at(r, c) * vv2.at(0, c);
                   }
                   if (t2.needs_grad(v)) {
                     Array& gv = t2.grad_ref(v);
                     for (int r = 0; r < g.rows(); ++r)
                       for (int c = 0; c < g.cols(); ++c) gv.at(0, c) += g.at(r, c) * xv2.at(r, c);
                   }
                 });
}

int matmul(Tape& t, int a, int b) {
  const Array& av = t.val(a);
  const Array& bv = t.val(b);
  require(av.cols() == bv.rows(), "matmul: inner dimensions differ");
  Array out(av.rows(), bv.cols());
  emap(out) = emap(av) * emap(bv);
  return make_op(t, std::move(out), t.needs_grad(a) || t.needs_grad(b), "matmul",
                 [a, b](Tape& t2, const Array& g) {
                   const Array& av2 = t2.val(a);
                   const Array& bv2 = t2.val(b);
                   if (t2.needs_grad(a)) emap(t2.grad_ref(a)) += emap(g) * emap(bv2).transpose();
                   if (t2.needs_grad(b)) emap(t2.grad_ref(b)) += emap(av2).transpose() * emap(g);
                 });
}

int matmul_nt(Tape& t, int a, int b) {
  const Array& av = t.val(a);
  const Array& bv = t.val(b);
  require(av.cols() == bv.cols(), "matmul_nt: inner dimensions differ");
  Array out(av.rows(), bv.rows());
  emap(out) = emap(av) * emap(bv).transpose();
  return make_op(t, std::move(out), t.needs_grad(a) || t.needs_grad(b), "matmul_nt",
                 [a, b](Tape& t2, const Array& g) {
                   const Array& av2 = t2.val(a);
                   const Array& bv2 = t2.val(b);
                   if (t2.needs_grad(a)) emap(t2.grad_ref(a)) += emap(g) * emap(bv2);
                   if (t2.needs_grad(b)) emap(t2.grad_ref(b)) += emap(g).transpose() * emap(av2);
                 });
}

int linear(Tape& t, int x, int w, int b) {
  const Array& xv = t.val(x);
  const Array& wv = t.val(w);
  const Array& bv = t.val(b);
  require(xv.cols() == wv.rows(), "linear: x/w dimensions differ");
  require(bv.rows() == 1 && bv.cols() == wv.cols(), "linear: bias must be [1, cols(w)]");
  Array out(xv.rows(), wv.cols());
  emap(out) = emap(xv) * emap(wv);
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out.at(r, c) += bv.at(0, c);
  const bool ng = t.needs_grad(x) || t.needs_grad(w) || t.needs_grad(b);
  return make_op(t, std::move(out), ng, "linear", [x, w, b](Tape& t2, const Array& g) {
    const Array& xv2 = t2.val(x);
    const Array& wv2 = t2.val(w);
    if (t2.needs_grad(x)) emap(t2.grad_ref(x)) += emap(g) * emap(wv2).transpose();
    if (t2.needs_grad(w)) emap(t2.grad_ref(w)) += emap(xv2).transpose() * emap(g);
    if (t2.needs_grad(b)) {
      Array& gb = t2.grad_ref(b);
      for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) gb.at(0, c) += g.at(r, c);
    }
  });
}

int relu(Tape& t, int x) {
  Array out = t.val(x);
  for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] > 0.0 ? out[i] : 0.0;
  return make_op(t, std::move(out), t.needs_grad(x), "relu",
                 [x](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   const Array& xv2 = t2.val(x);
                   Array& gx = t2.grad_ref(x);
                   for (size_t i = 0; i < g.size(); ++i)
                     if (xv2[i] > 0.0) gx[i] += g[i];
                 });
}

int layer_norm(Tape& t, int x) {
  constexpr double kEps = 1e-12;
  const Array& xv = t.val(x);
  require(xv.cols() >= 1, "layer_norm: empty rows");
  const int n = xv.cols();
  Array out(xv.rows(), n);
  Array inv_sigma(xv.rows(), 1);
  for (int r = 0; r < xv.rows(); ++r) {
    double mean = 0.0;
    for (int c = 0; c < n; ++c) mean += xv.at(r, c);
    mean /= n;
    double var = 0.0;
    for (int c = 0; c < n; ++c) {
      const double d = xv.at(r, c) - mean;
      var += d * d;
    }
    var /= n;
    const double inv = 1.0 / std::sqrt(var + kEps);
    inv_sigma.at(r, 0) = inv;
    for (int c = 0; c < n; ++c) out.at(r, c) = (xv.at(r, c) - mean) * inv;
  }
  Array y = out;  // saved normalized values for the backward pass
  return make_op(t, std::move(out), t.needs_grad(x), "layer_norm",
                 [x, y = std::move(y), inv_sigma = std::move(inv_sigma)](
                     Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   const int n2 = y.cols();
                   for (int r = 0; r < y.rows(); ++r) {
                     double g_mean = 0.0, gy_mean = 0.0;
                     for (int c = 0; c < n2; ++c) {
                       g_mean += g.at(r, c);
                       gy_mean += g.at(r, c) * y.at(r, c);
                     }
                     g_mean /= n2;
                     gy_mean /= n2;
                     const double inv = inv_sigma.at(r, 0);
                     for (int c = 0; c < n2; ++c)
                       gx.at(r, c) += inv * (g.at(r, c) - g_mean - y.at(r, c) * gy_mean);
                   }
                 });
}

int softmax_masked(Tape& t, int x, const Mask& mask) {
  const Array& xv = t.val(x);
  require(mask.rows == xv.rows() && mask.cols == xv.cols(), "softmax: mask shape mismatch");
  Array out(xv.rows(), xv.cols());
  for (int r = 0; r < xv.rows(); ++r) {
    double max_v = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < xv.cols(); ++c)
      if (mask.at(r, c) && xv.at(r, c) > max_v) max_v = xv.at(r, c);
    if (max_v == -std::numeric_limits<double>::infinity()) continue;  // fully masked -> zeros
    double sum = 0.0;
    for (int c = 0; c < xv.cols(); ++c) {
      if (!mask.at(r, c)) continue;
      const double e = std::exp(xv.at(r, c) - max_v);
      out.at(r, c) = e;
      sum += e;
    }
    for (int c = 0; c < xv.cols(); ++c)
      if (mask.at(r, c)) out.at(r, c) /= sum;
  }
  Array y = out;
  Mask m = mask;
  return make_op(t, std::move(out), t.needs_grad(x), "softmax",
                 [x, y = std::move(y), m = std::move(m)](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (int r = 0; r < y.rows(); ++r) {
                     double dot = 0.0;
                     for (int c = 0; c < y.cols(); ++c)
                       if (m.at(r, c)) dot += g.at(r, c) * y.at(r, c);
                     for (int c = 0; c < y.cols(); ++c)
                       if (m.at(r, c)) gx.at(r, c) += y.at(r, c) * (g.at(r, c) - dot);
                   }
                 });
}

int softmax(Tape& t, int x) {
  return softmax_masked(t, x, Mask::all(t.val(x).rows(), t.val(x).cols()));
}

int scaled_dot_attention(Tape& t, int q, int k, int v, const Mask& mask) {
  const Array& qv = t.val(q);
  const Array& kv = t.val(k);
  const Array& vv = t.val(v);
  require(qv.cols() == kv.cols(), "attention: q/k width mismatch");
  require(kv.rows() == vv.rows(), "attention: k/v row mismatch");
  require(mask.rows == qv.rows() && mask.cols == kv.rows(), "attention: mask shape mismatch");
  const int scores = scale(t, matmul_nt(t, q, k), 1.0 / std::sqrt(static_cast<double>(qv.cols())));
  const int att = softmax_masked(t, scores, mask);
  return matmul(t, att, v);
}

int concat_rows(Tape& t, std::span<const int> ids) {
  require(!ids.empty(), "concat_rows: empty input list");
  const int cols = t.val(ids[0]).cols();
  int rows = 0;
  bool ng = false;
  for (int id : ids) {
    require(t.val(id).cols() == cols, "concat_rows: column mismatch");
    rows += t.val(id).rows();
    ng = ng || t.needs_grad(id);
  }
  Array out(rows, cols);
  int r0 = 0;
  for (int id : ids) {
    const Array& a = t.val(id);
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < cols; ++c) out.at(r0 + r, c) = a.at(r, c);
    r0 += a.rows();
  }
  std::vector<int> id_list(ids.begin(), ids.end());
  return make_op(t, std::move(out), ng, "concat_rows",
                 [id_list](Tape& t2, const Array& g) {
                   int r0 = 0;
                   for (int id : id_list) {
                     const int nr = t2.val(id).rows();
                     if (t2.needs_grad(id)) {
                       Array& gi = t2.grad_ref(id);
                       for (int r = 0; r < nr; ++r)
                         for (int c = 0; c < g.cols(); ++c) gi.at(r, c) += g.at(r0 + r, c);
                     }
                     r0 += nr;
                   }
                 });
}

int concat_cols(Tape& t, std::span<const int> ids) {
  require(!ids.empty(), "concat_cols: empty input list");
  const int rows = t.val(ids[0]).rows();
  int cols = 0;
  bool ng = false;
  for (int id : ids) {
    require(t.val(id).rows() == rows, "concat_cols: row mismatch");
    cols += t.val(id).cols();
    ng = ng || t.needs_grad(id);
  }
  Array out(rows, cols);
  int c0 = 0;
  for (int id : ids) {
    const Array& a = t.val(id);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < a.cols(); ++c) out.at(r, c0 + c) = a.at(r, c);
    c0 += a.cols();
  }
  std::vector<int> id_list(ids.begin(), ids.end());
  return make_op(t, std::move(out), ng, "concat_cols",
                 [id_list](Tape& t2, const Array& g) {
                   int c0 = 0;
                   for (int id : id_list) {
                     const int nc = t2.val(id).cols();
                     if (t2.needs_grad(id)) {
                       Array& gi = t2.grad_ref(id);
                       for (int r = 0; r < g.rows(); ++r)
                         for (int c = 0; c < nc; ++c) gi.at(r, c) += g.at(r, c0 + c);
                     }
                     c0 += nc;
                   }
                 });
}

int slice_rows(Tape& t, int x, int r0, int r1) {
  const Array& xv = t.val(x);
  require(0 <= r0 && r0 < r1 && r1 <= xv.rows(), "slice_rows: bad range");
  Array out(r1 - r0, xv.cols());
  for (int r = r0; r < r1; ++r)
    for (int c = 0; c < xv.cols(); ++c) out.at(r - r0, c) = xv.at(r, c);
  return make_op(t, std::move(out), t.needs_grad(x), "slice_rows",
                 [x, r0](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (int r = 0; r < g.rows(); ++r)
                     for (int c = 0; c < g.cols(); ++c) gx.at(r0 + r, c) += g.at(r, c);
                 });
}

int slice_cols(Tape& t, int x, int c0, int c1) {
  const Array& xv = t.val(x);
  require(0 <= c0 && c0 < c1 && c1 <= xv.cols(), "slice_cols: bad range");
  Array out(xv.rows(), c1 - c0);
  for (int r = 0; r < xv.rows(); ++r)
    for (int c = c0; c < c1; ++c) out.at(r, c - c0) = xv.at(r, c);
  return make_op(t, std::move(out), t.needs_grad(x), "slice_cols",
                 [x, c0](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (int r = 0; r < g.rows(); ++r)
                     for (int c = 0; c < g.cols(); ++c) gx.at(r, c0 + c) += g.at(r, c);
                 });
}

int reshape(Tape& t, int x, int rows, int cols) {
  const Array& xv = t.val(x);
  require(static_cast<size_t>(rows) * cols == xv.size(), "reshape: element count mismatch");
  Array out(rows, cols);
  for (size_t i = 0; i < xv.size(); ++i) out[i] = xv[i];
  return make_op(t, std::move(out), t.needs_grad(x), "reshape",
                 [x](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                 });
}

int mean_pool_rows(Tape& t, int x) {
  const Array& xv = t.val(x);
  require(xv.rows() >= 1, "mean_pool_rows: empty input");
  Array out(1, xv.cols());
  for (int r = 0; r < xv.rows(); ++r)
    for (int c = 0; c < xv.cols(); ++c) out.at(0, c) += xv.at(r, c);
  const double inv = 1.0 / xv.rows();
  for (int c = 0; c < xv.cols(); ++c) out.at(0, c) *= inv;
  return make_op(t, std::move(out), t.needs_grad(x), "mean_pool_rows",
                 [x, inv](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (int r = 0; r < gx.rows(); ++r)
                     for (int c = 0; c < g.cols(); ++c) gx.at(r, c) += g.at(0, c) * inv;
                 });
}

int cumsum_rows(Tape& t, int x) {
  const Array& xv = t.val(x);
  Array out(xv.rows(), xv.cols());
  for (int c = 0; c < xv.cols(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < xv.rows(); ++r) {
      acc += xv.at(r, c);
      out.at(r, c) = acc;
    }
  }
  return make_op(t, std::move(out), t.needs_grad(x), "cumsum_rows",
                 [x](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (int c = 0; c < g.cols(); ++c) {
                     double acc = 0.0;
                     for (int r = g.rows() - 1; r >= 0; --r) {
                       acc += g.at(r, c);
                       gx.at(r, c) += acc;
                     }
                   }
                 });
}

int sum_all(Tape& t, int x) {
  const Array& xv = t.val(x);
  double s = 0.0;
  for (size_t i = 0; i < xv.size(); ++i) s += xv[i];
  return make_op(t, Array::scalar(s), t.needs_grad(x), "sum_all",
                 [x](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(x)) return;
                   Array& gx = t2.grad_ref(x);
                   for (size_t i = 0; i < gx.size(); ++i) gx[i] += g[0];
                 });
}

int smooth_l1(Tape& t, int pred, const Array& target) {
  const Array& pv = t.val(pred);
  require(pv.same_shape(target), "smooth_l1: shape mismatch");
  require(pv.size() > 0, "smooth_l1: empty input");
  const double inv_n = 1.0 / static_cast<double>(pv.size());
  double loss = 0.0;
  for (size_t i = 0; i < pv.size(); ++i) {
    const double d = pv[i] - target[i];
    const double ad = std::abs(d);
    loss += ad < 1.0 ? 0.5 * d * d : ad - 0.5;
  }
  loss *= inv_n;
  Array tgt = target;
  return make_op(t, Array::scalar(loss), t.needs_grad(pred), "smooth_l1",
                 [pred, tgt = std::move(tgt), inv_n](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(pred)) return;
                   const Array& pv2 = t2.val(pred);
                   Array& gp = t2.grad_ref(pred);
                   for (size_t i = 0; i < pv2.size(); ++i) {
                     const double d = pv2[i] - tgt[i];
                     const double dd = std::abs(d) < 1.0 ? d : (d > 0 ? 1.0 : -1.0);
                     gp[i] += g[0] * inv_n * dd;
                   }
                 });
}

int cross_entropy(Tape& t, int logits, int label) {
  const Array& lv = t.val(logits);
  require(lv.rows() == 1, "cross_entropy: logits must be a single row");
  require(0 <= label && label < lv.cols(), "cross_entropy: label out of range");
  double max_v = lv[0];
  for (int c = 1; c < lv.cols(); ++c) max_v = std::max(max_v, lv.at(0, c));
  double sum = 0.0;
  for (int c = 0; c < lv.cols(); ++c) sum += std::exp(lv.at(0, c) - max_v);
  const double lse = max_v + std::log(sum);
  const double loss = lse - lv.at(0, label);
  return make_op(t, Array::scalar(loss), t.needs_grad(logits), "cross_entropy",
                 [logits, label](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(logits)) return;
                   const Array& lv2 = t2.val(logits);
                   Array& gl = t2.grad_ref(logits);
                   double max_v2 = lv2[0];
                   for (int c = 1; c < lv2.cols(); ++c) max_v2 = std::max(max_v2, lv2.at(0, c));
                   double sum2 = 0.0;
                   for (int c = 0; c < lv2.cols(); ++c) sum2 += std::exp(lv2.at(0, c) - max_v2);
                   for (int c = 0; c < lv2.cols(); ++c) {
                     const double p = std::exp(lv2.at(0, c) - max_v2) / sum2;
                     gl.at(0, c) += g[0] * (p - (c == label ? 1.0 : 0.0));
                   }
                 });
}

int l2_norm_loss(Tape& t, int a, const Array& b, double eps_smooth) {
  const Array& av = t.val(a);
  require(av.same_shape(b), "l2_norm_loss: shape mismatch");
  double s = eps_smooth;
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - b[i];
    s += d * d;
  }
  const double loss = std::sqrt(s);
  Array bc = b;
  return make_op(t, Array::scalar(loss), t.needs_grad(a), "l2_norm_loss",
                 [a, bc = std::move(bc), loss](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(a)) return;
                   const Array& av2 = t2.val(a);
                   Array& ga = t2.grad_ref(a);
                   const double inv = 1.0 / loss;
                   for (size_t i = 0; i < av2.size(); ++i)
                     ga[i] += g[0] * (av2[i] - bc[i]) * inv;
                 });
}

int l2_norm_loss(Tape& t, int a, int b, double eps_smooth) {
  const Array& av = t.val(a);
  const Array& bv = t.val(b);
  require(av.same_shape(bv), "l2_norm_loss: shape mismatch");
  double s = eps_smooth;
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    s += d * d;
  }
  const double loss = std::sqrt(s);
  return make_op(t, Array::scalar(loss), t.needs_grad(a) || t.needs_grad(b), "l2_norm_loss",
                 [a, b, loss](Tape& t2, const Array& g) {
                   const Array& av2 = t2.val(a);
                   const Array& bv2 = t2.val(b);
                   const double inv = 1.0 / loss;
                   if (t2.needs_grad(a)) {
                     Array& ga = t2.grad_ref(a);
                     for (size_t i = 0; i < av2.size(); ++i)
                       ga[i] += g[0] * (av2[i] - bv2[i]) * inv;
                   }
                   if (t2.needs_grad(b)) {
                     Array& gb = t2.grad_ref(b);
                     for (size_t i = 0; i < av2.size(); ++i)
                       gb[i] -= g[0] * (av2[i] - bv2[i]) * inv;
                   }
                 });
}

int squared_l2_loss(Tape& t, int a, const Array& b) {
  const Array& av = t.val(a);
  require(av.same_shape(b), "squared_l2_loss: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - b[i];
    s += d * d;
  }
  Array bc = b;
  return make_op(t, Array::scalar(s), t.needs_grad(a), "squared_l2_loss",
                 [a, bc = std::move(bc)](Tape& t2, const Array& g) {
                   if (!t2.needs_grad(a)) return;
                   const Array& av2 = t2.val(a);
                   Array& ga = t2.grad_ref(a);
                   for (size_t i = 0; i < av2.size(); ++i)
                     ga[i] += g[0] * 2.0 * (av2[i] - bc[i]);
                 });
}

}  // namespace bf::diff
