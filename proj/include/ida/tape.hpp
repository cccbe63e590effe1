#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ida/params.hpp"
#include "ida/types.hpp"

namespace ida {

// im2col index plan for a kxk same-padded conv on an HxW map stored as
// (H*W) x C. idx[j*HW + i] is the source row feeding kernel slot j at output
// pixel i, or -1 for padding.
struct ConvPlan {
  int h = 0, w = 0, k = 0;
  std::vector<int> idx;

  static ConvPlan make(int h, int w, int k) {
    ConvPlan p;
    p.h = h; p.w = w; p.k = k;
    const int r = k / 2, hw = h * w;
    p.idx.resize(static_cast<std::size_t>(k) * k * hw);
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const int j = ky * k + kx;
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) {
            const int sy = y + ky - r, sx = x + kx - r;
            const bool in = sy >= 0 && sy < h && sx >= 0 && sx < w;
            p.idx[static_cast<std::size_t>(j) * hw + y * w + x] = in ? sy * w + sx : -1;
          }
      }
    return p;
  }
};

// Reverse-mode tape over dense matrices. One tape per sample per step;
// values live until the tape is destroyed.
template <typename S>
class Tape {
 public:
  using M = Mat<S>;

  explicit Tape(ParamStore<S>* store = nullptr) : store_(store) {}

  // ---- leaves ----
  int constant(M v) { return push(Op::kConst, -1, -1, std::move(v)); }

  int param(int pid) {
    assert(store_);
    int n = push(Op::kParam, -1, -1, store_->value(pid));
    nodes_[n].param = pid;
    return n;
  }

  int param(const std::string& name) { return param(store_->index(name)); }

  // ---- arithmetic ----
  int add(int a, int b) { return push(Op::kAdd, a, b, val(a) + val(b)); }
  int sub(int a, int b) { return push(Op::kSub, a, b, val(a) - val(b)); }
  int cwise_mul(int a, int b) { return push(Op::kCwiseMul, a, b, val(a).cwiseProduct(val(b))); }
  int cwise_div(int a, int b) { return push(Op::kCwiseDiv, a, b, val(a).cwiseQuotient(val(b))); }
  int scale(int a, double s) {
    int n = push(Op::kScale, a, -1, val(a) * static_cast<S>(s));
    nodes_[n].aux_s = s;
    return n;
  }
  int add_const(int a, double s) {
    int n = push(Op::kAddConst, a, -1, (val(a).array() + static_cast<S>(s)).matrix());
    nodes_[n].aux_s = s;
    return n;
  }
  // A [n,d] + b [1,d] broadcast over rows
  int add_row_broadcast(int a, int b) {
    M v = val(a);
    v.rowwise() += RowVec<S>(val(b).row(0));
    return push(Op::kAddRowBroadcast, a, b, std::move(v));
  }
  // A [n,d] * g [1,d]
  int mul_row_broadcast(int a, int b) {
    M v = val(a);
    v.array().rowwise() *= val(b).row(0).array();
    return push(Op::kMulRowBroadcast, a, b, std::move(v));
  }
  // A [n,d] * s [1,1]
  int mul_scalar(int a, int s) { return push(Op::kMulScalar, a, s, val(a) * val(s)(0, 0)); }

  // ---- linear algebra ----
  int matmul(int a, int b) {
    check_inner(val(a).cols(), val(b).rows());
    return push(Op::kMatmul, a, b, val(a) * val(b));
  }
  // A^T * B with A [k,n], B [k,m] -> [n,m]
  int matmul_tn(int a, int b) {
    check_inner(val(a).rows(), val(b).rows());
    return push(Op::kMatmulTN, a, b, val(a).transpose() * val(b));
  }
  // A * B^T with A [n,k], B [m,k] -> [n,m]
  int matmul_nt(int a, int b) {
    check_inner(val(a).cols(), val(b).cols());
    return push(Op::kMatmulNT, a, b, val(a) * val(b).transpose());
  }

  // ---- nonlinearities ----
  int silu(int a) {
    const M& x = val(a);
    M v = x.array() / (1 + (-x.array()).exp());
    return push(Op::kSilu, a, -1, std::move(v));
  }
  int tanh_n(int a) { return push(Op::kTanh, a, -1, val(a).array().tanh().matrix()); }
  int cwise_sqrt(int a) { return push(Op::kSqrt, a, -1, val(a).cwiseSqrt()); }

  // rows of softmax(scale * x); rows sum to 1
  int softmax_rows(int a, double sc = 1.0) {
    M v = val(a) * static_cast<S>(sc);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      S m = v.row(i).maxCoeff();
      v.row(i) = (v.row(i).array() - m).exp();
      v.row(i) /= v.row(i).sum();
    }
    int n = push(Op::kSoftmaxRows, a, -1, std::move(v));
    nodes_[n].aux_s = sc;
    return n;
  }

  // per-row standardization (x - mean) / sqrt(var + eps)
  int layernorm_rows(int a, double eps = 1e-5) {
    const M& x = val(a);
    M v(x.rows(), x.cols());
    const auto d = static_cast<S>(x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      S mu = x.row(i).mean();
      S var = (x.row(i).array() - mu).square().sum() / d;
      v.row(i) = (x.row(i).array() - mu) / std::sqrt(var + static_cast<S>(eps));
    }
    int n = push(Op::kLayerNorm, a, -1, std::move(v));
    nodes_[n].aux_s = eps;
    return n;
  }

  // ---- shape ops ----
  int concat_rows(int a, int b) {
    if (val(a).cols() != val(b).cols()) throw std::invalid_argument("concat_rows: column mismatch");
    M v(val(a).rows() + val(b).rows(), val(a).cols());
    v.topRows(val(a).rows()) = val(a);
    v.bottomRows(val(b).rows()) = val(b);
    return push(Op::kConcatRows, a, b, std::move(v));
  }
  int slice_rows(int a, int r0, int rows) {
    if (r0 < 0 || r0 + rows > val(a).rows()) throw std::invalid_argument("slice_rows out of range");
    int n = push(Op::kSliceRows, a, -1, val(a).middleRows(r0, rows));
    nodes_[n].aux_i0 = r0;
    nodes_[n].aux_i1 = rows;
    return n;
  }
  int gather_rows(int a, std::vector<int> rows) {
    M v(static_cast<Eigen::Index>(rows.size()), val(a).cols());
    for (std::size_t i = 0; i < rows.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = val(a).row(rows[i]);
    int n = push(Op::kGatherRows, a, -1, std::move(v));
    nodes_[n].aux_rows = std::move(rows);
    return n;
  }
  // replace rows of a by the rows of b at the given positions
  int scatter_rows(int a, int b, std::vector<int> positions) {
    if (static_cast<Eigen::Index>(positions.size()) != val(b).rows())
      throw std::invalid_argument("scatter_rows: position count mismatch");
    M v = val(a);
    for (std::size_t i = 0; i < positions.size(); ++i)
      v.row(positions[i]) = val(b).row(static_cast<Eigen::Index>(i));
    int n = push(Op::kScatterRows, a, b, std::move(v));
    nodes_[n].aux_rows = std::move(positions);
    return n;
  }

  // ---- conv / resolution ops ----
  int im2col(int a, const ConvPlan* plan) {
    const M& x = val(a);
    const int hw = plan->h * plan->w, kk = plan->k * plan->k;
    if (x.rows() != hw) throw std::invalid_argument("im2col: row count != H*W");
    const Eigen::Index c = x.cols();
    M v = M::Zero(hw, static_cast<Eigen::Index>(kk) * c);
    for (int j = 0; j < kk; ++j)
      for (int i = 0; i < hw; ++i) {
        const int src = plan->idx[static_cast<std::size_t>(j) * hw + i];
        if (src >= 0) v.block(i, static_cast<Eigen::Index>(j) * c, 1, c) = x.row(src);
      }
    int n = push(Op::kIm2Col, a, -1, std::move(v));
    nodes_[n].plan = plan;
    return n;
  }
  // 2x average pool on an (H*W) x C map
  int pool2(int a, int h, int w) {
    const M& x = val(a);
    if (x.rows() != static_cast<Eigen::Index>(h) * w) throw std::invalid_argument("pool2 shape");
    M v = M::Zero(static_cast<Eigen::Index>(h / 2) * (w / 2), x.cols());
    for (int y = 0; y < h / 2; ++y)
      for (int xx = 0; xx < w / 2; ++xx)
        v.row(y * (w / 2) + xx) =
            S(0.25) * (x.row(2 * y * w + 2 * xx) + x.row(2 * y * w + 2 * xx + 1) +
                       x.row((2 * y + 1) * w + 2 * xx) + x.row((2 * y + 1) * w + 2 * xx + 1));
    int n = push(Op::kPool2, a, -1, std::move(v));
    nodes_[n].aux_i0 = h;
    nodes_[n].aux_i1 = w;
    return n;
  }
  // nearest-neighbour 2x upsample on an (h*w) x C map
  int upsample2(int a, int h, int w) {
    const M& x = val(a);
    if (x.rows() != static_cast<Eigen::Index>(h) * w) throw std::invalid_argument("upsample2 shape");
    M v(static_cast<Eigen::Index>(h) * w * 4, x.cols());
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < w; ++xx) {
        const auto row = x.row(y * w + xx);
        v.row((2 * y) * (2 * w) + 2 * xx) = row;
        v.row((2 * y) * (2 * w) + 2 * xx + 1) = row;
        v.row((2 * y + 1) * (2 * w) + 2 * xx) = row;
        v.row((2 * y + 1) * (2 * w) + 2 * xx + 1) = row;
      }
    int n = push(Op::kUpsample2, a, -1, std::move(v));
    nodes_[n].aux_i0 = h;
    nodes_[n].aux_i1 = w;
    return n;
  }

  // ---- reductions / losses ----
  int sum_all(int a) {
    M v(1, 1);
    v(0, 0) = val(a).sum();
    return push(Op::kSumAll, a, -1, std::move(v));
  }
  int mean_all(int a) {
    M v(1, 1);
    v(0, 0) = val(a).mean();
    return push(Op::kMeanAll, a, -1, std::move(v));
  }
  // mean squared error over all elements
  int mse(int a, int b) {
    if (val(a).rows() != val(b).rows() || val(a).cols() != val(b).cols())
      throw std::invalid_argument("mse: shape mismatch");
    M v(1, 1);
    v(0, 0) = (val(a) - val(b)).squaredNorm() / static_cast<S>(val(a).size());
    return push(Op::kMse, a, b, std::move(v));
  }
  // mean cross-entropy of row-logits against integer labels
  int cross_entropy(int a, std::vector<int> labels) {
    const M& x = val(a);
    if (static_cast<Eigen::Index>(labels.size()) != x.rows())
      throw std::invalid_argument("cross_entropy: label count");
    S total = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      S m = x.row(i).maxCoeff();
      S lse = m + std::log((x.row(i).array() - m).exp().sum());
      total += lse - x(i, labels[static_cast<std::size_t>(i)]);
    }
    M v(1, 1);
    v(0, 0) = total / static_cast<S>(x.rows());
    int n = push(Op::kCrossEntropy, a, -1, std::move(v));
    nodes_[n].aux_rows = std::move(labels);
    return n;
  }
  // binary cross-entropy on a single logit
  int bce_logit(int a, double target) {
    const S z = val(a)(0, 0);
    const S m = z > 0 ? z : 0;
    M v(1, 1);
    v(0, 0) = m - z * static_cast<S>(target) + std::log(std::exp(-m) + std::exp(z - m));
    int n = push(Op::kBceLogit, a, -1, std::move(v));
    nodes_[n].aux_s = target;
    return n;
  }

  // ---- access ----
  const M& val(int id) const { return nodes_[static_cast<std::size_t>(id)].val; }
  const M& grad_of(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
  std::size_t size() const { return nodes_.size(); }

  // Param gradients accumulated by the last backward(), indexed by param id.
  const std::vector<M>& param_grads() const { return pgrads_; }

  void backward(int loss) {
    if (val(loss).rows() != 1 || val(loss).cols() != 1)
      throw std::invalid_argument("backward: loss must be 1x1");
    for (auto& n : nodes_) n.grad.resize(0, 0);
    if (store_) {
      pgrads_.assign(static_cast<std::size_t>(store_->count()), M());
    }
    nodes_[static_cast<std::size_t>(loss)].grad = M::Ones(1, 1);
    for (int i = loss; i >= 0; --i) step_back(i);
    if (store_) {
      for (auto& n : nodes_)
        if (n.op == Op::kParam && n.grad.size() > 0) {
          auto& pg = pgrads_[static_cast<std::size_t>(n.param)];
          if (pg.size() == 0) pg = n.grad;
          else pg += n.grad;
        }
    }
  }

 private:
  enum class Op {
    kConst, kParam, kAdd, kSub, kCwiseMul, kCwiseDiv, kScale, kAddConst, kAddRowBroadcast,
    kMulRowBroadcast, kMulScalar, kMatmul, kMatmulTN, kMatmulNT, kSilu, kTanh, kSqrt,
    kSoftmaxRows, kLayerNorm, kConcatRows, kSliceRows, kGatherRows, kScatterRows, kIm2Col,
    kPool2, kUpsample2, kSumAll, kMeanAll, kMse, kCrossEntropy, kBceLogit
  };

  struct Node {
    Op op;
    int a, b;
    int param = -1;
    M val;
    M grad;
    double aux_s = 0.0;
    int aux_i0 = 0, aux_i1 = 0;
    std::vector<int> aux_rows;
    const ConvPlan* plan = nullptr;
  };

  static void check_inner(Eigen::Index x, Eigen::Index y) {
    if (x != y) throw std::invalid_argument("matmul: inner dimension mismatch");
  }

  int push(Op op, int a, int b, M v) {
    Node n;
    n.op = op;
    n.a = a;
    n.b = b;
    n.val = std::move(v);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  M& acc(int id, Eigen::Index r, Eigen::Index c) {
    auto& g = nodes_[static_cast<std::size_t>(id)].grad;
    if (g.size() == 0) g = M::Zero(r, c);
    return g;
  }
  M& acc_like(int id) {
    const auto& v = nodes_[static_cast<std::size_t>(id)].val;
    return acc(id, v.rows(), v.cols());
  }

  void step_back(int i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.grad.size() == 0) return;  // not on any path to the loss
    const M& g = n.grad;
    switch (n.op) {
      case Op::kConst:
      case Op::kParam:
        break;
      case Op::kAdd:
        acc_like(n.a) += g;
        acc_like(n.b) += g;
        break;
      case Op::kSub:
        acc_like(n.a) += g;
        acc_like(n.b) -= g;
        break;
      case Op::kCwiseMul:
        acc_like(n.a) += g.cwiseProduct(val(n.b));
        acc_like(n.b) += g.cwiseProduct(val(n.a));
        break;
      case Op::kCwiseDiv: {
        acc_like(n.a) += g.cwiseQuotient(val(n.b));
        acc_like(n.b) -= g.cwiseProduct(n.val).cwiseQuotient(val(n.b));
        break;
      }
      case Op::kScale:
        acc_like(n.a) += g * static_cast<S>(n.aux_s);
        break;
      case Op::kAddConst:
        acc_like(n.a) += g;
        break;
      case Op::kAddRowBroadcast:
        acc_like(n.a) += g;
        acc_like(n.b) += g.colwise().sum();
        break;
      case Op::kMulRowBroadcast: {
        M ga = g;
        ga.array().rowwise() *= val(n.b).row(0).array();
        acc_like(n.a) += ga;
        acc_like(n.b) += g.cwiseProduct(val(n.a)).colwise().sum();
        break;
      }
      case Op::kMulScalar: {
        acc_like(n.a) += g * val(n.b)(0, 0);
        acc(n.b, 1, 1)(0, 0) += g.cwiseProduct(val(n.a)).sum();
        break;
      }
      case Op::kMatmul:
        acc_like(n.a).noalias() += g * val(n.b).transpose();
        acc_like(n.b).noalias() += val(n.a).transpose() * g;
        break;
      case Op::kMatmulTN:
        acc_like(n.a).noalias() += val(n.b) * g.transpose();
        acc_like(n.b).noalias() += val(n.a) * g;
        break;
      case Op::kMatmulNT:
        acc_like(n.a).noalias() += g * val(n.b);
        acc_like(n.b).noalias() += g.transpose() * val(n.a);
        break;
      case Op::kSilu: {
        const M& x = val(n.a);
        M sig = (1 / (1 + (-x.array()).exp())).matrix();
        acc_like(n.a) +=
            g.cwiseProduct((sig.array() * (1 + x.array() * (1 - sig.array()))).matrix());
        break;
      }
      case Op::kTanh:
        acc_like(n.a) += g.cwiseProduct((1 - n.val.array().square()).matrix());
        break;
      case Op::kSqrt:
        acc_like(n.a) += (g.array() * S(0.5) / n.val.array()).matrix();
        break;
      case Op::kSoftmaxRows: {
        const M& y = n.val;
        M gx(y.rows(), y.cols());
        for (Eigen::Index r = 0; r < y.rows(); ++r) {
          S dot = g.row(r).cwiseProduct(y.row(r)).sum();
          gx.row(r) = (g.row(r).array() - dot) * y.row(r).array() * static_cast<S>(n.aux_s);
        }
        acc_like(n.a) += gx;
        break;
      }
      case Op::kLayerNorm: {
        const M& x = val(n.a);
        const M& y = n.val;
        const auto d = static_cast<S>(x.cols());
        M gx(x.rows(), x.cols());
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          S mu = x.row(r).mean();
          S var = (x.row(r).array() - mu).square().sum() / d;
          S inv = S(1) / std::sqrt(var + static_cast<S>(n.aux_s));
          S gmean = g.row(r).mean();
          S gydot = g.row(r).cwiseProduct(y.row(r)).sum() / d;
          gx.row(r) = inv * (g.row(r).array() - gmean - y.row(r).array() * gydot);
        }
        acc_like(n.a) += gx;
        break;
      }
      case Op::kConcatRows:
        acc_like(n.a) += g.topRows(val(n.a).rows());
        acc_like(n.b) += g.bottomRows(val(n.b).rows());
        break;
      case Op::kSliceRows:
        acc_like(n.a).middleRows(n.aux_i0, n.aux_i1) += g;
        break;
      case Op::kGatherRows: {
        M& ga = acc_like(n.a);
        for (std::size_t r = 0; r < n.aux_rows.size(); ++r)
          ga.row(n.aux_rows[r]) += g.row(static_cast<Eigen::Index>(r));
        break;
      }
      case Op::kScatterRows: {
        M ga = g;
        M& gb = acc_like(n.b);
        for (std::size_t r = 0; r < n.aux_rows.size(); ++r) {
          gb.row(static_cast<Eigen::Index>(r)) += g.row(n.aux_rows[r]);
          ga.row(n.aux_rows[r]).setZero();
        }
        acc_like(n.a) += ga;
        break;
      }
      case Op::kIm2Col: {
        const int hw = n.plan->h * n.plan->w, kk = n.plan->k * n.plan->k;
        const Eigen::Index c = val(n.a).cols();
        M& ga = acc_like(n.a);
        for (int j = 0; j < kk; ++j)
          for (int r = 0; r < hw; ++r) {
            const int src = n.plan->idx[static_cast<std::size_t>(j) * hw + r];
            if (src >= 0) ga.row(src) += g.block(r, static_cast<Eigen::Index>(j) * c, 1, c);
          }
        break;
      }
      case Op::kPool2: {
        const int h = n.aux_i0, w = n.aux_i1;
        M& ga = acc_like(n.a);
        for (int y = 0; y < h / 2; ++y)
          for (int x = 0; x < w / 2; ++x) {
            const auto gr = S(0.25) * g.row(y * (w / 2) + x);
            ga.row(2 * y * w + 2 * x) += gr;
            ga.row(2 * y * w + 2 * x + 1) += gr;
            ga.row((2 * y + 1) * w + 2 * x) += gr;
            ga.row((2 * y + 1) * w + 2 * x + 1) += gr;
          }
        break;
      }
      case Op::kUpsample2: {
        const int h = n.aux_i0, w = n.aux_i1;
        M& ga = acc_like(n.a);
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            ga.row(y * w + x) += g.row((2 * y) * (2 * w) + 2 * x) +
                                 g.row((2 * y) * (2 * w) + 2 * x + 1) +
                                 g.row((2 * y + 1) * (2 * w) + 2 * x) +
                                 g.row((2 * y + 1) * (2 * w) + 2 * x + 1);
        break;
      }
      case Op::kSumAll:
        acc_like(n.a).array() += g(0, 0);
        break;
      case Op::kMeanAll:
        acc_like(n.a).array() += g(0, 0) / static_cast<S>(val(n.a).size());
        break;
      case Op::kMse: {
        const S c = S(2) * g(0, 0) / static_cast<S>(val(n.a).size());
        M d = val(n.a) - val(n.b);
        acc_like(n.a) += c * d;
        acc_like(n.b) -= c * d;
        break;
      }
      case Op::kCrossEntropy: {
        const M& x = val(n.a);
        M gx(x.rows(), x.cols());
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          S m = x.row(r).maxCoeff();
          RowVec<S> e = (x.row(r).array() - m).exp();
          gx.row(r) = e / e.sum();
          gx(r, n.aux_rows[static_cast<std::size_t>(r)]) -= S(1);
        }
        acc_like(n.a) += g(0, 0) / static_cast<S>(x.rows()) * gx;
        break;
      }
      case Op::kBceLogit: {
        const S z = val(n.a)(0, 0);
        const S sig = S(1) / (S(1) + std::exp(-z));
        acc(n.a, 1, 1)(0, 0) += g(0, 0) * (sig - static_cast<S>(n.aux_s));
        break;
      }
    }
  }

  ParamStore<S>* store_;
  std::vector<Node> nodes_;
  std::vector<M> pgrads_;
};

}  // namespace ida
