#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ida/hash.hpp"
#include "ida/rng.hpp"
#include "ida/types.hpp"

namespace ida {

template <typename S>
struct Param {
  std::string name;
  Mat<S> value;
  Mat<S> grad;      // accumulated by the training loop
  Mat<S> adam_m, adam_v;
  bool trainable = true;
};

// Named parameter groups. Group membership is by name prefix, e.g.
// "unet.down32.xf.adapter.gamma" belongs to group "unet.*.adapter".
template <typename S>
class ParamStore {
 public:
  int add(const std::string& name, int rows, int cols, Rng& rng, double init_scale) {
    Param<S> p;
    p.name = name;
    p.value.resize(rows, cols);
    rng.fill_normal(p.value, init_scale);
    return insert(std::move(p));
  }

  int add_zeros(const std::string& name, int rows, int cols) {
    Param<S> p;
    p.name = name;
    p.value = Mat<S>::Zero(rows, cols);
    return insert(std::move(p));
  }

  int add_value(const std::string& name, Mat<S> v) {
    Param<S> p;
    p.name = name;
    p.value = std::move(v);
    return insert(std::move(p));
  }

  int count() const { return static_cast<int>(params_.size()); }

  int index(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::invalid_argument("unknown parameter: " + name);
    return it->second;
  }
  bool has(const std::string& name) const { return by_name_.count(name) > 0; }

  Param<S>& at(int i) { return params_[static_cast<std::size_t>(i)]; }
  const Param<S>& at(int i) const { return params_[static_cast<std::size_t>(i)]; }
  Param<S>& at(const std::string& name) { return at(index(name)); }
  const Mat<S>& value(int i) const { return params_[static_cast<std::size_t>(i)].value; }

  // ---- trainability / freezing ----
  void set_all_trainable(bool t) {
    for (auto& p : params_) p.trainable = t;
  }
  void set_trainable_if(bool t, const std::vector<std::string>& substrings) {
    for (auto& p : params_)
      for (const auto& s : substrings)
        if (p.name.find(s) != std::string::npos) p.trainable = t;
  }
  std::vector<std::string> trainable_names() const {
    std::vector<std::string> out;
    for (const auto& p : params_)
      if (p.trainable) out.push_back(p.name);
    return out;
  }
  i64 trainable_scalar_count() const {
    i64 n = 0;
    for (const auto& p : params_)
      if (p.trainable) n += p.value.size();
    return n;
  }

  u64 hash_param(const Param<S>& p) const {
    u64 h = fnv1a64(p.name);
    h = fnv1a64(p.value.data(), sizeof(S) * static_cast<std::size_t>(p.value.size()), h);
    return h;
  }
  // Combined hash of every non-trainable parameter: the freeze contract.
  u64 frozen_hash() const {
    u64 h = 0xcbf29ce484222325ULL;
    for (const auto& p : params_)
      if (!p.trainable) {
        u64 ph = hash_param(p);
        h = fnv1a64(&ph, sizeof(ph), h);
      }
    return h;
  }
  u64 full_hash() const {
    u64 h = 0xcbf29ce484222325ULL;
    for (const auto& p : params_) {
      u64 ph = hash_param(p);
      h = fnv1a64(&ph, sizeof(ph), h);
    }
    return h;
  }

  // ---- gradient handling ----
  void zero_grad() {
    for (auto& p : params_)
      if (p.grad.size() > 0) p.grad.setZero();
  }
  // Merge per-sample tape gradients (fixed order keeps runs reproducible).
  void accumulate(const std::vector<Mat<S>>& tape_grads, S scale = S(1)) {
    for (std::size_t i = 0; i < tape_grads.size(); ++i) {
      if (tape_grads[i].size() == 0) continue;
      auto& p = params_[i];
      if (!p.trainable) continue;
      if (p.grad.size() == 0) p.grad = Mat<S>::Zero(p.value.rows(), p.value.cols());
      p.grad += scale * tape_grads[i];
    }
  }

  void adam_step(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) {
    ++adam_t_;
    const S c1 = static_cast<S>(1.0 / (1.0 - std::pow(beta1, adam_t_)));
    const S c2 = static_cast<S>(1.0 / (1.0 - std::pow(beta2, adam_t_)));
    for (auto& p : params_) {
      if (!p.trainable || p.grad.size() == 0) continue;
      if (p.adam_m.size() == 0) {
        p.adam_m = Mat<S>::Zero(p.value.rows(), p.value.cols());
        p.adam_v = Mat<S>::Zero(p.value.rows(), p.value.cols());
      }
      p.adam_m = static_cast<S>(beta1) * p.adam_m + static_cast<S>(1 - beta1) * p.grad;
      p.adam_v = static_cast<S>(beta2) * p.adam_v + static_cast<S>(1 - beta2) * p.grad.cwiseProduct(p.grad);
      p.value.array() -= static_cast<S>(lr) * (p.adam_m.array() * c1) /
                         ((p.adam_v.array() * c2).sqrt() + static_cast<S>(eps));
    }
  }

  void reset_optimizer() {
    adam_t_ = 0;
    for (auto& p : params_) {
      p.adam_m.resize(0, 0);
      p.adam_v.resize(0, 0);
    }
  }

  const std::vector<Param<S>>& params() const { return params_; }
  std::vector<Param<S>>& params() { return params_; }

 private:
  int insert(Param<S>&& p) {
    if (by_name_.count(p.name)) throw std::invalid_argument("duplicate parameter: " + p.name);
    by_name_[p.name] = static_cast<int>(params_.size());
    params_.push_back(std::move(p));
    return static_cast<int>(params_.size()) - 1;
  }

  std::vector<Param<S>> params_;
  std::map<std::string, int> by_name_;
  i64 adam_t_ = 0;
};

}  // namespace ida
