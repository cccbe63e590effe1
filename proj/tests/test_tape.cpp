#include <doctest.h>

#include <functional>

#include "ida/tape.hpp"

using namespace ida;

namespace {

using TapeD = Tape<double>;

// Central finite differences on every entry of every trainable param.
void check_param_grads(ParamStore<double>& store,
                       const std::function<int(TapeD&)>& build, double h = 1e-6,
                       double tol = 1e-4) {
  TapeD tape(&store);
  int loss = build(tape);
  tape.backward(loss);
  const auto grads = tape.param_grads();

  for (int pid = 0; pid < store.count(); ++pid) {
    auto& p = store.at(pid);
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      const double orig = p.value.data()[i];
      p.value.data()[i] = orig + h;
      TapeD tp(&store);
      double lp = tp.val(build(tp))(0, 0);
      p.value.data()[i] = orig - h;
      TapeD tm(&store);
      double lm = tm.val(build(tm))(0, 0);
      p.value.data()[i] = orig;

      const double fd = (lp - lm) / (2 * h);
      const double an = grads[static_cast<std::size_t>(pid)].size() > 0
                            ? grads[static_cast<std::size_t>(pid)].data()[i]
                            : 0.0;
      const double denom = std::max({std::fabs(fd), std::fabs(an), 1e-6});
      INFO("param ", p.name, " entry ", i, " fd=", fd, " an=", an);
      CHECK(std::fabs(fd - an) / denom < tol);
    }
  }
}

ParamStore<double> make_store(std::vector<std::pair<std::string, std::pair<int, int>>> shapes,
                              u64 seed = 9) {
  ParamStore<double> store;
  Rng r(seed);
  for (auto& [name, sh] : shapes) store.add(name, sh.first, sh.second, r, 0.5);
  return store;
}

}  // namespace

TEST_SUITE("tape") {

TEST_CASE("matmul chain gradient") {
  auto store = make_store({{"a", {3, 4}}, {"b", {4, 5}}, {"c", {5, 2}}});
  check_param_grads(store, [&](TapeD& t) {
    return t.sum_all(t.matmul(t.matmul(t.param("a"), t.param("b")), t.param("c")));
  });
}

TEST_CASE("transposed matmuls") {
  auto store = make_store({{"a", {4, 3}}, {"b", {4, 5}}, {"c", {2, 5}}});
  check_param_grads(store, [&](TapeD& t) {
    // a^T b -> [3,5]; (a^T b) c^T -> [3,2]
    return t.sum_all(t.matmul_nt(t.matmul_tn(t.param("a"), t.param("b")), t.param("c")));
  });
}

TEST_CASE("softmax layernorm silu tanh") {
  auto store = make_store({{"x", {3, 6}}});
  check_param_grads(store, [&](TapeD& t) {
    int x = t.param("x");
    int s = t.softmax_rows(x, 0.7);
    int l = t.layernorm_rows(t.silu(x));
    return t.mean_all(t.add(s, t.cwise_mul(l, t.tanh_n(x))));
  });
}

TEST_CASE("broadcast and scalar ops") {
  auto store = make_store({{"x", {4, 3}}, {"bias", {1, 3}}, {"gain", {1, 3}}, {"g", {1, 1}}});
  check_param_grads(store, [&](TapeD& t) {
    int y = t.mul_row_broadcast(t.add_row_broadcast(t.param("x"), t.param("bias")), t.param("gain"));
    int z = t.mul_scalar(y, t.tanh_n(t.param("g")));
    return t.mean_all(t.add_const(t.scale(z, 1.7), 0.3));
  });
}

TEST_CASE("concat slice gather scatter") {
  auto store = make_store({{"a", {3, 4}}, {"b", {2, 4}}, {"c", {2, 4}}});
  check_param_grads(store, [&](TapeD& t) {
    int cat = t.concat_rows(t.param("a"), t.param("b"));       // [5,4]
    int sl = t.slice_rows(cat, 1, 3);                          // rows 1..3
    int ga = t.gather_rows(sl, {2, 0, 2});                     // duplicated row
    int sc = t.scatter_rows(cat, t.param("c"), {0, 4});
    return t.add(t.mean_all(ga), t.mean_all(sc));
  });
}

TEST_CASE("im2col pool upsample") {
  auto store = make_store({{"x", {16, 2}}, {"w", {18, 3}}});
  static ConvPlan plan = ConvPlan::make(4, 4, 3);
  check_param_grads(store, [&](TapeD& t) {
    int conv = t.matmul(t.im2col(t.param("x"), &plan), t.param("w"));  // [16,3]
    int down = t.pool2(conv, 4, 4);                                    // [4,3]
    int up = t.upsample2(down, 2, 2);                                  // [16,3]
    return t.mean_all(up);
  });
}

TEST_CASE("losses") {
  auto store = make_store({{"x", {4, 5}}, {"y", {4, 5}}, {"z", {1, 1}}});
  check_param_grads(store, [&](TapeD& t) {
    int m = t.mse(t.param("x"), t.param("y"));
    int ce = t.cross_entropy(t.param("x"), {1, 0, 4, 2});
    int b = t.bce_logit(t.param("z"), 0.3);
    return t.add(t.add(m, ce), b);
  });
}

TEST_CASE("division and sqrt for cosine-style expressions") {
  auto store = make_store({{"a", {1, 6}}, {"b", {1, 6}}});
  check_param_grads(store, [&](TapeD& t) {
    int a = t.param("a"), b = t.param("b");
    int dot = t.sum_all(t.cwise_mul(a, b));
    int na = t.cwise_sqrt(t.add_const(t.sum_all(t.cwise_mul(a, a)), 1e-12));
    int nb = t.cwise_sqrt(t.add_const(t.sum_all(t.cwise_mul(b, b)), 1e-12));
    return t.cwise_div(dot, t.cwise_mul(na, nb));
  });
}

TEST_CASE("value reuse in diamond graphs accumulates correctly") {
  auto store = make_store({{"x", {2, 2}}});
  check_param_grads(store, [&](TapeD& t) {
    int x = t.param("x");
    int sq = t.cwise_mul(x, x);  // same node twice
    return t.mean_all(t.add(sq, x));
  });
}

TEST_CASE("shape errors throw") {
  ParamStore<double> store;
  Rng r(1);
  store.add("a", 3, 4, r, 1.0);
  store.add("b", 3, 4, r, 1.0);
  TapeD t(&store);
  CHECK_THROWS(t.matmul(t.param("a"), t.param("b")));
  CHECK_THROWS(t.mse(t.param("a"), t.slice_rows(t.param("b"), 0, 2)));
}

}  // TEST_SUITE
