#include "doctest.h"
#include "rsp/rs_parabolic.hpp"

#include <map>
#include <random>
#include <set>

using namespace rsp;

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long predicted_count(int n) {
  long long s = 0;
  for (int m = 1; m <= n + 1; ++m) s += m * binom(n, m - 1);
  return s;
}

}  // namespace

TEST_CASE("census for small n") {
  CHECK(enumerate_rs(1).size() == 3);
  CHECK(enumerate_rs(2).size() == 8);
  for (int n = 1; n <= 4; ++n) {
    auto all = enumerate_rs(n);
    CHECK(static_cast<long long>(all.size()) == predicted_count(n));
    auto brute = brute_force_rs(n);
    CHECK(brute.size() == all.size());
    std::set<std::pair<BlockParabolic, BlockParabolic>> from_enum, from_brute(brute.begin(), brute.end());
    for (auto& P : all) {
      CHECK(satisfies_defining_property(P.p_n, P.p_np1));
      from_enum.emplace(P.p_n, P.p_np1);
    }
    CHECK(from_enum == from_brute);
    CHECK(standard_rs(n).size() == (1u << n));
  }
}

TEST_CASE("from_pair examples") {
  auto P = from_pair({1, 2}, 2, {1, 1});
  CHECK(P.type_tag == 1);
  CHECK(P.w_std.is_identity());
  CHECK(P.p_np1 == BlockParabolic::standard({1, 2}));

  auto Q = from_pair({1, 2}, 1, {2});
  CHECK(Q.type_tag == 2);
  CHECK(Q.w_std == WeylElement({3, 1, 2}));
  CHECK(Q.p_np1.blocks() == std::vector<Block>{{3}, {1, 2}});
  // The inverse cycle fails the defining property.
  auto wrong = conjugate(Q.w_std.inverse(), BlockParabolic::standard({1, 2}));
  CHECK_FALSE(satisfies_defining_property(Q.p_n, wrong));

  CHECK_THROWS_AS(from_pair({1, 2}, 1, {1, 1}), ValidationError);
  CHECK_THROWS_AS(from_pair({1, 2}, 3), ValidationError);
}

TEST_CASE("inverse map round-trips for n <= 4") {
  for (int n = 1; n <= 4; ++n)
    for (auto& P : enumerate_rs(n)) {
      auto back = from_parabolics(P.p_n, P.p_np1);
      REQUIRE(back.has_value());
      CHECK(*back == P);
    }
}

TEST_CASE("decomposition over P_H is disjoint") {
  for (int n = 1; n <= 4; ++n) {
    std::map<std::vector<int>, int> classes;
    for (auto& P : enumerate_rs(n)) classes[P.p_h]++;
    CHECK(classes.size() == compositions(n).size());
    for (auto& [ph, count] : classes) CHECK(count == 2 * static_cast<int>(ph.size()) + 1);
  }
}

TEST_CASE("Levi decomposition") {
  auto G = from_pair({4}, 1);
  auto d = levi_decomposition(G);
  CHECK(d.m_plus.empty());
  CHECK(d.m_minus.empty());
  CHECK(d.cm_n == 3);
  CHECK(d.cm_np1 == 4);
  auto e = levi_decomposition(from_pair({1, 2}, 2));
  CHECK(e.m_plus == std::vector<int>{1});
  CHECK(e.cm_n == 1);
  CHECK(e.cm_np1 == 2);
  for (auto& P : enumerate_rs(4)) {
    auto l = levi_decomposition(P);
    int s = l.cm_n;
    for (int x : l.m_plus) s += x;
    for (int x : l.m_minus) s += x;
    CHECK(s == 4);
  }
}

TEST_CASE("z-space data") {
  auto z = z_space(from_pair({1, 1, 1}, 2));
  CHECK(z.coweights[0] == Vec{1, 0, 0});
  CHECK(z.coweights[1] == Vec{0, 0, -1});
  CHECK(z.vol_coweights == 1);
  auto g = z_space(from_pair({3}, 1));
  CHECK(g.dim == 0);
  CHECK(g.vol_coweights == 1);

  std::mt19937 rng(5);
  for (int n = 1; n <= 4; ++n)
    for (auto& P : enumerate_rs(n)) {
      auto zs = z_space(P);
      // Coordinates of a point of z_P in GL_n x GL_{n+1}: H_{n,i} = H_{n+1,i}
      // off the pinned block and the pinned block is zero.
      for (int trial = 0; trial < 20; ++trial) {
        Vec H = zeros(zs.m());
        for (int i = 0; i < zs.m(); ++i)
          if (i + 1 != zs.iP) H[i] = frac(static_cast<int>(rng() % 41) - 20, 1 + static_cast<int>(rng() % 5));
        // Expand in the coweight basis.
        Mat A(zs.m(), zeros(zs.dim));
        for (int k = 0; k < zs.dim; ++k)
          for (int i = 0; i < zs.m(); ++i) A[i][k] = zs.coweights[k][i];
        auto c = solve(A, H, zs.dim);
        REQUIRE(c.has_value());
        bool positive = true;
        for (auto& x : *c) positive = positive && x > 0;
        CHECK(positive == in_positive_chamber(zs, H));
      }
    }
}

TEST_CASE("relative restriction") {
  for (int n = 1; n <= 4; ++n) {
    auto all = enumerate_rs(n);
    for (auto& Q : all) {
      std::size_t direct = 0;
      std::set<RSParabolic> assembled;
      for (auto& P : all) {
        if (!rs_contains(Q, P)) continue;
        ++direct;
        auto r = relative_restrict(P, Q);
        CHECK(relative_assemble(Q, r) == P);
        CHECK(P.w_std == embed_cal(Q, r.cal.w_std) * Q.w_std);
      }
      // Second count: all bold refinements times all RS parabolics of cM_Q.
      std::vector<std::vector<std::vector<int>>> choices;
      for (int j = 1; j <= Q.m(); ++j)
        if (j != Q.i0) choices.push_back(compositions(Q.size(j)));
      auto cals = enumerate_rs(Q.size(Q.i0) - 1);
      std::vector<std::size_t> idx(choices.size(), 0);
      while (true) {
        for (auto& cal : cals) {
          RelativeRestriction r;
          for (std::size_t t = 0; t < choices.size(); ++t) r.bold.push_back(choices[t][idx[t]]);
          r.cal = cal;
          auto P = relative_assemble(Q, r);
          CHECK(rs_contains(Q, P));
          assembled.insert(P);
        }
        std::size_t t = 0;
        while (t < idx.size() && ++idx[t] == choices[t].size()) idx[t++] = 0;
        if (t == idx.size()) break;
      }
      CHECK(assembled.size() == direct);
    }
  }
  auto G = from_pair({4}, 1);
  auto P = from_pair({1, 2, 1}, 2);
  auto r = relative_restrict(P, G);
  CHECK(r.bold.empty());
  CHECK(r.cal == P);
}
