#include "doctest.h"
#include "rsp/cones.hpp"

#include <cmath>
#include <random>

using namespace rsp;

namespace {

Rational rand_q(std::mt19937& rng, int lo, int hi, int den = 8) {
  int span = (hi - lo) * den;
  return frac(lo * den + static_cast<int>(rng() % (span + 1)), den);
}

// A covector with prescribed negative pairings against the coweights.
Vec negative_lambda(const ConePair& cp, std::mt19937& rng) {
  const auto& rz = cp.rz;
  Vec lam(rz.P.m());
  for (auto& x : lam) x = rand_q(rng, -2, 2);
  for (int k = 0; k < rz.dim; ++k) {
    Rational want = rand_q(rng, -3, 0) - frac(1, 4);
    Rational have = dot(lam, rz.coweights[k]);
    lam = add(lam, scale(want - have, rz.roots[k]));
  }
  return lam;
}

Vec positive_T(const ConePair& cp, std::mt19937& rng) {
  Vec T = zeros(cp.rz.P.m());
  for (const auto& w : cp.rz.coweights) T = add(T, scale(rand_q(rng, 0, 3) + frac(1, 2), w));
  return T;
}

std::vector<double> dvec(const Vec& v) {
  std::vector<double> r;
  for (auto& x : v) r.push_back(x.get_d());
  return r;
}

std::vector<std::complex<double>> cvec(const Vec& v) {
  std::vector<std::complex<double>> r;
  for (auto& x : v) r.emplace_back(x.get_d(), 0.0);
  return r;
}

}  // namespace

TEST_CASE("theta_hat examples") {
  auto G = from_pair({2}, 1);
  auto P0 = from_pair({1, 1}, 2);
  auto P0bar = from_pair({1, 1}, 1);
  CHECK(theta_hat(ConePair(G, G), Vec{5}) == 1);
  CHECK(theta_hat(ConePair(P0, G), Vec{3, 7}) == 3);
  CHECK(theta_hat(ConePair(P0bar, G), Vec{3, 7}) == -7);
  ConePair cp(from_pair({1, 1, 1}, 2), from_pair({3}, 1));
  Vec lam{2, 5, -3};
  CHECK(theta_hat(cp, scale(3, lam)) == 9 * theta_hat(cp, lam));
}

TEST_CASE("relative data against the absolute z-space") {
  for (int n = 1; n <= 3; ++n) {
    auto G = from_pair({n + 1}, 1);
    for (auto& P : enumerate_rs(n)) {
      auto rz = relative_z(P, G);
      auto z = z_space(P);
      CHECK(rz.coweights == z.coweights);
      CHECK(rz.coroots == z.coroots);
      CHECK(rz.vol_coweights == z.vol_coweights);
      CHECK(rz.eps == (z.dim % 2 ? -1 : 1));
    }
  }
  for (auto& cp : cone_pairs(3, 3)) {
    const auto& rz = cp.rz;
    for (int k = 0; k < rz.dim; ++k)
      for (int l = 0; l < rz.dim; ++l) {
        CHECK(dot(rz.roots[k], rz.coweights[l]) == (k == l ? 1 : 0));
        CHECK(rz.inner(rz.coweights[k], rz.coroots[l]) == (k == l ? 1 : 0));
      }
  }
}

TEST_CASE("rank-one Fourier transforms") {
  ConePair cp(from_pair({1, 1}, 2), from_pair({2}, 1));
  CHECK(ft_cone(cp, Vec{-1, 0}) == 1);
  // q = H_1^k gives k! / (-lambda)^{k+1}.
  Poly q = poly_constant(2, 1);
  double fact = 1;
  for (int k = 1; k <= 3; ++k) {
    q = poly_mul(q, poly_variable(2, 0));
    fact *= k;
    auto v = ft_cone(cp, q, {{-0.7, 0.2}, {0.0, 0.0}});
    auto want = fact / std::pow(std::complex<double>(0.7, -0.2), k + 1);
    CHECK(std::abs(v - want) < 1e-12 * std::abs(want));
  }
  // (e^{lambda T} - 1) / lambda.
  auto e = ft_gamma(cp, Vec{frac(-3, 2), 0});
  for (int t = 1; t <= 4; ++t) {
    double lam = -1.5;
    double want = (std::exp(lam * t) - 1) / lam;
    CHECK(std::abs(e.eval(Vec{t, 0}) - want) < 1e-13);
  }
}

TEST_CASE("rank-one Gamma is an interval indicator") {
  ConePair cp(from_pair({1, 1}, 2), from_pair({2}, 1));
  GammaEvaluator g(cp);
  for (int h = -10; h <= 10; ++h)
    for (int t = 1; t <= 5; ++t) CHECK(g(Vec{frac(h, 2), 0}, Vec{t, 0}) == (h >= 0 && frac(h, 2) < t ? 1 : 0));
}

TEST_CASE("Gamma at T = 0 telescopes") {
  for (auto& cp : cone_pairs(2, 2)) {
    GammaEvaluator g(cp);
    const bool same = cp.rz.dim == 0;
    for (int a = -4; a <= 4; ++a)
      for (int b = -4; b <= 4; ++b) {
        Vec H = zeros(cp.P().m());
        if (cp.rz.dim >= 1) H = add(H, scale(frac(a, 3), cp.rz.basis[0]));
        if (cp.rz.dim >= 2) H = add(H, scale(frac(b, 3), cp.rz.basis[1]));
        CHECK(g(H, zeros(H.size())) == (same ? 1 : 0));
      }
  }
}

TEST_CASE("Gamma is supported in the ball B(T/2, |T|/2)") {
  std::mt19937 rng(23);
  for (auto& cp : cone_pairs(2, 2)) {
    if (cp.rz.dim == 0) continue;
    GammaEvaluator g(cp);
    for (int trial = 0; trial < 2000; ++trial) {
      Vec T = positive_T(cp, rng);
      Vec H = zeros(T.size());
      for (const auto& b : cp.rz.basis) H = add(H, scale(rand_q(rng, -6, 6), b));
      Vec c = sub(H, scale(frac(1, 2), T));
      if (cp.rz.inner(c, c) > cp.rz.inner(T, T) / 4) CHECK(g(H, T) == 0);
    }
  }
}

TEST_CASE("cone transform against quadrature") {
  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n)
    for (auto& cp : cone_pairs(n, 2)) {
      for (int trial = 0; trial < 10; ++trial) {
        Vec lam = negative_lambda(cp, rng);
        double exact = ft_cone(cp, lam).get_d();
        double num = ft_cone_quadrature(cp, dvec(lam));
        CHECK(std::abs(exact - num) <= 1e-8 * std::abs(exact));
        auto c = ft_cone(cp, poly_constant(cp.P().m(), 1), cvec(lam));
        CHECK(std::abs(c.real() - exact) <= 1e-12 * std::abs(exact));
      }
    }
}

TEST_CASE("Gamma transform: polynomial part and quadrature") {
  std::mt19937 rng(9);
  for (int n = 1; n <= 3; ++n)
    for (auto& cp : cone_pairs(n, 2)) {
      for (int trial = 0; trial < 4; ++trial) {
        Vec lam(cp.P().m());
        for (auto& x : lam) x = rand_q(rng, -2, 2, 7) + frac(1, 97);
        Vec T = positive_T(cp, rng);
        ExpPoly e;
        try {
          e = ft_gamma(cp, lam);
        } catch (const ValidationError&) {
          continue;
        }
        auto poly = e.polynomial_part(cp.P().m());
        Rational cone = cp.rz.dim == 0 ? Rational(1) : ft_cone(cp, lam);
        CHECK(poly_eval(poly, T) == cone);
        double num = ft_gamma_quadrature(cp, T, dvec(lam));
        double val = e.eval(T);
        CHECK(std::abs(num - val) <= 1e-8 * std::max(1.0, std::abs(val)));
        auto cv = ft_gamma(cp, T, cvec(lam));
        CHECK(std::abs(cv.real() - val) <= 1e-10 * std::max(1.0, std::abs(val)));
      }
    }
}
