#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/constants/constants.hpp>

#include "rsp/cones.hpp"
#include "rsp/lfactors.hpp"
#include "rsp/local_zeta.hpp"
#include "rsp/relevance.hpp"
#include "rsp/rs_parabolic.hpp"

using namespace rsp;

namespace {

constexpr double kConeRelTol = 1e-8;
constexpr int kConeSamples = 50;
constexpr int kGammaSamples = 10000;
constexpr double kXiTol = 1e-10;
constexpr double kCensusSeconds = 10;
constexpr double kPartitionSeconds = 30;
constexpr long kPartitionSide = 50;
constexpr int kRandomPairs = 10;
constexpr int kRandomOrders = 3;
constexpr int kLocalPoints = 20;
constexpr double kSeriesTail = 1e-12;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rational rand_q(std::mt19937& rng, int lo, int hi, int den = 8) {
  int span = (hi - lo) * den;
  return frac(lo * den + static_cast<int>(rng() % (span + 1)), den);
}

const AtomRegistry& shapes() {
  static const AtomRegistry reg = shape_registry(7);
  return reg;
}

InducingPair scramble(const InducingPair& p, std::mt19937& rng) {
  const char* ones[] = {"1", "chi", "chib"};
  std::vector<FamilyEntry> f1 = p.family(1), f2 = p.family(2);
  for (auto* f : {&f1, &f2})
    for (auto& e : *f)
      if (e.r == 1) e.atom = ones[rng() % 3];
  return InducingPair::make(f1, f2, &shapes());
}

std::vector<InducingPair> atom_variants(const InducingPair& shape) {
  const char* ones[] = {"1", "chi", "chib"};
  std::vector<FamilyEntry> f1 = shape.family(1), f2 = shape.family(2);
  std::vector<FamilyEntry*> slots;
  for (auto* f : {&f1, &f2})
    for (auto& e : *f)
      if (e.r == 1) slots.push_back(&e);
  int total = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) total *= 3;
  std::vector<InducingPair> out;
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (auto* e : slots) {
      e->atom = ones[c % 3];
      c /= 3;
    }
    out.push_back(InducingPair::make(f1, f2, &shapes()));
  }
  return out;
}

// ------------------------------------------------------------------ criteria

void census(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto one = enumerate_rs(1);
  std::set<std::pair<BlockParabolic, BlockParabolic>> got, want;
  for (const auto& P : one) got.emplace(P.p_n, P.p_np1);
  // G, the standard Borel P_0 and its opposite in the GL_2 factor
  want.emplace(BlockParabolic::standard({1}), BlockParabolic::standard({2}));
  want.emplace(BlockParabolic::standard({1}), BlockParabolic::standard({1, 1}));
  want.emplace(BlockParabolic::standard({1}), BlockParabolic(2, {{2}, {1}}));
  o.require(one.size() == 3 && got == want, "enumerate_rs(1) is {G, P_0, opposite P_0}");
  long total = 0;
  for (int n = 1; n <= 4; ++n) {
    auto all = enumerate_rs(n);
    auto brute = brute_force_rs(n);
    std::set<std::pair<BlockParabolic, BlockParabolic>> a, b(brute.begin(), brute.end());
    for (const auto& P : all) a.emplace(P.p_n, P.p_np1);
    o.require(a.size() == all.size() && a == b, "n = " + std::to_string(n) + " matches brute force");
    total += static_cast<long>(all.size());
  }
  double t = seconds_since(t0);
  o.require(t < kCensusSeconds, "time budget");
  o.detail << "n<=4 total " << total << " parabolics, " << t << " s";
}

void defining_property(Outcome& o) {
  long checked = 0, failures = 0;
  for (int n = 1; n <= 4; ++n)
    for (const auto& P : enumerate_rs(n)) {
      // P_{n+1} cap GL_n by roots: pairs (i, j) with i, j <= n
      std::set<std::pair<int, int>> cut;
      for (auto [i, j] : P.p_np1.roots())
        if (i <= n && j <= n) cut.emplace(i, j);
      if (cut != P.p_n.roots()) ++failures;
      ++checked;
    }
  o.require(failures == 0, "root sets agree");
  o.detail << checked << " parabolics, " << failures << " failures";
}

void cone_ft(Outcome& o) {
  std::mt19937 rng(31);
  double worst = 0;
  int pairs = 0;
  long gamma_nonzero = 0;
  for (int n = 1; n <= 2; ++n)
    for (auto& cp : cone_pairs(n, 2)) {
      const auto& rz = cp.rz;
      if (rz.dim < 1) continue;
      ++pairs;
      for (int s = 0; s < kConeSamples; ++s) {
        Vec lam(rz.P.m());
        for (auto& x : lam) x = rand_q(rng, -2, 2);
        for (int k = 0; k < rz.dim; ++k) {
          Rational want = rand_q(rng, -3, 0) - frac(1, 4) - frac(1, 97 + s);
          lam = add(lam, scale(want - dot(lam, rz.coweights[k]), rz.roots[k]));
        }
        Rational exact = ft_cone(cp, lam);
        o.require(exact == Rational(cp.eps()) / theta_hat(cp, lam), "ft_cone = eps / theta_hat");
        std::vector<double> ld;
        for (const auto& x : lam) ld.push_back(x.get_d());
        double num = ft_cone_quadrature(cp, ld);
        double rel = std::abs(num - exact.get_d()) / std::abs(exact.get_d());
        worst = std::max(worst, rel);
      }
      // Gamma(H, T) vanishes off the ball B(T/2, |T|/2)
      GammaEvaluator g(cp);
      for (int s = 0; s < kGammaSamples; ++s) {
        Vec T = zeros(rz.P.m());
        for (const auto& w : rz.coweights) T = add(T, scale(rand_q(rng, 0, 3) + frac(1, 2), w));
        Vec H = zeros(T.size());
        for (const auto& b : rz.basis) H = add(H, scale(rand_q(rng, -6, 6), b));
        int v = g(H, T);
        if (v == 0) continue;
        ++gamma_nonzero;
        Vec c = sub(H, scale(frac(1, 2), T));
        o.require(rz.inner(c, c) <= rz.inner(T, T) / 4, "Gamma support inside the ball");
      }
    }
  o.require(worst <= kConeRelTol, "quadrature agreement");
  o.require(pairs > 0 && gamma_nonzero > 0, "nontrivial sample");
  o.detail << pairs << " cone pairs, worst relative error " << worst << ", " << gamma_nonzero
           << " nonzero Gamma samples";
}

void gl1gl2_global(Outcome& o) {
  auto p = InducingPair::from_json(nlohmann::json::parse(R"({
    "family1": [], "family2": [{"r": 1, "d": 2, "atom": "1"}],
    "coordinates": ["a", "b", "c"], "pi_coordinates": ["t"]})"),
                                   &shapes());
  auto s = singular_forms(p);
  const auto& names = p.names();
  o.require(s.plus.size() == 1 && s.plus[0].display(names) == "-(a+c+1/2)", "L_+");
  o.require(s.minus.size() == 1 && s.minus[0].display(names) == "a+b-1/2", "L_-");
  auto H = intersection_check(p);
  o.require(H.dim() == 1, "H is a line");
  for (int t = -3; t <= 3; ++t) {
    // a + c = -1/2 and a + b = 1/2
    Vec pt{t, frac(1, 2) - t, frac(-1, 2) - t};
    o.require(H.contains(pt), "line a+c = -1/2, a+b = 1/2");
  }
  o.require(!H.contains(Vec{0, 0, 0}), "H is proper");
  auto rep = global_residue_pipeline(p, shapes(), 5);
  o.require(rep.order_independent, "two residue orders agree");
  const double pi = boost::math::constants::pi<double>();
  double xi2 = completed_zeta(2.0);
  o.require(std::abs(xi2 - pi / 6) <= kXiTol, "xi(2) = pi/6");
  auto v = evaluate_numeric(rep.canonical, {{0.0, 0.0}}, Evaluators{});
  o.require(std::isfinite(v.real()) && std::abs(v.imag()) < kXiTol && v.real() != 0, "finite nonzero value");
  o.detail << "canonical " << rep.canonical.str() << " = " << v.real() << ", |xi(2) - pi/6| = " << std::abs(xi2 - pi / 6);
}

void order_independence(Outcome& o) {
  std::mt19937 rng(2024);
  auto pairs = enumerate_pairs(6);
  int checked = 0;
  for (int trial = 0; trial < kRandomPairs; ++trial) {
    auto p = scramble(pairs[rng() % pairs.size()], rng);
    auto rep = global_residue_pipeline(p, shapes(), 500 + trial, kRandomOrders);
    o.require(rep.runs.size() == 2 + kRandomOrders, "schedules plus random orders ran");
    o.require(rep.order_independent, "canonical forms agree for " + p.to_json().dump());
    ++checked;
  }
  o.detail << checked << " random pairs, " << kRandomOrders << " random orders each";
}

std::map<Rational, int> shifts(const FormalMero& F, const AffineForm& s) {
  std::map<Rational, int> m;
  for (const auto& a : F.atoms()) {
    AffineForm d = a.arg - s;
    if (!d.linear_is_zero()) throw AssertionFailure("non-constant shift");
    m[d.constant] += a.exponent;
  }
  return m;
}

AtomRegistry test_registry() {
  return AtomRegistry::from_json(nlohmann::json::parse(R"({
    "atoms": [
      {"id": "1", "rank": 1, "scope": "both"},
      {"id": "chi", "rank": 1, "scope": "local"},
      {"id": "chiv", "rank": 1, "scope": "local"},
      {"id": "s", "rank": 2, "scope": "both"},
      {"id": "p", "rank": 2, "scope": "global"},
      {"id": "pv", "rank": 2, "scope": "global"}
    ],
    "dual_pairs": [["chi", "chiv"], ["p", "pv"]],
    "match_sets": [
      {"pair": ["chi", "chiv"], "t": ["0"]},
      {"pair": ["s", "s"], "t": ["0"]}
    ]
  })"));
}

void speh(Outcome& o) {
  auto reg = test_registry();
  AffineForm s = AffineForm::variable(1, 0);
  int cases = 0;
  for (int d = 0; d <= 4; ++d)
    for (int dp = 0; dp <= 4; ++dp) {
      std::map<Rational, int> want;
      for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= dp; ++j) want[frac(d - 2 * i + 1, 2) + frac(dp - 2 * j + 1, 2)] += 1;
      for (auto [x, y] : {std::pair{"p", "s"}, std::pair{"1", "1"}, std::pair{"p", "pv"}}) {
        o.require(shifts(speh_rs_L(reg, {x, d}, {y, dp}, s), s) == want, "double loop multiset");
        ++cases;
      }
    }
  for (int d1 = 1; d1 <= 4; ++d1)
    for (int d2 = 1; d2 <= 4; ++d2) {
      for (auto [a, b] : {std::pair{"chi", "chiv"}, std::pair{"1", "1"}, std::pair{"s", "s"}})
        o.require(steinberg_rs_L_local(reg, d1, d2, a, b, s) == steinberg_rs_L_local(reg, d2, d1, b, a, s),
                  "Steinberg symmetry");
      ++cases;
    }
  o.detail << cases << " cases";
}

void c_coefficients(Outcome& o) {
  auto reg = test_registry();
  std::vector<std::vector<std::string>> atoms2 = {{"1", "1"}, {"chi", "chiv"}, {"1", "chi"}, {"s", "1"}};
  std::vector<std::vector<std::string>> atoms3 = {
      {"1", "1", "1"}, {"chi", "chiv", "1"}, {"chiv", "1", "chi"}, {"chi", "chi", "chiv"}};
  int checked = 0;
  for (int k = 2; k <= 3; ++k)
    for (const auto& atoms : k == 2 ? atoms2 : atoms3) {
      BlockData data;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        data.sizes.push_back(1);
        data.sigma.push_back({atoms[i], 1, 0});
        data.lambda.push_back(AffineForm::variable(atoms.size(), i));
      }
      for (const auto& q : compositions(k))
        for (const auto& w : all_permutations(k)) {
          if (!in_W_P_semicolon_Q(w, data.sizes, q)) continue;
          auto A = c_coefficient(reg, data, q, w);
          auto B = c_coefficient_explicit(reg, data, q, w);
          o.require(strip_epsilon(A) == strip_epsilon(B), "formulas agree at w = " + w.str());
          ++checked;
        }
    }
  o.detail << checked << " (Q, w) Borel cases";
}

void lattice(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(99);
  long points = 0;
  int partitions = 0;
  for (int rank = 1; rank <= 3; ++rank)
    for (int trial = 0; trial < 3; ++trial) {
      auto spec = LatticeSpec::rs_standard(rank);
      std::uint64_t salt = rng();
      long M = static_cast<long>(rng() % 7) - 3;
      Thresholds th = [salt](const std::vector<long>& a) {
        std::uint64_t h = salt;
        for (long x : a) h = (h ^ static_cast<std::uint64_t>(x)) * 1099511628211ULL;
        return std::optional<long>(static_cast<long>(h % 11) - 5);
      };
      auto cosets = lattice_partition(spec, M, th);
      auto chk = check_partition(spec, M, th, cosets, kPartitionSide);
      o.require(chk.ok(), "rank " + std::to_string(rank) + " partition");
      for (const auto& c : cosets) o.require(c.m_prime >= c.threshold, "M' >= M at the base point");
      points += chk.points;
      ++partitions;
    }
  double t = seconds_since(t0);
  o.require(t < kPartitionSeconds, "time budget");
  o.detail << partitions << " partitions, " << points << " lattice points, " << t << " s";
}

void local_identity(Outcome& o) {
  auto r = unramified_gl1gl2_identity(2, frac(1, 3), frac(1, 5), frac(1, 7), 11, kLocalPoints);
  o.require(r.lhs == frac(147, 136) && r.rhs == frac(147, 136), "spot value 147/136");
  o.require(r.partial_fractions && r.numerator_identity, "exact identity");
  o.require(r.random_points == kLocalPoints, "seeded random points");
  o.require(r.series.identity && r.series.tail >= 0 && r.series.tail < Rational(kSeriesTail), "series tail");
  // independent spot checks of the sum of both sides at random points
  std::mt19937 rng(5);
  auto zq = [](const Rational& z) -> Rational { return 1 / (1 - z); };
  for (int i = 0; i < kLocalPoints; ++i) {
      Rational x = frac(1 + static_cast<int>(rng() % 9), 10), y = frac(1 + static_cast<int>(rng() % 9), 11);
    Rational u = frac(1 + static_cast<int>(rng() % 9), 13);
    // zeta_q(c - b) = 1/(1 - y/x) with x = q^-b, y = q^-c
    Rational lhs = zq(y / x) * zq(u * x) + zq(x / y) * zq(u * y);
    o.require(lhs == zq(u * x) * zq(u * y), "independent rational check");
  }
  o.detail << "lhs " << to_string(r.lhs) << ", series N " << r.series.N << ", tail " << r.series.tail.get_d();
}

void local_support(Outcome& o) {
  int pairs = 0, terms = 0, survivors = 0, mismatches = 0;
  for (const auto& shape : enumerate_pairs(2))
    for (const auto& p : atom_variants(shape)) {
      ++pairs;
      for (Schedule m : {Schedule::N, Schedule::NPlus1}) {
        auto rep = support_classification(p, shapes(), m);
        mismatches += rep.mismatches;
        terms += static_cast<int>(rep.terms.size());
        survivors += rep.survivors;
      }
    }
  o.require(mismatches == 0, "verdicts equal the prediction");
  o.require(survivors > 0 && survivors < terms, "both verdicts occur");
  o.detail << pairs << " pairs, " << terms << " terms, " << survivors << " survivors, " << mismatches
           << " mismatches";
}

// Levi of w.P: the sorted images of the blocks of P, each an interval when
// w.P is standard.
std::optional<std::vector<Block>> standard_levi(const WeylElement& w, const std::vector<int>& sizes) {
  std::vector<Block> blocks;
  const auto P = BlockParabolic::standard(sizes);
  for (const auto& B : P.blocks()) {
    Block img;
    for (int i : B) img.push_back(w(i));
    std::sort(img.begin(), img.end());
    if (img.back() - img.front() + 1 != static_cast<int>(img.size())) return std::nullopt;
    blocks.push_back(img);
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

void weyl_consistency(Outcome& o) {
  int pairs = 0, identities = 0;
  for (const auto& p : enumerate_pairs(6)) {
    auto W = residue_weyl_data(p);
    auto a_n = standard_levi(W.w1_star_n, p.pi_sizes(0)), b_n = standard_levi(W.w2_star_n, p.pi_sizes(0));
    auto a_np1 = standard_levi(W.w1_star_np1, p.pi_sizes(1)), b_np1 = standard_levi(W.w2_star_np1, p.pi_sizes(1));
    o.require(a_n && b_n && a_np1 && b_np1 && *a_n == *b_n && *a_np1 == *b_np1,
              "w1 w*_{n+1}.P_pi = w2 w*_n.P_pi for " + p.to_json().dump());
    o.require(rs_contains(W.p_plus, W.p_res), "P_res inside P_+");
    auto s = sigma1_products_check(p);
    identities += static_cast<int>(s.first.size() + s.second.size());
    ++pairs;
  }
  o.detail << pairs << " pairs, " << identities << " root factors checked";
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria = {
      {1, census},          {2, defining_property}, {3, cone_ft},       {4, gl1gl2_global},
      {5, order_independence}, {6, speh},           {7, c_coefficients}, {8, lattice},
      {9, local_identity},  {10, local_support},    {11, weyl_consistency}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
