#include "doctest.h"
#include "rsp/local_zeta.hpp"

#include <random>

using namespace rsp;

namespace {

const AtomRegistry& registry() {
  static const AtomRegistry reg = shape_registry(7);
  return reg;
}

InducingPair gl1gl2() { return InducingPair::make({}, {{1, 2, "1"}}, &registry()); }

// Every assignment of 1, chi, chib to the rank-one entries of a shape.
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
    out.push_back(InducingPair::make(f1, f2, &registry()));
  }
  return out;
}

}  // namespace

TEST_CASE("lattice partition: rank one") {
  auto spec = LatticeSpec::rs_standard(1);
  auto cosets = lattice_partition(spec, -2, [](const std::vector<long>&) { return std::optional<long>(3); });
  // {-2, ..., 2} as singletons and 3 + [0, inf)
  REQUIRE(cosets.size() == 6);
  int singletons = 0;
  for (const auto& c : cosets) {
    if (c.vanishing.size() == 1) {
      ++singletons;
      CHECK(c.q_std == std::vector<int>{2});
      CHECK(c.base_values[0] >= -2);
      CHECK(c.base_values[0] <= 2);
    } else {
      CHECK(c.base_values[0] == 0);
      CHECK(c.m_prime == 3);
      CHECK(c.q_std == std::vector<int>{1, 1});
    }
  }
  CHECK(singletons == 5);

  // thresholds below M leave the lattice in one piece
  auto one = lattice_partition(spec, 4, [](const std::vector<long>&) { return std::optional<long>(1); });
  REQUIRE(one.size() == 1);
  CHECK(one[0].m_prime == 4);
}

TEST_CASE("lattice partition: random thresholds") {
  std::mt19937_64 rng(5);
  for (int rank = 1; rank <= 3; ++rank)
    for (int trial = 0; trial < 4; ++trial) {
      auto spec = LatticeSpec::rs_standard(rank);
      const long M = static_cast<long>(rng() % 7) - 3;
      const std::uint64_t salt = rng();
      Thresholds th = [salt](const std::vector<long>& a) {
        std::uint64_t h = salt;
        for (long x : a) h = (h ^ static_cast<std::uint64_t>(x + 1000)) * 1099511628211ULL;
        return std::optional<long>(static_cast<long>(h % 11) - 5);
      };
      auto cosets = lattice_partition(spec, M, th);
      auto chk = check_partition(spec, M, th, cosets, rank == 3 ? 30 : 50);
      CHECK(chk.ok());
      for (const auto& c : cosets) {
        CHECK(spec.root_values(c.base) == c.base_values);
        CHECK(c.m_prime >= c.threshold);
      }
    }
}

TEST_CASE("lattice partition: errors and custom lattices") {
  auto spec = LatticeSpec::rs_standard(2);
  CHECK_THROWS_AS(lattice_partition(spec, 0, [](const std::vector<long>& a) -> std::optional<long> {
                    if (a[0] > 1) return std::nullopt;
                    return 3;
                  }),
                  ValidationError);
  LatticeSpec bad{2, {{2, 0}, {0, 1}}, 0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  LatticeSpec skew{2, {{1, 1}, {0, 1}}, 0};
  Thresholds th = [](const std::vector<long>& a) { return std::optional<long>((a[0] * 7 + a[1] * 3) % 4 + 1); };
  auto cosets = lattice_partition(skew, -1, th);
  CHECK(check_partition(skew, -1, th, cosets, 40).ok());

  CHECK(spec.composition({}) == std::vector<int>{1, 1, 1});
  CHECK(spec.composition({0}) == std::vector<int>{2, 1});
  CHECK(spec.composition({0, 1}) == std::vector<int>{3});
}

TEST_CASE("zeta_q exact values") {
  AffineForm s = AffineForm::variable(1, 0);
  RationalFunctionPoint e1{2, PointMode::Exponent, {Rational(1)}};
  CHECK(zeta_q_value(s, e1) == 2);
  RationalFunctionPoint e2{3, PointMode::Exponent, {Rational(2)}};
  CHECK(zeta_q_value(s, e2) == frac(9, 8));
  RationalFunctionPoint e0{5, PointMode::Exponent, {Rational(0)}};
  CHECK_THROWS_AS(zeta_q_value(s, e0), ValidationError);
  RationalFunctionPoint half{4, PointMode::Exponent, {frac(1, 2)}};
  CHECK_THROWS_AS(zeta_q_value(s, half), ValidationError);
  CHECK_THROWS_AS((RationalFunctionPoint{1, PointMode::QPower, {}}).validate(), ValidationError);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Rational q = frac(static_cast<long>(rng() % 30) + 2, static_cast<long>(rng() % 3) + 1);
    if (q <= 1) q += 1;
    Rational x = frac(static_cast<long>(rng() % 40) + 1, static_cast<long>(rng() % 40) + 41);
    RationalFunctionPoint pt{q, PointMode::QPower, {x}};
    AffineForm arg = AffineForm::variable(1, 0) * Rational(static_cast<long>(rng() % 3) + 1) +
                     Rational(static_cast<long>(rng() % 5) - 2);
    Rational z = zeta_q_value(arg, pt);
    CHECK(z * (1 - q_power(arg, pt)) == 1);
    CHECK(evaluate_exact(zeta_q(arg), pt) == z);
  }
}

TEST_CASE("GL1xGL2 unramified identity") {
  auto rep = unramified_gl1gl2_identity(2, frac(1, 3), frac(1, 5), frac(1, 7));
  CHECK(rep.lhs == frac(147, 136));
  CHECK(rep.rhs == frac(147, 136));
  CHECK(rep.partial_fractions);
  CHECK(rep.numerator_identity);
  CHECK(rep.random_points == 20);
  CHECK(rep.line_regularity);
  CHECK(rep.series.identity);
  CHECK(rep.series.tail_small);
  CHECK(rep.series.N > 5);

  CHECK_THROWS_AS(unramified_gl1gl2_identity(2, frac(1, 3), frac(1, 3), frac(1, 7)), ValidationError);
  // x = y: the series sums to 1/(1 - ux)^2
  auto deg = gl1gl2_series_check(frac(1, 3), frac(1, 3), frac(1, 2));
  CHECK(deg.identity);
  CHECK(deg.closed == frac(36, 25));
  CHECK(deg.tail_small);
  CHECK(h_k(3, frac(1, 2), frac(1, 2)) == frac(1, 2));
  CHECK(h_k(2, 2, 3) == 19);
  CHECK_THROWS_AS(gl1gl2_series_check(2, 1, 1), ValidationError);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    Rational x = frac(static_cast<long>(rng() % 9) + 1, 10), y = frac(static_cast<long>(rng() % 9) + 1, 11);
    Rational u = frac(static_cast<long>(rng() % 9) + 1, 10);
    auto r = unramified_gl1gl2_identity(frac(static_cast<long>(rng() % 7) + 2, 1), x, y, u, rng());
    CHECK(r.partial_fractions);
    CHECK(r.numerator_identity);
    CHECK(r.line_regularity);
    CHECK(r.series.identity);
  }
}

TEST_CASE("F^Q support: GL1xGL2") {
  auto p = gl1gl2();
  auto Qs = standard_rs_parabolics(1);
  REQUIRE(Qs.size() == 2);
  for (Schedule m : {Schedule::N, Schedule::NPlus1}) {
    auto rep = support_classification(p, registry(), m);
    CHECK(rep.terms.size() == 3);
    CHECK(rep.survivors == 1);
    CHECK(rep.mismatches == 0);
    for (const auto& t : rep.terms)
      if (t.survives) {
        CHECK(t.Q.p_std == std::vector<int>{1, 1});
        CHECK(t.w.w_np1 == WeylElement({2, 1}));
        CHECK(t.regular_on_intersection);
      }
  }
  CHECK(predicted_survivors(p, standard_rs_parabolics(1)[0], Schedule::N).empty() !=
        predicted_survivors(p, standard_rs_parabolics(1)[1], Schedule::N).empty());
  // w outside the domain
  CHECK_THROWS_AS(f_q(p, registry(), from_pair({1, 1}, 2), {WeylElement::identity(1), WeylElement::identity(1)}),
                  ValidationError);
}

TEST_CASE("F^Q support: tempered pair survives everywhere") {
  auto p = InducingPair::make({{1, 1, "chi"}}, {{1, 1, "1"}, {1, 1, "chib"}}, &registry());
  for (Schedule m : {Schedule::N, Schedule::NPlus1}) {
    auto rep = support_classification(p, registry(), m);
    CHECK(rep.survivors == static_cast<int>(rep.terms.size()));
    CHECK(rep.mismatches == 0);
  }
}

TEST_CASE("F^Q support: exhaustive classification for n <= 2") {
  int pairs = 0, terms = 0, survivors = 0;
  for (const auto& shape : enumerate_pairs(2))
    for (const auto& p : atom_variants(shape)) {
      ++pairs;
      for (Schedule m : {Schedule::N, Schedule::NPlus1}) {
        auto rep = support_classification(p, registry(), m);
        CHECK_MESSAGE(rep.mismatches == 0, p.to_json().dump());
        CHECK(rep.singular == 0);
        terms += static_cast<int>(rep.terms.size());
        survivors += rep.survivors;
      }
    }
  CHECK(pairs > 100);
  CHECK(survivors > 0);
  CHECK(survivors < terms);
}

TEST_CASE("F^Q support: GL2xGL3 and n = 3 shapes") {
  auto p = InducingPair::make({{1, 2, "chi"}}, {{1, 1, "1"}, {1, 1, "chib"}}, &registry());
  CHECK(standard_rs_parabolics(2).size() == 4);
  auto rep = support_classification(p, registry(), Schedule::NPlus1);
  CHECK(rep.mismatches == 0);
  CHECK(rep.survivors >= 1);

  int checked = 0;
  for (const auto& q : enumerate_pairs(3)) {
    if (q.n() != 3 || checked++ % 4 != 0) continue;
    for (Schedule m : {Schedule::N, Schedule::NPlus1}) CHECK(support_classification(q, registry(), m).mismatches == 0);
  }
}

TEST_CASE("F^Q support: paired central characters do not change verdicts") {
  ChiMap chi{{"chi", frac(2, 7)}};
  int idx = 0;
  for (const auto& shape : enumerate_pairs(2))
    for (const auto& p : atom_variants(shape)) {
      if (idx++ % 3 != 0) continue;
      for (Schedule m : {Schedule::N, Schedule::NPlus1}) {
        auto a = support_classification(p, registry(), m);
        auto b = support_classification(p, registry(), m, chi);
        REQUIRE(a.terms.size() == b.terms.size());
        for (std::size_t i = 0; i < a.terms.size(); ++i) CHECK(a.terms[i].survives == b.terms[i].survives);
      }
    }
}

TEST_CASE("local factorization witness") {
  auto w = local_factorization_witness(gl1gl2(), registry());
  CHECK(w.prefix_ok);
  CHECK(w.schedules_agree);
  REQUIRE(w.terms_n.size() == 1);
  REQUIRE(w.terms_np1.size() == 1);
  CHECK(w.terms_np1[0].word.back() == "N(w*_n+1, lambda)");

  auto t = local_factorization_witness(InducingPair::make({{1, 1, "1"}}, {{1, 1, "1"}, {1, 1, "1"}}, &registry()),
                                       registry());
  CHECK(t.schedules_agree);
  for (const auto& shape : enumerate_pairs(2)) {
    auto f = local_factorization_witness(shape, registry());
    CHECK(f.prefix_ok);
    CHECK(f.schedules_agree);
    CHECK(f.terms_n.size() == f.terms_np1.size());
  }
}
