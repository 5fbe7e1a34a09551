#include "doctest.h"
#include "rsp/parabolic.hpp"
#include "rsp/rs_parabolic.hpp"

#include <map>
#include <random>

using namespace rsp;

namespace {

std::vector<BlockParabolic> standard_parabolics(int m) {
  std::vector<BlockParabolic> out;
  for (auto& c : compositions(m)) out.push_back(BlockParabolic::standard(c));
  return out;
}

BlockParabolic random_parabolic(int m, std::mt19937& rng) {
  auto comps = compositions(m);
  auto P = BlockParabolic::standard(comps[rng() % comps.size()]);
  auto perms = all_permutations(m);
  return conjugate(perms[rng() % perms.size()], P);
}

}  // namespace

TEST_CASE("conjugate examples") {
  auto P = BlockParabolic::standard({1, 2});
  WeylElement w({3, 1, 2});
  auto C = conjugate(w, P);
  CHECK(C.blocks() == std::vector<Block>{{3}, {1, 2}});
  auto roots = C.roots();
  CHECK(roots.count({3, 1}) == 1);
  CHECK(roots.count({3, 2}) == 1);
  CHECK(roots.count({1, 3}) == 0);
  CHECK(conjugate(WeylElement::identity(3), P) == P);
}

TEST_CASE("conjugation transports root sets and round-trips") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + static_cast<int>(rng() % 6);
    auto P = random_parabolic(m, rng);
    auto perms = all_permutations(m);
    auto w = perms[rng() % perms.size()];
    auto C = conjugate(w, P);
    std::set<std::pair<int, int>> moved;
    for (auto [i, j] : P.roots()) moved.emplace(w(i), w(j));
    CHECK(moved == C.roots());
    CHECK(conjugate(w, conjugate(w.inverse(), P)) == P);
  }
}

TEST_CASE("double coset representatives") {
  auto B2 = BlockParabolic::standard({1, 1});
  CHECK(double_coset_reps(B2, B2).size() == 2);
  auto P = BlockParabolic::standard({2, 1});
  auto Q = BlockParabolic::standard({1, 2});
  auto reps = double_coset_reps(P, Q);
  CHECK(reps == double_coset_reps_bruteforce(P, Q));
  // Two 2x2 contingency tables with row sums (2,1) and column sums (1,2).
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].is_identity());
  CHECK(reps[1] == WeylElement({2, 3, 1}));
  for (int m = 1; m <= 5; ++m) {
    auto G = BlockParabolic::standard({m});
    CHECK(double_coset_reps(G, G).size() == 1);
  }
}

TEST_CASE("constructive double cosets match the S_m filter for m <= 6") {
  for (int m = 1; m <= 6; ++m) {
    auto all = standard_parabolics(m);
    for (auto& P : all)
      for (auto& Q : all) {
        auto a = double_coset_reps(P, Q);
        auto b = double_coset_reps_bruteforce(P, Q);
        CHECK(a == b);
      }
  }
}

TEST_CASE("relative parabolics") {
  auto P = BlockParabolic::standard({2, 1});
  auto Q = BlockParabolic::standard({1, 2});
  auto [Pw, Qw] = relative_parabolics(WeylElement::identity(3), P, Q);
  CHECK(Pw == BlockParabolic::standard({1, 1, 1}));
  for (int m = 1; m <= 5; ++m) {
    auto all = standard_parabolics(m);
    for (auto& P : all)
      for (auto& Q : all)
        for (auto& w : double_coset_reps(P, Q)) {
          auto [Pw, Qw] = relative_parabolics(w, P, Q);
          CHECK(Pw.is_standard());
          CHECK(Qw.is_standard());
          CHECK(P.contains(Pw));
          CHECK(Q.contains(Qw));
          auto C = conjugate(w, Pw);
          std::set<Block> a(C.blocks().begin(), C.blocks().end());
          std::set<Block> b(Qw.blocks().begin(), Qw.blocks().end());
          CHECK(a == b);
          // w maps the roots of M_P that lie in P_w into Q_w.
          for (auto [i, j] : Pw.roots())
            if (P.block_of(i) == P.block_of(j)) CHECK(Qw.contains_root(w(i), w(j)));
        }
  }
}

TEST_CASE("decompose_coset examples") {
  auto P = BlockParabolic::standard({1, 1, 1});
  auto Q = BlockParabolic::standard({1, 2});
  auto G = BlockParabolic::standard({3});
  for (auto& w2 : double_coset_reps(P, Q)) {
    auto [w1, w] = decompose_coset(w2, P, Q, G);
    CHECK(w.is_identity());
    CHECK(w1 == w2);
    auto [v1, v] = decompose_coset(w2, P, Q, Q);
    CHECK(v == w2);
    CHECK(v1.is_identity());
  }
}

TEST_CASE("decompose_coset is a bijection for m <= 5") {
  for (int m = 1; m <= 5; ++m) {
    auto all = standard_parabolics(m);
    for (auto& P : all)
      for (auto& R : all)
        for (auto& Q : all) {
          if (!R.contains(Q)) continue;
          auto reps = double_coset_reps(P, Q);
          std::set<std::pair<WeylElement, WeylElement>> images;
          for (auto& w2 : reps) {
            auto [w1, w] = decompose_coset(w2, P, Q, R);
            CHECK(check_decomposition(w1, w, w2, P, Q, R));
            images.emplace(w1, w);
          }
          CHECK(images.size() == reps.size());
          // Count the disjoint union over w in {}_R W_P by brute force.
          std::size_t total = 0;
          for (auto& w : double_coset_reps(P, R)) {
            auto Rw = relative_parabolics(w, P, R).second;
            for (auto& w1 : all_permutations(m)) {
              bool in_levi = true;
              for (int i = 1; i <= m; ++i) in_levi = in_levi && R.block_of(w1(i)) == R.block_of(i);
              if (in_levi && is_double_coset_rep(w1, Rw, Q)) ++total;
            }
          }
          CHECK(total == reps.size());
        }
  }
}

TEST_CASE("cell reversal") {
  auto P = BlockParabolic::standard({4});
  auto w = reverse_cells(4, {{{1, 2}, {3, 4}}});
  CHECK(w == WeylElement({3, 4, 1, 2}));
  CHECK((w * w).is_identity());
  auto id = reverse_cells(5, {{{1, 2}}, {{3, 4, 5}}});
  CHECK(id.is_identity());
  auto v = reverse_cells(6, {{{1, 2}, {3, 4}, {5, 6}}});
  CHECK((v * v).is_identity());
  CHECK(longest_in_levi(BlockParabolic::standard({2, 1})) == WeylElement({2, 1, 3}));
}

TEST_CASE("block permutations") {
  auto w = block_permutation({1, 2}, {1, 0});
  CHECK(w == WeylElement({3, 1, 2}));
  CHECK(block_reversal({2, 1, 1}) == WeylElement({3, 4, 2, 1}));
}
