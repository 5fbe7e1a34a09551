#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsp/parabolic.hpp"
#include "rsp/rational.hpp"

namespace rsp {

// A parabolic subgroup P = (P_n, P_{n+1}) of GL_n x GL_{n+1} with
// P_n = P_{n+1} cap GL_n and P_n standard. GL_n sits in GL_{n+1} on the
// indices 1..n.
struct RSParabolic {
  int n = 0;
  std::vector<int> p_h;    // composition of n, the standard P_n
  std::vector<int> p_std;  // composition of n+1
  int i0 = 1;              // 1-based block of p_std hosting the index n+1
  int type_tag = 1;
  WeylElement w_std;
  BlockParabolic p_n;
  BlockParabolic p_np1;

  int m() const { return static_cast<int>(p_std.size()); }
  int size(int i) const { return p_std.at(i - 1); }
  bool is_standard() const { return w_std.is_identity(); }
  bool operator==(const RSParabolic& o) const { return p_std == o.p_std && i0 == o.i0; }
  bool operator<(const RSParabolic& o) const {
    return p_std != o.p_std ? p_std < o.p_std : i0 < o.i0;
  }
  std::string str() const;
};

// Builds the parabolic attached to (p_std, i0); p_h is derived. Validates
// the defining property and throws AssertionFailure on violation.
RSParabolic from_pair(const std::vector<int>& p_std, int i0);
// Same, but additionally checks that the derived P_H equals p_h.
RSParabolic from_pair(const std::vector<int>& p_std, int i0, const std::vector<int>& p_h);
// Inverse map: recovers (p_std, i0) from a pair of block parabolics.
std::optional<RSParabolic> from_parabolics(const BlockParabolic& pn, const BlockParabolic& pnp1);

bool satisfies_defining_property(const BlockParabolic& pn, const BlockParabolic& pnp1);
std::vector<RSParabolic> enumerate_rs(int n);
std::vector<RSParabolic> standard_rs(int n);
// All (P_n standard, P_{n+1} semi-standard) with P_n = P_{n+1} cap GL_n,
// found by scanning every ordered set partition of {1..n+1}.
std::vector<std::pair<BlockParabolic, BlockParabolic>> brute_force_rs(int n);
std::vector<std::vector<int>> compositions(int n);

// Q contains P in both factors.
bool rs_contains(const RSParabolic& Q, const RSParabolic& P);

struct LeviDecomposition {
  std::vector<int> m_plus;
  int cm_n = 0;
  int cm_np1 = 0;
  std::vector<int> m_minus;
};
LeviDecomposition levi_decomposition(const RSParabolic& P);

// Coordinates of z_P: vectors of length m indexed by the blocks of p_std,
// with slot i_P pinned to zero. The geometric point is x = H_i / n_i on
// block i of both factors (and 0 on n+1).
struct ZSpace {
  std::vector<int> sizes;
  int iP = 1;  // 1-based
  int dim = 0;
  std::vector<Vec> roots;      // covectors, pairing by plain dot product
  std::vector<Vec> coweights;  // vectors
  std::vector<Vec> coroots;    // vectors
  Vec rho_bar;                 // covector
  Rational vol_coweights;

  int m() const { return static_cast<int>(sizes.size()); }
  Rational inner(const Vec& a, const Vec& b) const;
};
ZSpace z_space(const RSParabolic& P);
ZSpace z_space(const std::vector<int>& sizes, int iP);
// Chain-of-inequalities description of z_P^+.
bool in_positive_chamber(const ZSpace& z, const Vec& H);

struct RelativeRestriction {
  std::vector<std::vector<int>> bold;  // refinement of each Q block other than i_Q
  RSParabolic cal;                     // RS parabolic of GL_{q-1} x GL_q
};
RelativeRestriction relative_restrict(const RSParabolic& P, const RSParabolic& Q);
RSParabolic relative_assemble(const RSParabolic& Q, const RelativeRestriction& r);
// Embeds a permutation of the cal-block of Q into GL_{n+1}.
WeylElement embed_cal(const RSParabolic& Q, const WeylElement& w_cal);

// Block j of p_std for each block of p_h (0-based); pinned slot omitted.
std::vector<int> h_block_to_std(const RSParabolic& P);

}  // namespace rsp
