#include "rsp/rs_parabolic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace rsp {

namespace {

BlockParabolic restrict_to_h(const BlockParabolic& pnp1, int n) {
  std::vector<Block> blocks;
  for (const auto& b : pnp1.blocks()) {
    Block r;
    for (int i : b)
      if (i <= n) r.push_back(i);
    if (!r.empty()) blocks.push_back(r);
  }
  return BlockParabolic(n, blocks);
}

}  // namespace

std::string RSParabolic::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p_std.size(); ++i) os << (i ? "," : "") << p_std[i];
  os << ";" << i0 << ")";
  return os.str();
}

bool satisfies_defining_property(const BlockParabolic& pn, const BlockParabolic& pnp1) {
  const int n = pn.ambient();
  if (pnp1.ambient() != n + 1) return false;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j && pn.contains_root(i, j) != pnp1.contains_root(i, j)) return false;
  return true;
}

RSParabolic from_pair(const std::vector<int>& p_std, int i0) {
  const int m = static_cast<int>(p_std.size());
  if (m == 0 || i0 < 1 || i0 > m) throw ValidationError("from_pair: block index out of range");
  for (int s : p_std)
    if (s <= 0) throw ValidationError("from_pair: composition parts must be positive");
  RSParabolic P;
  P.n = std::accumulate(p_std.begin(), p_std.end(), 0) - 1;
  P.p_std = p_std;
  P.i0 = i0;
  const int n = P.n;
  int last = 0;
  for (int i = 0; i < i0; ++i) last += p_std[i];
  if (p_std[i0 - 1] >= 2) {
    P.type_tag = 1;
    P.p_h = p_std;
    P.p_h[i0 - 1] -= 1;
  } else {
    P.type_tag = 2;
    P.p_h = p_std;
    P.p_h.erase(P.p_h.begin() + (i0 - 1));
  }
  const int N = last - 1;
  std::vector<int> img(n + 1);
  std::iota(img.begin(), img.end(), 1);
  img[N] = n + 1;
  for (int k = N + 2; k <= n + 1; ++k) img[k - 1] = k - 1;
  P.w_std = WeylElement(img);
  P.p_np1 = conjugate(P.w_std, BlockParabolic::standard(p_std));
  P.p_n = n > 0 ? BlockParabolic::standard(P.p_h) : BlockParabolic(0, {});
  if (!satisfies_defining_property(P.p_n, P.p_np1))
    throw AssertionFailure("from_pair: conjugated parabolic does not restrict to P_H for " + P.str());
  return P;
}

RSParabolic from_pair(const std::vector<int>& p_std, int i0, const std::vector<int>& p_h) {
  RSParabolic P = from_pair(p_std, i0);
  if (P.p_h != p_h) throw ValidationError("from_pair: (p_std, i0) does not lie over the given P_H");
  return P;
}

std::optional<RSParabolic> from_parabolics(const BlockParabolic& pn, const BlockParabolic& pnp1) {
  if (!pn.is_standard() && pn.ambient() > 0) return std::nullopt;
  if (!satisfies_defining_property(pn, pnp1)) return std::nullopt;
  const int n = pn.ambient();
  RSParabolic P = from_pair(pnp1.sizes(), pnp1.block_of(n + 1) + 1);
  if (!(P.p_np1 == pnp1)) return std::nullopt;
  return P;
}

std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  if (n == 0) return {{}};
  // Bit k of mask set means a cut after position k+1.
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    std::vector<int> parts;
    int cur = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (mask & (1 << k)) {
        parts.push_back(cur);
        cur = 1;
      } else {
        ++cur;
      }
    }
    parts.push_back(cur);
    out.push_back(parts);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RSParabolic> enumerate_rs(int n) {
  if (n < 0) throw ValidationError("enumerate_rs: n must be nonnegative");
  std::vector<RSParabolic> out;
  for (const auto& c : compositions(n + 1))
    for (int i0 = 1; i0 <= static_cast<int>(c.size()); ++i0) out.push_back(from_pair(c, i0));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RSParabolic> standard_rs(int n) {
  std::vector<RSParabolic> out;
  for (auto& P : enumerate_rs(n))
    if (P.is_standard()) out.push_back(P);
  return out;
}

std::vector<std::pair<BlockParabolic, BlockParabolic>> brute_force_rs(int n) {
  const int N = n + 1;
  std::vector<std::pair<BlockParabolic, BlockParabolic>> out;
  // Set partitions via restricted growth strings, then every block order.
  std::vector<int> label(N, 0);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == N) {
      std::vector<Block> blocks(used);
      for (int i = 0; i < N; ++i) blocks[label[i]].push_back(i + 1);
      std::vector<int> order(used);
      std::iota(order.begin(), order.end(), 0);
      do {
        std::vector<Block> ordered;
        for (int b : order) ordered.push_back(blocks[b]);
        BlockParabolic pnp1(N, ordered);
        BlockParabolic pn = restrict_to_h(pnp1, n);
        if (n == 0 || pn.is_standard()) out.emplace_back(pn, pnp1);
      } while (std::next_permutation(order.begin(), order.end()));
      return;
    }
    for (int l = 0; l <= used; ++l) {
      label[pos] = l;
      rec(pos + 1, std::max(used, l + 1));
    }
  };
  rec(0, 0);
  return out;
}

bool rs_contains(const RSParabolic& Q, const RSParabolic& P) {
  return Q.n == P.n && Q.p_n.contains(P.p_n) && Q.p_np1.contains(P.p_np1);
}

LeviDecomposition levi_decomposition(const RSParabolic& P) {
  LeviDecomposition d;
  for (int i = 1; i <= P.m(); ++i) {
    if (i < P.i0) d.m_plus.push_back(P.size(i));
    if (i > P.i0) d.m_minus.push_back(P.size(i));
  }
  d.cm_np1 = P.size(P.i0);
  d.cm_n = d.cm_np1 - 1;
  return d;
}

Rational ZSpace::inner(const Vec& a, const Vec& b) const {
  Rational s = 0;
  for (int i = 0; i < m(); ++i) s += a[i] * b[i] / sizes[i];
  return s;
}

ZSpace z_space(const std::vector<int>& sizes, int iP) {
  ZSpace z;
  z.sizes = sizes;
  z.iP = iP;
  const int m = z.m();
  z.dim = m - 1;
  for (int k = 1; k < m; ++k) {
    Vec a = zeros(m);
    if (k != iP) a[k - 1] = frac(1, sizes[k - 1]);
    if (k + 1 != iP) a[k] = frac(-1, sizes[k]);
    z.roots.push_back(a);
    Vec w = zeros(m);
    if (k < iP)
      for (int j = 1; j <= k; ++j) w[j - 1] = sizes[j - 1];
    else
      for (int j = k + 1; j <= m; ++j) w[j - 1] = -sizes[j - 1];
    z.coweights.push_back(w);
    Vec c = zeros(m);
    if (k != iP) c[k - 1] = 1;
    if (k + 1 != iP) c[k] = -1;
    z.coroots.push_back(c);
  }
  z.rho_bar = zeros(m);
  for (int i = 1; i <= m; ++i) {
    if (i < iP) z.rho_bar[i - 1] = frac(1, 2);
    if (i > iP) z.rho_bar[i - 1] = frac(-1, 2);
  }
  z.vol_coweights = 1;
  for (int i = 1; i <= m; ++i)
    if (i != iP) z.vol_coweights *= sizes[i - 1];
  for (int k = 0; k < z.dim; ++k)
    for (int l = 0; l < z.dim; ++l) {
      Rational want = k == l ? 1 : 0;
      if (dot(z.roots[k], z.coweights[l]) != want || z.inner(z.coweights[l], z.coroots[k]) != want)
        throw AssertionFailure("z_space: dual families are not dual");
    }
  return z;
}

ZSpace z_space(const RSParabolic& P) { return z_space(P.p_std, P.i0); }

bool in_positive_chamber(const ZSpace& z, const Vec& H) {
  if (H.at(z.iP - 1) != 0) return false;
  for (int k = 1; k < z.m(); ++k) {
    Rational left = k == z.iP ? Rational(0) : H[k - 1] / z.sizes[k - 1];
    Rational right = k + 1 == z.iP ? Rational(0) : H[k] / z.sizes[k];
    if (!(left > right)) return false;
  }
  return true;
}

RelativeRestriction relative_restrict(const RSParabolic& P, const RSParabolic& Q) {
  if (!rs_contains(Q, P)) throw ValidationError("relative_restrict: P is not contained in Q");
  RelativeRestriction r;
  std::size_t pi = 0;
  std::vector<int> cal_parts;
  int cal_i0 = 0;
  for (int qj = 1; qj <= Q.m(); ++qj) {
    std::vector<int> parts;
    int filled = 0;
    while (filled < Q.size(qj)) {
      if (pi >= P.p_std.size()) throw AssertionFailure("relative_restrict: P^std does not refine Q^std");
      if (static_cast<int>(pi) + 1 == P.i0) {
        if (qj != Q.i0) throw AssertionFailure("relative_restrict: i_P is not inside i_Q");
        cal_i0 = static_cast<int>(parts.size()) + 1;
      }
      parts.push_back(P.p_std[pi]);
      filled += P.p_std[pi];
      ++pi;
    }
    if (filled != Q.size(qj)) throw AssertionFailure("relative_restrict: P^std does not refine Q^std");
    if (qj == Q.i0)
      cal_parts = parts;
    else
      r.bold.push_back(parts);
  }
  r.cal = from_pair(cal_parts, cal_i0);
  return r;
}

RSParabolic relative_assemble(const RSParabolic& Q, const RelativeRestriction& r) {
  std::vector<int> p_std;
  int i0 = 0;
  std::size_t b = 0;
  for (int qj = 1; qj <= Q.m(); ++qj) {
    if (qj == Q.i0) {
      i0 = static_cast<int>(p_std.size()) + r.cal.i0;
      p_std.insert(p_std.end(), r.cal.p_std.begin(), r.cal.p_std.end());
    } else {
      const auto& parts = r.bold.at(b++);
      if (std::accumulate(parts.begin(), parts.end(), 0) != Q.size(qj))
        throw ValidationError("relative_assemble: bold part does not fill its block");
      p_std.insert(p_std.end(), parts.begin(), parts.end());
    }
  }
  return from_pair(p_std, i0);
}

WeylElement embed_cal(const RSParabolic& Q, const WeylElement& w_cal) {
  int start = 0;
  for (int i = 1; i < Q.i0; ++i) start += Q.size(i);
  const int q = Q.size(Q.i0);
  if (w_cal.size() != q) throw std::invalid_argument("embed_cal: size mismatch");
  std::vector<int> S;
  for (int t = 1; t <= q; ++t) S.push_back(Q.w_std(start + t));
  std::sort(S.begin(), S.end());
  std::vector<int> img(Q.n + 1);
  std::iota(img.begin(), img.end(), 1);
  for (int t = 1; t <= q; ++t) img[S[t - 1] - 1] = S[w_cal(t) - 1];
  return WeylElement(img);
}

std::vector<int> h_block_to_std(const RSParabolic& P) {
  std::vector<int> map;
  for (int i = 1; i <= static_cast<int>(P.p_h.size()); ++i) {
    if (P.type_tag == 1 || i < P.i0)
      map.push_back(i - 1);
    else
      map.push_back(i);
  }
  return map;
}

}  // namespace rsp
