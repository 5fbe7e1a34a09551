#include "rsp/local_zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace rsp {

namespace {

const std::string kField = "q";

long to_long(const Rational& r) {
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw ValidationError("lattice: non-integral coordinate");
  return r.get_num().get_si();
}

std::string vec_str(const std::vector<long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

LatticeSpec LatticeSpec::rs_standard(int n) {
  if (n < 1) throw ValidationError("lattice: n must be positive");
  LatticeSpec s;
  s.rank = n;
  s.rs_n = n;
  s.pairings.assign(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) {
    s.pairings[i][i] = 1;
    if (i + 1 < n) s.pairings[i][i + 1] = -1;
  }
  return s;
}

void LatticeSpec::validate() const {
  if (rank < 0 || static_cast<int>(pairings.size()) != rank) throw ValidationError("lattice: pairing matrix has wrong size");
  Mat m;
  for (const auto& row : pairings) {
    if (static_cast<int>(row.size()) != rank) throw ValidationError("lattice: pairing matrix is not square");
    Vec r;
    for (long x : row) r.push_back(Rational(x));
    m.push_back(r);
  }
  if (rank > 0) {
    Rational d = determinant(m);
    if (d != 1 && d != -1) throw ValidationError("lattice: roots are not a basis of the dual lattice");
  }
}

std::vector<long> LatticeSpec::root_values(const std::vector<long>& a) const {
  std::vector<long> y(rank, 0);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) y[i] += pairings[i][j] * a.at(j);
  return y;
}

std::vector<long> LatticeSpec::from_root_values(const std::vector<long>& y) const {
  Mat m;
  Vec b;
  for (int i = 0; i < rank; ++i) {
    Vec r;
    for (long x : pairings[i]) r.push_back(Rational(x));
    m.push_back(r);
    b.push_back(Rational(y.at(i)));
  }
  auto sol = solve(m, b, rank);
  if (!sol) throw ValidationError("lattice: singular pairing matrix");
  std::vector<long> a;
  for (const auto& x : *sol) a.push_back(to_long(x));
  return a;
}

std::vector<int> LatticeSpec::composition(const std::vector<int>& vanishing) const {
  if (rs_n == 0) return {};
  std::vector<int> comp;
  int start = 0;
  for (int i = 0; i < rank; ++i)
    if (std::find(vanishing.begin(), vanishing.end(), i) == vanishing.end()) {
      comp.push_back(i + 1 - start);
      start = i + 1;
    }
  comp.push_back(rs_n + 1 - start);
  return comp;
}

bool LatticeCoset::contains_values(const std::vector<long>& y) const {
  for (std::size_t i = 0; i < y.size(); ++i) {
    bool fixed = std::find(vanishing.begin(), vanishing.end(), static_cast<int>(i)) != vanishing.end();
    if (fixed ? y[i] != base_values[i] : y[i] < base_values[i] + m_prime) return false;
  }
  return true;
}

std::vector<LatticeCoset> lattice_partition(const LatticeSpec& spec, long M, const Thresholds& thresholds) {
  spec.validate();
  if (spec.rank > 4) throw ValidationError("lattice_partition: rank above 4");
  if (!thresholds) throw ValidationError("lattice_partition: no threshold function");
  const int r = spec.rank;
  std::vector<LatticeCoset> out;

  auto emit = [&](const std::vector<long>& y, const std::vector<bool>& fixed, long mp, long t) {
    LatticeCoset c;
    c.base_values = y;
    c.base = spec.from_root_values(y);
    for (int i = 0; i < r; ++i)
      if (fixed[i]) c.vanishing.push_back(i);
    c.m_prime = mp;
    c.threshold = t;
    c.q_std = spec.composition(c.vanishing);
    out.push_back(std::move(c));
  };

  // y + Lambda_J[>= L], where J is the set of fixed roots
  std::function<void(const std::vector<long>&, const std::vector<bool>&, long)> rec =
      [&](const std::vector<long>& y, const std::vector<bool>& fixed, long L) {
        auto t = thresholds(spec.from_root_values(y));
        if (!t) throw ValidationError("lattice_partition: no threshold at " + vec_str(spec.from_root_values(y)));
        const long T = *t;
        std::vector<int> free;
        for (int i = 0; i < r; ++i)
          if (!fixed[i]) free.push_back(i);
        if (free.empty()) {
          emit(y, fixed, std::max(L, T), T);
          return;
        }
        if (T <= L) {
          emit(y, fixed, L, T);
          return;
        }
        emit(y, fixed, T, T);
        const std::size_t f = free.size();
        for (std::uint32_t mask = 1; mask < (1u << f); ++mask) {
          std::vector<int> I;
          for (std::size_t b = 0; b < f; ++b)
            if (mask & (1u << b)) I.push_back(free[b]);
          std::vector<long> v(I.size(), L);
          while (true) {
            std::vector<long> y2 = y;
            std::vector<bool> fixed2 = fixed;
            for (int i : free) y2[i] += T;
            for (std::size_t b = 0; b < I.size(); ++b) {
              y2[I[b]] = y[I[b]] + v[b];
              fixed2[I[b]] = true;
            }
            rec(y2, fixed2, 0);
            std::size_t b = 0;
            while (b < I.size() && ++v[b] == T) v[b++] = L;
            if (b == I.size()) break;
          }
        }
      };
  rec(std::vector<long>(r, 0), std::vector<bool>(r, false), M);
  return out;
}

PartitionCheck check_partition(const LatticeSpec& spec, long M, const Thresholds& thresholds,
                               const std::vector<LatticeCoset>& cosets, long side) {
  const int r = spec.rank;
  const long w = side + 1;
  long total = 1;
  for (int i = 0; i < r; ++i) total *= w;
  std::vector<std::uint16_t> hits(total, 0);
  PartitionCheck chk;
  chk.points = total;
  for (const auto& c : cosets) {
    auto t = thresholds(c.base);
    if (!t || c.m_prime < *t) ++chk.threshold_violations;
    std::vector<long> lo(r), hi(r);
    bool empty = false;
    for (int i = 0; i < r; ++i) {
      bool fixed = std::find(c.vanishing.begin(), c.vanishing.end(), i) != c.vanishing.end();
      lo[i] = fixed ? c.base_values[i] : std::max(c.base_values[i] + c.m_prime, M);
      hi[i] = fixed ? c.base_values[i] : M + side;
      // points of the coset below M are members that should not exist
      if ((fixed ? c.base_values[i] : c.base_values[i] + c.m_prime) < M) ++chk.strays;
      if (lo[i] < M || hi[i] > M + side || lo[i] > hi[i]) empty = true;
    }
    if (empty) continue;
    std::vector<long> y = lo;
    while (true) {
      long idx = 0;
      for (int i = r - 1; i >= 0; --i) idx = idx * w + (y[i] - M);
      if (hits[idx] < 65535) ++hits[idx];
      int i = 0;
      while (i < r && ++y[i] > hi[i]) y[i] = lo[i], ++i;
      if (i == r) break;
    }
  }
  for (auto h : hits) {
    if (h == 0) ++chk.uncovered;
    if (h > 1) ++chk.overlaps;
  }
  return chk;
}

// ------------------------------------------------------------------ zeta_q

void RationalFunctionPoint::validate() const {
  if (q <= 1) throw ValidationError("point: q must exceed 1");
  if (mode == PointMode::QPower)
    for (const auto& v : values)
      if (v <= 0) throw ValidationError("point: q-power values must be positive");
}

Vec RationalFunctionPoint::powers() const {
  validate();
  if (mode == PointMode::QPower) return values;
  Vec out;
  for (const auto& v : values) out.push_back(q_power(AffineForm::constant_form(0, v), {q, PointMode::QPower, {}}));
  return out;
}

namespace {

Rational int_pow(const Rational& b, long e) {
  Rational r = 1, base = b;
  if (e < 0) {
    if (base == 0) throw ValidationError("q-power: division by zero");
    base = 1 / base;
    e = -e;
  }
  for (; e > 0; --e) r *= base;
  return r;
}

long integral(const Rational& c, const char* what) {
  if (c.get_den() != 1 || !c.get_num().fits_slong_p())
    throw ValidationError(std::string("q-power: non-integral ") + what + " " + to_string(c));
  return c.get_num().get_si();
}

}  // namespace

Rational q_power(const AffineForm& s, const RationalFunctionPoint& pt) {
  if (pt.q <= 1) throw ValidationError("point: q must exceed 1");
  Vec pw = s.dim() == 0 ? Vec{} : pt.powers();
  if (pw.size() != s.dim()) throw ValidationError("q-power: point has the wrong dimension");
  Rational r = int_pow(pt.q, -integral(s.constant, "constant"));
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (s.coeffs[i] != 0) r *= int_pow(pw[i], integral(s.coeffs[i], "coefficient"));
  return r;
}

FormalMero zeta_q(const AffineForm& arg) {
  FormalMero F{AffineSubspace(arg.dim())};
  F.multiply(FactorAtom::local_zeta(kField, arg));
  return F;
}

Rational zeta_q_value(const AffineForm& arg, const RationalFunctionPoint& pt) {
  Rational x = q_power(arg, pt);
  if (x == 1) throw ValidationError("zeta_q: evaluation at a pole");
  return 1 / (1 - x);
}

Rational evaluate_exact(const FormalMero& F, const RationalFunctionPoint& pt) {
  if (F.is_zero()) return 0;
  Rational r = F.prefactor();
  for (const auto& a : F.atoms()) {
    if (a.kind != AtomKind::LocalZeta) throw ValidationError("evaluate_exact: only local zeta atoms have exact values");
    Rational one_minus = 1 - q_power(a.arg, pt);
    if (a.exponent > 0 && one_minus == 0) throw ValidationError("zeta_q: evaluation at a pole");
    r *= int_pow(one_minus, -a.exponent);
  }
  return r;
}

// ------------------------------------------------------------- GL1 x GL2

Rational h_k(int k, const Rational& x, const Rational& y) {
  if (k < 0) throw ValidationError("h_k: negative index");
  if (x == y) return (k + 1) * int_pow(x, k);
  return (int_pow(x, k + 1) - int_pow(y, k + 1)) / (x - y);
}

SeriesCheck gl1gl2_series_check(const Rational& x, const Rational& y, const Rational& u) {
  if (x <= 0 || y <= 0 || u <= 0) throw ValidationError("series: q-powers must be positive");
  const Rational z = u * std::max(x, y);
  if (z >= 1) throw ValidationError("series: u max(x, y) >= 1, the series diverges");
  // (N + 2) z^{N+1} / (1 - z)^2 bounds the tail
  const double zd = z.get_d(), lead = std::log((1 - zd) * (1 - zd));
  int N = 0;
  while (std::log(N + 2.0) + (N + 1) * std::log(zd) - lead > std::log(1e-13)) ++N;

  SeriesCheck c;
  c.N = N;
  for (int k = 0; k <= N; ++k) c.partial += int_pow(u, k) * h_k(k, x, y);
  const Rational ux = u * x, uy = u * y;
  if (x == y) {
    c.tail = ((N + 2) * int_pow(ux, N + 1) - (N + 1) * int_pow(ux, N + 2)) / ((1 - ux) * (1 - ux));
  } else {
    c.tail = (x * int_pow(ux, N + 1) / (1 - ux) - y * int_pow(uy, N + 1) / (1 - uy)) / (x - y);
  }
  c.closed = 1 / ((1 - ux) * (1 - uy));
  c.identity = c.partial + c.tail == c.closed;
  c.tail_small = c.tail >= 0 && c.tail < Rational(1, 1000000) * Rational(1, 1000000);
  return c;
}

namespace {

// Coordinates (a + 1/2, b, c); the point carries (u, x, y).
struct Gl1Gl2Forms {
  AffineForm ab, ac, cb, bc;
};

Gl1Gl2Forms gl1gl2_forms() {
  auto v = [](std::size_t i) { return AffineForm::variable(3, i); };
  return {v(0) + v(1), v(0) + v(2), v(2) - v(1), v(1) - v(2)};
}

// The two terms of the left side and the right side.
std::vector<FormalMero> gl1gl2_sides() {
  auto f = gl1gl2_forms();
  return {zeta_q(f.cb) * zeta_q(f.ab), zeta_q(f.bc) * zeta_q(f.ac), zeta_q(f.ab) * zeta_q(f.ac)};
}

Rational random_unit(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(2, 60);
  long d = den(rng);
  std::uniform_int_distribution<long> num(1, d - 1);
  return frac(num(rng), d);
}

}  // namespace

Gl1Gl2Report unramified_gl1gl2_identity(const Rational& q, const Rational& x, const Rational& y, const Rational& u,
                                        std::uint64_t seed, int random_points) {
  if (x == y) throw ValidationError("gl1gl2: degenerate point x = y");
  Gl1Gl2Report rep;
  rep.q = q, rep.x = x, rep.y = y, rep.u = u;
  rep.seed = seed;
  RationalFunctionPoint pt{q, PointMode::QPower, {u, x, y}};
  pt.validate();
  auto sides = gl1gl2_sides();
  rep.lhs = evaluate_exact(sides[0], pt) + evaluate_exact(sides[1], pt);
  rep.rhs = evaluate_exact(sides[2], pt);
  rep.partial_fractions = rep.lhs == rep.rhs;
  rep.series = gl1gl2_series_check(x, y, u);

  // Cross-multiplied numerators over (x - y)(1 - ux)(1 - uy).
  std::mt19937_64 rng(seed);
  rep.numerator_identity = true;
  for (int i = 0; i < random_points; ++i) {
    Rational X = random_unit(rng), Y = random_unit(rng), U = random_unit(rng);
    if (X == Y) Y = Y / 2;
    Rational lhs_num = X * (1 - U * Y) - Y * (1 - U * X);
    Rational rhs_num = X - Y;
    RationalFunctionPoint p{q, PointMode::QPower, {U, X, Y}};
    Rational D = (X - Y) * (1 - U * X) * (1 - U * Y);
    Rational direct = (evaluate_exact(sides[0], p) + evaluate_exact(sides[1], p)) * D;
    if (lhs_num != rhs_num || direct != lhs_num || evaluate_exact(sides[2], p) * D != rhs_num)
      rep.numerator_identity = false;
    ++rep.random_points;
  }

  // On the line (a, b, c) = (-t, t + 1/2, t - 1/2) we have uy = 1 and x = y/q.
  auto f = gl1gl2_forms();
  FormalMero cancel{AffineSubspace(3)};
  cancel.multiply(FactorAtom::local_zeta(kField, f.ac, -1));
  rep.line_regularity = true;
  for (int i = 0; i < 5; ++i) {
    Rational Y = random_unit(rng);
    RationalFunctionPoint p{q, PointMode::QPower, {1 / Y, Y / q, Y}};
    FormalMero t1 = sides[0] * cancel, t2 = sides[1] * cancel, r = sides[2] * cancel;
    t1.normalize();
    t2.normalize();
    r.normalize();
    if (evaluate_exact(t1, p) + evaluate_exact(t2, p) != evaluate_exact(r, p)) rep.line_regularity = false;
  }
  return rep;
}

// ------------------------------------------------------- support of F^Q

std::string to_string(Schedule m) { return m == Schedule::N ? "n" : "n+1"; }

std::string RSWeyl::str() const { return "(" + w_n.str() + ", " + w_np1.str() + ")"; }

std::vector<RSParabolic> standard_rs_parabolics(int n) {
  std::vector<RSParabolic> out;
  for (const auto& c : compositions(n + 1)) out.push_back(from_pair(c, static_cast<int>(c.size())));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

const BlockParabolic& side_of(const RSParabolic& Q, int side) { return side == 0 ? Q.p_n : Q.p_np1; }

std::vector<WeylElement> side_domain(const std::vector<int>& p_sizes, const BlockParabolic& Q) {
  std::vector<WeylElement> out;
  if (p_sizes.empty()) return {WeylElement::identity(0)};
  for (const auto& w : double_coset_reps(BlockParabolic::standard(p_sizes), Q))
    if (in_W_P_semicolon_Q(w, p_sizes, Q.sizes())) out.push_back(w);
  return out;
}

bool in_domain(const InducingPair& p, const RSParabolic& Q, const RSWeyl& w) {
  for (int side = 0; side <= 1; ++side) {
    const auto& ws = side == 0 ? w.w_n : w.w_np1;
    const auto sizes = p.pi_sizes(side);
    const auto& Qs = side_of(Q, side);
    if (ws.size() != Qs.ambient()) return false;
    if (!in_W_P_semicolon_Q(ws, sizes, Qs.sizes())) return false;
  }
  return true;
}

// 1-based first index of every P_pi block on its side
std::vector<int> block_starts(const InducingPair& p) {
  std::vector<int> starts;
  int next[2] = {1, 1};
  for (const auto& b : p.blocks()) {
    starts.push_back(next[b.side]);
    next[b.side] += b.r;
  }
  return starts;
}

Rational chi_of(const ChiMap& chi, const AtomRegistry& reg, const std::string& atom) {
  auto it = chi.find(atom);
  if (it != chi.end()) return it->second;
  it = chi.find(reg.dual(atom));
  if (it != chi.end()) return -it->second;
  return 0;
}

AffineForm monic_form(const AffineForm& f) {
  for (const auto& c : f.coeffs)
    if (c != 0) return f * (1 / c);
  return f;
}

}  // namespace

std::vector<RSWeyl> support_domain(const InducingPair& p, const RSParabolic& Q) {
  if (!Q.is_standard() || Q.n != p.n()) throw ValidationError("support: Q must be a standard RS parabolic of the pair's group");
  std::vector<RSWeyl> out;
  auto dn = side_domain(p.pi_sizes(0), Q.p_n);
  auto dnp1 = side_domain(p.pi_sizes(1), Q.p_np1);
  for (const auto& a : dn)
    for (const auto& b : dnp1) out.push_back({a, b});
  return out;
}

std::vector<RSWeyl> predicted_survivors(const InducingPair& p, const RSParabolic& Q, Schedule m) {
  if (!Q.is_standard() || Q.n != p.n()) throw ValidationError("support: Q must be a standard RS parabolic of the pair's group");
  const WeylData W = residue_weyl_data(p);
  if (!rs_contains(W.p_res, Q)) return {};
  const int n = p.n(), k = p.k(), off = n - k;
  const WeylElement& star_n = m == Schedule::NPlus1 ? W.w1_star_n : W.w2_star_n;
  const WeylElement& star_np1 = m == Schedule::NPlus1 ? W.w1_star_np1 : W.w2_star_np1;

  // cQ: the blocks of Q inside GL_k x GL_{k+1}
  std::vector<int> cq_np1;
  int acc = 0;
  for (int s : Q.p_std) {
    if (acc >= off) cq_np1.push_back(s);
    acc += s;
  }
  std::vector<int> cq_n = cq_np1;
  if (--cq_n.back() == 0) cq_n.pop_back();
  std::vector<int> corner_n, corner_np1;
  for (const auto& e : p.family(1)) corner_n.push_back(e.r);
  for (const auto& e : p.family(2)) corner_np1.push_back(e.r);

  auto dn = k == 0 ? std::vector<WeylElement>{WeylElement::identity(0)}
                   : side_domain(corner_n, BlockParabolic::standard(cq_n));
  auto dnp1 = side_domain(corner_np1, BlockParabolic::standard(cq_np1));
  std::vector<RSWeyl> out;
  const auto id = WeylElement::identity(off);
  for (const auto& a : dn)
    for (const auto& b : dnp1) out.push_back({direct_sum(id, a) * star_n, direct_sum(id, b) * star_np1});
  std::sort(out.begin(), out.end());
  return out;
}

FormalMero f_q(const InducingPair& p, const AtomRegistry& reg, const RSParabolic& Q, const RSWeyl& w,
               const ChiMap& chi) {
  if (!Q.is_standard() || Q.n != p.n()) throw ValidationError("f_q: Q must be a standard RS parabolic of the pair's group");
  if (!in_domain(p, Q, w)) throw ValidationError("f_q: w is not in {}_Q W_{P_pi} with P_pi inside P_{pi,w}");
  const std::size_t dim = p.dim();
  const auto starts = block_starts(p);
  FormalMero F{AffineSubspace(dim)};
  int N = 0;
  for (int i = 0; i + 1 < Q.m(); ++i) {
    N += Q.p_std[i];
    // <w(lambda + chi) + rho_Q, varpi_i>, varpi_i = 1 on the first N indices of both sides
    AffineForm arg = AffineForm::constant_form(dim, frac(N, 2));
    for (std::size_t b = 0; b < dim; ++b) {
      const auto& blk = p.blocks()[b];
      const WeylElement& ws = blk.side == 0 ? w.w_n : w.w_np1;
      if (ws(starts[b]) > N) continue;
      const std::string atom = blk.contragredient ? reg.dual(blk.atom) : blk.atom;
      arg = arg + AffineForm::variable(dim, b, chi_of(chi, reg, atom)) * Rational(blk.r);
    }
    F.multiply(FactorAtom::local_zeta(kField, arg));
  }
  LeviData levi;
  std::vector<AffineForm> lam_n, lam_np1;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& b = p.blocks()[i];
    SpehDatum s{b.contragredient ? reg.dual(b.atom) : b.atom, 1, 0};
    (b.side == 0 ? levi.n_side : levi.np1_side).push_back(s);
    (b.side == 0 ? lam_n : lam_np1).push_back(AffineForm::variable(dim, i));
  }
  F = F * b_and_rs_normalizers(reg, Scope::Local, levi, lam_n, lam_np1).lhalf.inverse();
  F.normalize();
  F.set_names(p.names());
  return F;
}

namespace {

SupportTerm support_term(const InducingPair& p, const AtomRegistry& reg, const RSParabolic& Q, const RSWeyl& w,
                         Schedule m, const ChiMap& chi, const std::vector<RSWeyl>& pred) {
  SupportTerm t;
  t.Q = Q;
  t.w = w;
  t.F = f_q(p, reg, Q, w, chi);
  const auto forms = singular_forms(p);
  const auto order = m == Schedule::NPlus1 ? first_order(p) : second_order(p);
  FormalMero cur = t.F;
  t.survives = true;
  for (std::size_t idx : order) {
    if (idx >= forms.plus.size()) continue;
    const auto& lf = forms.plus[idx];
    Divisor d = divisor_along(cur, lf.form);
    if (d.order > 0)
      throw AssertionFailure("f_q_support: F^Q has a pole along " + lf.label() + " for Q = " + Q.str() +
                             ", w = " + w.str());
    if (d.order < 0) {
      t.survives = false;
      cur = FormalMero::zero(cur.space().with(lf.form), p.names());
      break;
    }
    cur = leading_term(cur, lf.form);
  }
  if (t.survives) {
    AffineSubspace I = cur.space();
    for (const auto& lf : forms.minus) I = I.with(lf.form);
    std::map<AffineForm, int> order_along;
    for (const auto& a : cur.atoms()) {
      if (a.kind != AtomKind::LocalZeta) continue;
      AffineForm on_h = cur.space().reduce(a.arg);
      if (on_h.linear_is_zero()) continue;
      AffineForm g = I.reduce(a.arg);
      if (g.linear_is_zero() && g.constant == 0) order_along[monic_form(on_h)] += a.exponent;
    }
    for (const auto& [form, ord] : order_along)
      if (ord > 0) t.regular_on_intersection = false;
  }
  t.rest = cur;
  t.predicted = std::binary_search(pred.begin(), pred.end(), w);
  return t;
}

}  // namespace

SupportTerm f_q_support(const InducingPair& p, const AtomRegistry& reg, const RSParabolic& Q, const RSWeyl& w,
                        Schedule m, const ChiMap& chi) {
  return support_term(p, reg, Q, w, m, chi, predicted_survivors(p, Q, m));
}

SupportReport support_classification(const InducingPair& p, const AtomRegistry& reg, Schedule m, const ChiMap& chi) {
  SupportReport rep;
  rep.m = m;
  for (const auto& Q : standard_rs_parabolics(p.n())) {
    const auto pred = predicted_survivors(p, Q, m);
    for (const auto& w : support_domain(p, Q)) {
      auto t = support_term(p, reg, Q, w, m, chi, pred);
      if (t.survives) ++rep.survivors;
      if (t.survives != t.predicted) ++rep.mismatches;
      if (t.survives && !t.regular_on_intersection) ++rep.singular;
      rep.terms.push_back(std::move(t));
    }
  }
  return rep;
}

FactorizationWitness local_factorization_witness(const InducingPair& p, const AtomRegistry& reg) {
  const WeylData W = residue_weyl_data(p);
  const int off = p.n() - p.k();
  FactorizationWitness fw;
  fw.prefix_ok = true;
  std::map<std::pair<std::vector<int>, int>, std::set<RSWeyl>> wprime[2];
  for (Schedule m : {Schedule::N, Schedule::NPlus1}) {
    const int mi = m == Schedule::NPlus1 ? 1 : 0;
    const RSWeyl star = m == Schedule::NPlus1 ? RSWeyl{W.w1_star_n, W.w1_star_np1}
                                              : RSWeyl{W.w2_star_n, W.w2_star_np1};
    const std::string star_name = "N(w*_" + to_string(m) + ", lambda)";
    auto rep = support_classification(p, reg, m);
    auto& terms = mi ? fw.terms_np1 : fw.terms_n;
    for (const auto& t : rep.terms) {
      if (!t.survives) continue;
      WitnessTerm wt;
      wt.Q = t.Q;
      wt.w = t.w;
      wt.w_prime = {t.w.w_n * star.w_n.inverse(), t.w.w_np1 * star.w_np1.inverse()};
      bool fixes_bold = true;
      for (int i = 1; i <= off; ++i)
        if (wt.w_prime.w_n(i) != i || wt.w_prime.w_np1(i) != i) fixes_bold = false;
      if (!fixes_bold || !t.predicted)
        throw AssertionFailure("factorization witness: surviving term Q = " + t.Q.str() + ", w = " + t.w.str() +
                               " does not factor through w*_" + to_string(m));
      wt.word = {"G^Q(w, lambda)", "N(" + wt.w_prime.str() + ", w*_" + to_string(m) + " lambda)", star_name};
      wt.rest = t.rest.str();
      wprime[mi][{t.Q.p_std, t.Q.i0}].insert(wt.w_prime);
      terms.push_back(std::move(wt));
    }
  }
  fw.schedules_agree = wprime[0] == wprime[1];
  return fw;
}

}  // namespace rsp
