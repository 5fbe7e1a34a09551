#include "rsp/cones.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

namespace rsp {

Poly poly_constant(std::size_t nvars, const Rational& c) {
  Poly p;
  if (c != 0) p[Monomial(nvars, 0)] = c;
  return p;
}

Poly poly_variable(std::size_t nvars, std::size_t i) {
  Monomial m(nvars, 0);
  m.at(i) = 1;
  return Poly{{m, Rational(1)}};
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < ma.size(); ++i) m[i] = ma[i] + mb[i];
      r[m] += ca * cb;
    }
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) r[m] += c;
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

Rational poly_eval(const Poly& p, const Vec& x) {
  Rational s = 0;
  for (const auto& [m, c] : p) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) t *= x[i];
    s += t;
  }
  return s;
}

std::string poly_str(const Poly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p) {
    if (!first) os << " + ";
    first = false;
    os << to_string(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) os << "*x" << i + 1 << (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
  }
  return os.str();
}

void ExpPoly::add(const Vec& exponent, const Poly& coeff) {
  Poly& slot = terms_[exponent];
  slot = poly_add(slot, coeff);
  if (slot.empty()) terms_.erase(exponent);
}

Poly ExpPoly::polynomial_part(std::size_t nvars) const {
  auto it = terms_.find(zeros(nvars));
  return it == terms_.end() ? Poly{} : it->second;
}

double ExpPoly::eval(const Vec& x) const {
  double s = 0;
  for (const auto& [e, p] : terms_) s += poly_eval(p, x).get_d() * std::exp(dot(e, x).get_d());
  return s;
}

Rational RelativeZ::inner(const Vec& a, const Vec& b) const {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i] / P.p_std[i];
  return s;
}

namespace {

std::vector<int> block_owner(const RSParabolic& P, const RSParabolic& Q) {
  if (!rs_contains(Q, P)) throw ValidationError("P is not contained in Q: " + P.str() + " " + Q.str());
  std::vector<int> owner;
  int qj = 0, filled = 0;
  for (int i = 0; i < P.m(); ++i) {
    owner.push_back(qj);
    filled += P.p_std[i];
    if (filled > Q.p_std[qj]) throw AssertionFailure("P^std does not refine Q^std");
    if (filled == Q.p_std[qj]) {
      filled = 0;
      ++qj;
    }
  }
  if (owner[P.i0 - 1] != Q.i0 - 1) throw AssertionFailure("i_P is not inside i_Q");
  return owner;
}

Rational abs_det_without_pinned(const std::vector<Vec>& rows, int pinned) {
  Mat sq;
  for (const auto& r : rows) {
    Vec v;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (static_cast<int>(i) != pinned) v.push_back(r[i]);
    sq.push_back(v);
  }
  Rational d = sq.empty() ? Rational(1) : determinant(sq);
  return abs(d);
}

std::vector<double> to_double(const Vec& v) {
  std::vector<double> r;
  for (const auto& x : v) r.push_back(x.get_d());
  return r;
}

double ddot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T lin(const Vec& v, const std::vector<T>& lambda) {
  T s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += lambda[i] * v[i].get_d();
  return s;
}

}  // namespace

RelativeZ relative_z(const RSParabolic& P, const RSParabolic& Q) {
  RelativeZ z;
  z.P = P;
  z.Q = Q;
  z.owner = block_owner(P, Q);
  const int m = P.m();
  const int pinned = P.i0 - 1;
  Mat constraints;
  constraints.push_back(unit_vector(m, pinned));
  for (int j = 0; j < Q.m(); ++j) {
    if (j == Q.i0 - 1) continue;
    Vec row = zeros(m), emb = zeros(m);
    for (int i = 0; i < m; ++i)
      if (z.owner[i] == j) {
        row[i] = 1;
        emb[i] = frac(P.p_std[i], Q.p_std[j]);
      }
    constraints.push_back(row);
    z.z_q.push_back(emb);
  }
  z.basis = nullspace(constraints, m);
  z.dim = static_cast<int>(z.basis.size());
  if (z.dim != P.m() - Q.m()) throw AssertionFailure("relative_z: unexpected dimension");
  z.eps = z.dim % 2 ? -1 : 1;
  const ZSpace zp = z_space(P);
  for (int k = 1; k < m; ++k)
    if (z.owner[k - 1] == z.owner[k]) {
      z.root_index.push_back(k);
      z.roots.push_back(zp.roots[k - 1]);
    }
  const Vec zero_rhs = zeros(constraints.size());
  for (int k = 0; k < z.dim; ++k) {
    Mat A = constraints;
    Vec b = zero_rhs;
    for (int l = 0; l < z.dim; ++l) {
      A.push_back(z.roots[l]);
      b.push_back(k == l ? 1 : 0);
    }
    auto x = solve(A, b, m);
    if (!x) throw AssertionFailure("relative_z: coweight system is singular");
    z.coweights.push_back(*x);
  }
  for (int k = 0; k < z.dim; ++k) {
    Mat A = constraints;
    Vec b = zero_rhs;
    for (int l = 0; l < z.dim; ++l) {
      Vec row(m);
      for (int i = 0; i < m; ++i) row[i] = z.coweights[l][i] / P.p_std[i];
      A.push_back(row);
      b.push_back(k == l ? 1 : 0);
    }
    auto x = solve(A, b, m);
    if (!x) throw AssertionFailure("relative_z: coroot system is singular");
    z.coroots.push_back(*x);
  }
  auto with_zq = [&](const std::vector<Vec>& fam) {
    std::vector<Vec> rows = fam;
    rows.insert(rows.end(), z.z_q.begin(), z.z_q.end());
    return abs_det_without_pinned(rows, pinned);
  };
  z.measure = with_zq(z.basis);
  z.vol_coweights = with_zq(z.coweights);
  z.vol_coroots = with_zq(z.coroots);
  return z;
}

Vec embed_coords(const RSParabolic& P, const RSParabolic& R, const Vec& v) {
  auto owner = block_owner(P, R);
  Vec out = zeros(P.m());
  for (int i = 0; i < P.m(); ++i) {
    int j = owner[i];
    if (j == R.i0 - 1) continue;
    out[i] = v.at(j) * frac(P.p_std[i], R.p_std[j]);
  }
  return out;
}

std::vector<RSParabolic> intermediate(const RSParabolic& P, const RSParabolic& Q) {
  std::vector<RSParabolic> out;
  for (auto& R : enumerate_rs(P.n))
    if (rs_contains(R, P) && rs_contains(Q, R)) out.push_back(R);
  return out;
}

ConePair::ConePair(const RSParabolic& P, const RSParabolic& Q) : rz(relative_z(P, Q)) {}

std::vector<ConePair> cone_pairs(int n, int max_rank) {
  std::vector<ConePair> out;
  auto all = enumerate_rs(n);
  for (auto& P : all)
    for (auto& Q : all)
      if (rs_contains(Q, P) && P.m() - Q.m() <= max_rank) out.emplace_back(P, Q);
  return out;
}

Rational theta_hat(const ConePair& cp, const Vec& lambda) {
  Rational p = 1;
  for (const auto& w : cp.rz.coweights) p *= dot(lambda, w);
  return p / cp.rz.vol_coweights;
}

Rational theta(const ConePair& cp, const Vec& lambda) {
  Rational p = 1;
  for (const auto& c : cp.rz.coroots) p *= dot(lambda, c);
  return p / cp.rz.vol_coroots;
}

std::complex<double> theta_hat(const ConePair& cp, const std::vector<std::complex<double>>& lambda) {
  std::complex<double> p = 1;
  for (const auto& w : cp.rz.coweights) p *= lin(w, lambda);
  return p / cp.rz.vol_coweights.get_d();
}

std::complex<double> theta(const ConePair& cp, const std::vector<std::complex<double>>& lambda) {
  std::complex<double> p = 1;
  for (const auto& c : cp.rz.coroots) p *= lin(c, lambda);
  return p / cp.rz.vol_coroots.get_d();
}

GammaEvaluator::GammaEvaluator(const ConePair& cp) {
  const RSParabolic& P = cp.P();
  for (auto& R : intermediate(P, cp.Q())) {
    Term t;
    const RelativeZ rq = relative_z(R, cp.Q());
    t.eps = rq.eps;
    t.roots = relative_z(P, R).roots;
    for (const auto& w : rq.coweights) {
      Vec e = embed_coords(P, R, w);
      for (int i = 0; i < P.m(); ++i) e[i] /= P.p_std[i];
      t.coweights.push_back(e);
    }
    std::vector<std::vector<double>> rd, cd;
    for (auto& r : t.roots) rd.push_back(to_double(r));
    for (auto& c : t.coweights) cd.push_back(to_double(c));
    roots_d_.push_back(rd);
    cow_d_.push_back(cd);
    terms_.push_back(std::move(t));
  }
}

int GammaEvaluator::operator()(const Vec& H, const Vec& T) const {
  int s = 0;
  const Vec X = sub(H, T);
  for (const auto& t : terms_) {
    bool on = true;
    for (const auto& a : t.roots) on = on && dot(a, H) >= 0;
    for (const auto& c : t.coweights) on = on && dot(c, X) >= 0;
    if (on) s += t.eps;
  }
  return s;
}

int GammaEvaluator::operator()(const std::vector<double>& H, const std::vector<double>& T) const {
  int s = 0;
  std::vector<double> X(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) X[i] = H[i] - T[i];
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    bool on = true;
    for (const auto& a : roots_d_[k]) on = on && ddot(a, H) >= 0;
    for (const auto& c : cow_d_[k]) on = on && ddot(c, X) >= 0;
    if (on) s += terms_[k].eps;
  }
  return s;
}

std::vector<GammaEvaluator::Wall> GammaEvaluator::walls() const {
  std::vector<Wall> out;
  for (const auto& t : terms_) {
    for (const auto& a : t.roots) out.push_back({a, zeros(a.size())});
    for (const auto& c : t.coweights) out.push_back({c, c});
  }
  std::sort(out.begin(), out.end(), [](const Wall& x, const Wall& y) {
    return x.a != y.a ? x.a < y.a : x.t_coeff < y.t_coeff;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Wall& x, const Wall& y) { return x.a == y.a && x.t_coeff == y.t_coeff; }),
            out.end());
  return out;
}

int gamma_indicator(const ConePair& cp, const Vec& H, const Vec& T) { return GammaEvaluator(cp)(H, T); }

std::vector<ConeTerm> ft_cone_terms(const ConePair& cp, const Poly& q) {
  const auto& rz = cp.rz;
  const std::size_t d = rz.coweights.size();
  std::map<std::vector<int>, Rational> total;
  for (const auto& [mono, c] : q) {
    std::map<std::vector<int>, Rational> cur;
    cur[std::vector<int>(d, 1)] = Rational(rz.eps) * rz.vol_coweights * c;
    for (std::size_t i = 0; i < mono.size(); ++i)
      for (int rep = 0; rep < mono[i]; ++rep) {
        std::map<std::vector<int>, Rational> next;
        for (const auto& [exps, coeff] : cur)
          for (std::size_t k = 0; k < d; ++k) {
            const Rational& wki = rz.coweights[k][i];
            if (wki == 0) continue;
            auto e = exps;
            e[k] += 1;
            next[e] += coeff * (-exps[k]) * wki;
          }
        std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
        cur = std::move(next);
      }
    for (const auto& [e, c2] : cur) total[e] += c2;
  }
  std::vector<ConeTerm> out;
  for (const auto& [e, c] : total)
    if (c != 0) out.push_back({c, e});
  return out;
}

std::complex<double> ft_cone(const ConePair& cp, const Poly& q, const std::vector<std::complex<double>>& lambda) {
  std::vector<std::complex<double>> L;
  for (const auto& w : cp.rz.coweights) {
    L.push_back(lin(w, lambda));
    if (std::abs(L.back()) == 0) throw ValidationError("ft_cone: lambda lies on a singular hyperplane");
  }
  std::complex<double> s = 0;
  for (const auto& t : ft_cone_terms(cp, q)) {
    std::complex<double> v = t.coeff.get_d();
    for (std::size_t k = 0; k < L.size(); ++k) v /= std::pow(L[k], t.exps[k]);
    s += v;
  }
  return s;
}

Rational ft_cone(const ConePair& cp, const Vec& lambda) {
  Rational th = theta_hat(cp, lambda);
  if (th == 0) throw ValidationError("ft_cone: lambda lies on a singular hyperplane");
  return Rational(cp.eps()) / th;
}

Vec projection_covector(const RSParabolic& P, const RSParabolic& R, const RSParabolic& Q, const Vec& lambda) {
  const RelativeZ rq = relative_z(R, Q);
  const std::size_t m = P.m();
  if (rq.dim == 0) return zeros(m);
  std::vector<Vec> C;
  for (const auto& b : rq.basis) C.push_back(embed_coords(P, R, b));
  const std::size_t d = C.size();
  Mat G(d, zeros(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t i = 0; i < m; ++i) G[a][b] += C[a][i] * C[b][i] / P.p_std[i];
  Vec rhs(d);
  for (std::size_t a = 0; a < d; ++a) rhs[a] = dot(C[a], lambda);
  auto y = solve(G, rhs, d);
  if (!y) throw AssertionFailure("projection_covector: singular Gram matrix");
  Vec mu = zeros(m);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t i = 0; i < m; ++i) mu[i] += (*y)[a] * C[a][i] / P.p_std[i];
  return mu;
}

ExpPoly ft_gamma(const ConePair& cp, const Vec& lambda) {
  const RSParabolic& P = cp.P();
  ExpPoly out;
  for (auto& R : intermediate(P, cp.Q())) {
    ConePair lower(P, R), upper(R, cp.Q());
    Rational th_hat = theta_hat(lower, lambda);
    Rational th = 1;
    for (const auto& c : upper.rz.coroots) th *= dot(lambda, embed_coords(P, R, c));
    th /= upper.rz.vol_coroots;
    if (th_hat == 0 || th == 0) throw ValidationError("ft_gamma: lambda is not in general position");
    Rational coeff = Rational(lower.eps()) / (th_hat * th);
    out.add(projection_covector(P, R, cp.Q(), lambda), poly_constant(P.m(), coeff));
  }
  return out;
}

std::complex<double> ft_gamma(const ConePair& cp, const Vec& T, const std::vector<std::complex<double>>& lambda) {
  const RSParabolic& P = cp.P();
  std::complex<double> total = 0;
  for (auto& R : intermediate(P, cp.Q())) {
    ConePair lower(P, R), upper(R, cp.Q());
    std::complex<double> th_hat = theta_hat(lower, lambda);
    std::complex<double> th = 1;
    for (const auto& c : upper.rz.coroots) th *= lin(embed_coords(P, R, c), lambda);
    th /= upper.rz.vol_coroots.get_d();
    if (std::abs(th_hat) == 0 || std::abs(th) == 0)
      throw ValidationError("ft_gamma: lambda is not in general position");
    // <lambda, T_R^Q> is linear in lambda: evaluate on real and imaginary parts.
    Vec re, im;
    for (auto& z : lambda) {
      Rational a, b;
      a = z.real();
      b = z.imag();
      re.push_back(a);
      im.push_back(b);
    }
    double er = dot(projection_covector(P, R, cp.Q(), re), T).get_d();
    double ei = dot(projection_covector(P, R, cp.Q(), im), T).get_d();
    total += Rational(lower.eps()).get_d() / (th_hat * th) * std::exp(std::complex<double>(er, ei));
  }
  return total;
}

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

double integrate_gk(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 6, 1e-12);
}

std::vector<std::vector<double>> basis_d(const RelativeZ& rz) {
  std::vector<std::vector<double>> B;
  for (const auto& b : rz.basis) B.push_back(to_double(b));
  return B;
}

}  // namespace

double ft_cone_quadrature(const ConePair& cp, const std::vector<double>& lambda) {
  const auto& rz = cp.rz;
  const double meas = rz.measure.get_d();
  const int d = rz.dim;
  if (d == 0) return 1.0;
  if (d > 2) throw ValidationError("ft_cone_quadrature: relative rank above 2");
  const auto B = basis_d(rz);
  std::vector<double> c(d);
  for (int l = 0; l < d; ++l) c[l] = ddot(lambda, B[l]);
  const double K = 45.0;
  if (d == 1) {
    double a = ddot(to_double(rz.roots[0]), B[0]);
    double s = a > 0 ? 1.0 : -1.0;
    if (c[0] * s >= 0) throw ValidationError("ft_cone_quadrature: integral diverges");
    double Y = K / std::abs(c[0]);
    auto f = [&](double t) { return std::exp(c[0] * s * t); };
    return meas * integrate_gk(f, 0.0, Y);
  }
  // Rays of {y : A y >= 0} are the columns of A^{-1}.
  double A[2][2];
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) A[k][l] = ddot(to_double(rz.roots[k]), B[l]);
  double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  double r[2][2] = {{A[1][1] / det, -A[1][0] / det}, {-A[0][1] / det, A[0][0] / det}};
  std::vector<std::array<double, 2>> v;
  for (int k = 0; k < 2; ++k) {
    double cr = c[0] * r[k][0] + c[1] * r[k][1];
    if (cr >= 0) throw ValidationError("ft_cone_quadrature: integral diverges");
    v.push_back({r[k][0] * K / -cr, r[k][1] * K / -cr});
  }
  std::array<std::array<double, 2>, 3> tri = {{{0.0, 0.0}, v[0], v[1]}};
  auto section = [&](double x, double& lo, double& hi) {
    lo = INFINITY;
    hi = -INFINITY;
    for (int e = 0; e < 3; ++e) {
      auto p = tri[e], q = tri[(e + 1) % 3];
      double x0 = std::min(p[0], q[0]), x1 = std::max(p[0], q[0]);
      if (x < x0 || x > x1 || x1 - x0 < 1e-300) continue;
      double y = p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0]);
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  };
  auto inner = [&](double x) {
    double lo, hi;
    section(x, lo, hi);
    if (!(hi > lo)) return 0.0;
    // Exact in y: the integrand is exponential along vertical lines.
    auto g = [&](double y) { return std::exp(c[0] * x + c[1] * y); };
    return integrate_gk(g, lo, hi);
  };
  std::vector<double> xs = {tri[0][0], tri[1][0], tri[2][0]};
  std::sort(xs.begin(), xs.end());
  double total = 0;
  for (int k = 0; k < 2; ++k) total += integrate_gk(inner, xs[k], xs[k + 1]);
  return meas * total;
}

double ft_gamma_quadrature(const ConePair& cp, const Vec& T, const std::vector<double>& lambda) {
  const auto& rz = cp.rz;
  const int d = rz.dim;
  const double meas = rz.measure.get_d();
  GammaEvaluator gamma(cp);
  const auto Td = to_double(T);
  if (d == 0) return gamma(zeros(rz.P.m()), T);
  if (d > 2) throw ValidationError("ft_gamma_quadrature: relative rank above 2");
  const auto B = basis_d(rz);
  const std::size_t m = rz.P.m();
  auto point = [&](const std::vector<double>& y) {
    std::vector<double> H(m, 0.0);
    for (int l = 0; l < d; ++l)
      for (std::size_t i = 0; i < m; ++i) H[i] += y[l] * B[l][i];
    return H;
  };
  std::vector<double> c(d);
  for (int l = 0; l < d; ++l) c[l] = ddot(lambda, B[l]);
  // Walls in y-coordinates: a . y = b.
  struct Line {
    std::vector<double> a;
    double b;
  };
  std::vector<Line> lines;
  for (const auto& w : gamma.walls()) {
    Line L;
    const auto ad = to_double(w.a);
    for (int l = 0; l < d; ++l) L.a.push_back(ddot(ad, B[l]));
    L.b = dot(w.t_coeff, T).get_d();
    double norm = 0;
    for (double x : L.a) norm += x * x;
    if (norm > 1e-24) lines.push_back(L);
  }
  auto gamma_at = [&](const std::vector<double>& y) { return gamma(point(y), Td); };
  auto sorted_unique = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
      if (out.empty() || x - out.back() > 1e-12 * (1 + std::abs(x))) out.push_back(x);
    return out;
  };
  // Integral of exp(c*t + shift) times a step function with the given breaks.
  auto piecewise = [&](const std::vector<double>& breaks, double slope, double shift,
                       const std::function<int(double)>& value) {
    if (breaks.empty()) {
      if (value(0.0) != 0) throw AssertionFailure("Gamma is not compactly supported");
      return 0.0;
    }
    if (value(breaks.front() - 1.0) != 0 || value(breaks.back() + 1.0) != 0)
      throw AssertionFailure("Gamma is not compactly supported");
    double s = 0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      double a = breaks[k], b = breaks[k + 1];
      int v = value(0.5 * (a + b));
      if (v == 0) continue;
      s += v * gauss<double, 20>::integrate([&](double t) { return std::exp(slope * t + shift); }, a, b);
    }
    return s;
  };
  if (d == 1) {
    std::vector<double> br;
    for (auto& L : lines) br.push_back(L.b / L.a[0]);
    br = sorted_unique(br);
    return meas * piecewise(br, c[0], 0.0, [&](double t) { return gamma_at({t}); });
  }
  std::vector<double> xb;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (std::abs(lines[i].a[1]) < 1e-14) xb.push_back(lines[i].b / lines[i].a[0]);
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      double det = lines[i].a[0] * lines[j].a[1] - lines[i].a[1] * lines[j].a[0];
      if (std::abs(det) < 1e-14) continue;
      xb.push_back((lines[i].b * lines[j].a[1] - lines[j].b * lines[i].a[1]) / det);
    }
  }
  xb = sorted_unique(xb);
  auto inner = [&](double x) {
    std::vector<double> br;
    for (auto& L : lines)
      if (std::abs(L.a[1]) >= 1e-14) br.push_back((L.b - L.a[0] * x) / L.a[1]);
    br = sorted_unique(br);
    return piecewise(br, c[1], c[0] * x, [&](double y) { return gamma_at({x, y}); });
  };
  if (xb.empty()) return 0.0;
  if (inner(xb.front() - 1.0) != 0.0 || inner(xb.back() + 1.0) != 0.0)
    throw AssertionFailure("Gamma is not compactly supported");
  double total = 0;
  for (std::size_t k = 0; k + 1 < xb.size(); ++k) total += gauss<double, 20>::integrate(inner, xb[k], xb[k + 1]);
  return meas * total;
}

}  // namespace rsp
