#include "rsp/rational.hpp"

#include <algorithm>

namespace rsp {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (ch != ' ') s.push_back(ch);
  if (s.empty()) throw ValidationError("empty rational");
  auto dot_pos = s.find('.');
  if (dot_pos != std::string::npos) {
    std::string digits = s.substr(0, dot_pos) + s.substr(dot_pos + 1);
    std::size_t frac = s.size() - dot_pos - 1;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw ValidationError("bad decimal: " + raw);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw ValidationError("bad rational: " + raw);
  if (q.get_den() == 0) throw ValidationError("zero denominator: " + raw);
  q.canonicalize();
  return q;
}

Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v = zeros(n);
  v.at(i) = 1;
  return v;
}

Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Rational& c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
}

Echelon row_reduce(Mat m, std::size_t ncols) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    e.pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.resize(row);
  e.rows = std::move(m);
  return e;
}

int rank(const Mat& m, std::size_t ncols) { return static_cast<int>(row_reduce(m, ncols).pivots.size()); }

Mat nullspace(const Mat& m, std::size_t ncols) {
  Echelon e = row_reduce(m, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  Mat basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    Vec v = zeros(ncols);
    v[free] = 1;
    for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t ncols) {
  if (m.size() != b.size()) throw std::invalid_argument("solve: size mismatch");
  Mat aug = m;
  for (std::size_t r = 0; r < aug.size(); ++r) {
    aug[r].resize(ncols);
    aug[r].push_back(b[r]);
  }
  Echelon e = row_reduce(aug, ncols + 1);
  for (int p : e.pivots)
    if (static_cast<std::size_t>(p) == ncols) return std::nullopt;
  Vec x = zeros(ncols);
  for (std::size_t r = 0; r < e.rows.size(); ++r) x[e.pivots[r]] = e.rows[r][ncols];
  return x;
}

Rational determinant(Mat m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

Mat transpose(const Mat& m, std::size_t ncols) {
  Mat t(ncols, zeros(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < ncols; ++c) t[c][r] = m[r][c];
  return t;
}

Vec mat_vec(const Mat& m, const Vec& v) {
  Vec r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(dot(row, v));
  return r;
}

}  // namespace rsp
