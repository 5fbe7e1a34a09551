#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsp {

using Rational = mpq_class;
using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical a/b; the two-argument mpq_class constructor does not reduce.
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q);
// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25".
Rational parse_rational(const std::string& s);

Vec zeros(std::size_t n);
Vec unit_vector(std::size_t n, std::size_t i);
Rational dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Rational& c, const Vec& a);
bool is_zero(const Vec& a);

struct Echelon {
  Mat rows;                 // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;  // pivot column per row
};

Echelon row_reduce(Mat m, std::size_t ncols);
int rank(const Mat& m, std::size_t ncols);
// Basis of {x : m x = 0}.
Mat nullspace(const Mat& m, std::size_t ncols);
// Some solution of m x = b, if one exists.
std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t ncols);
Rational determinant(Mat m);
Mat transpose(const Mat& m, std::size_t ncols);
Vec mat_vec(const Mat& m, const Vec& v);

}  // namespace rsp
