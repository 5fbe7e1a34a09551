#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "rsp/rational.hpp"
#include "rsp/rs_parabolic.hpp"

namespace rsp {

// Sparse multivariate polynomial with rational coefficients.
using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Rational>;

Poly poly_constant(std::size_t nvars, const Rational& c);
Poly poly_variable(std::size_t nvars, std::size_t i);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Rational poly_eval(const Poly& p, const Vec& x);
std::string poly_str(const Poly& p);

// Exponential polynomial: sum over exponent covectors of polynomials.
class ExpPoly {
 public:
  void add(const Vec& exponent, const Poly& coeff);
  const std::map<Vec, Poly>& terms() const { return terms_; }
  // The coefficient of the zero exponent.
  Poly polynomial_part(std::size_t nvars) const;
  double eval(const Vec& x) const;

 private:
  std::map<Vec, Poly> terms_;
};

// Geometry of z_P^Q for RS parabolics P subset Q, in the e-coordinates of
// P (length m_P, slot i_P pinned to zero).
struct RelativeZ {
  RSParabolic P, Q;
  std::vector<int> owner;  // P std block -> Q std block, 0-based
  int dim = 0;
  int eps = 1;
  std::vector<int> root_index;  // 1-based k of the relative simple roots
  std::vector<Vec> roots;       // covectors
  std::vector<Vec> coweights;   // vectors
  std::vector<Vec> coroots;     // vectors
  Mat basis;                    // a basis of z_P^Q
  Mat z_q;                      // embedded e-basis of z_Q (j != i_Q)
  Rational measure;             // Lebesgue density of `basis` coordinates
  Rational vol_coweights;
  Rational vol_coroots;

  Rational inner(const Vec& a, const Vec& b) const;
};

RelativeZ relative_z(const RSParabolic& P, const RSParabolic& Q);
// Embeds a vector in the e-coordinates of R into those of P subset R.
Vec embed_coords(const RSParabolic& P, const RSParabolic& R, const Vec& v);
std::vector<RSParabolic> intermediate(const RSParabolic& P, const RSParabolic& Q);

struct ConePair {
  RelativeZ rz;
  explicit ConePair(const RSParabolic& P, const RSParabolic& Q);
  const RSParabolic& P() const { return rz.P; }
  const RSParabolic& Q() const { return rz.Q; }
  int eps() const { return rz.eps; }
};
std::vector<ConePair> cone_pairs(int n, int max_rank);

Rational theta_hat(const ConePair& cp, const Vec& lambda);
Rational theta(const ConePair& cp, const Vec& lambda);
std::complex<double> theta_hat(const ConePair& cp, const std::vector<std::complex<double>>& lambda);
std::complex<double> theta(const ConePair& cp, const std::vector<std::complex<double>>& lambda);

// Precomputed data for evaluating Gamma_P^Q(H, T).
class GammaEvaluator {
 public:
  explicit GammaEvaluator(const ConePair& cp);
  int operator()(const Vec& H, const Vec& T) const;
  int operator()(const std::vector<double>& H, const std::vector<double>& T) const;
  // Hyperplanes <a, H> = <t_coeff, T> where a summand can jump.
  struct Wall {
    Vec a;
    Vec t_coeff;
  };
  std::vector<Wall> walls() const;

 private:
  struct Term {
    int eps;
    std::vector<Vec> roots;      // tau_P^R: <alpha, H> >= 0
    std::vector<Vec> coweights;  // hat tau_R^Q: (H - T, w) >= 0, as covectors
  };
  std::vector<Term> terms_;
  std::vector<std::vector<std::vector<double>>> roots_d_, cow_d_;
};

int gamma_indicator(const ConePair& cp, const Vec& H, const Vec& T);

// A coefficient times prod_k <lambda, coweight_k>^{-e_k}.
struct ConeTerm {
  Rational coeff;
  std::vector<int> exps;
};
// Fourier transform of q * tau_P^Q, as a sum of inverse powers of the
// coweight pairings (q acts by differentiation in lambda).
std::vector<ConeTerm> ft_cone_terms(const ConePair& cp, const Poly& q);
std::complex<double> ft_cone(const ConePair& cp, const Poly& q, const std::vector<std::complex<double>>& lambda);
Rational ft_cone(const ConePair& cp, const Vec& lambda);

// Exact exponential polynomial in T for rational lambda in general position.
ExpPoly ft_gamma(const ConePair& cp, const Vec& lambda);
std::complex<double> ft_gamma(const ConePair& cp, const Vec& T, const std::vector<std::complex<double>>& lambda);
// Covector mu with <lambda, T_R^Q> = <mu, T>.
Vec projection_covector(const RSParabolic& P, const RSParabolic& R, const RSParabolic& Q, const Vec& lambda);

// Numeric oracles (relative rank <= 2).
double ft_cone_quadrature(const ConePair& cp, const std::vector<double>& lambda);
double ft_gamma_quadrature(const ConePair& cp, const Vec& T, const std::vector<double>& lambda);

}  // namespace rsp
