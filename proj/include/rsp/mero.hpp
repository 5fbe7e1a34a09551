#pragma once

#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rsp/rational.hpp"

namespace rsp {

struct AffineForm {
  Vec coeffs;
  Rational constant = 0;

  AffineForm() = default;
  explicit AffineForm(std::size_t dim) : coeffs(zeros(dim)) {}
  AffineForm(Vec c, Rational k) : coeffs(std::move(c)), constant(std::move(k)) {}
  static AffineForm variable(std::size_t dim, std::size_t i, const Rational& k = 0);
  static AffineForm constant_form(std::size_t dim, const Rational& k);

  std::size_t dim() const { return coeffs.size(); }
  bool linear_is_zero() const { return is_zero(coeffs); }
  Rational eval(const Vec& x) const { return dot(coeffs, x) + constant; }

  AffineForm operator+(const AffineForm& o) const;
  AffineForm operator-(const AffineForm& o) const;
  AffineForm operator-() const;
  AffineForm operator*(const Rational& c) const;
  AffineForm operator+(const Rational& c) const;
  bool operator==(const AffineForm& o) const { return coeffs == o.coeffs && constant == o.constant; }
  bool operator<(const AffineForm& o) const {
    return coeffs != o.coeffs ? coeffs < o.coeffs : constant < o.constant;
  }
  std::string str(const std::vector<std::string>& names) const;
};

// Common zero set of independent affine forms, kept in reduced echelon form
// so that `reduce` yields a canonical representative modulo the subspace.
class AffineSubspace {
 public:
  AffineSubspace() = default;
  explicit AffineSubspace(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t codim() const { return eqs_.size(); }
  std::size_t dim() const { return ambient_ - eqs_.size(); }
  const std::vector<AffineForm>& equations() const { return eqs_; }

  AffineForm reduce(const AffineForm& f) const;
  // Intersects with {f = 0}; throws ValidationError when f is constant on
  // the subspace.
  AffineSubspace with(const AffineForm& f) const;
  bool contains(const Vec& x) const;
  // A point of the subspace and a basis of its direction space.
  std::pair<Vec, std::vector<Vec>> parametrization() const;

  bool operator==(const AffineSubspace& o) const { return ambient_ == o.ambient_ && eqs_ == o.eqs_; }

 private:
  std::size_t ambient_ = 0;
  std::vector<AffineForm> eqs_;
  std::vector<std::size_t> pivots_;
};

enum class AtomKind { GlobalRS = 0, LocalZeta = 1, EpsilonUnit = 2, ResidueSymbol = 3 };

struct FactorAtom {
  AtomKind kind = AtomKind::GlobalRS;
  std::string pair;       // pair label, or the local field label
  std::string dual_pair;  // label of the contragredient pair (GlobalRS)
  bool polar = false;     // GlobalRS: simple poles at s = 0 and s = 1
  AffineForm arg;
  int point = 0;  // ResidueSymbol: 0 or 1
  int exponent = 1;

  static FactorAtom global(const std::string& pair, const std::string& dual, bool polar, const AffineForm& arg,
                           int exponent = 1);
  static FactorAtom local_zeta(const std::string& field, const AffineForm& arg, int exponent = 1);
  static FactorAtom epsilon(const std::string& label, const AffineForm& arg, int exponent = 1);
  static FactorAtom residue_symbol(const std::string& pair, int point, std::size_t dim, int exponent = 1);

  // Sort/merge key (ignores the exponent).
  bool same_base(const FactorAtom& o) const;
  bool base_less(const FactorAtom& o) const;
  std::string str(const std::vector<std::string>& names) const;
};

class FormalMero {
 public:
  FormalMero() = default;
  explicit FormalMero(std::size_t ambient);
  FormalMero(const AffineSubspace& space, std::vector<std::string> names = {});
  static FormalMero zero(const AffineSubspace& space, std::vector<std::string> names = {});

  bool is_zero() const { return zero_; }
  const Rational& prefactor() const { return prefactor_; }
  const std::vector<FactorAtom>& atoms() const { return atoms_; }
  const AffineSubspace& space() const { return space_; }
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names) { names_ = std::move(names); }

  FormalMero& multiply(const FactorAtom& a);
  FormalMero& scale(const Rational& c);
  FormalMero operator*(const FormalMero& o) const;
  FormalMero inverse() const;

  // Canonical form: arguments reduced modulo the space, atoms sorted and
  // merged, zero exponents dropped.
  void normalize();
  bool operator==(const FormalMero& o) const;
  std::string str() const;

  // Replaces every argument by its composition with an affine map
  // x = A y + b from a new coordinate space (dimension A[0].size()).
  FormalMero pullback(const Mat& A, const Vec& b, std::vector<std::string> names) const;

 private:
  friend FormalMero leading_term(const FormalMero&, const AffineForm&);
  Rational prefactor_ = 1;
  std::vector<FactorAtom> atoms_;
  AffineSubspace space_;
  bool zero_ = false;
  std::vector<std::string> names_;
};

struct Divisor {
  int order = 0;         // pole order (negative for zeros)
  bool generic = false;  // an atom becomes a constant with unknown vanishing
  std::vector<std::size_t> pole_atoms;
};

Divisor divisor_along(const FormalMero& F, const AffineForm& lambda);
// Coefficient of the leading term of F along {lambda = 0}: every atom with a
// pole there is replaced by its residue symbol.
FormalMero leading_term(const FormalMero& F, const AffineForm& lambda);
FormalMero residue(const FormalMero& F, const AffineForm& lambda);
FormalMero restrict_to(const FormalMero& F, const AffineForm& lambda);
FormalMero iterated_residue(const FormalMero& F, const std::vector<AffineForm>& forms,
                            const std::vector<std::size_t>& order);
FormalMero iterated_restrict(const FormalMero& F, const std::vector<AffineForm>& forms,
                             const std::vector<std::size_t>& order);
// Recomputes under both orders; throws AssertionFailure on disagreement.
FormalMero check_commutation(const FormalMero& F, const std::vector<AffineForm>& forms,
                             const std::vector<std::size_t>& order1, const std::vector<std::size_t>& order2);

// Drops epsilon units.
FormalMero strip_epsilon(const FormalMero& F);
// Canonical representative modulo never-vanishing units: epsilon units,
// residue symbols, rational prefactors and constant-argument values are
// dropped; global factors are normalized under s -> 1 - s with the dual
// pair and local zeta factors under s -> -s.
FormalMero modulo_units(const FormalMero& F);
bool equal_modulo_units(const FormalMero& a, const FormalMero& b);

struct Evaluators {
  std::set<std::string> xi_pairs = {"1x1"};  // pairs evaluated by completed zeta
  std::map<std::string, double> q;           // local field label -> residue field size
  std::map<std::string, std::complex<double>> epsilon;
};

std::complex<double> evaluate_numeric(const FormalMero& F, const std::vector<std::complex<double>>& point,
                                      const Evaluators& ev);
// Real evaluation carried at about `digits` significant digits (<= 50).
std::string evaluate_numeric_digits(const FormalMero& F, const Vec& point, const Evaluators& ev, int digits);
double completed_zeta(double s);

}  // namespace rsp
