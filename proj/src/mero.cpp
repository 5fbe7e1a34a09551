#include "rsp/mero.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <sstream>

namespace rsp {

AffineForm AffineForm::variable(std::size_t dim, std::size_t i, const Rational& k) {
  AffineForm f(dim);
  f.coeffs.at(i) = 1;
  f.constant = k;
  return f;
}

AffineForm AffineForm::constant_form(std::size_t dim, const Rational& k) {
  AffineForm f(dim);
  f.constant = k;
  return f;
}

AffineForm AffineForm::operator+(const AffineForm& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("AffineForm: dimension mismatch");
  return {add(coeffs, o.coeffs), constant + o.constant};
}

AffineForm AffineForm::operator-(const AffineForm& o) const { return *this + (-o); }
AffineForm AffineForm::operator-() const { return {scale(-1, coeffs), -constant}; }
AffineForm AffineForm::operator*(const Rational& c) const { return {scale(c, coeffs), c * constant}; }
AffineForm AffineForm::operator+(const Rational& c) const { return {coeffs, constant + c}; }

std::string AffineForm::str(const std::vector<std::string>& names) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Rational& c = coeffs[i];
    if (c == 0) continue;
    std::string name = i < names.size() ? names[i] : "x" + std::to_string(i + 1);
    if (first) {
      if (c == -1)
        os << "-";
      else if (c != 1)
        os << to_string(c) << "*";
    } else {
      os << (c < 0 ? " - " : " + ");
      Rational a = abs(c);
      if (a != 1) os << to_string(a) << "*";
    }
    os << name;
    first = false;
  }
  if (first)
    os << to_string(constant);
  else if (constant != 0)
    os << (constant < 0 ? " - " : " + ") << to_string(abs(constant));
  return os.str();
}

AffineForm AffineSubspace::reduce(const AffineForm& f) const {
  if (f.dim() != ambient_) throw std::invalid_argument("AffineSubspace::reduce: dimension mismatch");
  AffineForm g = f;
  for (std::size_t e = 0; e < eqs_.size(); ++e) {
    Rational c = g.coeffs[pivots_[e]];
    if (c != 0) g = g - eqs_[e] * c;
  }
  return g;
}

AffineSubspace AffineSubspace::with(const AffineForm& f) const {
  AffineForm g = reduce(f);
  if (g.linear_is_zero()) {
    if (g.constant == 0) throw ValidationError("AffineSubspace: hyperplane contains the subspace");
    throw ValidationError("AffineSubspace: hyperplane does not meet the subspace");
  }
  std::size_t p = 0;
  while (g.coeffs[p] == 0) ++p;
  g = g * (Rational(1) / g.coeffs[p]);
  AffineSubspace out = *this;
  for (auto& e : out.eqs_) {
    Rational c = e.coeffs[p];
    if (c != 0) e = e - g * c;
  }
  // Keep equations ordered by pivot so equal subspaces compare equal.
  auto it = std::lower_bound(out.pivots_.begin(), out.pivots_.end(), p);
  auto pos = it - out.pivots_.begin();
  out.pivots_.insert(it, p);
  out.eqs_.insert(out.eqs_.begin() + pos, g);
  return out;
}

bool AffineSubspace::contains(const Vec& x) const {
  for (const auto& e : eqs_)
    if (e.eval(x) != 0) return false;
  return true;
}

std::pair<Vec, std::vector<Vec>> AffineSubspace::parametrization() const {
  Vec point = zeros(ambient_);
  // Free variables set to zero; each pivot variable is then -constant.
  for (std::size_t e = 0; e < eqs_.size(); ++e) point[pivots_[e]] = -eqs_[e].constant;
  std::vector<Vec> dirs;
  for (std::size_t j = 0; j < ambient_; ++j) {
    if (std::binary_search(pivots_.begin(), pivots_.end(), j)) continue;
    Vec d = zeros(ambient_);
    d[j] = 1;
    for (std::size_t e = 0; e < eqs_.size(); ++e) d[pivots_[e]] = -eqs_[e].coeffs[j];
    dirs.push_back(d);
  }
  return {point, dirs};
}

FactorAtom FactorAtom::global(const std::string& pair, const std::string& dual, bool polar, const AffineForm& arg,
                              int exponent) {
  FactorAtom a;
  a.kind = AtomKind::GlobalRS;
  a.pair = pair;
  a.dual_pair = dual;
  a.polar = polar;
  a.arg = arg;
  a.exponent = exponent;
  return a;
}

FactorAtom FactorAtom::local_zeta(const std::string& field, const AffineForm& arg, int exponent) {
  FactorAtom a;
  a.kind = AtomKind::LocalZeta;
  a.pair = field;
  a.arg = arg;
  a.exponent = exponent;
  return a;
}

FactorAtom FactorAtom::epsilon(const std::string& label, const AffineForm& arg, int exponent) {
  FactorAtom a;
  a.kind = AtomKind::EpsilonUnit;
  a.pair = label;
  a.arg = arg;
  a.exponent = exponent;
  return a;
}

FactorAtom FactorAtom::residue_symbol(const std::string& pair, int point, std::size_t dim, int exponent) {
  FactorAtom a;
  a.kind = AtomKind::ResidueSymbol;
  a.pair = pair;
  a.point = point;
  a.arg = AffineForm(dim);
  a.exponent = exponent;
  return a;
}

namespace {

auto base_key(const FactorAtom& a) { return std::tie(a.kind, a.pair, a.dual_pair, a.polar, a.arg, a.point); }

}  // namespace

bool FactorAtom::same_base(const FactorAtom& o) const { return base_key(*this) == base_key(o); }
bool FactorAtom::base_less(const FactorAtom& o) const { return base_key(*this) < base_key(o); }

std::string FactorAtom::str(const std::vector<std::string>& names) const {
  std::string body;
  switch (kind) {
    case AtomKind::GlobalRS:
      body = "L(" + arg.str(names) + ", " + pair + ")";
      break;
    case AtomKind::LocalZeta:
      body = "zeta_" + pair + "(" + arg.str(names) + ")";
      break;
    case AtomKind::EpsilonUnit:
      body = "eps_" + pair + "(" + arg.str(names) + ")";
      break;
    case AtomKind::ResidueSymbol:
      body = "Res*_" + pair + "(" + std::to_string(point) + ")";
      break;
  }
  if (exponent != 1) body += "^" + std::to_string(exponent);
  return body;
}

FormalMero::FormalMero(std::size_t ambient) : space_(ambient) {}

FormalMero::FormalMero(const AffineSubspace& space, std::vector<std::string> names)
    : space_(space), names_(std::move(names)) {}

FormalMero FormalMero::zero(const AffineSubspace& space, std::vector<std::string> names) {
  FormalMero f(space, std::move(names));
  f.zero_ = true;
  f.prefactor_ = 0;
  return f;
}

FormalMero& FormalMero::multiply(const FactorAtom& a) {
  if (a.arg.dim() != space_.ambient()) throw std::invalid_argument("FormalMero: atom dimension mismatch");
  if (!zero_) {
    atoms_.push_back(a);
    normalize();
  }
  return *this;
}

FormalMero& FormalMero::scale(const Rational& c) {
  if (c == 0) {
    zero_ = true;
    atoms_.clear();
    prefactor_ = 0;
  } else if (!zero_) {
    prefactor_ *= c;
  }
  return *this;
}

FormalMero FormalMero::operator*(const FormalMero& o) const {
  if (!(space_ == o.space_)) throw std::invalid_argument("FormalMero: product of forms on different subspaces");
  if (zero_ || o.zero_) return zero(space_, names_);
  FormalMero r = *this;
  r.prefactor_ *= o.prefactor_;
  r.atoms_.insert(r.atoms_.end(), o.atoms_.begin(), o.atoms_.end());
  r.normalize();
  return r;
}

FormalMero FormalMero::inverse() const {
  if (zero_) throw std::domain_error("FormalMero: inverse of zero");
  FormalMero r = *this;
  r.prefactor_ = 1 / prefactor_;
  for (auto& a : r.atoms_) a.exponent = -a.exponent;
  return r;
}

void FormalMero::normalize() {
  if (zero_) {
    atoms_.clear();
    prefactor_ = 0;
    return;
  }
  for (auto& a : atoms_) a.arg = space_.reduce(a.arg);
  std::sort(atoms_.begin(), atoms_.end(), [](const FactorAtom& a, const FactorAtom& b) { return a.base_less(b); });
  std::vector<FactorAtom> merged;
  for (const auto& a : atoms_) {
    if (!merged.empty() && merged.back().same_base(a))
      merged.back().exponent += a.exponent;
    else
      merged.push_back(a);
  }
  atoms_.clear();
  for (auto& a : merged)
    if (a.exponent != 0) atoms_.push_back(a);
}

bool FormalMero::operator==(const FormalMero& o) const {
  if (!(space_ == o.space_)) return false;
  if (zero_ || o.zero_) return zero_ == o.zero_;
  FormalMero a = *this, b = o;
  a.normalize();
  b.normalize();
  if (a.prefactor_ != b.prefactor_ || a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i)
    if (!a.atoms_[i].same_base(b.atoms_[i]) || a.atoms_[i].exponent != b.atoms_[i].exponent) return false;
  return true;
}

std::string FormalMero::str() const {
  if (zero_) return "0";
  std::ostringstream os;
  std::vector<std::string> num, den;
  for (const auto& a : atoms_) {
    FactorAtom b = a;
    b.exponent = std::abs(a.exponent);
    (a.exponent > 0 ? num : den).push_back(b.str(names_));
  }
  if (prefactor_ != 1 || num.empty()) num.insert(num.begin(), to_string(prefactor_));
  for (std::size_t i = 0; i < num.size(); ++i) os << (i ? " * " : "") << num[i];
  if (!den.empty()) {
    os << " / (";
    for (std::size_t i = 0; i < den.size(); ++i) os << (i ? " * " : "") << den[i];
    os << ")";
  }
  return os.str();
}

FormalMero FormalMero::pullback(const Mat& A, const Vec& b, std::vector<std::string> names) const {
  if (A.size() != space_.ambient() || b.size() != space_.ambient())
    throw std::invalid_argument("FormalMero::pullback: map has the wrong target dimension");
  const std::size_t d = A.empty() ? 0 : A[0].size();
  auto pull = [&](const AffineForm& f) {
    AffineForm g(d);
    g.constant = f.eval(b);
    for (std::size_t i = 0; i < A.size(); ++i)
      if (f.coeffs[i] != 0) g.coeffs = add(g.coeffs, rsp::scale(f.coeffs[i], A[i]));
    return g;
  };
  AffineSubspace sp(d);
  for (const auto& e : space_.equations()) {
    AffineForm g = pull(e);
    if (sp.reduce(g).linear_is_zero()) {
      if (sp.reduce(g).constant != 0) throw ValidationError("FormalMero::pullback: image misses the subspace");
      continue;
    }
    sp = sp.with(g);
  }
  FormalMero r(sp, std::move(names));
  r.zero_ = zero_;
  r.prefactor_ = prefactor_;
  for (auto a : atoms_) {
    a.arg = pull(a.arg);
    r.atoms_.push_back(a);
  }
  r.normalize();
  return r;
}

namespace {

// Whether an atom has a pole where its argument equals c.
bool pole_at(const FactorAtom& a, const Rational& c) {
  if (a.kind == AtomKind::LocalZeta) return c == 0;
  if (a.kind == AtomKind::GlobalRS) return a.polar && (c == 0 || c == 1);
  return false;
}

}  // namespace

Divisor divisor_along(const FormalMero& F, const AffineForm& lambda) {
  AffineSubspace H = F.space().with(lambda);
  Divisor d;
  if (F.is_zero()) return d;
  for (std::size_t i = 0; i < F.atoms().size(); ++i) {
    const auto& a = F.atoms()[i];
    if (a.kind != AtomKind::GlobalRS && a.kind != AtomKind::LocalZeta) continue;
    if (F.space().reduce(a.arg).linear_is_zero()) continue;  // already a constant
    AffineForm g = H.reduce(a.arg);
    if (!g.linear_is_zero()) continue;
    if (pole_at(a, g.constant)) {
      d.order += a.exponent;
      d.pole_atoms.push_back(i);
    } else if (a.kind == AtomKind::GlobalRS && g.constant >= 0 && g.constant <= 1) {
      d.generic = true;
    }
  }
  return d;
}

FormalMero leading_term(const FormalMero& F, const AffineForm& lambda) {
  AffineSubspace H = F.space().with(lambda);
  if (F.is_zero()) return FormalMero::zero(H, F.names());
  Divisor d = divisor_along(F, lambda);
  AffineForm L = F.space().reduce(lambda);
  std::size_t piv = 0;
  while (L.coeffs[piv] == 0) ++piv;
  FormalMero r(H, F.names());
  r.prefactor_ = F.prefactor();
  for (std::size_t i = 0; i < F.atoms().size(); ++i) {
    const auto& a = F.atoms()[i];
    if (std::find(d.pole_atoms.begin(), d.pole_atoms.end(), i) == d.pole_atoms.end()) {
      r.atoms_.push_back(a);
      continue;
    }
    const Rational c = H.reduce(a.arg).constant;
    AffineForm l = F.space().reduce(a.arg) + Rational(-c);
    Rational kappa = l.coeffs[piv] / L.coeffs[piv];
    if (!(l == L * kappa)) throw AssertionFailure("leading_term: pole argument is not proportional to the form");
    // (s - c) = kappa * Lambda near the pole, so each factor contributes
    // Res*/(kappa * Lambda).
    Rational k = kappa;
    if (a.exponent > 0)
      for (int e = 0; e < a.exponent; ++e) r.prefactor_ /= k;
    else
      for (int e = 0; e < -a.exponent; ++e) r.prefactor_ *= k;
    std::string label = a.kind == AtomKind::LocalZeta ? "zeta_" + a.pair : a.pair;
    r.atoms_.push_back(FactorAtom::residue_symbol(label, c.get_num().get_si(), H.ambient(), a.exponent));
  }
  r.normalize();
  return r;
}

FormalMero residue(const FormalMero& F, const AffineForm& lambda) {
  Divisor d = divisor_along(F, lambda);
  if (d.order >= 2) throw ValidationError("residue: pole of order " + std::to_string(d.order) + " along the form");
  if (d.order <= 0) return FormalMero::zero(F.space().with(lambda), F.names());
  return leading_term(F, lambda);
}

FormalMero restrict_to(const FormalMero& F, const AffineForm& lambda) {
  Divisor d = divisor_along(F, lambda);
  if (d.order > 0) throw ValidationError("restrict: pole of order " + std::to_string(d.order) + " along the form");
  if (d.order < 0) return FormalMero::zero(F.space().with(lambda), F.names());
  return leading_term(F, lambda);
}

namespace {

void check_order(const std::vector<AffineForm>& forms, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> s = order;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != i || s.size() != forms.size()) throw ValidationError("iterated operation: order is not a permutation");
}

}  // namespace

FormalMero iterated_residue(const FormalMero& F, const std::vector<AffineForm>& forms,
                            const std::vector<std::size_t>& order) {
  check_order(forms, order);
  FormalMero cur = F;
  for (std::size_t i : order) cur = residue(cur, forms[i]);
  return cur;
}

FormalMero iterated_restrict(const FormalMero& F, const std::vector<AffineForm>& forms,
                             const std::vector<std::size_t>& order) {
  check_order(forms, order);
  FormalMero cur = F;
  for (std::size_t i : order) cur = restrict_to(cur, forms[i]);
  return cur;
}

FormalMero check_commutation(const FormalMero& F, const std::vector<AffineForm>& forms,
                             const std::vector<std::size_t>& order1, const std::vector<std::size_t>& order2) {
  FormalMero a = iterated_residue(F, forms, order1);
  FormalMero b = iterated_residue(F, forms, order2);
  if (!(a == b)) throw AssertionFailure("iterated residues depend on the order: " + a.str() + " vs " + b.str());
  return a;
}

FormalMero strip_epsilon(const FormalMero& F) {
  if (F.is_zero()) return F;
  FormalMero r(F.space(), F.names());
  r.scale(F.prefactor());
  for (const auto& a : F.atoms())
    if (a.kind != AtomKind::EpsilonUnit) r.multiply(a);
  return r;
}

FormalMero modulo_units(const FormalMero& F) {
  if (F.is_zero()) return F;
  FormalMero r(F.space(), F.names());
  for (auto a : F.atoms()) {
    if (a.kind == AtomKind::EpsilonUnit || a.kind == AtomKind::ResidueSymbol) continue;
    if (F.space().reduce(a.arg).linear_is_zero()) continue;
    if (a.kind == AtomKind::GlobalRS) {
      FactorAtom b = a;
      std::swap(b.pair, b.dual_pair);
      b.arg = F.space().reduce(-a.arg + Rational(1));
      if (b.base_less(a)) a = b;
    } else {
      FactorAtom b = a;
      b.arg = F.space().reduce(-a.arg);
      if (b.base_less(a)) a = b;
    }
    r.multiply(a);
  }
  return r;
}

bool equal_modulo_units(const FormalMero& a, const FormalMero& b) { return modulo_units(a) == modulo_units(b); }

namespace {

using mp50 = boost::multiprecision::cpp_bin_float_50;

template <class R>
R xi_real(R s) {
  using std::pow;
  if (s == 0 || s == 1) throw std::domain_error("completed zeta: pole at " + std::to_string(static_cast<double>(s)));
  if (s < R(1) / 2) s = 1 - s;
  const R pi = boost::math::constants::pi<R>();
  return pow(pi, -s / 2) * boost::math::tgamma(s / 2) * boost::math::zeta(s);
}

template <class T>
T to_scalar(const Rational& q) {
  if constexpr (std::is_same_v<T, std::complex<double>>)
    return T(q.get_d());
  else
    return T(q.get_num().get_str()) / T(q.get_den().get_str());
}

std::complex<double> as_scalar(const std::complex<double>& x, std::complex<double>*) { return x; }
mp50 as_scalar(const std::complex<double>& x, mp50*) {
  if (x.imag() != 0) throw std::domain_error("evaluate_numeric: complex unit in real evaluation");
  return mp50(x.real());
}

template <class T>
T xi_of(const T& s) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    if (std::abs(s.imag()) > 1e-12) throw std::domain_error("completed zeta is only evaluated at real points");
    return xi_real<double>(s.real());
  } else {
    return xi_real<T>(s);
  }
}

template <class T>
T power(T x, int e) {
  T r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= x;
  return e >= 0 ? r : T(1) / r;
}

template <class T>
T evaluate_impl(const FormalMero& F, const std::vector<T>& x, const Evaluators& ev) {
  using std::abs;
  using std::log;
  using std::pow;
  const std::size_t n = F.space().ambient();
  if (x.size() != n) throw ValidationError("evaluate_numeric: point has the wrong dimension");
  auto value = [&](const AffineForm& f) {
    T s = to_scalar<T>(f.constant);
    for (std::size_t i = 0; i < n; ++i)
      if (f.coeffs[i] != 0) s += to_scalar<T>(f.coeffs[i]) * x[i];
    return s;
  };
  for (const auto& e : F.space().equations())
    if (abs(value(e)) > 1e-9) throw ValidationError("evaluate_numeric: point is off the subspace");
  if (F.is_zero()) return T(0);
  auto field_q = [&](const std::string& label) {
    auto it = ev.q.find(label);
    if (it == ev.q.end()) throw ValidationError("evaluate_numeric: no q for local field " + label);
    return T(it->second);
  };
  T r = to_scalar<T>(F.prefactor());
  for (const auto& a : F.atoms()) {
    T v;
    switch (a.kind) {
      case AtomKind::GlobalRS:
        if (!ev.xi_pairs.count(a.pair)) throw ValidationError("evaluate_numeric: no evaluator for pair " + a.pair);
        v = xi_of(value(a.arg));
        break;
      case AtomKind::LocalZeta:
        v = T(1) / (T(1) - pow(field_q(a.pair), -value(a.arg)));
        break;
      case AtomKind::EpsilonUnit: {
        auto it = ev.epsilon.find(a.pair);
        if (it == ev.epsilon.end()) throw ValidationError("evaluate_numeric: no value for unit " + a.pair);
        v = as_scalar(it->second, static_cast<T*>(nullptr));
        break;
      }
      case AtomKind::ResidueSymbol:
        if (a.pair.rfind("zeta_", 0) == 0) {
          v = T(1) / log(field_q(a.pair.substr(5)));
        } else {
          if (!ev.xi_pairs.count(a.pair)) throw ValidationError("evaluate_numeric: no evaluator for pair " + a.pair);
          // Residues of the completed zeta: +1 at s = 1, -1 at s = 0.
          v = a.point == 1 ? T(1) : T(-1);
        }
        break;
    }
    r *= power(v, a.exponent);
  }
  return r;
}

}  // namespace

double completed_zeta(double s) { return xi_real<double>(s); }

std::complex<double> evaluate_numeric(const FormalMero& F, const std::vector<std::complex<double>>& point,
                                      const Evaluators& ev) {
  return evaluate_impl(F, point, ev);
}

std::string evaluate_numeric_digits(const FormalMero& F, const Vec& point, const Evaluators& ev, int digits) {
  if (digits < 1 || digits > 50) throw ValidationError("evaluate_numeric: digits must be in [1, 50]");
  std::vector<mp50> x;
  for (const auto& v : point) x.push_back(to_scalar<mp50>(v));
  mp50 r = evaluate_impl(F, x, ev);
  std::ostringstream os;
  os.precision(digits);
  os << r;
  return os.str();
}

}  // namespace rsp
