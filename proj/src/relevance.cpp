#include "rsp/relevance.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace rsp {

namespace {

std::string entry_str(const FamilyEntry& e) {
  return "(r=" + std::to_string(e.r) + ", d=" + std::to_string(e.d) + ", " + e.atom + ")";
}

std::string no_spaces(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

AffineForm var(const InducingPair& p, int side, int family, int entry, int j) {
  return AffineForm::variable(p.dim(), p.index(side, family, entry, j));
}

}  // namespace

void InducingPair::build(const AtomRegistry* reg) {
  for (int f = 1; f <= 2; ++f)
    for (const auto& e : family(f)) {
      if (e.r < 1 || e.d < 1) throw ValidationError("pair: family " + std::to_string(f) + " entry " + entry_str(e) +
                                                     " needs r >= 1 and d >= 1");
      if (e.atom.empty()) throw ValidationError("pair: empty atom in family " + std::to_string(f));
      if (reg) {
        const auto& a = reg->atom(e.atom);
        if (a.rank != e.r)
          throw ValidationError("pair: atom " + e.atom + " has rank " + std::to_string(a.rank) + " but r = " +
                                std::to_string(e.r));
      }
    }
  int n = 0, np1 = 0, r1 = 0, r2 = 0;
  for (const auto& e : f1_) {
    n += e.r * e.d;
    np1 += e.r * (e.d - 1);
    r1 += e.r;
  }
  for (const auto& e : f2_) {
    n += e.r * (e.d - 1);
    np1 += e.r * e.d;
    r2 += e.r;
  }
  if (r1 != r2 - 1)
    throw ValidationError("pair: k-identity fails, sum r(1,i) = " + std::to_string(r1) + " but sum r(2,j) - 1 = " +
                          std::to_string(r2 - 1));
  if (np1 != n + 1) throw ValidationError("pair: dimension identity fails");
  n_ = n;
  k_ = r1;

  blocks_.clear();
  index_.clear();
  for (int side = 0; side <= 1; ++side)
    for (int f = 1; f <= 2; ++f)
      for (int i = 1; i <= m(f); ++i) {
        const auto& e = family(f)[i - 1];
        for (int j = 1; j <= speh_length(side, f, i); ++j) {
          index_[{side, f, i, j}] = blocks_.size();
          // family 2 on GL_n and family 1 on GL_{n+1} carry the contragredient
          blocks_.push_back({side, f, i, j, e.r, e.atom, (side == 0) == (f == 2)});
        }
      }
  names_.clear();
  for (const auto& b : blocks_)
    names_.push_back(std::string(b.side == 0 ? "x" : "y") + std::to_string(b.family) + "_" +
                     std::to_string(b.entry) + "_" + std::to_string(b.j));
  pi_names_.clear();
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= m(f); ++i) pi_names_.push_back("t" + std::to_string(f) + "_" + std::to_string(i));
}

InducingPair InducingPair::make(std::vector<FamilyEntry> family1, std::vector<FamilyEntry> family2,
                                const AtomRegistry* reg) {
  InducingPair p;
  p.f1_ = std::move(family1);
  p.f2_ = std::move(family2);
  p.build(reg);
  return p;
}

InducingPair InducingPair::from_json(const nlohmann::json& j, const AtomRegistry* reg) {
  if (!j.is_object()) throw ValidationError("pair: expected an object");
  auto read = [&](const char* key) {
    std::vector<FamilyEntry> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ValidationError(std::string("pair: /") + key + " must be an array");
    std::size_t idx = 0;
    for (const auto& e : j[key]) {
      const std::string where = std::string("pair: /") + key + "/" + std::to_string(idx++);
      if (!e.is_object() || !e.contains("r") || !e.contains("d") || !e.contains("atom"))
        throw ValidationError(where + " needs r, d and atom");
      if (!e["r"].is_number_integer() || !e["d"].is_number_integer() || !e["atom"].is_string())
        throw ValidationError(where + " has fields of the wrong type");
      out.push_back({e["r"].get<int>(), e["d"].get<int>(), e["atom"].get<std::string>()});
    }
    return out;
  };
  InducingPair p = make(read("family1"), read("family2"), reg);
  if (j.contains("n") && j["n"].get<int>() != p.n())
    throw ValidationError("pair: dimension mismatch, stated n = " + std::to_string(j["n"].get<int>()) +
                          " but the families give n = " + std::to_string(p.n()));
  auto names = [&](const char* key, std::vector<std::string>& target) {
    if (!j.contains(key)) return;
    auto v = j[key].get<std::vector<std::string>>();
    if (v.size() != target.size())
      throw ValidationError(std::string("pair: /") + key + " needs " + std::to_string(target.size()) + " names");
    target = v;
  };
  names("coordinates", p.names_);
  names("pi_coordinates", p.pi_names_);
  return p;
}

nlohmann::json InducingPair::to_json() const {
  nlohmann::json j;
  for (int f = 1; f <= 2; ++f) {
    auto& arr = j[f == 1 ? "family1" : "family2"] = nlohmann::json::array();
    for (const auto& e : family(f)) arr.push_back({{"r", e.r}, {"d", e.d}, {"atom", e.atom}});
  }
  j["n"] = n_;
  j["k"] = k_;
  j["coordinates"] = names_;
  j["pi_coordinates"] = pi_names_;
  return j;
}

int InducingPair::D() const {
  int s = 0;
  for (int f = 1; f <= 2; ++f)
    for (const auto& e : family(f)) s += e.d - 1;
  return s;
}

std::size_t InducingPair::index(int side, int family, int entry, int j) const {
  auto it = index_.find({side, family, entry, j});
  if (it == index_.end())
    throw std::out_of_range("pair: no block (" + std::to_string(side) + ", " + std::to_string(family) + ", " +
                            std::to_string(entry) + ", " + std::to_string(j) + ")");
  return it->second;
}

std::size_t InducingPair::side_count(int side) const {
  return static_cast<std::size_t>(std::count_if(blocks_.begin(), blocks_.end(),
                                                [&](const PiBlock& b) { return b.side == side; }));
}

int InducingPair::speh_length(int side, int family_id, int entry) const {
  const int d = family(family_id).at(entry - 1).d;
  return (side == 0) == (family_id == 1) ? d : d - 1;
}

std::vector<int> InducingPair::pi_sizes(int side) const {
  std::vector<int> s;
  for (const auto& b : blocks_)
    if (b.side == side) s.push_back(b.r);
  return s;
}

std::vector<int> InducingPair::p_sizes(int side) const {
  std::vector<int> s;
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= m(f); ++i) {
      int len = speh_length(side, f, i);
      if (len > 0) s.push_back(len * family(f)[i - 1].r);
    }
  return s;
}

InducingPair InducingPair::permuted(const std::vector<int>& perm1, const std::vector<int>& perm2) const {
  auto apply = [](const std::vector<FamilyEntry>& v, const std::vector<int>& perm) {
    if (perm.size() != v.size()) throw ValidationError("pair: permutation of the wrong length");
    std::vector<FamilyEntry> out(v.size());
    std::vector<bool> seen(v.size(), false);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (perm[i] < 0 || perm[i] >= static_cast<int>(v.size()) || seen[perm[i]])
        throw ValidationError("pair: not a permutation");
      seen[perm[i]] = true;
      out[perm[i]] = v[i];
    }
    return out;
  };
  return make(apply(f1_, perm1), apply(f2_, perm2));
}

Vec nu_pi(const InducingPair& p) {
  Vec nu(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const auto& b = p.blocks()[i];
    nu[i] = frac(2 * b.j - p.speh_length(b.side, b.family, b.entry) - 1, 2);
  }
  return nu;
}

AffineMap a_pi_minus_nu(const InducingPair& p) {
  const std::size_t t = static_cast<std::size_t>(p.m(1) + p.m(2));
  AffineMap map;
  map.A.assign(p.dim(), zeros(t));
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const auto& b = p.blocks()[i];
    std::size_t col = (b.family == 1 ? 0 : p.m(1)) + b.entry - 1;
    // lambda(1) lives on GL_n, lambda(2) on GL_{n+1}; the other side is its negative
    map.A[i][col] = (b.side == 0) == (b.family == 1) ? 1 : -1;
  }
  Vec nu = nu_pi(p);
  for (auto& x : nu) x = -x;
  map.b = nu;
  return map;
}

std::string LabeledForm::label() const {
  return std::string(sign > 0 ? "L+" : "L-") + "(" + std::to_string(family) + "," + std::to_string(entry) + "," +
         std::to_string(j) + ")";
}

std::string LabeledForm::display(const std::vector<std::string>& names) const {
  if (sign > 0) return "-(" + no_spaces((-form).str(names)) + ")";
  return no_spaces(form.str(names));
}

std::vector<AffineForm> SingularForms::all() const {
  std::vector<AffineForm> v;
  for (const auto& f : plus) v.push_back(f.form);
  for (const auto& f : minus) v.push_back(f.form);
  return v;
}

SingularForms singular_forms(const InducingPair& p) {
  SingularForms s;
  const Rational half = frac(1, 2);
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= p.m(f); ++i) {
      const int d = p.family(f)[i - 1].d;
      for (int j = 1; j <= d - 1; ++j) {
        AffineForm plus, minus;
        if (f == 1) {
          plus = -(var(p, 0, 1, i, d - j + 1) + var(p, 1, 1, i, j) + half);
          minus = var(p, 0, 1, i, d - j) + var(p, 1, 1, i, j) + (-half);
        } else {
          plus = -(var(p, 0, 2, i, j) + var(p, 1, 2, i, d - j + 1) + half);
          minus = var(p, 0, 2, i, j) + var(p, 1, 2, i, d - j) + (-half);
        }
        s.plus.push_back({1, f, i, j, plus});
        s.minus.push_back({-1, f, i, j, minus});
      }
    }
  return s;
}

AffineSubspace h_plus(const InducingPair& p) {
  AffineSubspace H(p.dim());
  for (const auto& f : singular_forms(p).plus) H = H.with(f.form);
  return H;
}

AffineSubspace intersection_check(const InducingPair& p) {
  const auto forms = singular_forms(p);
  AffineSubspace Hp(p.dim()), H(p.dim());
  try {
    for (const auto& f : forms.plus) Hp = Hp.with(f.form);
    H = Hp;
    for (const auto& f : forms.minus) H = H.with(f.form);
  } catch (const ValidationError& e) {
    throw AssertionFailure(std::string("intersection_check: singular forms are dependent: ") + e.what());
  }
  const std::size_t expected = p.dim() - forms.plus.size() - forms.minus.size();
  if (H.dim() != expected) throw AssertionFailure("intersection_check: wrong dimension of H_+ cap H_-");
  auto map = a_pi_minus_nu(p);
  const std::size_t t = map.A.empty() ? 0 : map.A[0].size();
  if (static_cast<std::size_t>(rank(transpose(map.A, t), p.dim())) != t || t != H.dim())
    throw AssertionFailure("intersection_check: a_pi has the wrong dimension");
  if (!H.contains(map.b)) throw AssertionFailure("intersection_check: -nu_pi is not on H_+ cap H_-");
  for (std::size_t c = 0; c < t; ++c) {
    Vec pt = map.b;
    for (std::size_t i = 0; i < p.dim(); ++i) pt[i] += map.A[i][c];
    if (!H.contains(pt)) throw AssertionFailure("intersection_check: a_pi - nu_pi is not inside H_+ cap H_-");
  }
  // Alternative expressions of Lambda_- on H_+, where the indices exist.
  auto same = [&](const AffineForm& a, const AffineForm& b, const LabeledForm& f) {
    if (!(Hp.reduce(a) == Hp.reduce(b)))
      throw AssertionFailure("intersection_check: alternative expression of " + f.label() + " fails on H_+");
  };
  const Rational one = 1;
  for (const auto& f : forms.minus) {
    const int d = p.family(f.family)[f.entry - 1].d;
    const int i = f.entry, j = f.j;
    if (f.family == 1) {
      same(f.form, var(p, 0, 1, i, d - j) - var(p, 0, 1, i, d - j + 1) + (-one), f);
      if (j + 1 <= d - 1) same(f.form, var(p, 1, 1, i, j) - var(p, 1, 1, i, j + 1) + (-one), f);
    } else {
      if (j + 1 <= d - 1) same(f.form, var(p, 0, 2, i, j) - var(p, 0, 2, i, j + 1) + (-one), f);
      same(f.form, var(p, 1, 2, i, d - j) - var(p, 1, 2, i, d - j + 1) + (-one), f);
    }
  }
  return H;
}

FormalMero zeta_kernel(const InducingPair& p, const AtomRegistry& reg, Scope scope) {
  LeviData levi;
  std::vector<AffineForm> lam_n, lam_np1;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const auto& b = p.blocks()[i];
    if (reg.atom(b.atom).rank != b.r) throw ValidationError("kernel: atom " + b.atom + " has the wrong rank");
    SpehDatum s{b.contragredient ? reg.dual(b.atom) : b.atom, 1, 0};
    (b.side == 0 ? levi.n_side : levi.np1_side).push_back(s);
    (b.side == 0 ? lam_n : lam_np1).push_back(AffineForm::variable(p.dim(), i));
  }
  auto norm = b_and_rs_normalizers(reg, scope, levi, lam_n, lam_np1);
  FormalMero K = norm.lhalf * norm.b.inverse();
  K.set_names(p.names());
  return K;
}

namespace {

std::vector<std::size_t> schedule(const InducingPair& p, bool second) {
  const auto forms = singular_forms(p);
  auto find = [&](int f, int i, int j) {
    for (std::size_t a = 0; a < forms.plus.size(); ++a)
      if (forms.plus[a].family == f && forms.plus[a].entry == i && forms.plus[a].j == j) return a;
    throw std::logic_error("schedule: missing form");
  };
  std::vector<std::size_t> order;
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= p.m(f); ++i) {
      const int d = p.family(f)[i - 1].d;
      // first schedule: family 1 descending in j, family 2 ascending; the second swaps
      bool descending = (f == 1) != second;
      for (int s = 1; s <= d - 1; ++s) order.push_back(find(f, i, descending ? d - s : s));
    }
  for (std::size_t a = 0; a < forms.minus.size(); ++a) order.push_back(forms.plus.size() + a);
  return order;
}

}  // namespace

std::vector<std::size_t> first_order(const InducingPair& p) { return schedule(p, false); }
std::vector<std::size_t> second_order(const InducingPair& p) { return schedule(p, true); }

PipelineRun run_residues(const InducingPair& p, const FormalMero& kernel, const std::vector<std::size_t>& order) {
  const auto forms = singular_forms(p);
  std::vector<LabeledForm> labeled = forms.plus;
  labeled.insert(labeled.end(), forms.minus.begin(), forms.minus.end());
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw ValidationError("residue pipeline: order is not a permutation of L_+ and L_-");
  if (sorted.size() != labeled.size()) throw ValidationError("residue pipeline: order has the wrong length");

  PipelineRun run;
  run.order = order;
  FormalMero F = kernel;
  for (std::size_t idx : order) {
    const auto& f = labeled[idx];
    Divisor d = divisor_along(F, f.form);
    run.steps.push_back({f.label(), f.form, d});
    if (d.order >= 2) {
      std::ostringstream os;
      os << "residue pipeline: pole of order " << d.order << " along " << f.label() << " = "
         << f.form.str(p.names());
      throw ValidationError(os.str());
    }
    F = residue(F, f.form);
  }
  run.result = F;
  auto map = a_pi_minus_nu(p);
  run.on_a_pi = F.pullback(map.A, map.b, p.pi_names());
  return run;
}

PipelineReport global_residue_pipeline(const InducingPair& p, const AtomRegistry& reg, std::uint64_t seed,
                                       int random_orders) {
  intersection_check(p);
  PipelineReport rep;
  const FormalMero K = zeta_kernel(p, reg);
  std::vector<std::vector<std::size_t>> orders = {first_order(p), second_order(p)};
  std::mt19937_64 rng(seed);
  for (int r = 0; r < random_orders; ++r) {
    std::vector<std::size_t> o(orders[0].size());
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
    orders.push_back(o);
  }
  for (const auto& o : orders) rep.runs.push_back(run_residues(p, K, o));
  rep.canonical = rep.runs.front().on_a_pi;
  rep.order_independent = true;
  for (const auto& r : rep.runs)
    if (!(r.on_a_pi == rep.canonical)) rep.order_independent = false;
  if (!rep.order_independent) throw AssertionFailure("residue pipeline: the result depends on the order");
  rep.cl = cl_quotient(p, reg);
  rep.matches_cl = !rep.canonical.is_zero() && equal_modulo_units(rep.canonical, rep.cl);
  if (!rep.matches_cl)
    throw AssertionFailure("residue pipeline: residue " + rep.canonical.str() +
                           " is not the L-quotient times units, " + rep.cl.str());
  return rep;
}

FormalMero cl_quotient(const InducingPair& p, const AtomRegistry& reg) {
  const std::size_t t = static_cast<std::size_t>(p.m(1) + p.m(2));
  FormalMero F(AffineSubspace(t), p.pi_names());
  auto coord = [&](int f, int i) { return AffineForm::variable(t, (f == 1 ? 0 : p.m(1)) + i - 1); };
  for (int i = 1; i <= p.m(1); ++i)
    for (int j = 1; j <= p.m(2); ++j) {
      const auto &a = p.family(1)[i - 1], &b = p.family(2)[j - 1];
      F.multiply(global_rs_atom(reg, a.atom, b.atom, coord(1, i) + coord(2, j) + frac(a.d - b.d + 1, 2)));
    }
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= p.m(f); ++i)
      for (int j = i + 1; j <= p.m(f); ++j) {
        const auto &a = p.family(f)[i - 1], &b = p.family(f)[j - 1];
        F.multiply(global_rs_atom(reg, a.atom, reg.dual(b.atom), coord(f, i) - coord(f, j) + frac(a.d + b.d, 2), -1));
      }
  return F;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Nonzero:
      return "nonzero";
    case Verdict::Zero:
      return "zero";
    default:
      return "undetermined";
  }
}

ClStar cl_star(const InducingPair& p, const AtomRegistry& reg) {
  ClStar out;
  out.value = FormalMero(AffineSubspace(0));
  for (int i = 1; i <= p.m(1); ++i)
    for (int j = 1; j <= p.m(2); ++j) {
      const auto &a = p.family(1)[i - 1], &b = p.family(2)[j - 1];
      ClFactor c;
      c.at = frac(a.d - b.d + 1, 2);
      FactorAtom atom = global_rs_atom(reg, a.atom, b.atom, AffineForm::constant_form(0, c.at));
      c.pair = atom.pair;
      c.pole = atom.polar && (c.at == 0 || c.at == 1);
      if (c.pole)
        out.value.multiply(FactorAtom::residue_symbol(atom.pair, c.at == 0 ? 0 : 1, 0));
      else
        out.value.multiply(atom);
      // Nonvanishing holds on Re s >= 1 and, by the functional equation, on Re s <= 0.
      c.verdict = (c.pole || c.at >= 1 || c.at <= 0) ? Verdict::Nonzero : Verdict::Undetermined;
      out.numerator.push_back(c);
    }
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= p.m(f); ++i)
      for (int j = i + 1; j <= p.m(f); ++j) {
        const auto &a = p.family(f)[i - 1], &b = p.family(f)[j - 1];
        ClFactor c;
        c.at = frac(a.d + b.d, 2);
        FactorAtom atom = global_rs_atom(reg, a.atom, reg.dual(b.atom), AffineForm::constant_form(0, c.at), -1);
        c.pair = atom.pair;
        c.pole = atom.polar && c.at == 1;
        c.verdict = c.pole ? Verdict::Zero : Verdict::Nonzero;
        out.value.multiply(atom);
        out.denominator.push_back(c);
      }
  out.verdict = Verdict::Nonzero;
  for (const auto* list : {&out.numerator, &out.denominator})
    for (const auto& c : *list) {
      if (c.verdict == Verdict::Zero) out.verdict = Verdict::Zero;
      if (c.verdict == Verdict::Undetermined && out.verdict == Verdict::Nonzero) out.verdict = Verdict::Undetermined;
    }
  return out;
}

std::vector<int> cycle_to_end(int m, int x, int E) {
  if (x < 1 || E > m || x > E) throw std::invalid_argument("cycle_to_end: bad positions");
  std::vector<int> perm(m);
  for (int q = 1; q <= m; ++q) perm[q - 1] = (q == x) ? E : (q > x && q <= E ? q - 1 : q);
  return perm;
}

namespace {

// (a * b)(q) = a(b(q)) on 1-based position maps
std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(b.size());
  for (std::size_t q = 0; q < b.size(); ++q) r[q] = a[b[q] - 1];
  return r;
}

std::vector<int> identity_perm(std::size_t m) {
  std::vector<int> r(m);
  std::iota(r.begin(), r.end(), 1);
  return r;
}

WeylElement as_weyl(const std::vector<int>& sizes, const std::vector<int>& perm) {
  std::vector<int> target;
  for (int x : perm) target.push_back(x - 1);
  return block_permutation(sizes, target);
}

BlockWeyl make_block_weyl(const InducingPair& p, std::vector<int> pn, std::vector<int> pnp1) {
  BlockWeyl w;
  w.w_n = as_weyl(p.pi_sizes(0), pn);
  w.w_np1 = as_weyl(p.pi_sizes(1), pnp1);
  w.perm_n = std::move(pn);
  w.perm_np1 = std::move(pnp1);
  return w;
}

// Sizes of the standard parabolic w.P for w permuting the blocks of P.
std::vector<int> image_sizes(const WeylElement& w, const std::vector<int>& sizes) {
  auto pos = block_positions(w, sizes);
  std::vector<int> out(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) out[pos[i]] = sizes[i];
  return out;
}

std::vector<int> cumulative_d(const InducingPair& p, int f) {
  // d(f, <= i) for i = 0..m_f
  std::vector<int> c = {0};
  for (const auto& e : p.family(f)) c.push_back(c.back() + e.d - 1);
  return c;
}

std::vector<int> reverse_speh(const InducingPair& p, int side) {
  std::vector<int> perm;
  int start = 1;
  for (int f = 1; f <= 2; ++f)
    for (int i = 1; i <= p.m(f); ++i) {
      const int len = p.speh_length(side, f, i);
      for (int j = 1; j <= len; ++j) perm.push_back(start + len - j);
      start += len;
    }
  return perm;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw AssertionFailure("residue_weyl_data: " + what);
}

}  // namespace

WeylData residue_weyl_data(const InducingPair& p) {
  const int D = p.D(), m1 = p.m(1), m2 = p.m(2);
  const int mn = static_cast<int>(p.side_count(0)), mnp1 = static_cast<int>(p.side_count(1));
  require(mn == D + m1 && mnp1 == D + m2, "block counts differ from D + m");
  const auto c1 = cumulative_d(p, 1), c2 = cumulative_d(p, 2);

  std::vector<int> w1n = identity_perm(mn), w1np1 = identity_perm(mnp1);
  std::vector<int> w2n = identity_perm(mn), w2np1 = identity_perm(mnp1);
  for (int i = 1; i <= m1; ++i) {
    w1n = compose(cycle_to_end(mn, c1[i - 1] + 1, D + m1), w1n);
    w2n = compose(cycle_to_end(mn, c1[i] + 1, D + m1), w2n);
  }
  for (int i = 1; i <= m2; ++i) {
    w1np1 = compose(cycle_to_end(mnp1, c1[m1] + c2[i] + 1, D + m2), w1np1);
    w2np1 = compose(cycle_to_end(mnp1, c1[m1] + c2[i - 1] + 1, D + m2), w2np1);
  }
  WeylData W;
  W.w1 = make_block_weyl(p, w1n, w1np1);
  W.w2 = make_block_weyl(p, w2n, w2np1);
  W.wstar_n = make_block_weyl(p, reverse_speh(p, 0), identity_perm(mnp1));
  W.wstar_np1 = make_block_weyl(p, identity_perm(mn), reverse_speh(p, 1));

  W.w1_star_n = W.w1.w_n;
  W.w1_star_np1 = W.w1.w_np1 * W.wstar_np1.w_np1;
  W.w2_star_n = W.w2.w_n * W.wstar_n.w_n;
  W.w2_star_np1 = W.w2.w_np1;

  const auto pin = p.pi_sizes(0), pinp1 = p.pi_sizes(1);
  W.q_pi_n = image_sizes(W.w1_star_n, pin);
  W.q_pi_np1 = image_sizes(W.w1_star_np1, pinp1);
  require(W.q_pi_n == image_sizes(W.w2_star_n, pin) && W.q_pi_np1 == image_sizes(W.w2_star_np1, pinp1),
          "w1 w*_{n+1}.P_pi differs from w2 w*_n.P_pi");

  // Standard Levi of Q_pi: remaining blocks, then the moved ones.
  std::vector<int> rest, corner_n, corner_np1;
  for (int f = 1; f <= 2; ++f)
    for (const auto& e : p.family(f))
      for (int j = 1; j < e.d; ++j) rest.push_back(e.r);
  for (const auto& e : p.family(1)) corner_n.push_back(e.r);
  for (const auto& e : p.family(2)) corner_np1.push_back(e.r);
  auto cat = [](std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  require(W.q_pi_n == cat(rest, corner_n) && W.q_pi_np1 == cat(rest, corner_np1), "unexpected Levi of Q_pi");

  std::vector<int> res_std = cat(rest, {p.k() + 1});
  W.p_res = from_pair(res_std, static_cast<int>(res_std.size()));
  require(W.p_res.is_standard(), "P_res is not standard");
  for (const auto& [w, side] : {std::pair{W.w1_star_n, 0}, std::pair{W.w2_star_n, 0}, std::pair{W.w1_star_np1, 1},
                                std::pair{W.w2_star_np1, 1}}) {
    const auto& q = side == 0 ? W.p_res.p_n : W.p_res.p_np1;
    require(in_W_P_semicolon_Q(w, side == 0 ? pin : pinp1, q.sizes()), "w* is not in W(P_pi; P_res)");
  }

  std::vector<int> plus_std, plus_pi_n, plus_pi_np1, q_plus_n, q_plus_np1;
  for (int f = 1; f <= 2; ++f)
    for (const auto& e : p.family(f))
      if (e.d > 1) plus_std.push_back((e.d - 1) * e.r);
  plus_std.push_back(p.k() + 1);
  W.p_plus = from_pair(plus_std, static_cast<int>(plus_std.size()));
  require(W.p_plus.is_standard(), "P_+ is not standard");
  require(rs_contains(W.p_plus, W.p_res), "P_res is not contained in P_+");

  for (int f = 1; f <= 2; ++f)
    for (const auto& e : p.family(f)) {
      if (e.d > 1) {
        plus_pi_n.push_back((e.d - 1) * e.r);
        plus_pi_np1.push_back((e.d - 1) * e.r);
      }
      (f == 1 ? plus_pi_n : plus_pi_np1).push_back(e.r);
    }
  W.p_plus_pi_n = plus_pi_n;
  W.p_plus_pi_np1 = plus_pi_np1;
  W.w_plus = make_block_weyl(p, w2n, w1np1);
  W.q_plus_pi_n = image_sizes(W.w_plus.w_n, plus_pi_n);
  W.q_plus_pi_np1 = image_sizes(W.w_plus.w_np1, plus_pi_np1);
  std::vector<int> rest_plus;
  for (int f = 1; f <= 2; ++f)
    for (const auto& e : p.family(f))
      if (e.d > 1) rest_plus.push_back((e.d - 1) * e.r);
  require(W.q_plus_pi_n == cat(rest_plus, corner_n) && W.q_plus_pi_np1 == cat(rest_plus, corner_np1),
          "unexpected Levi of Q_{+,pi}");
  for (int side = 0; side <= 1; ++side) {
    const WeylElement& w = side == 0 ? W.w_plus.w_n : W.w_plus.w_np1;
    auto P = BlockParabolic::standard(p.p_sizes(side));
    const auto& Pplus = side == 0 ? W.p_plus.p_n : W.p_plus.p_np1;
    require(is_double_coset_rep(w, P, Pplus), "w_+ is not in {}_{P_+}W_P");
    auto Pw = relative_parabolics(w, P, Pplus).first;
    require(Pw == BlockParabolic::standard(side == 0 ? plus_pi_n : plus_pi_np1), "P_{+,w_+} differs from P_{+,pi}");
    require(Pw.contains(BlockParabolic::standard(p.pi_sizes(side))), "P_pi is not inside P_{+,pi}");
  }
  return W;
}

namespace {

AffineForm monic(const AffineForm& f) {
  for (const auto& c : f.coeffs)
    if (c != 0) return f * Rational(1 / c);
  return f;
}

// Products of affine forms agree on H as polynomials: equal factor
// multisets up to scalars, checked also by exact random evaluation.
void check_product_identity(const AffineSubspace& H, const std::vector<AffineForm>& lhs,
                            const std::vector<AffineForm>& rhs, std::mt19937_64& rng, int points,
                            const std::string& what) {
  std::vector<AffineForm> a, b;
  for (const auto& f : lhs) a.push_back(monic(H.reduce(f)));
  for (const auto& f : rhs) b.push_back(monic(H.reduce(f)));
  for (const auto& f : a)
    if (f.linear_is_zero()) throw AssertionFailure(what + ": a factor is constant on H_+");
  for (const auto& f : b)
    if (f.linear_is_zero()) throw AssertionFailure(what + ": a factor is constant on H_+");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw AssertionFailure(what + ": factor multisets differ");
  auto [pt, dirs] = H.parametrization();
  std::uniform_int_distribution<int> dist(-40, 40);
  for (int k = 0; k < points; ++k) {
    Vec x = pt;
    for (const auto& d : dirs) x = add(x, scale(frac(dist(rng), 7), d));
    Rational l = 1, r = 1;
    for (const auto& f : lhs) l *= f.eval(x);
    for (const auto& f : rhs) r *= f.eval(x);
    if (l != r) throw AssertionFailure(what + ": values differ at a random point");
  }
}

}  // namespace

Sigma1Report sigma1_products_check(const InducingPair& p, std::uint64_t seed) {
  const auto forms = singular_forms(p);
  const AffineSubspace Hp = h_plus(p);
  const AffineSubspace H = intersection_check(p);
  const WeylData W = residue_weyl_data(p);
  std::mt19937_64 rng(seed);
  Sigma1Report rep;
  rep.random_points = 20;

  auto coord = [&](int side, int pos) {
    return AffineForm::variable(p.dim(), p.side_offset(side) + static_cast<std::size_t>(pos - 1));
  };
  auto classify = [&](RootPairing& r, const AffineForm& pairing, const std::string& what) {
    if (Hp.reduce(pairing).linear_is_zero())
      throw AssertionFailure(what + ": pairing is constant on H_+");
    AffineForm g = H.reduce(pairing);
    if (g.linear_is_zero()) {
      if (g.constant <= 0 || g.constant.get_den() != 1)
        throw AssertionFailure(what + ": pairing is constant but not a positive integer on H_+ cap H_-");
      r.value_on_intersection = g.constant;
    }
  };
  auto lambda_minus = [&](int f, int i, int j) {
    for (const auto& m : forms.minus)
      if (m.family == f && m.entry == i && m.j == j) return m.form;
    throw std::logic_error("missing Lambda_-");
  };
  std::vector<AffineForm> last_minus;
  for (int i = 1; i <= p.m(1); ++i) {
    const int d = p.family(1)[i - 1].d;
    if (d >= 2) last_minus.push_back(lambda_minus(1, i, d - 1));
  }

  // First assertion: roots made negative by w*_{pi,n+1}.
  {
    const auto& perm = W.wstar_np1.perm_np1;
    std::vector<AffineForm> lhs, rhs;
    for (int a = 1; a <= static_cast<int>(perm.size()); ++a)
      for (int b = a + 1; b <= static_cast<int>(perm.size()); ++b)
        if (perm[a - 1] > perm[b - 1]) {
          RootPairing r{1, a, b, std::nullopt};
          AffineForm pairing = coord(1, a) - coord(1, b);
          classify(r, pairing, "first identity");
          rep.first.push_back(r);
          if (r.value_on_intersection && *r.value_on_intersection == 1) {
            rep.sigma1.push_back(r);
            lhs.push_back(pairing + Rational(-1));
          }
        }
    lhs.insert(lhs.end(), last_minus.begin(), last_minus.end());
    for (const auto& m : forms.minus) rhs.push_back(m.form);
    check_product_identity(Hp, lhs, rhs, rng, rep.random_points, "first identity");
  }
  // Second assertion: roots made negative by w1, paired with w*_{pi,n+1} lambda.
  {
    std::vector<AffineForm> lhs;
    for (int side = 0; side <= 1; ++side) {
      const auto& perm = side == 0 ? W.w1.perm_n : W.w1.perm_np1;
      const auto& star = side == 0 ? W.wstar_np1.perm_n : W.wstar_np1.perm_np1;
      std::vector<int> inv(star.size());
      for (std::size_t q = 0; q < star.size(); ++q) inv[star[q] - 1] = static_cast<int>(q) + 1;
      for (int a = 1; a <= static_cast<int>(perm.size()); ++a)
        for (int b = a + 1; b <= static_cast<int>(perm.size()); ++b)
          if (perm[a - 1] > perm[b - 1]) {
            RootPairing r{side, a, b, std::nullopt};
            // (w lambda)_{w(q)} = lambda_q
            AffineForm pairing = coord(side, inv[a - 1]) - coord(side, inv[b - 1]);
            classify(r, pairing, "second identity");
            rep.second.push_back(r);
            if (r.value_on_intersection && *r.value_on_intersection == 1) {
              rep.sigma1_prime.push_back(r);
              lhs.push_back(pairing + Rational(-1));
            }
          }
    }
    check_product_identity(Hp, lhs, last_minus, rng, rep.random_points, "second identity");
  }
  return rep;
}

namespace {

std::string shape_atom(int r) { return r == 1 ? "1" : "s" + std::to_string(r); }

// Nondecreasing sequences of candidate indices with bounded weight.
void multisets(const std::vector<std::pair<int, int>>& cand, std::size_t from, int budget,
               std::vector<std::pair<int, int>>& cur, std::vector<std::vector<std::pair<int, int>>>& out) {
  out.push_back(cur);
  for (std::size_t c = from; c < cand.size(); ++c) {
    int w = cand[c].first * cand[c].second;
    if (w > budget) continue;
    cur.push_back(cand[c]);
    multisets(cand, c, budget - w, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<InducingPair> enumerate_pairs(int max_n) {
  std::vector<std::pair<int, int>> cand;
  for (int r = 1; r <= max_n + 1; ++r)
    for (int d = 1; r * d <= max_n + 1; ++d) cand.emplace_back(r, d);
  std::vector<std::vector<std::pair<int, int>>> fam;
  std::vector<std::pair<int, int>> cur;
  multisets(cand, 0, max_n + 1, cur, fam);
  std::vector<InducingPair> out;
  for (const auto& a : fam)
    for (const auto& b : fam) {
      int r1 = 0, r2 = 0, n = 0;
      for (auto [r, d] : a) r1 += r, n += r * d;
      for (auto [r, d] : b) r2 += r, n += r * (d - 1);
      if (r1 != r2 - 1 || n > max_n || n < 1) continue;
      std::vector<FamilyEntry> f1, f2;
      for (auto [r, d] : a) f1.push_back({r, d, shape_atom(r)});
      for (auto [r, d] : b) f2.push_back({r, d, shape_atom(r)});
      out.push_back(InducingPair::make(f1, f2));
    }
  return out;
}

AtomRegistry shape_registry(int max_rank) {
  AtomRegistry reg;
  reg.add_atom({"1", 1, true, true, "1"});
  reg.add_atom({"chi", 1, true, true, "chib"});
  reg.add_atom({"chib", 1, true, true, "chi"});
  for (int r = 2; r <= max_rank; ++r) reg.add_atom({shape_atom(r), r, true, true, shape_atom(r)});
  reg.set_match_set("1", "1", {Rational(0)});
  reg.set_match_set("chi", "chib", {Rational(0)});
  for (int r = 2; r <= max_rank; ++r) reg.set_match_set(shape_atom(r), shape_atom(r), {Rational(0)});
  reg.finalize();
  return reg;
}

}  // namespace rsp
