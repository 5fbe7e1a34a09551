#include "rsp/lfactors.hpp"

#include <algorithm>
#include <numeric>

namespace rsp {

namespace {

const std::string kField = "q";

std::vector<Rational> sorted_unique(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Rational> negated(const std::vector<Rational>& v) {
  std::vector<Rational> r;
  for (const auto& x : v) r.push_back(-x);
  return sorted_unique(r);
}

}  // namespace

AtomRegistry AtomRegistry::trivial() {
  AtomRegistry r;
  r.add_atom({"1", 1, true, true, "1"});
  r.set_match_set("1", "1", {Rational(0)});
  r.finalize();
  return r;
}

void AtomRegistry::add_atom(const CuspidalAtom& a) {
  if (a.id.empty()) throw ValidationError("registry: empty atom id");
  if (a.rank < 1) throw ValidationError("registry: atom " + a.id + " has rank < 1");
  if (atoms_.count(a.id)) throw ValidationError("registry: duplicate atom " + a.id);
  CuspidalAtom b = a;
  if (b.dual.empty()) b.dual = b.id;
  atoms_[b.id] = b;
}

void AtomRegistry::set_match_set(const std::string& a, const std::string& b, std::vector<Rational> ts) {
  auto key = std::make_pair(a, b);
  ts = sorted_unique(std::move(ts));
  auto it = match_.find(key);
  if (it != match_.end() && it->second != ts)
    throw ValidationError("registry: conflicting match sets for (" + a + ", " + b + ")");
  match_[key] = ts;
}

void AtomRegistry::finalize() {
  for (const auto& [id, a] : atoms_) {
    if (!atoms_.count(a.dual)) throw ValidationError("registry: dual of " + id + " is not a registered atom");
    const auto& d = atoms_.at(a.dual);
    if (d.dual != id) throw ValidationError("registry: duality is not symmetric at " + id);
    if (d.rank != a.rank) throw ValidationError("registry: " + id + " and its dual have different ranks");
  }
  if (atoms_.count("1") && atoms_.at("1").local) {
    const auto& one = atoms_.at("1");
    if (one.rank != 1 || one.dual != "1") throw ValidationError("registry: atom 1 must be the trivial character");
    set_match_set("1", "1", {Rational(0)});
  }
  // Close under (a, b) -> (b, a) and (a, b) -> (a^vee, b^vee) with t -> -t.
  bool changed = true;
  while (changed) {
    changed = false;
    auto snapshot = match_;
    for (const auto& [key, ts] : snapshot) {
      const auto& [a, b] = key;
      if (!atoms_.count(a) || !atoms_.count(b)) throw ValidationError("registry: match set for unknown atoms");
      if (!ts.empty() && atoms_.at(a).rank != atoms_.at(b).rank)
        throw ValidationError("registry: nonempty match set between atoms of different rank");
      std::vector<std::pair<std::pair<std::string, std::string>, std::vector<Rational>>> implied = {
          {{b, a}, ts}, {{dual(a), dual(b)}, negated(ts)}};
      for (auto& [k, v] : implied) {
        auto it = match_.find(k);
        if (it == match_.end()) {
          match_[k] = v;
          changed = true;
        } else if (it->second != v) {
          throw ValidationError("registry: match sets for (" + k.first + ", " + k.second +
                                ") contradict symmetry or duality");
        }
      }
    }
  }
}

const CuspidalAtom& AtomRegistry::atom(const std::string& id) const {
  auto it = atoms_.find(id);
  if (it == atoms_.end()) throw ValidationError("registry: unknown atom " + id);
  return it->second;
}

const std::vector<Rational>& AtomRegistry::match_set(const std::string& a, const std::string& b) const {
  static const std::vector<Rational> empty;
  atom(a);
  atom(b);
  auto it = match_.find({a, b});
  return it == match_.end() ? empty : it->second;
}

std::vector<std::string> AtomRegistry::ids() const {
  std::vector<std::string> r;
  for (const auto& [id, a] : atoms_) r.push_back(id);
  return r;
}

AtomRegistry AtomRegistry::from_json(const nlohmann::json& j) {
  AtomRegistry r;
  if (!j.contains("atoms") || !j["atoms"].is_array()) throw ValidationError("registry: missing atoms array");
  std::map<std::string, std::string> duals;
  if (j.contains("dual_pairs"))
    for (const auto& p : j["dual_pairs"]) {
      if (!p.is_array() || p.size() != 2) throw ValidationError("registry: dual_pairs entries are [a, b]");
      std::string a = p[0], b = p[1];
      for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        auto it = duals.find(x);
        if (it != duals.end() && it->second != y) throw ValidationError("registry: " + x + " has two duals");
        duals[x] = y;
      }
    }
  for (const auto& a : j["atoms"]) {
    CuspidalAtom c;
    c.id = a.at("id").get<std::string>();
    c.rank = a.value("rank", 1);
    std::string scope = a.value("scope", "global");
    if (scope != "global" && scope != "local" && scope != "both")
      throw ValidationError("registry: scope must be global, local or both");
    c.global = scope != "local";
    c.local = scope != "global";
    c.dual = a.value("dual", "");
    if (duals.count(c.id)) {
      if (!c.dual.empty() && c.dual != duals[c.id]) throw ValidationError("registry: inconsistent dual of " + c.id);
      c.dual = duals[c.id];
    }
    r.add_atom(c);
  }
  if (j.contains("match_sets"))
    for (const auto& m : j["match_sets"]) {
      const auto& p = m.at("pair");
      std::vector<Rational> ts;
      for (const auto& t : m.at("t")) ts.push_back(parse_rational(t.is_string() ? t.get<std::string>() : t.dump()));
      r.set_match_set(p.at(0).get<std::string>(), p.at(1).get<std::string>(), ts);
    }
  r.finalize();
  return r;
}

nlohmann::json AtomRegistry::to_json() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& [id, a] : atoms_)
    j["atoms"].push_back({{"id", id},
                          {"rank", a.rank},
                          {"scope", a.global && a.local ? "both" : (a.global ? "global" : "local")},
                          {"dual", a.dual}});
  j["match_sets"] = nlohmann::json::array();
  for (const auto& [key, ts] : match_) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& x : ts) t.push_back(to_string(x));
    j["match_sets"].push_back({{"pair", {key.first, key.second}}, {"t", t}});
  }
  return j;
}

std::string SpehDatum::label() const {
  std::string s = atom;
  if (d != 1) s += "[" + std::to_string(d) + "]";
  if (twist != 0) s += "|" + to_string(twist) + "|";
  return s;
}

FactorAtom global_rs_atom(const AtomRegistry& reg, const std::string& a, const std::string& b,
                          const AffineForm& arg, int exponent) {
  if (!reg.atom(a).global || !reg.atom(b).global) throw ValidationError("global L-function of a local atom");
  auto label = [](std::string x, std::string y) {
    if (y < x) std::swap(x, y);
    return x + "x" + y;
  };
  return FactorAtom::global(label(a, b), label(reg.dual(a), reg.dual(b)), reg.dual(a) == b, arg, exponent);
}

FormalMero speh_rs_L(const AtomRegistry& reg, const SpehDatum& t1, const SpehDatum& t2, const AffineForm& s) {
  if (t1.d < 0 || t2.d < 0) throw ValidationError("speh_rs_L: negative multiplicity");
  FormalMero F{AffineSubspace(s.dim())};
  const AffineForm base = s + (t1.twist + t2.twist);
  for (int i = 1; i <= t1.d; ++i)
    for (int j = 1; j <= t2.d; ++j)
      F.multiply(global_rs_atom(reg, t1.atom, t2.atom, base + (frac(t1.d - 2 * i + 1, 2) + frac(t2.d - 2 * j + 1, 2))));
  return F;
}

FormalMero supercuspidal_L_local(const AtomRegistry& reg, const std::string& a, const std::string& b,
                                 const AffineForm& s) {
  if (!reg.atom(a).local || !reg.atom(b).local) throw ValidationError("local L-function of a global atom");
  FormalMero F{AffineSubspace(s.dim())};
  for (const auto& t : reg.match_set(a, b)) F.multiply(FactorAtom::local_zeta(kField, s + Rational(-t)));
  return F;
}

FormalMero steinberg_rs_L_local(const AtomRegistry& reg, int d1, int d2, const std::string& a, const std::string& b,
                                const AffineForm& s) {
  if (d1 < 1 || d2 < 1) throw ValidationError("steinberg_rs_L_local: multiplicities must be positive");
  std::string x = a, y = b;
  if (d2 > d1) {
    std::swap(d1, d2);
    std::swap(x, y);
  }
  FormalMero F{AffineSubspace(s.dim())};
  for (int i = 1; i <= d2; ++i)
    F = F * supercuspidal_L_local(reg, x, y, s + (frac(d1 - 1, 2) + frac(d2 - 2 * i + 1, 2)));
  return F;
}

FormalMero rs_L(const AtomRegistry& reg, Scope scope, const SpehDatum& x, const SpehDatum& y, const AffineForm& s) {
  if (scope == Scope::Global) return speh_rs_L(reg, x, y, s);
  if (x.d == 0 || y.d == 0) return FormalMero{AffineSubspace(s.dim())};
  return steinberg_rs_L_local(reg, x.d, y.d, x.atom, y.atom, s + (x.twist + y.twist));
}

Normalizers b_and_rs_normalizers(const AtomRegistry& reg, Scope scope, const LeviData& levi,
                                 const std::vector<AffineForm>& lam_n, const std::vector<AffineForm>& lam_np1) {
  if (lam_n.size() != levi.n_side.size() || lam_np1.size() != levi.np1_side.size())
    throw ValidationError("normalizers: one coordinate per block is required");
  std::size_t dim = !lam_n.empty() ? lam_n[0].dim() : (!lam_np1.empty() ? lam_np1[0].dim() : 0);
  Normalizers out{FormalMero{AffineSubspace(dim)}, FormalMero{AffineSubspace(dim)}};
  auto side = [&](const std::vector<SpehDatum>& blocks, const std::vector<AffineForm>& lam) {
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = i + 1; j < blocks.size(); ++j)
        out.b = out.b * rs_L(reg, scope, blocks[i], blocks[j].dual(reg), lam[i] - lam[j] + Rational(1));
  };
  side(levi.n_side, lam_n);
  side(levi.np1_side, lam_np1);
  for (std::size_t i = 0; i < levi.n_side.size(); ++i)
    for (std::size_t j = 0; j < levi.np1_side.size(); ++j)
      out.lhalf = out.lhalf * rs_L(reg, scope, levi.n_side[i], levi.np1_side[j], lam_n[i] + lam_np1[j] + frac(1, 2));
  return out;
}

FormalMero epsilon_unit(const AtomRegistry& reg, const SpehDatum& x, const SpehDatum& y, const AffineForm& s) {
  FormalMero F{AffineSubspace(s.dim())};
  F.multiply(FactorAtom::epsilon(x.label() + "x" + y.dual(reg).label(), s));
  return F;
}

FormalMero n_factor(const AtomRegistry& reg, const SpehDatum& x, const SpehDatum& y, const AffineForm& s) {
  const SpehDatum yv = y.dual(reg);
  return rs_L(reg, Scope::Local, x, yv, s) * rs_L(reg, Scope::Local, x, yv, s + Rational(1)).inverse() *
         epsilon_unit(reg, x, y, s).inverse();
}

FormalMero gamma_factor(const AtomRegistry& reg, const SpehDatum& x, const SpehDatum& y, const AffineForm& s) {
  const SpehDatum yv = y.dual(reg);
  return epsilon_unit(reg, x, y, s) * rs_L(reg, Scope::Local, x.dual(reg), y, -s + Rational(1)) *
         rs_L(reg, Scope::Local, x, yv, s).inverse();
}

std::size_t BlockData::ambient() const {
  if (lambda.empty()) throw ValidationError("block data without coordinates");
  return lambda[0].dim();
}

std::vector<int> block_positions(const WeylElement& w, const std::vector<int>& sizes) {
  const int m = std::accumulate(sizes.begin(), sizes.end(), 0);
  if (w.size() != m) throw ValidationError("block_positions: size mismatch");
  BlockParabolic P = BlockParabolic::standard(sizes);
  if (!increasing_on_blocks(w, P)) throw ValidationError("block_positions: w is not increasing on the blocks");
  std::vector<int> first;
  for (const auto& b : P.blocks()) first.push_back(w(b.front()));
  std::vector<int> order(first.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return first[a] < first[b]; });
  std::vector<int> pos(first.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
  // The image must again be a standard block decomposition.
  std::vector<int> new_sizes(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) new_sizes[pos[i]] = sizes[i];
  int start = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (first[order[k]] != start) throw ValidationError("block_positions: w does not permute whole blocks");
    start += new_sizes[k];
  }
  return pos;
}

BlockData act(const WeylElement& w, const BlockData& data) {
  auto pos = block_positions(w, data.sizes);
  BlockData r = data;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    r.sizes[pos[i]] = data.sizes[i];
    r.sigma[pos[i]] = data.sigma[i];
    r.lambda[pos[i]] = data.lambda[i];
  }
  return r;
}

BlockData dual_data(const AtomRegistry& reg, const BlockData& data, bool negate_lambda) {
  BlockData r = data;
  for (auto& s : r.sigma) s = s.dual(reg);
  if (negate_lambda)
    for (auto& l : r.lambda) l = -l;
  return r;
}

namespace {

template <class Factor>
FormalMero assemble(const AtomRegistry& reg, const BlockData& data, const WeylElement& w, Factor f) {
  auto pos = block_positions(w, data.sizes);
  FormalMero F{AffineSubspace(data.ambient())};
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      if (pos[i] > pos[j]) F = F * f(reg, data.sigma[i], data.sigma[j], data.lambda[i] - data.lambda[j]);
  return F;
}

// Block index of Q containing each block of a standard decomposition.
std::vector<int> owners(const std::vector<int>& sizes, const std::vector<int>& q_sizes) {
  std::vector<int> q_end;
  int acc = 0;
  for (int s : q_sizes) q_end.push_back(acc += s);
  std::vector<int> own;
  int start = 0;
  for (int s : sizes) {
    int q = 0;
    while (q_end[q] <= start) ++q;
    if (start + s > q_end[q]) throw ValidationError("block straddles two blocks of Q");
    own.push_back(q);
    start += s;
  }
  return own;
}

void check_data(const BlockData& data, const std::vector<int>& q_sizes) {
  if (data.sigma.size() != data.sizes.size() || data.lambda.size() != data.sizes.size())
    throw ValidationError("block data: sizes, sigma and lambda must have equal length");
  if (std::accumulate(data.sizes.begin(), data.sizes.end(), 0) != std::accumulate(q_sizes.begin(), q_sizes.end(), 0))
    throw ValidationError("c coefficient: P and Q live in different groups");
}

}  // namespace

FormalMero n_assembled(const AtomRegistry& reg, const BlockData& data, const WeylElement& w) {
  return assemble(reg, data, w, n_factor);
}

FormalMero gamma_assembled(const AtomRegistry& reg, const BlockData& data, const WeylElement& w) {
  return assemble(reg, data, w, gamma_factor);
}

bool in_W_P_semicolon_Q(const WeylElement& w, const std::vector<int>& p_sizes, const std::vector<int>& q_sizes) {
  auto P = BlockParabolic::standard(p_sizes);
  auto Q = BlockParabolic::standard(q_sizes);
  if (w.size() != P.ambient() || P.ambient() != Q.ambient()) return false;
  if (!is_double_coset_rep(w, P, Q)) return false;
  for (const auto& b : P.blocks())
    for (int i : b)
      if (Q.block_of(w(i)) != Q.block_of(w(b.front()))) return false;
  return true;
}

FormalMero c_coefficient(const AtomRegistry& reg, const BlockData& data, const std::vector<int>& q_sizes,
                         const WeylElement& w) {
  check_data(data, q_sizes);
  if (!in_W_P_semicolon_Q(w, data.sizes, q_sizes)) throw ValidationError("c coefficient: w is not in W(P;Q)");
  BlockData moved = dual_data(reg, act(w, data), true);
  WeylElement wQ = block_reversal(q_sizes);
  return n_assembled(reg, data, w) * gamma_assembled(reg, data, w) * gamma_assembled(reg, moved, wQ).inverse();
}

FormalMero c_coefficient_explicit(const AtomRegistry& reg, const BlockData& data, const std::vector<int>& q_sizes,
                                  const WeylElement& w) {
  check_data(data, q_sizes);
  if (!in_W_P_semicolon_Q(w, data.sizes, q_sizes)) throw ValidationError("c coefficient: w is not in W(P;Q)");
  const std::size_t k = data.sizes.size();
  FormalMero F{AffineSubspace(data.ambient())};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      F = F * rs_L(reg, Scope::Local, data.sigma[i], data.sigma[j].dual(reg),
                   data.lambda[i] - data.lambda[j] + Rational(1))
                  .inverse();
  BlockData moved = act(w, data);
  auto own = owners(moved.sizes, q_sizes);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (own[a] == own[b])
        F = F * n_factor(reg, moved.sigma[a], moved.sigma[b], moved.lambda[a] - moved.lambda[b]).inverse();
  BlockData mu = act(block_reversal(q_sizes), moved);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = c + 1; d < k; ++d) {
      AffineForm s = mu.lambda[c] - mu.lambda[d];
      F = F * rs_L(reg, Scope::Local, mu.sigma[c], mu.sigma[d].dual(reg), s) *
          epsilon_unit(reg, mu.sigma[c], mu.sigma[d], s).inverse();
    }
  return F;
}

}  // namespace rsp
