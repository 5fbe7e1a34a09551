#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsp/mero.hpp"
#include "rsp/parabolic.hpp"

namespace rsp {

enum class Scope { Global, Local };

struct CuspidalAtom {
  std::string id;
  int rank = 1;
  bool global = true;
  bool local = false;
  std::string dual;  // id of the contragredient atom
};

// Cuspidal atoms with their duality relation and, for local atoms, the sets
// {t : sigma_{1,t} ~ sigma_2^vee} that govern L(s, sigma_1 x sigma_2).
class AtomRegistry {
 public:
  AtomRegistry() = default;
  // Trivial character "1" of GL_1, global and local, self-dual, match set {0}.
  static AtomRegistry trivial();
  static AtomRegistry from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  void add_atom(const CuspidalAtom& a);
  // Records the match set of (a, b); symmetric and dual closures are
  // derived by finalize().
  void set_match_set(const std::string& a, const std::string& b, std::vector<Rational> ts);
  void finalize();

  bool has(const std::string& id) const { return atoms_.count(id) > 0; }
  const CuspidalAtom& atom(const std::string& id) const;
  const std::string& dual(const std::string& id) const { return atom(id).dual; }
  const std::vector<Rational>& match_set(const std::string& a, const std::string& b) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, CuspidalAtom> atoms_;
  std::map<std::pair<std::string, std::string>, std::vector<Rational>> match_;
};

// Speh(sigma, d) globally, St(sigma, d) locally, twisted by |det|^twist.
struct SpehDatum {
  std::string atom;
  int d = 1;
  Rational twist = 0;
  SpehDatum dual(const AtomRegistry& reg) const { return {reg.dual(atom), d, -twist}; }
  std::string label() const;
};

// Global atom L(arg, a x b); the pair label is unordered.
FactorAtom global_rs_atom(const AtomRegistry& reg, const std::string& a, const std::string& b,
                          const AffineForm& arg, int exponent = 1);
FormalMero speh_rs_L(const AtomRegistry& reg, const SpehDatum& t1, const SpehDatum& t2, const AffineForm& s);
FormalMero supercuspidal_L_local(const AtomRegistry& reg, const std::string& a, const std::string& b,
                                 const AffineForm& s);
FormalMero steinberg_rs_L_local(const AtomRegistry& reg, int d1, int d2, const std::string& a,
                                const std::string& b, const AffineForm& s);
// L(s, x x y) in the given scope, twists included.
FormalMero rs_L(const AtomRegistry& reg, Scope scope, const SpehDatum& x, const SpehDatum& y,
                const AffineForm& s);

struct LeviData {
  std::vector<SpehDatum> n_side;
  std::vector<SpehDatum> np1_side;
};

struct Normalizers {
  FormalMero b;
  FormalMero lhalf;
};

// b(lambda) and L(lambda + 1/2); lam_n / lam_np1 give the coordinate of each
// block as an affine form on the ambient space.
Normalizers b_and_rs_normalizers(const AtomRegistry& reg, Scope scope, const LeviData& levi,
                                 const std::vector<AffineForm>& lam_n, const std::vector<AffineForm>& lam_np1);

// Local n and gamma for tau = x x y^vee.
FormalMero epsilon_unit(const AtomRegistry& reg, const SpehDatum& x, const SpehDatum& y, const AffineForm& s);
FormalMero n_factor(const AtomRegistry& reg, const SpehDatum& x, const SpehDatum& y, const AffineForm& s);
FormalMero gamma_factor(const AtomRegistry& reg, const SpehDatum& x, const SpehDatum& y, const AffineForm& s);

// Local data on the blocks of a standard parabolic.
struct BlockData {
  std::vector<int> sizes;
  std::vector<SpehDatum> sigma;
  std::vector<AffineForm> lambda;
  std::size_t ambient() const;
};

// Position of each block after w (0-based); w must be increasing on blocks.
std::vector<int> block_positions(const WeylElement& w, const std::vector<int>& sizes);
// Data transported by w: (w sigma)_{pos(i)} = sigma_i, (w lambda)_{pos(i)} = lambda_i.
BlockData act(const WeylElement& w, const BlockData& data);
BlockData dual_data(const AtomRegistry& reg, const BlockData& data, bool negate_lambda);

FormalMero n_assembled(const AtomRegistry& reg, const BlockData& data, const WeylElement& w);
FormalMero gamma_assembled(const AtomRegistry& reg, const BlockData& data, const WeylElement& w);

// w in W(P;Q): w in {}_Q W_P and each block of P lands in one block of Q.
bool in_W_P_semicolon_Q(const WeylElement& w, const std::vector<int>& p_sizes, const std::vector<int>& q_sizes);
// c = n(w) gamma(w) gamma_{w sigma^vee}(w_Q, -w lambda)^{-1}.
FormalMero c_coefficient(const AtomRegistry& reg, const BlockData& data, const std::vector<int>& q_sizes,
                         const WeylElement& w);
// The same coefficient written directly with L-factors:
// b^{-1} n^Q(w^Q_{Q_w}, w lambda)^{-1} prod_{c<d} L(mu_c - mu_d, rho_c x rho_d^vee) / eps,
// mu = w_Q w lambda, rho = w_Q w sigma.
FormalMero c_coefficient_explicit(const AtomRegistry& reg, const BlockData& data, const std::vector<int>& q_sizes,
                                  const WeylElement& w);

}  // namespace rsp
