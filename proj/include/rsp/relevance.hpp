#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsp/lfactors.hpp"
#include "rsp/mero.hpp"
#include "rsp/parabolic.hpp"
#include "rsp/rs_parabolic.hpp"

namespace rsp {

struct FamilyEntry {
  int r = 1;
  int d = 1;
  std::string atom;
  bool operator==(const FamilyEntry& o) const { return r == o.r && d == o.d && atom == o.atom; }
};

// One GL_r block of P_pi. side 0 is GL_n, side 1 is GL_{n+1}; entry and j
// are 1-based, j counts the blocks of one Speh factor.
struct PiBlock {
  int side = 0;
  int family = 1;
  int entry = 1;
  int j = 1;
  int r = 1;
  std::string atom;           // atom of the family entry
  bool contragredient = false;  // the block carries atom^vee
};

class InducingPair {
 public:
  // Validates the two dimension identities; with a registry also checks
  // that every atom is known and has rank r.
  static InducingPair make(std::vector<FamilyEntry> family1, std::vector<FamilyEntry> family2,
                           const AtomRegistry* reg = nullptr);
  // {family1: [{r, d, atom}], family2: [...], n?, coordinates?, pi_coordinates?}
  static InducingPair from_json(const nlohmann::json& j, const AtomRegistry* reg = nullptr);
  nlohmann::json to_json() const;

  const std::vector<FamilyEntry>& family(int f) const { return f == 1 ? f1_ : f2_; }
  int m(int f) const { return static_cast<int>(family(f).size()); }
  int n() const { return n_; }
  int k() const { return k_; }
  // D = sum of (d - 1) over both families.
  int D() const;

  // Coordinates of a_{P_pi}: GL_n blocks first, then GL_{n+1} blocks, each
  // side listing family 1 entries before family 2 entries.
  std::size_t dim() const { return blocks_.size(); }
  const std::vector<PiBlock>& blocks() const { return blocks_; }
  std::size_t index(int side, int family, int entry, int j) const;
  std::size_t side_offset(int side) const { return side == 0 ? 0 : side_count(0); }
  std::size_t side_count(int side) const;
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& pi_names() const { return pi_names_; }

  // Number of P_pi blocks inside the Speh factor (family, entry) on a side.
  int speh_length(int side, int family, int entry) const;
  // Block sizes of P_pi and of P on one side (empty blocks omitted).
  std::vector<int> pi_sizes(int side) const;
  std::vector<int> p_sizes(int side) const;

  // The same pair with family entries permuted: entry i moves to slot perm[i].
  InducingPair permuted(const std::vector<int>& perm1, const std::vector<int>& perm2) const;

 private:
  std::vector<FamilyEntry> f1_, f2_;
  int n_ = 0, k_ = 0;
  std::vector<PiBlock> blocks_;
  std::vector<std::string> names_, pi_names_;
  std::map<std::tuple<int, int, int, int>, std::size_t> index_;
  void build(const AtomRegistry* reg);
};

// -nu_pi is the point where a_pi meets the singular locus; nu_pi is
// (2j - d - 1)/2 on the j-th block of a Speh factor of length d.
Vec nu_pi(const InducingPair& p);
// lambda in a_{P_pi} as A t + b for t in the coordinates (lambda(1), lambda(2))
// of a_pi, with b = -nu_pi.
struct AffineMap {
  Mat A;
  Vec b;
};
AffineMap a_pi_minus_nu(const InducingPair& p);

struct LabeledForm {
  int sign = 1;  // +1 for L_+, -1 for L_-
  int family = 1, entry = 1, j = 1;
  AffineForm form;
  std::string label() const;
  // "-(a+c+1/2)" for L_+ and "a+b-1/2" for L_-
  std::string display(const std::vector<std::string>& names) const;
};

struct SingularForms {
  std::vector<LabeledForm> plus, minus;
  // plus followed by minus
  std::vector<AffineForm> all() const;
};

SingularForms singular_forms(const InducingPair& p);
AffineSubspace h_plus(const InducingPair& p);
// Computes H_+ cap H_-, checks it against a_pi - nu_pi and checks the two
// alternative expressions of every Lambda_- on H_+. Throws AssertionFailure.
AffineSubspace intersection_check(const InducingPair& p);

// L(lambda + 1/2, sigma_n x sigma_{n+1}) / b(lambda, sigma) on a_{P_pi}.
FormalMero zeta_kernel(const InducingPair& p, const AtomRegistry& reg, Scope scope = Scope::Global);

// Application orders on L_+ (indices into SingularForms::plus), followed by
// L_- in its listed order, as indices into SingularForms::all().
std::vector<std::size_t> first_order(const InducingPair& p);
std::vector<std::size_t> second_order(const InducingPair& p);

struct ResidueStep {
  std::string label;
  AffineForm form;
  Divisor divisor;
};

struct PipelineRun {
  std::vector<std::size_t> order;
  std::vector<ResidueStep> steps;
  FormalMero result;  // on H_+ cap H_- inside a_{P_pi}
  FormalMero on_a_pi;  // pulled back to the coordinates of a_pi
};

// Iterated residue of an arbitrary kernel along the singular forms.
PipelineRun run_residues(const InducingPair& p, const FormalMero& kernel, const std::vector<std::size_t>& order);

struct PipelineReport {
  std::vector<PipelineRun> runs;
  FormalMero canonical;  // common result, pulled back to a_pi
  FormalMero cl;         // cl_quotient
  bool order_independent = false;
  bool matches_cl = false;
};

// Runs the two schedules and `random_orders` seeded random orders; throws
// AssertionFailure when two orders disagree or the result differs from the
// L-quotient modulo units.
PipelineReport global_residue_pipeline(const InducingPair& p, const AtomRegistry& reg, std::uint64_t seed,
                                       int random_orders = 3);

// The quotient of global L-functions on a_pi (coordinates pi_names()).
FormalMero cl_quotient(const InducingPair& p, const AtomRegistry& reg);

enum class Verdict { Nonzero, Zero, Undetermined };
std::string to_string(Verdict v);

struct ClFactor {
  std::string pair;  // "axb"
  Rational at;
  bool pole = false;
  Verdict verdict = Verdict::Nonzero;
};

struct ClStar {
  std::vector<ClFactor> numerator, denominator;
  FormalMero value;  // constants and residue symbols, on a point
  Verdict verdict = Verdict::Nonzero;
};

// Value at lambda = 0 with polar numerator factors replaced by residues.
ClStar cl_star(const InducingPair& p, const AtomRegistry& reg);

// Element of W(P_pi) for G = GL_n x GL_{n+1}: a block permutation per side
// (1-based positions) and the matching permutations of the indices.
struct BlockWeyl {
  std::vector<int> perm_n, perm_np1;
  WeylElement w_n, w_np1;
};

struct WeylData {
  BlockWeyl w1, w2, wstar_n, wstar_np1, w_plus;
  // w1 wstar_{n+1} and w2 wstar_n as elements of GL_n x GL_{n+1}
  WeylElement w1_star_n, w1_star_np1, w2_star_n, w2_star_np1;
  std::vector<int> q_pi_n, q_pi_np1;  // sizes of w1 wstar.P_pi
  RSParabolic p_res, p_plus;
  std::vector<int> p_plus_pi_n, p_plus_pi_np1;
  std::vector<int> q_plus_pi_n, q_plus_pi_np1;
};

// Position map x -> E, p -> p - 1 for x < p <= E (the cycle (x E E-1 ... x+1)).
std::vector<int> cycle_to_end(int m, int x, int E);
// Builds all Weyl and parabolic data of the residue computation and checks
// the relations between them. Throws AssertionFailure.
WeylData residue_weyl_data(const InducingPair& p);

struct RootPairing {
  int side = 0;
  int a = 0, b = 0;  // 1-based P_pi block positions, a < b
  std::optional<Rational> value_on_intersection;
};

struct Sigma1Report {
  std::vector<RootPairing> first, second;  // roots checked in each assertion
  std::vector<RootPairing> sigma1, sigma1_prime;
  int random_points = 0;
};

// Checks both product identities on H_+ by exact evaluation at random
// points and by comparing factor multisets. Throws AssertionFailure.
Sigma1Report sigma1_products_check(const InducingPair& p, std::uint64_t seed = 7);

// Pair shapes (with atoms "1" and "s<r>" for r >= 2) with n <= max_n.
std::vector<InducingPair> enumerate_pairs(int max_n);
// Registry with the trivial character and self-dual atoms s2 .. s<max_rank>.
AtomRegistry shape_registry(int max_rank);

}  // namespace rsp
