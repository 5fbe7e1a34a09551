#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsp/lfactors.hpp"
#include "rsp/mero.hpp"
#include "rsp/parabolic.hpp"
#include "rsp/relevance.hpp"
#include "rsp/rs_parabolic.hpp"

namespace rsp {

// ---------------------------------------------------------------- lattices

// A lattice Z^rank with simple roots given by an integral unimodular pairing
// matrix (row i holds <alpha_i, e_j>). The sublattice attached to a subset J
// of the roots is {a : <alpha_j, a> = 0 for j in J}; its own simple roots are
// the remaining alpha_i.
struct LatticeSpec {
  int rank = 0;
  std::vector<std::vector<long>> pairings;
  int rs_n = 0;  // > 0 when built by rs_standard(n)

  // Lambda_{P_0,H} for GL_n x GL_{n+1} in the coordinates H_1..H_n, with
  // alpha_i = e_i^* - e_{i+1}^* and e_{n+1}^* = 0.
  static LatticeSpec rs_standard(int n);
  // Throws ValidationError unless the matrix is square, integral and unimodular.
  void validate() const;

  std::vector<long> root_values(const std::vector<long>& a) const;
  std::vector<long> from_root_values(const std::vector<long>& y) const;
  // Composition of n+1 of the standard RS parabolic with the given vanishing
  // roots (only for rs_standard lattices).
  std::vector<int> composition(const std::vector<int>& vanishing) const;
};

using Thresholds = std::function<std::optional<long>(const std::vector<long>&)>;

struct LatticeCoset {
  std::vector<long> base;         // lattice coordinates
  std::vector<long> base_values;  // <alpha_i, base>
  std::vector<int> vanishing;     // 0-based roots vanishing on the sublattice
  long m_prime = 0;               // bound on the free roots
  long threshold = 0;             // M_a at the base point
  std::vector<int> q_std;         // composition, for rs_standard lattices

  bool contains_values(const std::vector<long>& y) const;
};

// Lambda[>= M] as a disjoint union of cosets base + Lambda_Q[>= m_prime] with
// m_prime >= M_base, following the box decomposition of the inductive proof.
std::vector<LatticeCoset> lattice_partition(const LatticeSpec& spec, long M, const Thresholds& thresholds);

struct PartitionCheck {
  long points = 0;
  long uncovered = 0;
  long overlaps = 0;
  long threshold_violations = 0;
  long strays = 0;  // cosets reaching below M
  bool ok() const { return uncovered == 0 && overlaps == 0 && threshold_violations == 0 && strays == 0; }
};

// Brute-force membership count over the box [M, M + side]^rank in root values.
PartitionCheck check_partition(const LatticeSpec& spec, long M, const Thresholds& thresholds,
                               const std::vector<LatticeCoset>& cosets, long side);

// -------------------------------------------------------- exact zeta_q values

enum class PointMode { QPower, Exponent };

// Coordinate values are q^{-lambda_i} in QPower mode and lambda_i in Exponent mode.
struct RationalFunctionPoint {
  Rational q = 2;
  PointMode mode = PointMode::QPower;
  Vec values;

  void validate() const;
  // q^{-lambda_i}; Exponent mode needs integral lambda_i.
  Vec powers() const;
};

// q^{-s} for an affine form with integral coefficients.
Rational q_power(const AffineForm& s, const RationalFunctionPoint& pt);
FormalMero zeta_q(const AffineForm& arg);
// (1 - q^{-s})^{-1}; throws ValidationError at a pole.
Rational zeta_q_value(const AffineForm& arg, const RationalFunctionPoint& pt);
// Exact value of a product of local zeta atoms and a rational prefactor.
Rational evaluate_exact(const FormalMero& F, const RationalFunctionPoint& pt);

// ------------------------------------------------ GL1 x GL2 unramified suite

// h_k(x, y) = (x^{k+1} - y^{k+1}) / (x - y), and (k + 1) x^k when x = y.
Rational h_k(int k, const Rational& x, const Rational& y);

struct SeriesCheck {
  int N = 0;               // truncation order
  Rational partial;        // sum_{k <= N} u^k h_k
  Rational tail;           // closed form of the remaining sum
  Rational closed;         // 1/((1 - ux)(1 - uy))
  bool identity = false;   // partial + tail == closed
  bool tail_small = false; // 0 <= tail < 1e-12
};

// Chooses N from the geometric tail bound; works for x = y as well.
SeriesCheck gl1gl2_series_check(const Rational& x, const Rational& y, const Rational& u);

struct Gl1Gl2Report {
  Rational q, x, y, u;
  SeriesCheck series;
  Rational lhs, rhs;             // the two sides of the partial-fraction identity
  bool partial_fractions = false;
  int random_points = 0;
  bool numerator_identity = false;  // cross-multiplied numerators agree
  bool line_regularity = false;     // residues along a + c + 1/2 = 0 agree on the relevant line
  std::uint64_t seed = 0;
};

// Point (x, y, u) = (q^{-b}, q^{-c}, q^{-(a+1/2)}). Throws ValidationError when
// x = y or the point sits on a pole.
Gl1Gl2Report unramified_gl1gl2_identity(const Rational& q, const Rational& x, const Rational& y, const Rational& u,
                                        std::uint64_t seed = 11, int random_points = 20);

// ---------------------------------------------------- support of F^Q_sigma

enum class Schedule { N, NPlus1 };  // L_n (second order) and L_{n+1} (first order)
std::string to_string(Schedule m);

struct RSWeyl {
  WeylElement w_n, w_np1;
  bool operator==(const RSWeyl& o) const { return w_n == o.w_n && w_np1 == o.w_np1; }
  bool operator<(const RSWeyl& o) const {
    return w_n != o.w_n ? w_n < o.w_n : w_np1 < o.w_np1;
  }
  std::string str() const;
};

// All standard RS parabolics of GL_n x GL_{n+1}.
std::vector<RSParabolic> standard_rs_parabolics(int n);
// w in {}_Q W_{P_pi} with P_pi inside P_{pi,w} on both sides.
std::vector<RSWeyl> support_domain(const InducingPair& p, const RSParabolic& Q);
// W_{pi,m}(Q); empty unless Q is inside P_res.
std::vector<RSWeyl> predicted_survivors(const InducingPair& p, const RSParabolic& Q, Schedule m);

// Central-character exponent per atom; duals get the negative, missing atoms 0.
using ChiMap = std::map<std::string, Rational>;

struct SupportTerm {
  RSParabolic Q;
  RSWeyl w;
  FormalMero F;     // on a_{P_pi}
  FormalMero rest;  // on H_+
  bool survives = false;
  bool predicted = false;
  bool regular_on_intersection = true;  // no pole of rest contains H_+ cap H_-
};

// F^Q_sigma(w, lambda) with nu_delta = 0, restricted along L_m.
FormalMero f_q(const InducingPair& p, const AtomRegistry& reg, const RSParabolic& Q, const RSWeyl& w,
               const ChiMap& chi = {});
SupportTerm f_q_support(const InducingPair& p, const AtomRegistry& reg, const RSParabolic& Q, const RSWeyl& w,
                        Schedule m, const ChiMap& chi = {});

struct SupportReport {
  Schedule m = Schedule::NPlus1;
  std::vector<SupportTerm> terms;
  int survivors = 0;
  int mismatches = 0;
  int singular = 0;  // survivors with a pole through H_+ cap H_-
};

SupportReport support_classification(const InducingPair& p, const AtomRegistry& reg, Schedule m,
                                     const ChiMap& chi = {});

struct WitnessTerm {
  RSParabolic Q;
  RSWeyl w, w_prime;
  std::vector<std::string> word;  // operators, the rightmost acts first
  std::string rest;
};

struct FactorizationWitness {
  std::vector<WitnessTerm> terms_n, terms_np1;
  bool prefix_ok = false;         // every term ends with N(w*_m, lambda)
  bool schedules_agree = false;   // same w' per Q for both schedules
};

// Throws AssertionFailure when a surviving term does not factor through w*_m.
FactorizationWitness local_factorization_witness(const InducingPair& p, const AtomRegistry& reg);

}  // namespace rsp
