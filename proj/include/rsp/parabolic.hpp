#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rsp {

// Indices are 1-based throughout: GL_m acts on {1, ..., m}.
using Block = std::vector<int>;

// Parabolic subgroup of GL_m containing the diagonal torus, described by
// its ordered Levi blocks. Block order gives the unipotent radical: a root
// (i, j) lies in the parabolic iff block(i) <= block(j).
class BlockParabolic {
 public:
  BlockParabolic() = default;
  BlockParabolic(int m, std::vector<Block> blocks);

  static BlockParabolic standard(const std::vector<int>& sizes);

  int ambient() const { return m_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  int block_of(int i) const { return owner_.at(i - 1); }
  std::vector<int> sizes() const;
  bool is_standard() const;

  bool contains_root(int i, int j) const { return block_of(i) <= block_of(j); }
  std::set<std::pair<int, int>> roots() const;
  // Root-set containment: other is a subgroup of *this.
  bool contains(const BlockParabolic& other) const;

  bool operator==(const BlockParabolic& o) const { return m_ == o.m_ && blocks_ == o.blocks_; }
  bool operator<(const BlockParabolic& o) const {
    return m_ != o.m_ ? m_ < o.m_ : blocks_ < o.blocks_;
  }
  std::string str() const;

 private:
  int m_ = 0;
  std::vector<Block> blocks_;
  std::vector<int> owner_;
};

class WeylElement {
 public:
  WeylElement() = default;
  explicit WeylElement(std::vector<int> images);
  static WeylElement identity(int m);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_.at(i - 1); }
  const std::vector<int>& images() const { return img_; }
  WeylElement inverse() const;
  // (a * b)(i) = a(b(i))
  WeylElement operator*(const WeylElement& b) const;
  bool is_identity() const;

  bool operator==(const WeylElement& o) const { return img_ == o.img_; }
  bool operator!=(const WeylElement& o) const { return img_ != o.img_; }
  bool operator<(const WeylElement& o) const { return img_ < o.img_; }
  std::string str() const;

 private:
  std::vector<int> img_;
};

// Direct sum: a acts on 1..a.size(), b on the following indices.
WeylElement direct_sum(const WeylElement& a, const WeylElement& b);
// Extends w on 1..k to 1..m by the identity.
WeylElement extend(const WeylElement& w, int m);

// w P w^{-1}: block B goes to w(B); the block order is kept.
BlockParabolic conjugate(const WeylElement& w, const BlockParabolic& P);

// Is w increasing on each block, i.e. the minimal representative of w W_P?
bool increasing_on_blocks(const WeylElement& w, const BlockParabolic& P);
// Is w in {}_Q W_P: minimal length in W_Q w W_P.
bool is_double_coset_rep(const WeylElement& w, const BlockParabolic& P, const BlockParabolic& Q);
// All w in {}_Q W_P, sorted.
std::vector<WeylElement> double_coset_reps(const BlockParabolic& P, const BlockParabolic& Q);
// Reference implementation filtering all of S_m; only for small m.
std::vector<WeylElement> double_coset_reps_bruteforce(const BlockParabolic& P, const BlockParabolic& Q);

// P_w = P cap w^{-1} Q w and Q_w = Q cap w P w^{-1}, as Levi block lists.
// Blocks of P_w are B cap w^{-1}(B') ordered by (B, B'); blocks of Q_w are
// B' cap w(B) ordered by (B', B).
std::pair<BlockParabolic, BlockParabolic> relative_parabolics(const WeylElement& w, const BlockParabolic& P,
                                                              const BlockParabolic& Q);

// For Q subset R and w2 in {}_Q W_P, returns (w1, w) with w in {}_R W_P and
// w1 in W(M_R) minimal for (Q cap M_R, R_w), so that w2 = w1 w.
std::pair<WeylElement, WeylElement> decompose_coset(const WeylElement& w2, const BlockParabolic& P,
                                                    const BlockParabolic& Q, const BlockParabolic& R);
bool check_decomposition(const WeylElement& w1, const WeylElement& w, const WeylElement& w2,
                         const BlockParabolic& P, const BlockParabolic& Q, const BlockParabolic& R);

// Longest element of W(M): reverses the order of the given cells inside
// every block. Cells partition each block into consecutive intervals.
WeylElement reverse_cells(int m, const std::vector<std::vector<Block>>& cells_per_block);
WeylElement longest_in_levi(const BlockParabolic& P);

// For a standard composition with block sizes `sizes`, the permutation that
// moves block p to position target[p] (0-based) keeping internal order.
WeylElement block_permutation(const std::vector<int>& sizes, const std::vector<int>& target);
// Longest element of W(Q) modulo W(M_Q): reverses the block order.
WeylElement block_reversal(const std::vector<int>& sizes);

std::vector<WeylElement> all_permutations(int m);

}  // namespace rsp
