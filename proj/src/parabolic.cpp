#include "rsp/parabolic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "rsp/rational.hpp"

namespace rsp {

BlockParabolic::BlockParabolic(int m, std::vector<Block> blocks) : m_(m), blocks_(std::move(blocks)) {
  owner_.assign(m, -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw ValidationError("empty Levi block");
    std::sort(blocks_[b].begin(), blocks_[b].end());
    for (int i : blocks_[b]) {
      if (i < 1 || i > m) throw ValidationError("index out of range in Levi block");
      if (owner_[i - 1] != -1) throw ValidationError("Levi blocks overlap");
      owner_[i - 1] = static_cast<int>(b);
    }
  }
  for (int o : owner_)
    if (o == -1) throw ValidationError("Levi blocks do not cover the index set");
}

BlockParabolic BlockParabolic::standard(const std::vector<int>& sizes) {
  std::vector<Block> blocks;
  int next = 1;
  for (int s : sizes) {
    if (s <= 0) throw ValidationError("composition parts must be positive");
    Block b(s);
    std::iota(b.begin(), b.end(), next);
    next += s;
    blocks.push_back(std::move(b));
  }
  return BlockParabolic(next - 1, std::move(blocks));
}

std::vector<int> BlockParabolic::sizes() const {
  std::vector<int> s;
  for (const auto& b : blocks_) s.push_back(static_cast<int>(b.size()));
  return s;
}

bool BlockParabolic::is_standard() const { return *this == standard(sizes()); }

std::set<std::pair<int, int>> BlockParabolic::roots() const {
  std::set<std::pair<int, int>> r;
  for (int i = 1; i <= m_; ++i)
    for (int j = 1; j <= m_; ++j)
      if (i != j && contains_root(i, j)) r.emplace(i, j);
  return r;
}

bool BlockParabolic::contains(const BlockParabolic& other) const {
  if (other.m_ != m_) return false;
  for (int i = 1; i <= m_; ++i)
    for (int j = 1; j <= m_; ++j)
      if (i != j && other.contains_root(i, j) && !contains_root(i, j)) return false;
  return true;
}

std::string BlockParabolic::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) os << "|";
    for (std::size_t k = 0; k < blocks_[b].size(); ++k) os << (k ? "," : "") << blocks_[b][k];
  }
  os << "]";
  return os.str();
}

WeylElement::WeylElement(std::vector<int> images) : img_(std::move(images)) {
  std::vector<int> sorted = img_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) + 1) throw ValidationError("not a permutation");
}

WeylElement WeylElement::identity(int m) {
  std::vector<int> img(m);
  std::iota(img.begin(), img.end(), 1);
  return WeylElement(std::move(img));
}

WeylElement WeylElement::inverse() const {
  std::vector<int> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i] - 1] = static_cast<int>(i) + 1;
  return WeylElement(std::move(inv));
}

WeylElement WeylElement::operator*(const WeylElement& b) const {
  if (b.size() != size()) throw std::invalid_argument("Weyl composition: size mismatch");
  std::vector<int> r(img_.size());
  for (int i = 1; i <= size(); ++i) r[i - 1] = (*this)(b(i));
  return WeylElement(std::move(r));
}

bool WeylElement::is_identity() const { return *this == identity(size()); }

std::string WeylElement::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < img_.size(); ++i) os << (i ? " " : "") << img_[i];
  os << ")";
  return os.str();
}

WeylElement direct_sum(const WeylElement& a, const WeylElement& b) {
  std::vector<int> img = a.images();
  for (int x : b.images()) img.push_back(x + a.size());
  return WeylElement(std::move(img));
}

WeylElement extend(const WeylElement& w, int m) {
  if (w.size() > m) throw std::invalid_argument("extend: element too large");
  return direct_sum(w, WeylElement::identity(m - w.size()));
}

BlockParabolic conjugate(const WeylElement& w, const BlockParabolic& P) {
  if (w.size() != P.ambient()) throw std::invalid_argument("conjugate: size mismatch");
  std::vector<Block> blocks;
  for (const auto& b : P.blocks()) {
    Block img;
    for (int i : b) img.push_back(w(i));
    blocks.push_back(std::move(img));
  }
  return BlockParabolic(P.ambient(), std::move(blocks));
}

bool increasing_on_blocks(const WeylElement& w, const BlockParabolic& P) {
  for (const auto& b : P.blocks())
    for (std::size_t k = 1; k < b.size(); ++k)
      if (w(b[k - 1]) > w(b[k])) return false;
  return true;
}

bool is_double_coset_rep(const WeylElement& w, const BlockParabolic& P, const BlockParabolic& Q) {
  return increasing_on_blocks(w, P) && increasing_on_blocks(w.inverse(), Q);
}

std::vector<WeylElement> all_permutations(int m) {
  std::vector<int> img(m);
  std::iota(img.begin(), img.end(), 1);
  std::vector<WeylElement> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::vector<WeylElement> double_coset_reps_bruteforce(const BlockParabolic& P, const BlockParabolic& Q) {
  if (P.ambient() > 9) throw std::invalid_argument("brute force limited to m <= 9");
  std::vector<WeylElement> out;
  for (auto& w : all_permutations(P.ambient()))
    if (is_double_coset_rep(w, P, Q)) out.push_back(w);
  return out;
}

std::vector<WeylElement> double_coset_reps(const BlockParabolic& P, const BlockParabolic& Q) {
  if (P.ambient() != Q.ambient()) throw std::invalid_argument("double_coset_reps: size mismatch");
  if (!P.is_standard() || !Q.is_standard()) return double_coset_reps_bruteforce(P, Q);
  const auto p = P.sizes();
  const auto q = Q.sizes();
  const std::size_t rows = p.size(), cols = q.size();
  std::vector<std::vector<int>> a(rows, std::vector<int>(cols, 0));
  std::vector<int> col_left = q;
  std::vector<WeylElement> out;
  // Enumerate nonnegative integer matrices with row sums p and column sums q.
  std::function<void(std::size_t, std::size_t, int)> rec = [&](std::size_t i, std::size_t j, int row_left) {
    if (i == rows) {
      std::vector<int> img(P.ambient());
      std::vector<int> fill(cols, 0);
      for (std::size_t r = 0; r < rows; ++r) {
        std::size_t pos = 0;
        for (std::size_t c = 0; c < cols; ++c)
          for (int t = 0; t < a[r][c]; ++t) {
            img[P.blocks()[r][pos++] - 1] = Q.blocks()[c][fill[c]++];
          }
      }
      out.emplace_back(std::move(img));
      return;
    }
    if (j == cols - 1) {
      if (row_left > col_left[j]) return;
      a[i][j] = row_left;
      col_left[j] -= row_left;
      rec(i + 1, 0, i + 1 < rows ? p[i + 1] : 0);
      col_left[j] += row_left;
      a[i][j] = 0;
      return;
    }
    for (int v = 0; v <= std::min(row_left, col_left[j]); ++v) {
      a[i][j] = v;
      col_left[j] -= v;
      rec(i, j + 1, row_left - v);
      col_left[j] += v;
    }
    a[i][j] = 0;
  };
  if (rows > 0) rec(0, 0, p[0]);
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<BlockParabolic, BlockParabolic> relative_parabolics(const WeylElement& w, const BlockParabolic& P,
                                                              const BlockParabolic& Q) {
  const int m = P.ambient();
  const WeylElement winv = w.inverse();
  std::vector<Block> pw, qw;
  for (const auto& B : P.blocks())
    for (const auto& Bq : Q.blocks()) {
      Block c;
      for (int i : B)
        if (Q.block_of(w(i)) == Q.block_of(Bq.front())) c.push_back(i);
      if (!c.empty()) pw.push_back(c);
    }
  for (const auto& Bq : Q.blocks())
    for (const auto& B : P.blocks()) {
      Block c;
      for (int j : Bq)
        if (P.block_of(winv(j)) == P.block_of(B.front())) c.push_back(j);
      if (!c.empty()) qw.push_back(c);
    }
  return {BlockParabolic(m, pw), BlockParabolic(m, qw)};
}

std::pair<WeylElement, WeylElement> decompose_coset(const WeylElement& w2, const BlockParabolic& P,
                                                    const BlockParabolic& Q, const BlockParabolic& R) {
  if (!R.contains(Q)) throw std::invalid_argument("decompose_coset: Q is not contained in R");
  const int m = P.ambient();
  const WeylElement w2inv = w2.inverse();
  std::vector<int> img(m);
  for (const auto& B : R.blocks()) {
    Block pre;
    for (int j : B) pre.push_back(w2inv(j));
    std::sort(pre.begin(), pre.end());
    for (std::size_t k = 0; k < pre.size(); ++k) img[pre[k] - 1] = B[k];
  }
  WeylElement w(img);
  WeylElement w1 = w2 * w.inverse();
  return {w1, w};
}

bool check_decomposition(const WeylElement& w1, const WeylElement& w, const WeylElement& w2,
                         const BlockParabolic& P, const BlockParabolic& Q, const BlockParabolic& R) {
  if (w1 * w != w2) return false;
  if (!is_double_coset_rep(w, P, R)) return false;
  for (const auto& B : R.blocks())
    for (int j : B)
      if (R.block_of(w1(j)) != R.block_of(B.front())) return false;
  const auto Rw = relative_parabolics(w, P, R).second;
  return increasing_on_blocks(w1, Rw) && increasing_on_blocks(w1.inverse(), Q);
}

WeylElement reverse_cells(int m, const std::vector<std::vector<Block>>& cells_per_block) {
  std::vector<int> img(m);
  std::iota(img.begin(), img.end(), 1);
  for (const auto& cells : cells_per_block) {
    Block all;
    for (const auto& c : cells) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    // The last cell moves to the front; each cell keeps its internal order.
    std::size_t pos = 0;
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
      for (std::size_t k = 0; k < it->size(); ++k) img[(*it)[k] - 1] = all[pos++];
    }
  }
  return WeylElement(std::move(img));
}

WeylElement longest_in_levi(const BlockParabolic& P) {
  std::vector<std::vector<Block>> cells;
  for (const auto& b : P.blocks()) {
    std::vector<Block> singles;
    for (int i : b) singles.push_back({i});
    cells.push_back(std::move(singles));
  }
  return reverse_cells(P.ambient(), cells);
}

WeylElement block_permutation(const std::vector<int>& sizes, const std::vector<int>& target) {
  const std::size_t k = sizes.size();
  if (target.size() != k) throw std::invalid_argument("block_permutation: size mismatch");
  std::vector<int> order(k, -1);  // order[position] = block
  for (std::size_t p = 0; p < k; ++p) {
    if (target[p] < 0 || static_cast<std::size_t>(target[p]) >= k || order[target[p]] != -1)
      throw std::invalid_argument("block_permutation: target is not a permutation");
    order[target[p]] = static_cast<int>(p);
  }
  std::vector<int> start(k, 1);
  for (std::size_t p = 1; p < k; ++p) start[p] = start[p - 1] + sizes[p - 1];
  const int m = std::accumulate(sizes.begin(), sizes.end(), 0);
  std::vector<int> img(m);
  int next = 1;
  for (std::size_t pos = 0; pos < k; ++pos) {
    int b = order[pos];
    for (int t = 0; t < sizes[b]; ++t) img[start[b] + t - 1] = next++;
  }
  return WeylElement(std::move(img));
}

WeylElement block_reversal(const std::vector<int>& sizes) {
  std::vector<int> target(sizes.size());
  for (std::size_t p = 0; p < sizes.size(); ++p) target[p] = static_cast<int>(sizes.size() - 1 - p);
  return block_permutation(sizes, target);
}

}  // namespace rsp
