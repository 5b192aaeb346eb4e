#include "ih/sparse.hpp"

#include <algorithm>
#include <cstdlib>

#include "ih/fgmod.hpp"

namespace ih::sparse {

void SMat::add(int r, int c, mpz_class v) {
  if (r < 0 || r >= r_ || c < 0 || c >= int(cols_.size()))
    throw std::out_of_range("sparse entry out of range");
  if (v == 0) return;
  cols_[c].push_back(Entry{r, std::move(v)});
}

void SMat::finalize() {
  for (auto& col : cols_) {
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
    std::vector<Entry> out;
    out.reserve(col.size());
    for (auto& e : col) {
      if (!out.empty() && out.back().row == e.row)
        out.back().val += e.val;
      else
        out.push_back(std::move(e));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Entry& e) { return e.val == 0; }),
              out.end());
    col = std::move(out);
  }
}

long long SMat::nnz() const {
  long long n = 0;
  for (const auto& c : cols_) n += (long long)c.size();
  return n;
}

bool SMat::is_zero() const { return nnz() == 0; }

mpz_class SMat::get(int r, int c) const {
  const auto& col = cols_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const Entry& e, int row) { return e.row < row; });
  if (it != col.end() && it->row == r) return it->val;
  return 0;
}

Mat SMat::dense() const {
  Mat m(r_, cols());
  for (int j = 0; j < cols(); ++j)
    for (const auto& e : cols_[j]) m.at(e.row, j) = mpq_class(e.val);
  return m;
}

SMat SMat::from_dense(const Mat& m) {
  if (!m.is_integral()) throw std::invalid_argument("from_dense: non-integral entry");
  SMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m.at(i, j) != 0) out.add(i, j, m.at(i, j).get_num());
  out.finalize();
  return out;
}

SMat mul(const SMat& a, const SMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("sparse product shape mismatch");
  SMat out(a.rows(), b.cols());
  std::vector<mpz_class> acc(a.rows());
  std::vector<int> touched;
  for (int j = 0; j < b.cols(); ++j) {
    for (const auto& e : b.col(j))
      for (const auto& f : a.col(e.row)) {
        if (acc[f.row] == 0) touched.push_back(f.row);
        mpz_addmul(acc[f.row].get_mpz_t(), e.val.get_mpz_t(), f.val.get_mpz_t());
      }
    std::sort(touched.begin(), touched.end());
    for (int r : touched) {
      if (acc[r] != 0) out.add(r, j, acc[r]);
      acc[r] = 0;
    }
    touched.clear();
  }
  return out;
}

std::vector<mpz_class> apply(const SMat& a, const std::vector<mpz_class>& x) {
  if (int(x.size()) != a.cols()) throw std::invalid_argument("apply: length mismatch");
  std::vector<mpz_class> out(a.rows());
  for (int j = 0; j < a.cols(); ++j) {
    if (x[j] == 0) continue;
    for (const auto& e : a.col(j)) mpz_addmul(out[e.row].get_mpz_t(), x[j].get_mpz_t(), e.val.get_mpz_t());
  }
  return out;
}

namespace {

// Sparse column store with row occupancy bookkeeping. Rows below npivot are
// pivot candidates; anything at or above is carried payload (the identity
// block of a kernel computation). All moves are unimodular column operations
// plus, for the diagonalization only, row operations on a clean pivot row.
struct ColStore {
  int npivot = 0;
  std::vector<std::vector<Entry>> cols;
  std::vector<char> col_active;
  std::vector<char> row_done;
  std::vector<int> row_nnz;
  std::vector<std::vector<int>> row_cols;
  std::vector<std::vector<int>> buckets;
  size_t cur_min = 1;
  long long live = 0;
  bool fieldp = false;
  mpz_class p;

  void bucket_push(int r) {
    const int n = row_nnz[r];
    if (n <= 0) return;
    if (size_t(n) >= buckets.size()) buckets.resize(n + 1);
    buckets[n].push_back(r);
    if (size_t(n) < cur_min) cur_min = n;
  }
  void note_gain(int r, int j) {
    if (r >= npivot || row_done[r]) return;
    ++row_nnz[r];
    ++live;
    row_cols[r].push_back(j);
    bucket_push(r);
  }
  void note_loss(int r) {
    if (r >= npivot || row_done[r]) return;
    --row_nnz[r];
    --live;
    bucket_push(r);
  }

  void reduce(mpz_class& v) const {
    v %= p;
    if (v < 0) v += p;
  }

  void init(const SMat& m, const RingSpec& ring, bool carry_identity) {
    fieldp = ring.kind == RingSpec::Kind::prime_field;
    if (fieldp) p = ring.p;
    npivot = m.rows();
    const int nc = m.cols();
    cols.resize(nc);
    col_active.assign(nc, 1);
    row_done.assign(npivot, 0);
    row_nnz.assign(npivot, 0);
    row_cols.resize(npivot);
    for (int j = 0; j < nc; ++j) {
      for (const auto& e : m.col(j)) {
        mpz_class v = e.val;
        if (fieldp) reduce(v);
        if (v == 0) continue;
        cols[j].push_back(Entry{e.row, std::move(v)});
      }
      if (carry_identity) cols[j].push_back(Entry{npivot + j, 1});
      for (const auto& e : cols[j])
        if (e.row < npivot) {
          ++row_nnz[e.row];
          ++live;
          row_cols[e.row].push_back(j);
        }
    }
    for (int r = 0; r < npivot; ++r) bucket_push(r);
  }

  mpz_class value_at(int j, int r) const {
    const auto& col = cols[j];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, int row) { return e.row < row; });
    if (it != col.end() && it->row == r) return it->val;
    return 0;
  }

  // col j += c * col src, src != j
  void col_axpy(int j, int src, const mpz_class& c) {
    if (c == 0) return;
    const auto& s = cols[src];
    auto& d = cols[j];
    std::vector<Entry> out;
    out.reserve(d.size() + s.size());
    size_t a = 0, b = 0;
    while (a < d.size() || b < s.size()) {
      if (b == s.size() || (a < d.size() && d[a].row < s[b].row)) {
        out.push_back(std::move(d[a]));
        ++a;
      } else if (a == d.size() || s[b].row < d[a].row) {
        mpz_class v = c * s[b].val;
        if (fieldp) reduce(v);
        if (v != 0) {
          note_gain(s[b].row, j);
          out.push_back(Entry{s[b].row, std::move(v)});
        }
        ++b;
      } else {
        mpz_class v = std::move(d[a].val);
        mpz_addmul(v.get_mpz_t(), c.get_mpz_t(), s[b].val.get_mpz_t());
        if (fieldp) reduce(v);
        if (v == 0)
          note_loss(d[a].row);
        else
          out.push_back(Entry{d[a].row, std::move(v)});
        ++a;
        ++b;
      }
    }
    d = std::move(out);
  }

  // Valid active columns holding an entry at row r; also compacts row_cols[r].
  std::vector<int> gather(int r) {
    auto& raw = row_cols[r];
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    std::vector<int> out;
    out.reserve(raw.size());
    for (int j : raw)
      if (col_active[j] && value_at(j, r) != 0) out.push_back(j);
    raw = out;
    return out;
  }

  // Row with the fewest active entries, or -1 when no entries remain.
  int pick_row() {
    while (live > 0) {
      if (cur_min >= buckets.size())
        throw std::logic_error("sparse: occupancy bookkeeping out of sync");
      auto& b = buckets[cur_min];
      bool found = false;
      int r = -1;
      while (!b.empty()) {
        r = b.back();
        b.pop_back();
        if (!row_done[r] && row_nnz[r] == int(cur_min)) {
          found = true;
          break;
        }
      }
      if (found) {
        bucket_push(r);  // keep discoverable if not retired by the caller
        return r;
      }
      ++cur_min;
    }
    return -1;
  }

  void retire_col(int j) {
    col_active[j] = 0;
    for (const auto& e : cols[j]) note_loss(e.row);
  }
  void retire_row(int r) {
    if (r < npivot) row_done[r] = 1;
  }

  mpz_class inv_mod(const mpz_class& v) const {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t()) == 0)
      throw std::logic_error("sparse: no modular inverse");
    return out;
  }
};

mpz_class tdiv(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Reduces row r to a single column by gcd column operations; returns that
// column. Exact one-pass clearing over a field.
int clear_row_colops(ColStore& st, int r) {
  while (true) {
    std::vector<int> js = st.gather(r);
    if (js.empty()) throw std::logic_error("sparse: pivot row went empty");
    if (js.size() == 1) return js[0];
    if (st.fieldp) {
      int c = js[0];
      for (int j : js)
        if (st.cols[j].size() < st.cols[c].size() || (st.cols[j].size() == st.cols[c].size() && j < c)) c = j;
      const mpz_class vinv = st.inv_mod(st.value_at(c, r));
      for (int j : js) {
        if (j == c) continue;
        mpz_class q = st.value_at(j, r) * vinv;
        st.reduce(q);
        st.col_axpy(j, c, -q);
      }
      return c;
    }
    int c = js[0];
    mpz_class best = abs(st.value_at(c, r));
    for (int j : js) {
      mpz_class a = abs(st.value_at(j, r));
      if (a < best ||
          (a == best && (st.cols[j].size() < st.cols[c].size() ||
                         (st.cols[j].size() == st.cols[c].size() && j < c)))) {
        best = std::move(a);
        c = j;
      }
    }
    const mpz_class v = st.value_at(c, r);
    for (int j : js) {
      if (j == c) continue;
      st.col_axpy(j, c, -tdiv(st.value_at(j, r), v));
    }
  }
}

}  // namespace

DiagResult invariant_factors(SMat m, const RingSpec& ring) {
  ColStore st;
  st.init(m, ring, false);
  m = SMat();  // the store owns the data now
  DiagResult out;
  std::vector<mpz_class> pivots;
  const bool integers = ring.kind == RingSpec::Kind::integers;

  while (st.live > 0) {
    int r = st.pick_row();
    if (r < 0) break;
    int c = clear_row_colops(st, r);
    if (integers) {
      // Row r holds a single entry, so row operations against it touch only
      // column c. Reduce the column mod the pivot; a leftover remainder is
      // strictly smaller and becomes the new pivot. Terminates by descent.
      while (true) {
        const mpz_class v = st.value_at(c, r);
        auto& col = st.cols[c];
        int move_to = -1;
        for (auto& e : col) {
          if (e.row == r || e.row >= st.npivot || st.row_done[e.row]) continue;
          mpz_class q = tdiv(e.val, v);
          if (q != 0) {
            mpz_submul(e.val.get_mpz_t(), q.get_mpz_t(), v.get_mpz_t());
            if (e.val == 0) st.note_loss(e.row);
          }
          if (e.val != 0) move_to = e.row;
        }
        col.erase(std::remove_if(col.begin(), col.end(),
                                 [](const Entry& e) { return e.val == 0; }),
                  col.end());
        if (move_to < 0) break;
        r = move_to;
        c = clear_row_colops(st, r);
      }
    }
    pivots.push_back(abs(st.value_at(c, r)));
    st.retire_col(c);
    st.retire_row(r);
    ++out.rank;
  }
  if (integers) out.factors = normalize_invariant_factors(std::move(pivots));
  return out;
}

long rank_of(SMat m, const RingSpec& ring) {
  // The rank is ring-independent between Z and Q; the field path is cheaper.
  const RingSpec r = ring.kind == RingSpec::Kind::integers ? RingSpec::Q() : ring;
  return invariant_factors(std::move(m), r).rank;
}

SMat kernel_basis(const SMat& m, const RingSpec& ring) {
  ColStore st;
  st.init(m, ring, true);
  while (st.live > 0) {
    int r = st.pick_row();
    if (r < 0) break;
    int c = clear_row_colops(st, r);
    st.retire_col(c);
    st.retire_row(r);
  }
  SMat out(m.cols(), 0);
  std::vector<std::vector<Entry>> basis;
  for (int j = 0; j < int(st.cols.size()); ++j) {
    if (!st.col_active[j]) continue;
    std::vector<Entry> v;
    for (const auto& e : st.cols[j]) {
      if (e.row < st.npivot) throw std::logic_error("sparse: kernel column not in kernel");
      v.push_back(Entry{e.row - st.npivot, e.val});
    }
    basis.push_back(std::move(v));
  }
  SMat k(m.cols(), int(basis.size()));
  for (int j = 0; j < int(basis.size()); ++j)
    for (auto& e : basis[j]) k.add(e.row, j, std::move(e.val));
  k.finalize();
  return k;
}

Echelon echelonize_columns(SMat k, const RingSpec& ring) {
  ColStore st;
  st.init(k, ring, false);
  const int nc = k.cols(), nr = k.rows();
  k = SMat();
  std::vector<int> order, pivots;
  while (st.live > 0) {
    int r = st.pick_row();
    if (r < 0) break;
    int c = clear_row_colops(st, r);
    st.retire_col(c);
    st.retire_row(r);
    order.push_back(c);
    pivots.push_back(r);
  }
  for (int j = 0; j < nc; ++j)
    if (st.col_active[j]) throw std::invalid_argument("echelonize_columns: dependent columns");

  Echelon out;
  out.ring = ring;
  out.pivot_row = std::move(pivots);
  out.k = SMat(nr, int(order.size()));
  for (int t = 0; t < int(order.size()); ++t)
    for (auto& e : st.cols[order[t]]) out.k.add(e.row, t, std::move(e.val));
  out.k.finalize();
  return out;
}

bool solve_in_span(const Echelon& e, std::vector<mpz_class> x, std::vector<mpz_class>& coords) {
  if (int(x.size()) != e.k.rows()) throw std::invalid_argument("solve_in_span: length mismatch");
  const bool fieldp = e.ring.kind == RingSpec::Kind::prime_field;
  mpz_class p;
  if (fieldp) {
    p = e.ring.p;
    for (auto& v : x) {
      v %= p;
      if (v < 0) v += p;
    }
  }
  coords.assign(e.k.cols(), 0);
  for (int t = 0; t < e.k.cols(); ++t) {
    const int r = e.pivot_row[t];
    if (x[r] == 0) continue;
    const mpz_class d = e.k.get(r, t);
    mpz_class q;
    if (fieldp) {
      mpz_class dinv;
      if (mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
        throw std::logic_error("solve_in_span: pivot not invertible");
      q = x[r] * dinv % p;
      if (q < 0) q += p;
    } else {
      if (x[r] % d != 0) return false;
      q = x[r] / d;
    }
    for (const auto& en : e.k.col(t)) {
      mpz_submul(x[en.row].get_mpz_t(), q.get_mpz_t(), en.val.get_mpz_t());
      if (fieldp) {
        x[en.row] %= p;
        if (x[en.row] < 0) x[en.row] += p;
      }
    }
    coords[t] = std::move(q);
  }
  for (const auto& v : x)
    if (v != 0) return false;
  return true;
}

}  // namespace ih::sparse
