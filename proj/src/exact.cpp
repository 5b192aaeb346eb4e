#include "ih/exact.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace ih {

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::atomic<long long> g_budget{10000};

}  // namespace

long long top_simplex_budget() { return g_budget.load(); }
void set_top_simplex_budget(long long n) {
  if (n < 1) throw std::invalid_argument("top simplex budget must be positive");
  g_budget.store(n);
}

RingSpec RingSpec::Zp(unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("Zp modulus must be prime, got " + std::to_string(p));
  return RingSpec{Kind::prime_field, p};
}

std::string RingSpec::name() const {
  switch (kind) {
    case Kind::integers: return "Z";
    case Kind::rationals: return "Q";
    case Kind::prime_field: return "Z/" + std::to_string(p);
  }
  return "?";
}

RingSpec parse_ring(const std::string& s) {
  if (s == "Z") return RingSpec::Z();
  if (s == "Q") return RingSpec::Q();
  if (s.rfind("Zp:", 0) == 0) {
    const std::string digits = s.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad ring '" + s + "': expected Zp:<prime>");
    return RingSpec::Zp(std::stoul(digits));
  }
  throw std::invalid_argument("bad ring '" + s + "': expected Z, Q or Zp:<prime>");
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool Mat::is_integral() const {
  for (const auto& x : a_)
    if (x.get_den() != 1) return false;
  return true;
}

bool Mat::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

Mat Mat::operator*(const Mat& o) const {
  if (c_ != o.r_) throw std::invalid_argument("matrix product shape mismatch");
  Mat out(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const mpq_class& aik = at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < o.c_; ++j) {
        if (o.at(k, j) == 0) continue;
        out.at(i, j) += aik * o.at(k, j);
      }
    }
  return out;
}

Mat Mat::transposed() const {
  Mat out(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out.at(j, i) = at(i, j);
  return out;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (int i = 0; i < r_; ++i) {
    os << (i ? "\n[" : "[");
    for (int j = 0; j < c_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    os << "]";
  }
  return os.str();
}

namespace {

// Elimination state: D with mirrored transforms so u*input*v == D holds
// after every operation.
struct Work {
  Mat d, u, v, ui, vi;
  bool inv;
  RingSpec ring;

  void modp(mpq_class& x) {
    mpz_class r = x.get_num() % mpz_class(ring.p);
    if (r < 0) r += mpz_class(ring.p);
    x = mpq_class(r);
  }
  void reduce_row(Mat& m, int i) {
    if (ring.kind != RingSpec::Kind::prime_field) return;
    for (int j = 0; j < m.cols(); ++j) modp(m.at(i, j));
  }
  void reduce_col(Mat& m, int j) {
    if (ring.kind != RingSpec::Kind::prime_field) return;
    for (int i = 0; i < m.rows(); ++i) modp(m.at(i, j));
  }

  void row_swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < d.cols(); ++c) swap(d.at(i, c), d.at(j, c));
    for (int c = 0; c < u.cols(); ++c) swap(u.at(i, c), u.at(j, c));
    if (inv)
      for (int r = 0; r < ui.rows(); ++r) swap(ui.at(r, i), ui.at(r, j));
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < d.rows(); ++r) swap(d.at(r, i), d.at(r, j));
    for (int r = 0; r < v.rows(); ++r) swap(v.at(r, i), v.at(r, j));
    if (inv)
      for (int c = 0; c < vi.cols(); ++c) swap(vi.at(i, c), vi.at(j, c));
  }
  // row i -= q * row j; q by value, it may alias an entry being changed
  void row_sub(int i, mpq_class q, int j) {
    if (q == 0) return;
    for (int c = 0; c < d.cols(); ++c) d.at(i, c) -= q * d.at(j, c);
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) -= q * u.at(j, c);
    reduce_row(d, i);
    reduce_row(u, i);
    if (inv) {
      for (int r = 0; r < ui.rows(); ++r) ui.at(r, j) += q * ui.at(r, i);
      reduce_col(ui, j);
    }
  }
  // col j -= q * col k
  void col_sub(int j, mpq_class q, int k) {
    if (q == 0) return;
    for (int r = 0; r < d.rows(); ++r) d.at(r, j) -= q * d.at(r, k);
    for (int r = 0; r < v.rows(); ++r) v.at(r, j) -= q * v.at(r, k);
    reduce_col(d, j);
    reduce_col(v, j);
    if (inv) {
      for (int c = 0; c < vi.cols(); ++c) vi.at(k, c) += q * vi.at(j, c);
      reduce_row(vi, k);
    }
  }
  void row_scale(int i, mpq_class s, mpq_class s_inv) {
    for (int c = 0; c < d.cols(); ++c) d.at(i, c) *= s;
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) *= s;
    reduce_row(d, i);
    reduce_row(u, i);
    if (inv) {
      for (int r = 0; r < ui.rows(); ++r) ui.at(r, i) *= s_inv;
      reduce_col(ui, i);
    }
  }
};

mpq_class mod_inverse(const mpq_class& x, unsigned long p) {
  mpz_class out, pp(p);
  if (mpz_invert(out.get_mpz_t(), x.get_num().get_mpz_t(), pp.get_mpz_t()) == 0)
    throw std::logic_error("no modular inverse");
  return mpq_class(out);
}

// Minimal |value| over d[t.., t..], ties by lowest (row, col); false if the
// active submatrix is zero.
bool find_pivot(const Mat& d, int t, int& pr, int& pc) {
  bool found = false;
  mpq_class best;
  for (int i = t; i < d.rows(); ++i)
    for (int j = t; j < d.cols(); ++j) {
      const mpq_class& x = d.at(i, j);
      if (x == 0) continue;
      mpq_class ax = abs(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pr = i;
        pc = j;
      }
    }
  return found;
}

}  // namespace

SnfResult smith_normal_form(const Mat& m, const RingSpec& ring, bool want_inverses) {
  if (ring.kind != RingSpec::Kind::rationals && !m.is_integral())
    throw std::invalid_argument("smith_normal_form over " + ring.name() + " needs integer entries");

  Work w{m, Mat::identity(m.rows()), Mat::identity(m.cols()),
         want_inverses ? Mat::identity(m.rows()) : Mat(),
         want_inverses ? Mat::identity(m.cols()) : Mat(), want_inverses, ring};
  if (ring.kind == RingSpec::Kind::prime_field)
    for (int i = 0; i < w.d.rows(); ++i) w.reduce_row(w.d, i);

  const bool field = ring.is_field();
  int t = 0;
  const int tmax = std::min(m.rows(), m.cols());
  while (t < tmax) {
    int pr, pc;
    if (!find_pivot(w.d, t, pr, pc)) break;
    w.row_swap(t, pr);
    w.col_swap(t, pc);

    if (field) {
      const mpq_class piv = w.d.at(t, t);
      if (ring.kind == RingSpec::Kind::rationals)
        w.row_scale(t, 1 / piv, piv);
      else {
        const mpq_class s = mod_inverse(piv, ring.p);
        w.row_scale(t, s, piv);
      }
      for (int i = t + 1; i < w.d.rows(); ++i) w.row_sub(i, w.d.at(i, t), t);
      for (int j = t + 1; j < w.d.cols(); ++j) w.col_sub(j, w.d.at(t, j), t);
      ++t;
      continue;
    }

    // Integer case: shrink the pivot until it clears its row and column,
    // then force it to divide the rest of the submatrix.
    while (true) {
      while (true) {
        int br = t, bc = t;
        mpq_class best = abs(w.d.at(t, t));
        for (int i = t + 1; i < w.d.rows(); ++i) {
          const mpq_class& x = w.d.at(i, t);
          if (x != 0 && abs(x) < best) { best = abs(x); br = i; bc = t; }
        }
        for (int j = t + 1; j < w.d.cols(); ++j) {
          const mpq_class& x = w.d.at(t, j);
          if (x != 0 && abs(x) < best) { best = abs(x); br = t; bc = j; }
        }
        if (br != t || bc != t) {
          w.row_swap(t, br);
          w.col_swap(t, bc);
          continue;
        }
        bool clean = true;
        for (int i = t + 1; i < w.d.rows(); ++i) {
          if (w.d.at(i, t) == 0) continue;
          mpz_class q;
          mpz_tdiv_q(q.get_mpz_t(), w.d.at(i, t).get_num().get_mpz_t(),
                     w.d.at(t, t).get_num().get_mpz_t());
          w.row_sub(i, mpq_class(q), t);
          if (w.d.at(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < w.d.cols(); ++j) {
          if (w.d.at(t, j) == 0) continue;
          mpz_class q;
          mpz_tdiv_q(q.get_mpz_t(), w.d.at(t, j).get_num().get_mpz_t(),
                     w.d.at(t, t).get_num().get_mpz_t());
          w.col_sub(j, mpq_class(q), t);
          if (w.d.at(t, j) != 0) clean = false;
        }
        if (clean) break;
      }
      int bad_row = -1;
      for (int i = t + 1; i < w.d.rows() && bad_row < 0; ++i)
        for (int j = t + 1; j < w.d.cols(); ++j)
          if (w.d.at(i, j).get_num() % w.d.at(t, t).get_num() != 0) {
            bad_row = i;
            break;
          }
      if (bad_row < 0) break;
      w.row_sub(t, mpq_class(-1), bad_row);
    }
    if (w.d.at(t, t) < 0) w.row_scale(t, -1, -1);
    ++t;
  }

  SnfResult out;
  out.rank = t;
  out.u = std::move(w.u);
  out.v = std::move(w.v);
  out.d = std::move(w.d);
  if (want_inverses) {
    out.u_inv = std::move(w.ui);
    out.v_inv = std::move(w.vi);
  }
  for (int i = 0; i < t; ++i) out.diagonal.push_back(out.d.at(i, i).get_num());
  return out;
}

mpq_class det(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det of a nonsquare matrix");
  Mat a = m;
  const int n = a.rows();
  mpq_class sign = 1;
  for (int t = 0; t < n; ++t) {
    int pr = -1;
    for (int i = t; i < n; ++i)
      if (a.at(i, t) != 0) { pr = i; break; }
    if (pr < 0) return 0;
    if (pr != t) {
      for (int j = 0; j < n; ++j) swap(a.at(t, j), a.at(pr, j));
      sign = -sign;
    }
    for (int i = t + 1; i < n; ++i) {
      if (a.at(i, t) == 0) continue;
      mpq_class q = a.at(i, t) / a.at(t, t);
      for (int j = t; j < n; ++j) a.at(i, j) -= q * a.at(t, j);
    }
  }
  mpq_class out = sign;
  for (int i = 0; i < n; ++i) out *= a.at(i, i);
  return out;
}

}  // namespace ih
