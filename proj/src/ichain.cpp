#include "ih/ichain.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "ih/exact.hpp"

namespace ih {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

CoeffRegime parse_regime(const std::string& s) {
  if (s == "constant") return CoeffRegime::constant;
  if (s == "r0") return CoeffRegime::stratified_zero;
  if (s == "saralegi") return CoeffRegime::saralegi;
  throw std::invalid_argument("unknown coefficient regime: " + s);
}

std::string regime_name(CoeffRegime r) {
  switch (r) {
    case CoeffRegime::constant: return "constant";
    case CoeffRegime::stratified_zero: return "r0";
    case CoeffRegime::saralegi: return "saralegi";
  }
  return "?";
}

std::string CoefficientSpec::str() const { return ring.name() + "/" + regime_name(regime); }

StratView::StratView(const FilteredComplex& x, const Perversity& p) : carrier_(&x) {
  pairs_.resize(x.vertex_count());
  for (int v = 0; v < x.vertex_count(); ++v) pairs_[v] = {x.vertex_codim(v), 0};
  q_.resize(p.max_codim() + 1);
  for (int k = 0; k <= p.max_codim(); ++k) q_[k] = {p.at(k)};
  fp_ = mix(x.fingerprint(), 1);
  for (const auto& row : q_)
    for (int v : row) fp_ = mix(fp_, std::uint64_t(std::int64_t(v)) * 2 + 1);
  check_coverage("codimension");
}

StratView::StratView(const BifilteredComplex& x, const ProductPerversity& q)
    : carrier_(&x.carrier), arity_two_(true), pairs_(x.pair) {
  q_.resize(q.maxk() + 1);
  for (int k = 0; k <= q.maxk(); ++k) {
    q_[k].resize(q.maxl() + 1);
    for (int l = 0; l <= q.maxl(); ++l) q_[k][l] = q.at(k, l);
  }
  fp_ = mix(x.fingerprint(), 2);
  for (const auto& row : q_)
    for (int v : row) fp_ = mix(fp_, std::uint64_t(std::int64_t(v)) * 2 + 1);
  check_coverage("codimension pair");
}

void StratView::check_coverage(const std::string& what) const {
  int needk = 0, needl = 0;
  if (arity_two_) {
    for (const auto& s : pairs_) {
      // any occupied pair is dominated componentwise by some vertex pair
      needk = std::max(needk, s[0]);
      needl = std::max(needl, s[1]);
    }
  } else {
    for (const auto& s : pairs_) needk = std::max(needk, s[0]);
  }
  if (needk > max_k() || needl > max_l())
    throw std::invalid_argument("perversity table covers " + what + "s up to (" +
                                std::to_string(max_k()) + "," + std::to_string(max_l()) +
                                ") but the space reaches (" + std::to_string(needk) + "," +
                                std::to_string(needl) + ")");
}

std::array<int, 2> StratView::simplex_pair(const Simplex& s) const {
  if (s.empty()) throw std::invalid_argument("empty simplex has no stratum");
  std::array<int, 2> out = pairs_[s[0]];
  for (int v : s) {
    out[0] = std::min(out[0], pairs_[v][0]);
    out[1] = std::min(out[1], pairs_[v][1]);
  }
  return out;
}

int StratView::q_at(int k, int l) const {
  if (k < 0 || k > max_k() || l < 0 || l > max_l())
    throw std::out_of_range("perversity value out of table range");
  return q_[k][l];
}

bool StratView::top_stratum(const Simplex& s) const {
  const auto p = simplex_pair(s);
  return p[0] == 0 && p[1] == 0;
}

bool StratView::bad_stratum_value(int k, int l) const {
  if (k + l < 1) return false;
  return q_at(k, l) > k + l - 2;
}

std::uint64_t StratView::fingerprint() const { return fp_; }

std::vector<StratView::StratumRow> StratView::stratum_rows(const Simplex& s) const {
  const long i = long(s.size()) - 1;
  std::vector<int> ks, ls;
  ks.reserve(s.size());
  ls.reserve(s.size());
  for (int v : s) {
    ks.push_back(pairs_[v][0]);
    ls.push_back(pairs_[v][1]);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  std::vector<StratumRow> out;
  for (int k : ks)
    for (int l : ls) {
      long f = 0, fk = 0, fl = 0;
      for (int v : s) {
        const auto& pr = pairs_[v];
        if (pr[0] < k || pr[1] < l) continue;
        ++f;
        if (pr[0] >= k + 1) ++fk;
        if (pr[1] >= l + 1) ++fl;
      }
      // the simplex meets the open (k, l) stratum iff the face over (k, l)
      // strictly exceeds both deeper faces; its preimage then has the full
      // face dimension
      if (f == 0 || f == fk || f == fl) continue;
      out.push_back(StratumRow{k, l, f - 1, i - k - l + q_at(k, l)});
    }
  return out;
}

bool StratView::allowable(const Simplex& s) const {
  const long i = long(s.size()) - 1;
  std::vector<int> ks, ls;
  ks.reserve(s.size());
  ls.reserve(s.size());
  for (int v : s) {
    ks.push_back(pairs_[v][0]);
    ls.push_back(pairs_[v][1]);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  for (int k : ks)
    for (int l : ls) {
      if (k == 0 && l == 0) continue;  // value there is >= 0, always satisfied
      long f = 0, fk = 0, fl = 0;
      for (int v : s) {
        const auto& pr = pairs_[v];
        if (pr[0] < k || pr[1] < l) continue;
        ++f;
        if (pr[0] >= k + 1) ++fk;
        if (pr[1] >= l + 1) ++fl;
      }
      if (f == 0 || f == fk || f == fl) continue;
      if (f - 1 > i - k - l + q_at(k, l)) return false;
    }
  return true;
}

AllowabilityEntry simplex_allowability(const StratView& view, const Simplex& s) {
  AllowabilityEntry out;
  out.rows = view.stratum_rows(s);
  bool first = true;
  for (const auto& r : out.rows) {
    const long slack = r.bound - r.dim;
    if (first || slack < out.slack) {
      out.slack = slack;
      out.bind_k = r.k;
      out.bind_l = r.l;
      first = false;
    }
  }
  out.allowed = first || out.slack >= 0;
  return out;
}

std::string AllowabilityEntry::str() const {
  std::ostringstream o;
  o << (allowed ? "allowed" : "blocked") << " binding (" << bind_k << "," << bind_l
    << ") slack " << slack << " [";
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i) o << " ";
    o << "(" << rows[i].k << "," << rows[i].l << "):dim" << rows[i].dim << "<=" << rows[i].bound;
  }
  o << "]";
  return o.str();
}

namespace {

RingSpec work_ring(const RingSpec& r) {
  return r.kind == RingSpec::Kind::prime_field ? r : RingSpec::Z();
}

// Kernel of the boundary restricted to the chosen columns, subject to the
// chosen rows vanishing; the echelonized basis doubles as the coordinate
// system for everything mapping into it.
struct Part {
  std::vector<long> cols;  // carrier simplex indices
  std::vector<long> pos;   // carrier index -> position in cols, -1 elsewhere
  sparse::Echelon ech;
  long dim() const { return ech.k.cols(); }
};

Part make_part(const BoundedChainComplex& bc, int d, const std::vector<char>& col_in,
               const std::vector<char>& row_kill, const RingSpec& work) {
  Part out;
  const long nd = bc.dims[d];
  out.pos.assign(nd, -1);
  for (long j = 0; j < nd; ++j)
    if (col_in[j]) {
      out.pos[j] = long(out.cols.size());
      out.cols.push_back(j);
    }
  std::vector<long> rpos;
  long nrows = 0;
  if (d > 0) {
    rpos.assign(bc.dims[d - 1], -1);
    for (long r = 0; r < bc.dims[d - 1]; ++r)
      if (row_kill[r]) rpos[r] = nrows++;
  }
  sparse::SMat m(int(nrows), int(out.cols.size()));
  if (d > 0)
    for (long t = 0; t < long(out.cols.size()); ++t)
      for (const auto& e : bc.bnd[d].col(int(out.cols[t])))
        if (rpos[e.row] >= 0) m.add(int(rpos[e.row]), int(t), e.val);
  m.finalize();
  out.ech = sparse::echelonize_columns(sparse::kernel_basis(m, work), work);
  return out;
}

// Repeated solves against one echelon, with dense scratch reused between
// calls; the scratch is all zeros on entry and on exit.
struct SpanSolver {
  const sparse::Echelon* ech = nullptr;
  bool fieldp = false;
  mpz_class p;
  std::vector<mpz_class> x;
  std::vector<long> touched;

  void attach(const sparse::Echelon& e, const RingSpec& work, long rows) {
    ech = &e;
    fieldp = work.kind == RingSpec::Kind::prime_field;
    if (fieldp) p = work.p;
    x.assign(rows, 0);
    touched.clear();
  }

  void reduce(mpz_class& v) const {
    v %= p;
    if (v < 0) v += p;
  }

  // in: sparse vector over the echelon's row space. out: sparse coordinates.
  bool solve(const std::vector<std::pair<long, mpz_class>>& in,
             std::vector<std::pair<long, mpz_class>>& out) {
    out.clear();
    for (const auto& [r, v] : in) {
      if (x[r] == 0) touched.push_back(r);
      x[r] += v;
      if (fieldp) reduce(x[r]);
    }
    bool ok = true;
    const auto& k = ech->k;
    for (int t = 0; t < k.cols(); ++t) {
      const long r = ech->pivot_row[t];
      if (x[r] == 0) continue;
      const mpz_class d = k.get(int(r), t);
      mpz_class q;
      if (fieldp) {
        mpz_class dinv;
        if (mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
          throw std::logic_error("span solve: pivot not invertible");
        q = x[r] * dinv % p;
        if (q < 0) q += p;
      } else {
        if (x[r] % d != 0) {
          ok = false;
          break;
        }
        q = x[r] / d;
      }
      for (const auto& en : k.col(t)) {
        if (x[en.row] == 0) touched.push_back(en.row);
        mpz_submul(x[en.row].get_mpz_t(), q.get_mpz_t(), en.val.get_mpz_t());
        if (fieldp) reduce(x[en.row]);
      }
      if (q != 0) out.push_back({t, std::move(q)});
    }
    if (ok)
      for (long r : touched)
        if (x[r] != 0) {
          ok = false;
          break;
        }
    for (long r : touched) x[r] = 0;
    touched.clear();
    if (!ok) out.clear();
    return ok;
  }
};

// The three ways a boundary row can meet a chain subcomplex: a coordinate, a
// vanishing constraint, or a row the regime quotients away.
enum class RowKind { coord, kill, drop };

struct Builder {
  const BoundedChainComplex* bc = nullptr;
  RingSpec work;
  bool fieldp = false;
  mpz_class pm;

  std::vector<mpz_class> wbuf;
  std::vector<long> wtouch;

  void boundary_of_col(int d, const Part& part, int t) {
    for (const auto& e : part.ech.k.col(t)) {
      const long j = part.cols[e.row];
      for (const auto& f : bc->bnd[d].col(int(j))) {
        if (wbuf[f.row] == 0) wtouch.push_back(f.row);
        mpz_addmul(wbuf[f.row].get_mpz_t(), e.val.get_mpz_t(), f.val.get_mpz_t());
      }
    }
  }

  // induced boundary of part[d] into part[d-1] coordinates
  sparse::SMat induced(int d, const Part& hi, const Part& lo,
                       const std::function<RowKind(long)>& row_kind) {
    sparse::SMat g(int(lo.dim()), int(hi.dim()));
    if (d == 0 || hi.dim() == 0) {
      g.finalize();
      return g;
    }
    wbuf.assign(bc->dims[d - 1], 0);
    wtouch.clear();
    SpanSolver solver;
    solver.attach(lo.ech, work, long(lo.cols.size()));
    std::vector<std::pair<long, mpz_class>> in, coords;
    for (int t = 0; t < int(hi.dim()); ++t) {
      boundary_of_col(d, hi, t);
      in.clear();
      std::sort(wtouch.begin(), wtouch.end());
      wtouch.erase(std::unique(wtouch.begin(), wtouch.end()), wtouch.end());
      for (long r : wtouch) {
        if (wbuf[r] == 0) continue;
        if (fieldp) {
          wbuf[r] %= pm;
          if (wbuf[r] < 0) wbuf[r] += pm;
          if (wbuf[r] == 0) continue;
        }
        if (lo.pos[r] >= 0) {
          in.push_back({lo.pos[r], wbuf[r]});
          continue;
        }
        switch (row_kind(r)) {
          case RowKind::coord:
            throw std::logic_error("intersection complex: row bookkeeping out of sync");
          case RowKind::kill:
            throw std::logic_error("intersection complex: boundary hit a forbidden simplex");
          case RowKind::drop:
            break;  // quotiented away by the regime
        }
      }
      for (long r : wtouch) wbuf[r] = 0;
      wtouch.clear();
      if (!solver.solve(in, coords))
        throw std::logic_error("intersection complex: induced boundary left the subcomplex");
      for (auto& [row, val] : coords) g.add(int(row), t, std::move(val));
    }
    g.finalize();
    return g;
  }
};

sparse::SMat embed_basis(const Part& part, long carrier_count) {
  sparse::SMat b(int(carrier_count), int(part.dim()));
  for (int t = 0; t < int(part.dim()); ++t)
    for (const auto& e : part.ech.k.col(t)) b.add(int(part.cols[e.row]), t, e.val);
  b.finalize();
  return b;
}

void audit_complex(IntersectionComplex& ic, const std::function<bool(int, long)>& support_ok) {
  for (int d = 0; d < int(ic.basis.size()); ++d) {
    const auto& b = ic.basis[d];
    for (int t = 0; t < b.cols(); ++t)
      for (const auto& e : b.col(t))
        if (!support_ok(d, e.row))
          throw std::logic_error("intersection complex audit: generator supported on a simplex "
                                 "outside its allowable span in degree " +
                                 std::to_string(d));
  }
  ic.cx.validate();
  ic.audited = true;
}

IntersectionComplex build_plain(const StratView& view, const CoefficientSpec& coeff) {
  const FilteredComplex& X = view.carrier();
  const RingSpec work = work_ring(coeff.ring);
  BoundedChainComplex bc = boundary_matrices(X, RingSpec::Z());
  const int top = bc.top();

  std::vector<std::vector<char>> colin(top + 1), kill(top + 1);
  for (int d = 0; d <= top; ++d) {
    const auto& ss = X.simplices(d);
    colin[d].assign(ss.size(), 0);
    kill[d].assign(ss.size(), 0);
    for (size_t i = 0; i < ss.size(); ++i) {
      if (coeff.regime == CoeffRegime::stratified_zero && !view.top_stratum(ss[i])) continue;
      if (view.allowable(ss[i]))
        colin[d][i] = 1;
      else
        kill[d][i] = 1;
    }
  }

  std::vector<Part> part(top + 1);
  for (int d = 0; d <= top; ++d)
    part[d] = make_part(bc, d, colin[d], d > 0 ? kill[d - 1] : std::vector<char>{}, work);

  IntersectionComplex out;
  out.ring = coeff.ring;
  out.regime = coeff.regime;
  out.cx.ring = coeff.ring;
  out.cx.dims.resize(top + 1);
  out.cx.bnd.resize(top + 1);
  out.basis.resize(top + 1);
  for (int d = 0; d <= top; ++d) {
    out.cx.dims[d] = part[d].dim();
    out.basis[d] = embed_basis(part[d], bc.dims[d]);
  }

  Builder bld;
  bld.bc = &bc;
  bld.work = work;
  bld.fieldp = work.kind == RingSpec::Kind::prime_field;
  if (bld.fieldp) bld.pm = work.p;
  out.cx.bnd[0] = sparse::SMat(0, int(out.cx.dims[0]));
  for (int d = 1; d <= top; ++d) {
    const auto& kl = kill[d - 1];
    out.cx.bnd[d] = bld.induced(d, part[d], part[d - 1], [&](long r) {
      return kl[r] ? RowKind::kill : RowKind::drop;
    });
  }

  audit_complex(out, [&](int d, long r) { return colin[d][r] != 0; });
  return out;
}

// Quotient of nested chain subcomplexes, degree by degree. The denominator
// must be a direct summand of the numerator; the Smith form over Z certifies
// that through its all-ones diagonal.
IntersectionComplex build_quotient(const BoundedChainComplex& bc, const std::vector<Part>& num,
                                   const std::vector<Part>& den,
                                   const std::vector<std::vector<char>>& num_kill,
                                   const CoefficientSpec& coeff) {
  const int top = bc.top();
  const RingSpec work = work_ring(coeff.ring);
  const bool fieldp = work.kind == RingSpec::Kind::prime_field;
  const mpz_class pm = fieldp ? mpz_class(work.p) : mpz_class(0);

  // express each denominator in numerator coordinates and split off a
  // complement with a unimodular transform
  std::vector<Mat> u(top + 1), u_inv(top + 1);
  std::vector<long> rank(top + 1, 0);
  for (int d = 0; d <= top; ++d) {
    const long nd = num[d].dim(), dd = den[d].dim();
    if (dd == 0) {
      u[d] = Mat::identity(int(nd));
      u_inv[d] = u[d];
      continue;
    }
    Mat m{int(nd), int(dd)};
    std::vector<std::pair<long, mpz_class>> in;
    std::vector<mpz_class> x;
    for (int t = 0; t < int(dd); ++t) {
      x.assign(num[d].cols.size(), 0);
      for (const auto& e : den[d].ech.k.col(t)) {
        const long carrier = den[d].cols[e.row];
        const long pp = num[d].pos[carrier];
        if (pp < 0)
          throw std::logic_error("quotient: denominator uses a simplex outside the numerator");
        x[pp] = e.val;
      }
      std::vector<mpz_class> y;
      if (!sparse::solve_in_span(num[d].ech, x, y))
        throw std::logic_error("quotient: denominator escapes the numerator span");
      for (long s = 0; s < nd; ++s) m.at(int(s), t) = mpq_class(y[s]);
    }
    SnfResult snf = smith_normal_form(m, work, true);
    if (snf.rank != dd) throw std::logic_error("quotient: denominator basis is dependent");
    for (const auto& v : snf.diagonal)
      if (v != 1)
        throw std::logic_error("quotient: denominator is not a direct summand of the numerator");
    rank[d] = snf.rank;
    u[d] = std::move(snf.u);
    u_inv[d] = std::move(snf.u_inv);
  }

  IntersectionComplex out;
  out.ring = coeff.ring;
  out.regime = coeff.regime;
  out.cx.ring = coeff.ring;
  out.cx.dims.resize(top + 1);
  out.cx.bnd.resize(top + 1);
  out.basis.resize(top + 1);

  auto lift_gen = [&](int d, int t) {
    // carrier coordinates of quotient generator t: numerator basis times the
    // complement column of the inverse transform
    std::vector<mpz_class> v(bc.dims[d]);
    const long nd = num[d].dim();
    for (long s = 0; s < nd; ++s) {
      const mpq_class& c = u_inv[d].at(int(s), int(rank[d] + t));
      if (c == 0) continue;
      if (c.get_den() != 1) throw std::logic_error("quotient: transform is not integral");
      const mpz_class ci = c.get_num();
      for (const auto& e : num[d].ech.k.col(int(s)))
        mpz_addmul(v[num[d].cols[e.row]].get_mpz_t(), ci.get_mpz_t(), e.val.get_mpz_t());
    }
    if (fieldp)
      for (auto& vv : v) {
        vv %= pm;
        if (vv < 0) vv += pm;
      }
    return v;
  };

  for (int d = 0; d <= top; ++d) {
    const long qd = num[d].dim() - rank[d];
    out.cx.dims[d] = qd;
    sparse::SMat b(int(bc.dims[d]), int(qd));
    for (int t = 0; t < int(qd); ++t) {
      auto v = lift_gen(d, t);
      for (long r = 0; r < long(v.size()); ++r)
        if (v[r] != 0) b.add(int(r), t, v[r]);
    }
    b.finalize();
    out.basis[d] = std::move(b);
  }

  out.cx.bnd[0] = sparse::SMat(0, int(out.cx.dims[0]));
  for (int d = 1; d <= top; ++d) {
    sparse::SMat g(int(out.cx.dims[d - 1]), int(out.cx.dims[d]));
    const long lorank = rank[d - 1], lodim = num[d - 1].dim();
    for (int t = 0; t < int(out.cx.dims[d]); ++t) {
      auto v = lift_gen(d, t);
      std::vector<mpz_class> w(bc.dims[d - 1]);
      for (long j = 0; j < long(v.size()); ++j) {
        if (v[j] == 0) continue;
        for (const auto& f : bc.bnd[d].col(int(j)))
          mpz_addmul(w[f.row].get_mpz_t(), v[j].get_mpz_t(), f.val.get_mpz_t());
      }
      std::vector<mpz_class> x(num[d - 1].cols.size());
      for (long r = 0; r < long(w.size()); ++r) {
        if (w[r] == 0) continue;
        if (fieldp && w[r] % pm == 0) continue;
        const long pp = num[d - 1].pos[r];
        if (pp >= 0) {
          x[pp] = w[r];
          continue;
        }
        if (num_kill[d - 1][r])
          throw std::logic_error("quotient: boundary hit a forbidden simplex");
        // otherwise the regime drops the row
      }
      std::vector<mpz_class> y;
      if (!sparse::solve_in_span(num[d - 1].ech, std::move(x), y))
        throw std::logic_error("quotient: boundary left the numerator span");
      for (long s = lorank; s < lodim; ++s) {
        mpz_class z = 0;
        for (long r = 0; r < lodim; ++r) {
          if (y[r] == 0) continue;
          const mpq_class& c = u[d - 1].at(int(s), int(r));
          if (c == 0) continue;
          if (c.get_den() != 1) throw std::logic_error("quotient: transform is not integral");
          mpz_addmul(z.get_mpz_t(), c.get_num().get_mpz_t(), y[r].get_mpz_t());
        }
        if (fieldp) {
          z %= pm;
          if (z < 0) z += pm;
        }
        if (z != 0) g.add(int(s - lorank), t, std::move(z));
      }
    }
    g.finalize();
    out.cx.bnd[d] = std::move(g);
  }
  return out;
}

}  // namespace

IntersectionComplex intersection_complex(const FilteredComplex& x, const Perversity& p,
                                         const CoefficientSpec& coeff) {
  if (coeff.regime == CoeffRegime::saralegi) return saralegi_complex(x, p, coeff.ring);
  StratView view(x, p);
  return build_plain(view, coeff);
}

IntersectionComplex intersection_complex(const BifilteredComplex& x, const ProductPerversity& q,
                                         const CoefficientSpec& coeff) {
  if (coeff.regime == CoeffRegime::saralegi)
    throw std::invalid_argument("the corrected-chain regime needs a single perversity");
  StratView view(x, q);
  return build_plain(view, coeff);
}

IntersectionComplex saralegi_complex(const FilteredComplex& x, const Perversity& p,
                                     const RingSpec& ring) {
  // values one above p, except that codimension 0 stays at 0; the difference
  // only touches the always-satisfied top-stratum condition
  std::vector<int> bumped = p.values();
  for (size_t k = 1; k < bumped.size(); ++k) ++bumped[k];
  const Perversity p1(std::move(bumped));
  const StratView vp(x, p), vp1(x, p1);
  const CoefficientSpec coeff{ring, CoeffRegime::saralegi};
  const RingSpec work = work_ring(ring);

  BoundedChainComplex bc = boundary_matrices(x, RingSpec::Z());
  const int top = bc.top();

  // closure of the strata whose value exceeds the classical range
  std::vector<std::vector<char>> mark(top + 1);
  for (int d = 0; d <= top; ++d) mark[d].assign(x.simplices(d).size(), 0);
  for (int d = top; d >= 0; --d) {
    const auto& ss = x.simplices(d);
    for (size_t i = 0; i < ss.size(); ++i) {
      if (!mark[d][i]) {
        const auto pr = vp.simplex_pair(ss[i]);
        if (vp.bad_stratum_value(pr[0], pr[1])) mark[d][i] = 1;
      }
      if (!mark[d][i] || d == 0) continue;
      Simplex f(ss[i].size() - 1);
      for (size_t omit = 0; omit < ss[i].size(); ++omit) {
        size_t w = 0;
        for (size_t r = 0; r < ss[i].size(); ++r)
          if (r != omit) f[w++] = ss[i][r];
        const long fi = x.index_of(f);
        if (fi < 0) throw std::logic_error("face closure violated");
        mark[d - 1][fi] = 1;
      }
    }
  }

  std::vector<std::vector<char>> cols_u(top + 1), kill_u(top + 1);
  std::vector<std::vector<char>> cols_w(top + 1), kill_w(top + 1);
  for (int d = 0; d <= top; ++d) {
    const auto& ss = x.simplices(d);
    cols_u[d].assign(ss.size(), 0);
    kill_u[d].assign(ss.size(), 0);
    cols_w[d].assign(ss.size(), 0);
    kill_w[d].assign(ss.size(), 0);
    for (size_t i = 0; i < ss.size(); ++i) {
      const bool w_ok = mark[d][i] && vp1.allowable(ss[i]);
      const bool u_ok = w_ok || vp.allowable(ss[i]);
      cols_u[d][i] = u_ok;
      kill_u[d][i] = !u_ok;
      cols_w[d][i] = w_ok;
      kill_w[d][i] = !w_ok;
    }
  }

  std::vector<Part> num(top + 1), den(top + 1);
  for (int d = 0; d <= top; ++d) {
    num[d] = make_part(bc, d, cols_u[d], d > 0 ? kill_u[d - 1] : std::vector<char>{}, work);
    den[d] = make_part(bc, d, cols_w[d], d > 0 ? kill_w[d - 1] : std::vector<char>{}, work);
  }

  IntersectionComplex out = build_quotient(bc, num, den, kill_u, coeff);
  audit_complex(out, [&](int d, long r) { return cols_u[d][r] != 0; });
  return out;
}

GradedModule intersection_homology(const FilteredComplex& x, const Perversity& p,
                                   const CoefficientSpec& coeff) {
  return homology_of_complex(intersection_complex(x, p, coeff).cx);
}

GradedModule intersection_homology(const BifilteredComplex& x, const ProductPerversity& q,
                                   const CoefficientSpec& coeff) {
  return homology_of_complex(intersection_complex(x, q, coeff).cx);
}

GradedModule relative_intersection_homology(const FilteredComplex& x, const Perversity& p,
                                            const CoefficientSpec& coeff,
                                            const std::vector<char>& in_a) {
  if (coeff.regime == CoeffRegime::saralegi)
    throw std::invalid_argument("relative homology is not defined for the corrected-chain regime");
  if (long(in_a.size()) != x.vertex_count())
    throw std::invalid_argument("relative homology: vertex membership vector has the wrong size");
  StratView view(x, p);
  const RingSpec work = work_ring(coeff.ring);
  BoundedChainComplex bc = boundary_matrices(x, RingSpec::Z());
  const int top = bc.top();

  std::vector<std::vector<char>> colin(top + 1), kill(top + 1), col_a(top + 1);
  for (int d = 0; d <= top; ++d) {
    const auto& ss = x.simplices(d);
    colin[d].assign(ss.size(), 0);
    kill[d].assign(ss.size(), 0);
    col_a[d].assign(ss.size(), 0);
    for (size_t i = 0; i < ss.size(); ++i) {
      if (coeff.regime == CoeffRegime::stratified_zero && !view.top_stratum(ss[i]))
        continue;
      if (!view.allowable(ss[i])) {
        kill[d][i] = 1;
        continue;
      }
      colin[d][i] = 1;
      bool inside = true;
      for (int v : ss[i])
        if (!in_a[v]) {
          inside = false;
          break;
        }
      if (inside) col_a[d][i] = 1;
    }
  }

  std::vector<Part> num(top + 1), den(top + 1);
  for (int d = 0; d <= top; ++d) {
    num[d] = make_part(bc, d, colin[d], d > 0 ? kill[d - 1] : std::vector<char>{}, work);
    den[d] = make_part(bc, d, col_a[d], d > 0 ? kill[d - 1] : std::vector<char>{}, work);
  }

  IntersectionComplex q = build_quotient(bc, num, den, kill, coeff);
  audit_complex(q, [&](int d, long r) { return colin[d][r] != 0; });
  return homology_of_complex(q.cx);
}

Chain boundary_chain(const FilteredComplex& x, const Chain& c) {
  if (c.degree < 0) return Chain{-1, {}};
  if (long(c.coord.size()) != x.count(c.degree))
    throw std::invalid_argument("boundary: chain length does not match the complex");
  if (c.degree == 0) return Chain{-1, {}};
  BoundedChainComplex bc = boundary_matrices(x, RingSpec::Z());
  Chain out{c.degree - 1, std::vector<mpz_class>(bc.dims[c.degree - 1])};
  for (long j = 0; j < long(c.coord.size()); ++j) {
    if (c.coord[j] == 0) continue;
    for (const auto& e : bc.bnd[c.degree].col(int(j)))
      mpz_addmul(out.coord[e.row].get_mpz_t(), c.coord[j].get_mpz_t(), e.val.get_mpz_t());
  }
  return out;
}

bool chain_allowable(const StratView& view, const Chain& c) {
  if (c.degree < 0) return true;
  const FilteredComplex& x = view.carrier();
  if (long(c.coord.size()) != x.count(c.degree))
    throw std::invalid_argument("allowability: chain length does not match the complex");
  const auto check = [&](const Chain& ch) {
    const auto& ss = x.simplices(ch.degree);
    for (long j = 0; j < long(ch.coord.size()); ++j)
      if (ch.coord[j] != 0 && !view.allowable(ss[j])) return false;
    return true;
  };
  if (!check(c)) return false;
  Chain b = boundary_chain(x, c);
  if (b.degree >= 0 && !check(b)) return false;
  return true;
}

Chain cross_chain(const StratView& vx, const Chain& xi, const StratView& vy, const Chain& eta,
                  const BifilteredComplex& xy, const ProductPerversity& q) {
  if (vx.arity_two() || vy.arity_two())
    throw std::invalid_argument("cross product: factors must carry single filtrations");
  const FilteredComplex& X = vx.carrier();
  const FilteredComplex& Y = vy.carrier();
  if (xy.link_offset != 0 ||
      xy.carrier.vertex_count() != X.vertex_count() * Y.vertex_count())
    throw std::invalid_argument("cross product: target is not the product of the factors");
  if (xi.degree < 0 || eta.degree < 0)
    throw std::invalid_argument("cross product: chains need a degree");
  if (long(xi.coord.size()) != X.count(xi.degree) || long(eta.coord.size()) != Y.count(eta.degree))
    throw std::invalid_argument("cross product: chain length does not match the complex");

  const int kmax = std::min(q.maxk(), vx.max_k());
  const int lmax = std::min(q.maxl(), vy.max_k());
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= lmax; ++l)
      if (q.at(k, l) < vx.q_at(k, 0) + vy.q_at(l, 0))
        throw std::invalid_argument("cross product: biperversity below the sum of the factors at (" +
                                    std::to_string(k) + "," + std::to_string(l) + ")");
  if (!chain_allowable(vx, xi))
    throw std::invalid_argument("cross product: left chain is not allowable");
  if (!chain_allowable(vy, eta))
    throw std::invalid_argument("cross product: right chain is not allowable");

  const int a = xi.degree, b = eta.degree;
  Chain out{a + b, std::vector<mpz_class>(xy.carrier.count(a + b))};
  const long vy_count = Y.vertex_count();
  const auto& xs = X.simplices(a);
  const auto& ys = Y.simplices(b);
  Simplex buf(a + b + 1);

  std::function<void(const Simplex&, const Simplex&, const mpz_class&, int, int, int, int)> walk =
      [&](const Simplex& s, const Simplex& t, const mpz_class& cv, int i, int j, int pos, int inv) {
        if (i == a && j == b) {
          const long idx = xy.carrier.index_of(buf);
          if (idx < 0) throw std::logic_error("cross product: staircase simplex missing");
          if (inv % 2 == 0)
            out.coord[idx] += cv;
          else
            out.coord[idx] -= cv;
          return;
        }
        if (i < a) {
          buf[pos + 1] = int(s[i + 1] * vy_count + t[j]);
          walk(s, t, cv, i + 1, j, pos + 1, inv);
        }
        if (j < b) {
          // a step on the right factor hops over every remaining left step
          buf[pos + 1] = int(s[i] * vy_count + t[j + 1]);
          walk(s, t, cv, i, j + 1, pos + 1, inv + (a - i));
        }
      };

  for (long sx = 0; sx < long(xs.size()); ++sx) {
    if (xi.coord[sx] == 0) continue;
    for (long sy = 0; sy < long(ys.size()); ++sy) {
      if (eta.coord[sy] == 0) continue;
      const mpz_class cv = xi.coord[sx] * eta.coord[sy];
      buf[0] = int(xs[sx][0] * vy_count + ys[sy][0]);
      walk(xs[sx], ys[sy], cv, 0, 0, 0, 0);
    }
  }

  StratView vq(xy, q);
  if (!chain_allowable(vq, out))
    throw std::logic_error("cross product: output failed its allowability audit");
  return out;
}

}  // namespace ih
