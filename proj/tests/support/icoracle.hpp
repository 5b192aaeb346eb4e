#pragma once

// Dense, literal reference for allowable-chain homology dimensions over a
// field (ranks over Q). Shares no machinery with the library: allowability is
// rescanned over the whole table and dimensions come from textbook rank
// counting, so agreement with the sparse kernel pipeline is meaningful.

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "ih/perv.hpp"
#include "ih/strat.hpp"
#include "oracles.hpp"

namespace icref {

struct RefSpace {
  std::vector<std::vector<ih::Simplex>> simps;  // by dimension
  std::vector<std::array<int, 2>> vp;           // per-vertex depth pairs
  std::vector<std::vector<int>> table;
};

inline RefSpace make_ref(const ih::FilteredComplex& x, const ih::Perversity& p) {
  RefSpace out;
  const int top = std::max(x.top_dim(), 0);
  out.simps.resize(top + 1);
  for (int d = 0; d <= top; ++d) {
    const auto& ss = x.simplices(d);
    out.simps[d].assign(ss.begin(), ss.end());
  }
  out.vp.resize(x.vertex_count());
  for (int v = 0; v < x.vertex_count(); ++v) out.vp[v] = {x.vertex_codim(v), 0};
  out.table.resize(p.max_codim() + 1);
  for (int k = 0; k <= p.max_codim(); ++k) out.table[k] = {p.at(k)};
  return out;
}

inline RefSpace make_ref(const ih::BifilteredComplex& x, const ih::ProductPerversity& q) {
  RefSpace out;
  const int top = std::max(x.carrier.top_dim(), 0);
  out.simps.resize(top + 1);
  for (int d = 0; d <= top; ++d) {
    const auto& ss = x.carrier.simplices(d);
    out.simps[d].assign(ss.begin(), ss.end());
  }
  out.vp = x.pair;
  out.table.resize(q.maxk() + 1);
  for (int k = 0; k <= q.maxk(); ++k) {
    out.table[k].resize(q.maxl() + 1);
    for (int l = 0; l <= q.maxl(); ++l) out.table[k][l] = q.at(k, l);
  }
  return out;
}

inline bool ref_allowed(const RefSpace& sp, const ih::Simplex& s) {
  const int i = int(s.size()) - 1;
  const int mk = int(sp.table.size()) - 1;
  const int ml = int(sp.table[0].size()) - 1;
  for (int k = 0; k <= mk; ++k)
    for (int l = 0; l <= ml; ++l) {
      if (k == 0 && l == 0) continue;
      int f = 0, fk = 0, fl = 0;
      for (int v : s) {
        if (sp.vp[v][0] < k || sp.vp[v][1] < l) continue;
        ++f;
        if (sp.vp[v][0] >= k + 1) ++fk;
        if (sp.vp[v][1] >= l + 1) ++fl;
      }
      if (f > fk && f > fl && f - 1 > i - k - l + sp.table[k][l]) return false;
    }
  return true;
}

inline long ref_rank(const oracle_ref::ZMat& m, const ih::RingSpec& ring) {
  if (oracle_ref::zrows(m) == 0 || oracle_ref::zcols(m) == 0) return 0;
  return oracle_ref::naive_rank(m, ring);
}

// Homology dimensions of the allowable-chain complex over a field (over Q:
// the free ranks). r0 restricts everything to the open top stratum first.
inline std::vector<long> ref_ih_dims(const RefSpace& sp, const ih::RingSpec& ring, bool r0) {
  const int top = int(sp.simps.size()) - 1;
  std::vector<std::map<ih::Simplex, int>> idx(top + 1);
  for (int d = 0; d <= top; ++d)
    for (int i = 0; i < int(sp.simps[d].size()); ++i) idx[d][sp.simps[d][i]] = i;

  auto ambient = [&](const ih::Simplex& s) {
    if (!r0) return true;
    int a = sp.vp[s[0]][0], b = sp.vp[s[0]][1];
    for (int v : s) {
      a = std::min(a, sp.vp[v][0]);
      b = std::min(b, sp.vp[v][1]);
    }
    return a == 0 && b == 0;
  };

  std::vector<std::vector<char>> amb(top + 1), alw(top + 1);
  std::vector<std::vector<int>> apos(top + 1);  // column position among allowed
  std::vector<std::vector<int>> rpos(top + 1);  // row position among ambient
  std::vector<long> acount(top + 1, 0), rcount(top + 1, 0), rbad(top + 1, 0);
  std::vector<std::vector<int>> bpos(top + 1);  // row position among ambient non-allowed
  for (int d = 0; d <= top; ++d) {
    const long n = long(sp.simps[d].size());
    amb[d].assign(n, 0);
    alw[d].assign(n, 0);
    apos[d].assign(n, -1);
    rpos[d].assign(n, -1);
    bpos[d].assign(n, -1);
    for (long i = 0; i < n; ++i) {
      const auto& s = sp.simps[d][i];
      if (!ambient(s)) continue;
      amb[d][i] = 1;
      rpos[d][i] = int(rcount[d]++);
      if (ref_allowed(sp, s)) {
        alw[d][i] = 1;
        apos[d][i] = int(acount[d]++);
      } else {
        bpos[d][i] = int(rbad[d]++);
      }
    }
  }

  // full[d]: boundary from the allowed d-columns into all ambient rows;
  // constr[d]: the same restricted to the non-allowed ambient rows
  std::vector<oracle_ref::ZMat> full(top + 2), constr(top + 2);
  for (int d = 1; d <= top; ++d) {
    full[d].assign(rcount[d - 1], std::vector<mpz_class>(acount[d], 0));
    constr[d].assign(rbad[d - 1], std::vector<mpz_class>(acount[d], 0));
    for (long i = 0; i < long(sp.simps[d].size()); ++i) {
      if (!alw[d][i]) continue;
      const auto& s = sp.simps[d][i];
      ih::Simplex f(s.size() - 1);
      for (size_t omit = 0; omit < s.size(); ++omit) {
        size_t w = 0;
        for (size_t r = 0; r < s.size(); ++r)
          if (r != omit) f[w++] = s[r];
        const int j = idx[d - 1].at(f);
        if (!amb[d - 1][j]) continue;
        const mpz_class sign = (omit % 2 == 0) ? 1 : -1;
        full[d][rpos[d - 1][j]][apos[d][i]] += sign;
        if (bpos[d - 1][j] >= 0) constr[d][bpos[d - 1][j]][apos[d][i]] += sign;
      }
    }
  }

  std::vector<long> out(top + 1, 0);
  for (int d = 0; d <= top; ++d) {
    const long rb = d == 0 ? 0 : ref_rank(full[d], ring);
    const long rn = d == top ? 0 : ref_rank(full[d + 1], ring);
    const long rc = d == top ? 0 : ref_rank(constr[d + 1], ring);
    out[d] = acount[d] - rb - rn + rc;
  }
  return out;
}

}  // namespace icref
