#include "ih/strat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ih {

namespace {

constexpr long long kCountCap = 1ll << 61;

uint64_t fnv1a(uint64_t h, long long x) {
  for (int i = 0; i < 8; ++i) {
    h ^= uint64_t(x >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

long long safe_binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    if (r > kCountCap / (n - k + i)) return kCountCap;
    r = r * (n - k + i) / i;
  }
  return r;
}

long long safe_factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) {
    if (r > kCountCap / i) return kCountCap;
    r *= i;
  }
  return r;
}

void check_budget(long long projected, const char* what) {
  long long cap = top_simplex_budget();
  if (projected > cap) {
    std::ostringstream os;
    os << what << " would carry ";
    if (projected >= kCountCap)
      os << "more than " << kCountCap;
    else
      os << projected;
    os << " top simplices, over the budget of " << cap;
    throw BudgetExceeded(os.str());
  }
}

}  // namespace

size_t SimplexHash::operator()(const Simplex& s) const {
  uint64_t h = 1469598103934665603ull;
  for (int v : s) h = fnv1a(h, v);
  return size_t(h);
}

FilteredComplex::FilteredComplex(int formal_dim) : n_(formal_dim) {
  if (n_ < -1) throw std::invalid_argument("complex: formal dimension below -1");
  if (n_ >= 0) by_dim_.resize(size_t(n_) + 1);
}

int FilteredComplex::add_vertex(int label) {
  if (finalized_) throw std::logic_error("complex: add_vertex after finalize");
  if (n_ < 0) throw std::invalid_argument("complex: the empty complex has no skeleton");
  if (label < 0 || label > n_)
    throw std::invalid_argument("complex: vertex label " + std::to_string(label) +
                                " outside 0.." + std::to_string(n_));
  labels_.push_back(label);
  return int(labels_.size()) - 1;
}

void FilteredComplex::push_raw(const Simplex& s) {
  if (finalized_) throw std::logic_error("complex: insert after finalize");
  if (s.empty()) throw std::invalid_argument("complex: empty simplex");
  int d = int(s.size()) - 1;
  if (d > n_)
    throw std::invalid_argument("complex: simplex of dimension " + std::to_string(d) +
                                " in a complex of formal dimension " + std::to_string(n_));
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= vertex_count())
      throw std::invalid_argument("complex: unknown vertex id " + std::to_string(s[i]));
    if (i && s[i] <= s[i - 1])
      throw std::invalid_argument("complex: vertex ids must strictly increase");
  }
  by_dim_[size_t(d)].push_back(s);
}

void FilteredComplex::add_simplex(const Simplex& s) {
  if (finalized_) throw std::logic_error("complex: insert after finalize");
  if (index_.count(s)) return;
  push_raw(s);
  index_.emplace(s, -2);
  if (s.size() > 1) {
    Simplex f;
    f.reserve(s.size() - 1);
    for (size_t i = 0; i < s.size(); ++i) {
      f.clear();
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) f.push_back(s[j]);
      add_simplex(f);
    }
  }
}

void FilteredComplex::finalize() {
  if (finalized_) throw std::logic_error("complex: finalize called twice");
  index_.clear();
  for (size_t d = 0; d < by_dim_.size(); ++d) {
    auto& lst = by_dim_[d];
    std::sort(lst.begin(), lst.end());
    for (size_t i = 1; i < lst.size(); ++i)
      if (lst[i] == lst[i - 1]) throw std::logic_error("complex: duplicate simplex inserted");
    for (size_t i = 0; i < lst.size(); ++i) index_.emplace(lst[i], long(i));
  }
  for (size_t d = 1; d < by_dim_.size(); ++d) {
    Simplex f;
    for (const auto& s : by_dim_[d]) {
      for (size_t i = 0; i < s.size(); ++i) {
        f.clear();
        for (size_t j = 0; j < s.size(); ++j)
          if (j != i) f.push_back(s[j]);
        if (!index_.count(f))
          throw std::invalid_argument("complex: face missing, not closed under faces");
      }
    }
  }
  finalized_ = true;
}

int FilteredComplex::vertex_label(int v) const {
  if (v < 0 || v >= vertex_count())
    throw std::out_of_range("complex: vertex id " + std::to_string(v));
  return labels_[size_t(v)];
}

int FilteredComplex::top_dim() const {
  for (int d = int(by_dim_.size()) - 1; d >= 0; --d)
    if (!by_dim_[size_t(d)].empty()) return d;
  return -1;
}

long long FilteredComplex::count(int d) const {
  if (d < 0 || d >= int(by_dim_.size())) return 0;
  return (long long)(by_dim_[size_t(d)].size());
}

long long FilteredComplex::total_count() const {
  long long t = 0;
  for (const auto& lst : by_dim_) t += (long long)(lst.size());
  return t;
}

const std::vector<Simplex>& FilteredComplex::simplices(int d) const {
  static const std::vector<Simplex> empty;
  require_finalized("simplices");
  if (d < 0 || d >= int(by_dim_.size())) return empty;
  return by_dim_[size_t(d)];
}

long FilteredComplex::index_of(const Simplex& s) const {
  require_finalized("index_of");
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

int FilteredComplex::stratum_label(const Simplex& s) const {
  if (s.empty()) throw std::invalid_argument("complex: stratum of the empty simplex");
  int m = 0;
  for (int v : s) m = std::max(m, vertex_label(v));
  return m;
}

std::vector<int> FilteredComplex::occupied_codims() const {
  std::vector<char> seen(size_t(std::max(n_, 0)) + 1, 0);
  for (const auto& lst : by_dim_)
    for (const auto& s : lst) seen[size_t(stratum_label(s))] = 1;
  std::vector<int> out;
  for (int c = 1; c <= n_; ++c)
    if (seen[size_t(n_ - c)]) out.push_back(c);
  return out;
}

int FilteredComplex::max_occupied_codim() const {
  auto occ = occupied_codims();
  return occ.empty() ? 0 : occ.back();
}

uint64_t FilteredComplex::fingerprint() const {
  require_finalized("fingerprint");
  uint64_t h = 1469598103934665603ull;
  h = fnv1a(h, n_);
  h = fnv1a(h, vertex_count());
  for (int l : labels_) h = fnv1a(h, l);
  for (const auto& lst : by_dim_) {
    h = fnv1a(h, (long long)(lst.size()));
    for (const auto& s : lst)
      for (int v : s) h = fnv1a(h, v);
  }
  return h;
}

std::string FilteredComplex::summary() const {
  std::ostringstream os;
  os << "formal dim " << n_ << ", " << vertex_count() << " vertices, counts";
  if (top_dim() < 0) os << " (none)";
  for (int d = 0; d <= top_dim(); ++d) os << " " << count(d);
  return os.str();
}

void FilteredComplex::require_finalized(const char* op) const {
  if (!finalized_)
    throw std::logic_error(std::string("complex: ") + op + " before finalize");
}

std::array<int, 2> BifilteredComplex::simplex_pair(const Simplex& s) const {
  if (s.empty()) throw std::invalid_argument("complex: stratum of the empty simplex");
  std::array<int, 2> p = {m + 1, n + 1};
  for (int v : s) {
    p[0] = std::min(p[0], pair[size_t(v)][0]);
    p[1] = std::min(p[1], pair[size_t(v)][1]);
  }
  return p;
}

int BifilteredComplex::stratum_label(const Simplex& s) const {
  auto p = simplex_pair(s);
  return (m - p[0]) + (n - p[1]) - link_offset;
}

std::vector<std::array<int, 2>> BifilteredComplex::occupied_pairs() const {
  std::set<std::array<int, 2>> seen;
  for (int d = 0; d <= carrier.top_dim(); ++d)
    for (const auto& s : carrier.simplices(d)) {
      auto p = simplex_pair(s);
      if (p[0] + p[1] > 0) seen.insert(p);
    }
  return std::vector<std::array<int, 2>>(seen.begin(), seen.end());
}

uint64_t BifilteredComplex::fingerprint() const {
  uint64_t h = carrier.fingerprint();
  h = fnv1a(h, m);
  h = fnv1a(h, n);
  h = fnv1a(h, link_offset);
  for (const auto& p : pair) {
    h = fnv1a(h, p[0]);
    h = fnv1a(h, p[1]);
  }
  return h;
}

std::string BifilteredComplex::summary() const {
  std::ostringstream os;
  os << carrier.summary() << ", factor dims " << m << "+" << n
     << (link_offset ? ", join offset" : "");
  return os.str();
}

FilteredComplex cone(const FilteredComplex& base) {
  if (!base.finalized()) throw std::logic_error("cone: base not finalized");
  check_budget(std::max(base.count(base.top_dim()), 1ll), "the cone");
  FilteredComplex out(base.formal_dim() + 1);
  for (int v = 0; v < base.vertex_count(); ++v) out.add_vertex(base.vertex_label(v) + 1);
  int apex = out.add_vertex(0);
  out.push_raw({apex});
  for (int d = 0; d <= base.top_dim(); ++d)
    for (const auto& s : base.simplices(d)) {
      out.push_raw(s);
      Simplex t = s;
      t.push_back(apex);
      out.push_raw(t);
    }
  out.finalize();
  return out;
}

FilteredComplex suspension(const FilteredComplex& base) {
  if (!base.finalized()) throw std::logic_error("suspension: base not finalized");
  check_budget(std::max(2 * base.count(base.top_dim()), 2ll), "the suspension");
  FilteredComplex out(base.formal_dim() + 1);
  for (int v = 0; v < base.vertex_count(); ++v) out.add_vertex(base.vertex_label(v) + 1);
  int north = out.add_vertex(0);
  int south = out.add_vertex(0);
  out.push_raw({north});
  out.push_raw({south});
  for (int d = 0; d <= base.top_dim(); ++d)
    for (const auto& s : base.simplices(d)) {
      out.push_raw(s);
      Simplex t = s;
      t.push_back(north);
      out.push_raw(t);
      t.back() = south;
      out.push_raw(t);
    }
  out.finalize();
  return out;
}

FilteredComplex simplex_link(const FilteredComplex& x, const Simplex& s) {
  if (!x.finalized()) throw std::logic_error("link: complex not finalized");
  if (x.index_of(s) < 0) throw std::invalid_argument("link: simplex not in the complex");
  int drop = int(s.size());
  std::set<int> used;
  std::vector<Simplex> kept;
  for (int d = drop; d <= x.top_dim(); ++d)
    for (const auto& t : x.simplices(d)) {
      // t must contain every vertex of s; both are sorted
      Simplex rest;
      rest.reserve(t.size() - size_t(drop));
      size_t i = 0;
      for (int v : t) {
        if (i < s.size() && v == s[i])
          ++i;
        else
          rest.push_back(v);
      }
      if (int(i) != drop) continue;
      for (int v : rest) used.insert(v);
      kept.push_back(std::move(rest));
    }
  FilteredComplex out(x.formal_dim() - drop);
  std::map<int, int> remap;
  for (int v : used) remap[v] = out.add_vertex(std::max(x.vertex_label(v) - drop, 0));
  for (auto& t : kept) {
    for (int& v : t) v = remap[v];
    out.push_raw(t);
  }
  out.finalize();
  return out;
}

FilteredComplex vertex_link(const FilteredComplex& x, int v) {
  return simplex_link(x, Simplex{v});
}

BifilteredComplex product(const FilteredComplex& x, const FilteredComplex& y) {
  if (!x.finalized() || !y.finalized()) throw std::logic_error("product: factor not finalized");
  if (x.formal_dim() < 0 || y.formal_dim() < 0)
    throw std::invalid_argument("product: factors must be nonempty");
  int ax = x.top_dim(), ay = y.top_dim();
  long long tops = x.count(ax) * y.count(ay);
  long long ways = safe_binom(ax + ay, ax);
  long long projected = (tops != 0 && ways > kCountCap / std::max(tops, 1ll)) ? kCountCap : tops * ways;
  check_budget(projected, "the product");

  BifilteredComplex out;
  out.m = x.formal_dim();
  out.n = y.formal_dim();
  out.link_offset = 0;
  out.carrier = FilteredComplex(out.m + out.n);
  const int VY = y.vertex_count();
  for (int v = 0; v < x.vertex_count(); ++v)
    for (int w = 0; w < VY; ++w) {
      out.carrier.add_vertex(x.vertex_label(v) + y.vertex_label(w));
      out.pair.push_back({out.m - x.vertex_label(v), out.n - y.vertex_label(w)});
    }

  Simplex path;
  for (int a = 0; a <= ax; ++a)
    for (const auto& sv : x.simplices(a))
      for (int b = 0; b <= ay; ++b)
        for (const auto& tv : y.simplices(b)) {
          path.clear();
          std::function<void(int, int)> go = [&](int i, int j) {
            path.push_back(sv[size_t(i)] * VY + tv[size_t(j)]);
            if (i == a && j == b) {
              out.carrier.push_raw(path);
            } else {
              if (i < a) go(i + 1, j);
              if (j < b) go(i, j + 1);
              if (i < a && j < b) go(i + 1, j + 1);
            }
            path.pop_back();
          };
          go(0, 0);
        }
  out.carrier.finalize();
  return out;
}

BifilteredComplex join_complex(const FilteredComplex& x, const FilteredComplex& y) {
  if (!x.finalized() || !y.finalized()) throw std::logic_error("join: factor not finalized");
  long long tops = std::max(x.count(x.top_dim()), 1ll) * std::max(y.count(y.top_dim()), 1ll);
  check_budget(tops, "the join");

  const int kx = x.formal_dim(), ly = y.formal_dim();
  BifilteredComplex out;
  out.m = kx + 1;
  out.n = ly + 1;
  out.link_offset = 1;
  out.carrier = FilteredComplex(kx + ly + 1);
  const int VX = x.vertex_count();
  for (int v = 0; v < VX; ++v) {
    out.carrier.add_vertex(x.vertex_label(v));
    out.pair.push_back({kx - x.vertex_label(v), out.n});
  }
  for (int w = 0; w < y.vertex_count(); ++w) {
    out.carrier.add_vertex(y.vertex_label(w));
    out.pair.push_back({out.m, ly - y.vertex_label(w)});
  }
  for (int d = 0; d <= x.top_dim(); ++d)
    for (const auto& s : x.simplices(d)) out.carrier.push_raw(s);
  for (int e = 0; e <= y.top_dim(); ++e)
    for (const auto& t : y.simplices(e)) {
      Simplex ts = t;
      for (int& v : ts) v += VX;
      out.carrier.push_raw(ts);
      for (int d = 0; d <= x.top_dim(); ++d)
        for (const auto& s : x.simplices(d)) {
          Simplex u = s;
          u.insert(u.end(), ts.begin(), ts.end());
          out.carrier.push_raw(u);
        }
    }
  out.carrier.finalize();
  return out;
}

namespace {

// Shared subdivision builder; label_of decides the new vertex labels.
FilteredComplex sd_carrier(const FilteredComplex& x,
                           const std::function<int(const Simplex&)>& label_of,
                           std::vector<Simplex>* barycenter_of) {
  if (!x.finalized()) throw std::logic_error("subdivision: complex not finalized");
  int top = x.top_dim();
  long long projected = x.count(top);
  long long ways = safe_factorial(top + 1);
  projected = (projected != 0 && ways > kCountCap / std::max(projected, 1ll)) ? kCountCap
                                                                              : projected * ways;
  check_budget(std::max(projected, 1ll), "the subdivision");

  FilteredComplex out(x.formal_dim());
  std::vector<long> offset(size_t(top) + 2, 0);
  for (int d = 0; d <= top; ++d) offset[size_t(d) + 1] = offset[size_t(d)] + x.count(d);
  for (int d = 0; d <= top; ++d)
    for (const auto& s : x.simplices(d)) {
      out.add_vertex(label_of(s));
      if (barycenter_of) barycenter_of->push_back(s);
    }
  auto id_of = [&](const Simplex& s) {
    return int(offset[s.size() - 1] + x.index_of(s));
  };

  Simplex path;
  std::function<void(const Simplex&)> down = [&](const Simplex& f) {
    Simplex chain(path.rbegin(), path.rend());
    out.push_raw(chain);
    int k = int(f.size());
    if (k == 1) return;
    Simplex g;  // local: f may alias the caller's subset buffer
    for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
      g.clear();
      for (int b = 0; b < k; ++b)
        if (mask & (1u << b)) g.push_back(f[size_t(b)]);
      path.push_back(id_of(g));
      down(g);
      path.pop_back();
    }
  };
  for (int d = 0; d <= top; ++d)
    for (const auto& s : x.simplices(d)) {
      path.assign(1, id_of(s));
      down(s);
    }
  out.finalize();
  return out;
}

}  // namespace

FilteredComplex barycentric_subdivision(const FilteredComplex& x) {
  return sd_carrier(
      x, [&](const Simplex& s) { return x.stratum_label(s); }, nullptr);
}

BifilteredComplex barycentric_subdivision(const BifilteredComplex& x) {
  BifilteredComplex out;
  out.m = x.m;
  out.n = x.n;
  out.link_offset = x.link_offset;
  std::vector<Simplex> bary;
  out.carrier = sd_carrier(
      x.carrier, [&](const Simplex& s) { return x.stratum_label(s); }, &bary);
  out.pair.reserve(bary.size());
  for (const auto& s : bary) out.pair.push_back(x.simplex_pair(s));
  return out;
}

BoundedChainComplex boundary_matrices(const FilteredComplex& x, const RingSpec& ring) {
  if (!x.finalized()) throw std::logic_error("boundaries: complex not finalized");
  BoundedChainComplex c;
  c.ring = ring;
  int top = x.top_dim();
  if (top < 0) {
    c.dims = {0};
    c.bnd = {sparse::SMat(0, 0)};
    return c;
  }
  c.dims.resize(size_t(top) + 1);
  c.bnd.resize(size_t(top) + 1);
  for (int d = 0; d <= top; ++d) c.dims[size_t(d)] = long(x.count(d));
  c.bnd[0] = sparse::SMat(0, int(x.count(0)));
  Simplex f;
  for (int d = 1; d <= top; ++d) {
    sparse::SMat m(int(x.count(d - 1)), int(x.count(d)));
    const auto& lst = x.simplices(d);
    for (size_t j = 0; j < lst.size(); ++j) {
      const Simplex& s = lst[j];
      for (size_t i = 0; i < s.size(); ++i) {
        f.clear();
        for (size_t t = 0; t < s.size(); ++t)
          if (t != i) f.push_back(s[t]);
        m.add(int(x.index_of(f)), int(j), (i % 2 == 0) ? 1 : -1);
      }
    }
    m.finalize();
    c.bnd[size_t(d)] = std::move(m);
  }
  return c;
}

BoundedChainComplex boundary_matrices(const BifilteredComplex& x, const RingSpec& ring) {
  return boundary_matrices(x.carrier, ring);
}

namespace {

// Purity marking: faces of formal-top simplices, walked downward.
template <typename LabelOf>
void validate_core(const FilteredComplex& x, int formal_dim, LabelOf label_of, StratumReport& r) {
  int top = x.top_dim();
  std::map<int, long long> sizes;
  for (int d = 0; d <= top; ++d)
    for (const auto& s : x.simplices(d)) {
      int lab = label_of(s);
      sizes[lab] += 1;
      if (int(s.size()) - 1 > lab) {
        r.skeleta_ok = false;
        if (r.problems.size() < 8)
          r.problems.push_back("simplex of dimension " + std::to_string(int(s.size()) - 1) +
                               " lies in skeleton piece " + std::to_string(lab));
      }
      if (formal_dim - lab == 1) {
        r.no_codim_one = false;
        if (r.problems.size() < 8)
          r.problems.push_back("occupied stratum of codimension 1 (label " +
                               std::to_string(lab) + ")");
      }
    }
  for (auto& [lab, cnt] : sizes) r.stratum_sizes.push_back({lab, cnt});

  if (top != formal_dim) {
    r.pure = false;
    r.problems.push_back("no simplices of the formal dimension " + std::to_string(formal_dim));
    return;
  }
  if (top < 0) return;
  std::vector<std::vector<char>> covered(size_t(top) + 1);
  for (int d = 0; d <= top; ++d) covered[size_t(d)].assign(size_t(x.count(d)), 0);
  std::fill(covered[size_t(top)].begin(), covered[size_t(top)].end(), 1);
  Simplex f;
  for (int d = top; d >= 1; --d) {
    const auto& lst = x.simplices(d);
    for (size_t j = 0; j < lst.size(); ++j) {
      if (!covered[size_t(d)][j]) continue;
      const Simplex& s = lst[j];
      for (size_t i = 0; i < s.size(); ++i) {
        f.clear();
        for (size_t t = 0; t < s.size(); ++t)
          if (t != i) f.push_back(s[t]);
        covered[size_t(d) - 1][size_t(x.index_of(f))] = 1;
      }
    }
  }
  long long uncovered = 0;
  for (int d = 0; d <= top; ++d)
    for (size_t j = 0; j < covered[size_t(d)].size(); ++j)
      if (!covered[size_t(d)][j]) {
        ++uncovered;
        if (r.problems.size() < 8)
          r.problems.push_back("simplex of dimension " + std::to_string(d) +
                               " is not a face of any top simplex");
      }
  if (uncovered) {
    r.pure = false;
    if (r.problems.size() >= 8)
      r.problems.push_back("... " + std::to_string(uncovered) + " uncovered simplices in total");
  }
}

}  // namespace

StratumReport validate_space(const FilteredComplex& x) {
  if (!x.finalized()) throw std::logic_error("validate: complex not finalized");
  StratumReport r;
  validate_core(
      x, x.formal_dim(), [&](const Simplex& s) { return x.stratum_label(s); }, r);
  return r;
}

StratumReport validate_space(const BifilteredComplex& x) {
  if (!x.carrier.finalized()) throw std::logic_error("validate: complex not finalized");
  StratumReport r;
  for (int v = 0; v < x.carrier.vertex_count(); ++v) {
    auto p = x.pair[size_t(v)];
    bool in_range = p[0] >= 0 && p[0] <= x.m && p[1] >= 0 && p[1] <= x.n;
    int want = (x.m - p[0]) + (x.n - p[1]) - x.link_offset;
    if (!in_range || want != x.carrier.vertex_label(v)) {
      r.skeleta_ok = false;
      if (r.problems.size() < 8)
        r.problems.push_back("vertex " + std::to_string(v) +
                             " has an inconsistent codimension pair");
    }
  }
  validate_core(
      x.carrier, x.carrier.formal_dim(), [&](const Simplex& s) { return x.stratum_label(s); },
      r);
  return r;
}

std::string StratumReport::str() const {
  std::ostringstream os;
  os << (ok() ? "valid stratified space" : "problems found") << "\n";
  os << "  pure: " << (pure ? "yes" : "no") << ", codimension one strata: "
     << (no_codim_one ? "none" : "PRESENT") << ", skeleton dimensions: "
     << (skeleta_ok ? "ok" : "VIOLATED") << "\n";
  os << "  stratum sizes (label: simplices):";
  for (auto& [lab, cnt] : stratum_sizes) os << " " << lab << ":" << cnt;
  os << "\n";
  for (const auto& p : problems) os << "  ! " << p << "\n";
  return os.str();
}

}  // namespace ih
