#include "ih/fgmod.hpp"

#include <algorithm>
#include <sstream>

namespace ih {

namespace {

void require_same_ring(const FgModule& a, const FgModule& b) {
  if (a.ring != b.ring)
    throw std::invalid_argument("module operation across rings " + a.ring.name() + " and " + b.ring.name());
}

std::string power(const std::string& base, long e, bool wrap) {
  if (e == 1) return base;
  if (wrap) return "(" + base + ")^" + std::to_string(e);
  return base + "^" + std::to_string(e);
}

}  // namespace

std::vector<mpz_class> normalize_invariant_factors(std::vector<mpz_class> v) {
  for (auto& x : v) {
    if (x == 0) throw std::invalid_argument("zero is not a torsion order");
    if (x < 0) x = -x;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < v.size(); ++i)
      for (size_t j = i + 1; j < v.size(); ++j) {
        mpz_class g = gcd(v[i], v[j]);
        if (v[j] % v[i] != 0) {
          mpz_class l = v[i] / g * v[j];
          v[i] = g;
          v[j] = l;
          changed = true;
        }
      }
  }
  std::sort(v.begin(), v.end());
  v.erase(std::remove(v.begin(), v.end(), mpz_class(1)), v.end());
  return v;
}

bool FgModule::operator==(const FgModule& o) const {
  return ring == o.ring && rank == o.rank && torsion == o.torsion;
}

std::string FgModule::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    switch (ring.kind) {
      case RingSpec::Kind::integers: os << power("Z", rank, false); break;
      case RingSpec::Kind::rationals: os << power("Q", rank, false); break;
      case RingSpec::Kind::prime_field: os << power(ring.name(), rank, true); break;
    }
    first = false;
  }
  mpz_class cur = 0;
  long mult = 0;
  auto flush = [&]() {
    if (mult == 0) return;
    os << (first ? "" : " + ") << power("Z/" + cur.get_str(), mult, true);
    first = false;
  };
  for (const auto& t : torsion) {
    if (t == cur) {
      ++mult;
    } else {
      flush();
      cur = t;
      mult = 1;
    }
  }
  flush();
  return os.str();
}

FgModule fg_zero(const RingSpec& ring) { return FgModule{ring, 0, {}}; }

FgModule fg_free(const RingSpec& ring, long rank) {
  if (rank < 0) throw std::invalid_argument("negative rank");
  return FgModule{ring, rank, {}};
}

FgModule fg_cyclic(const RingSpec& ring, const mpz_class& order) {
  if (order == 0) return fg_free(ring, 1);
  mpz_class d = abs(order);
  switch (ring.kind) {
    case RingSpec::Kind::integers:
      return d == 1 ? fg_zero(ring) : FgModule{ring, 0, {d}};
    case RingSpec::Kind::rationals:
      return fg_zero(ring);
    case RingSpec::Kind::prime_field:
      return d % mpz_class(ring.p) == 0 ? fg_free(ring, 1) : fg_zero(ring);
  }
  return fg_zero(ring);
}

FgModule direct_sum(const FgModule& a, const FgModule& b) {
  require_same_ring(a, b);
  std::vector<mpz_class> t = a.torsion;
  t.insert(t.end(), b.torsion.begin(), b.torsion.end());
  return FgModule{a.ring, a.rank + b.rank, normalize_invariant_factors(std::move(t))};
}

FgModule tensor(const FgModule& a, const FgModule& b) {
  require_same_ring(a, b);
  FgModule out{a.ring, a.rank * b.rank, {}};
  std::vector<mpz_class> t;
  for (const auto& d : a.torsion)
    for (long i = 0; i < b.rank; ++i) t.push_back(d);
  for (const auto& e : b.torsion)
    for (long i = 0; i < a.rank; ++i) t.push_back(e);
  for (const auto& d : a.torsion)
    for (const auto& e : b.torsion) t.push_back(gcd(d, e));
  out.torsion = normalize_invariant_factors(std::move(t));
  return out;
}

FgModule torsion_product(const FgModule& a, const FgModule& b) {
  require_same_ring(a, b);
  std::vector<mpz_class> t;
  for (const auto& d : a.torsion)
    for (const auto& e : b.torsion) t.push_back(gcd(d, e));
  return FgModule{a.ring, 0, normalize_invariant_factors(std::move(t))};
}

FgModule GradedModule::at(int i) const {
  if (i >= 0 && i < int(deg.size())) return deg[i];
  return fg_zero(ring);
}

void GradedModule::set(int i, FgModule m) {
  if (i < 0) {
    if (!m.is_zero()) throw std::invalid_argument("nonzero module in negative degree");
    return;
  }
  if (m.ring != ring) throw std::invalid_argument("graded module ring mismatch");
  if (i >= int(deg.size())) deg.resize(i + 1, fg_zero(ring));
  deg[i] = std::move(m);
}

int GradedModule::top_nonzero() const {
  for (int i = int(deg.size()) - 1; i >= 0; --i)
    if (!deg[i].is_zero()) return i;
  return -1;
}

bool GradedModule::operator==(const GradedModule& o) const {
  if (ring != o.ring) return false;
  const int top = std::max(int(deg.size()), int(o.deg.size()));
  for (int i = 0; i < top; ++i)
    if (!(at(i) == o.at(i))) return false;
  return true;
}

std::string GradedModule::str() const {
  std::ostringstream os;
  const int top = std::max(top_nonzero(), 0);
  os << "(";
  for (int i = 0; i <= top; ++i) os << (i ? ", " : "") << at(i).str();
  os << ")";
  return os.str();
}

GradedModule shift_degrees(const GradedModule& a, int by) {
  GradedModule out(a.ring);
  for (int i = 0; i < int(a.deg.size()); ++i) {
    if (a.deg[i].is_zero()) continue;
    if (i + by < 0) throw std::invalid_argument("degree shift below zero");
    out.set(i + by, a.deg[i]);
  }
  return out;
}

GradedModule direct_sum(const GradedModule& a, const GradedModule& b) {
  if (a.ring != b.ring) throw std::invalid_argument("graded sum across rings");
  GradedModule out(a.ring);
  const int top = std::max(int(a.deg.size()), int(b.deg.size()));
  for (int i = 0; i < top; ++i) out.set(i, direct_sum(a.at(i), b.at(i)));
  return out;
}

GradedModule kunneth_rhs(const GradedModule& a, const GradedModule& b) {
  if (a.ring != b.ring) throw std::invalid_argument("kunneth_rhs across rings");
  GradedModule out(a.ring);
  const int ta = int(a.deg.size()) - 1, tb = int(b.deg.size()) - 1;
  for (int i = 0; i <= ta + tb + 1; ++i) {
    FgModule acc = fg_zero(a.ring);
    for (int s = std::max(0, i - tb); s <= std::min(i, ta); ++s)
      acc = direct_sum(acc, tensor(a.at(s), b.at(i - s)));
    for (int s = std::max(0, i - 1 - tb); s <= std::min(i - 1, ta); ++s)
      acc = direct_sum(acc, torsion_product(a.at(s), b.at(i - 1 - s)));
    out.set(i, std::move(acc));
  }
  return out;
}

GradedModule reduce_degree_zero(const GradedModule& a) {
  if (a.at(0).rank < 1)
    throw std::invalid_argument("reduce_degree_zero: no free summand in degree 0");
  GradedModule out = a;
  out.deg[0].rank -= 1;
  return out;
}

}  // namespace ih
