#include "ih/perv.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ih {

namespace {

uint64_t fnv1a(uint64_t h, long long x) {
  for (int i = 0; i < 8; ++i) {
    h ^= uint64_t(x >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Perversity::Perversity(std::vector<int> vals) : v_(std::move(vals)) {
  if (v_.empty()) throw std::invalid_argument("perversity: empty value table");
  if (v_[0] != 0) throw std::invalid_argument("perversity: entry at codimension 0 must be 0");
}

Perversity Perversity::zero(int max_codim) {
  if (max_codim < 0) throw std::invalid_argument("perversity: negative max codimension");
  return Perversity(std::vector<int>(size_t(max_codim) + 1, 0));
}

Perversity Perversity::preset(const std::string& name, int max_codim) {
  if (max_codim < 0) throw std::invalid_argument("perversity: negative max codimension");
  std::vector<int> v(size_t(max_codim) + 1, 0);
  if (name == "zero") {
    // all zeros
  } else if (name == "lower-middle") {
    for (int k = 2; k <= max_codim; ++k) v[size_t(k)] = (k - 2) / 2;
  } else if (name == "upper-middle") {
    for (int k = 2; k <= max_codim; ++k) v[size_t(k)] = (k - 1) / 2;
  } else if (name == "top") {
    for (int k = 2; k <= max_codim; ++k) v[size_t(k)] = k - 2;
  } else if (name.find(',') != std::string::npos || (!name.empty() && (isdigit(name[0]) || name[0] == '-'))) {
    v.clear();
    std::istringstream in(name);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      size_t pos = 0;
      int x = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("perversity: bad integer '" + tok + "'");
      v.push_back(x);
    }
    while (int(v.size()) <= max_codim) v.push_back(v.back());
    if (int(v.size()) != max_codim + 1)
      throw std::invalid_argument("perversity: table longer than max codimension " +
                                  std::to_string(max_codim));
  } else {
    throw std::invalid_argument("perversity: unknown preset '" + name + "'");
  }
  return Perversity(v);
}

int Perversity::at(int k) const {
  if (k < 0 || k > max_codim())
    throw std::out_of_range("perversity: codimension " + std::to_string(k) +
                            " outside table (max " + std::to_string(max_codim()) + ")");
  return v_[size_t(k)];
}

bool Perversity::growth_ok() const {
  for (int k = 2; k + 1 <= max_codim(); ++k) {
    if (v_[size_t(k) + 1] < v_[size_t(k)] || v_[size_t(k) + 1] > v_[size_t(k)] + 1) return false;
  }
  return true;
}

bool Perversity::traditional() const {
  if (!growth_ok()) return false;
  if (max_codim() >= 2 && v_[2] != 0) return false;
  for (int k = 2; k <= max_codim(); ++k)
    if (v_[size_t(k)] < 0) return false;
  return true;
}

bool Perversity::is_super() const {
  for (int k = 2; k <= max_codim(); ++k)
    if (super_at(k)) return true;
  return false;
}

bool Perversity::within_cone_range() const {
  for (int k = 2; k <= max_codim(); ++k)
    if (v_[size_t(k)] > k - 2) return false;
  return true;
}

std::string Perversity::str() const {
  std::string s = "(";
  for (size_t i = 0; i < v_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v_[i]);
  }
  return s + ")";
}

Perversity normalize_super(const Perversity& p) {
  std::vector<int> v = p.values();
  for (int k = 1; k < int(v.size()); ++k)
    if (v[size_t(k)] > k - 1) v[size_t(k)] = k - 1;
  return Perversity(v);
}

QMode parse_q_mode(const std::string& s) {
  if (s == "sum") return QMode::sum;
  if (s == "cgj") return QMode::cgj;
  if (s == "king") return QMode::king;
  if (s == "table") return QMode::table;
  throw std::invalid_argument("unknown product perversity mode '" + s + "'");
}

std::string q_mode_name(QMode m) {
  switch (m) {
    case QMode::sum: return "sum";
    case QMode::cgj: return "cgj";
    case QMode::king: return "king";
    case QMode::table: return "table";
  }
  return "?";
}

ProductPerversity::ProductPerversity(std::vector<std::vector<int>> table) : t_(std::move(table)) {
  if (t_.empty() || t_[0].empty())
    throw std::invalid_argument("biperversity: empty table");
  for (auto& row : t_)
    if (row.size() != t_[0].size())
      throw std::invalid_argument("biperversity: ragged table");
  if (t_[0][0] < 0) throw std::invalid_argument("biperversity: entry at (0,0) must be >= 0");
}

ProductPerversity ProductPerversity::make(QMode mode, const Perversity& p, const Perversity& q,
                                          int maxk, int maxl, int interior_shift) {
  if (maxk < 0 || maxl < 0) throw std::invalid_argument("biperversity: negative table bound");
  if (mode != QMode::sum && interior_shift != 0)
    throw std::invalid_argument("biperversity: interior shift only applies to sum mode");
  if (interior_shift < 0 || interior_shift > 2)
    throw std::invalid_argument("biperversity: interior shift must be 0, 1 or 2");
  std::vector<std::vector<int>> t(size_t(maxk) + 1, std::vector<int>(size_t(maxl) + 1, 0));
  for (int k = 0; k <= maxk; ++k)
    for (int l = 0; l <= maxl; ++l) {
      int& cell = t[size_t(k)][size_t(l)];
      switch (mode) {
        case QMode::sum:
          cell = p.at(k) + q.at(l) + ((k >= 1 && l >= 1) ? interior_shift : 0);
          break;
        case QMode::cgj:
          cell = p.at(k + l);
          break;
        case QMode::king:
          cell = p.at(k);
          break;
        case QMode::table:
          throw std::invalid_argument("biperversity: table mode takes an explicit table");
      }
    }
  return ProductPerversity(std::move(t));
}

int ProductPerversity::at(int k, int l) const {
  if (k < 0 || k > maxk() || l < 0 || l > maxl())
    throw std::out_of_range("biperversity: pair (" + std::to_string(k) + "," + std::to_string(l) +
                            ") outside table (max " + std::to_string(maxk()) + "," +
                            std::to_string(maxl()) + ")");
  return t_[size_t(k)][size_t(l)];
}

std::string ProductPerversity::str() const {
  std::string s;
  for (size_t i = 0; i < t_.size(); ++i) {
    if (i) s += "; ";
    for (size_t j = 0; j < t_[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(t_[i][j]);
    }
  }
  return "[" + s + "]";
}

uint64_t ProductPerversity::fingerprint() const {
  uint64_t h = 1469598103934665603ull;
  h = fnv1a(h, int64_t(t_.size()));
  for (auto& row : t_) {
    h = fnv1a(h, int64_t(row.size()));
    for (int x : row) h = fnv1a(h, x);
  }
  return h;
}

namespace {

// Direct sum over all link component pairs of Tor of the two consulted
// degrees. Nonzero means the shift-two case is obstructed.
FgModule shift_two_obstruction(int k, int l, int pk, int ql, const LinkData& lx,
                               const LinkData& ly) {
  auto itx = lx.links.find(k);
  auto ity = ly.links.find(l);
  if (itx == lx.links.end() || ity == ly.links.end())
    throw std::invalid_argument("link data missing for occupied codimension pair");
  FgModule acc;
  bool seeded = false;
  for (const auto& gx : itx->second)
    for (const auto& gy : ity->second) {
      FgModule t = torsion_product(gx.at(k - 2 - pk), gy.at(l - 2 - ql));
      if (!seeded) {
        acc = t;
        seeded = true;
      } else {
        acc = direct_sum(acc, t);
      }
    }
  if (!seeded) acc = FgModule{itx->second.empty() ? RingSpec::Z() : itx->second[0].ring, 0, {}};
  return acc;
}

}  // namespace

ConditionVerdict classify_conditions(const Perversity& p, const Perversity& q,
                                     const ProductPerversity& bi, const std::vector<int>& occ_k,
                                     const std::vector<int>& occ_l, const LinkData& lx,
                                     const LinkData& ly) {
  ConditionVerdict out;
  out.pass = true;
  auto push = [&](CellVerdict c) {
    if (!c.pass) out.pass = false;
    out.cells.push_back(std::move(c));
  };
  for (int k : occ_k) {
    CellVerdict c;
    c.k = k;
    c.l = 0;
    c.shift = bi.at(k, 0) - p.at(k);
    c.pass = (c.shift == 0);
    c.tag = c.pass ? CellTag::boundary_ok : CellTag::boundary_bad;
    if (!c.pass) c.note = "row value must equal the first factor perversity";
    push(c);
  }
  for (int l : occ_l) {
    CellVerdict c;
    c.k = 0;
    c.l = l;
    c.shift = bi.at(0, l) - q.at(l);
    c.pass = (c.shift == 0);
    c.tag = c.pass ? CellTag::boundary_ok : CellTag::boundary_bad;
    if (!c.pass) c.note = "column value must equal the second factor perversity";
    push(c);
  }
  for (int k : occ_k)
    for (int l : occ_l) {
      CellVerdict c;
      c.k = k;
      c.l = l;
      c.shift = bi.at(k, l) - p.at(k) - q.at(l);
      bool sup_p = p.super_at(k);
      bool sup_q = q.super_at(l);
      if (sup_p || sup_q) {
        int cap = (sup_p && sup_q) ? 0 : 1;
        c.pass = (c.shift >= 0 && c.shift <= cap);
        c.tag = c.pass ? CellTag::super_side : CellTag::off_range;
        c.note = c.pass ? (std::string("super side cap ") + std::to_string(cap))
                        : "shift outside the super-side range";
      } else if (c.shift == 0) {
        c.pass = true;
        c.tag = CellTag::shift_zero;
      } else if (c.shift == 1) {
        c.pass = true;
        c.tag = CellTag::shift_one;
      } else if (c.shift == 2) {
        c.torsion_witness = shift_two_obstruction(k, l, p.at(k), q.at(l), lx, ly);
        c.pass = c.torsion_witness.is_zero();
        c.tag = c.pass ? CellTag::shift_two_torsion_free : CellTag::shift_two_torsion;
        if (!c.pass)
          c.note = "link torsion product " + c.torsion_witness.str() + " obstructs shift two";
      } else {
        c.pass = false;
        c.tag = CellTag::off_range;
        c.note = "interior shift must be 0, 1 or 2";
      }
      push(c);
    }
  return out;
}

std::string ConditionVerdict::str() const {
  std::ostringstream os;
  os << (pass ? "conditions hold" : "conditions fail") << "\n";
  for (const auto& c : cells) {
    os << "  (" << c.k << "," << c.l << ") shift " << c.shift << " "
       << (c.pass ? "ok" : "FAIL");
    if (!c.note.empty()) os << " [" << c.note << "]";
    os << "\n";
  }
  return os.str();
}

bool is_locally_torsion_free(const LinkData& lx, const Perversity& p) {
  for (const auto& [k, mods] : lx.links) {
    if (k < 2) continue;
    for (const auto& g : mods)
      if (!g.at(k - 2 - p.at(k)).torsion.empty()) return false;
  }
  return true;
}

}  // namespace ih
