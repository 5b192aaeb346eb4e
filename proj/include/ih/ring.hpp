#pragma once

#include <stdexcept>
#include <string>

namespace ih {

// Coefficient ring: the integers, the rationals, or a prime field Z/p.
struct RingSpec {
  enum class Kind { integers, rationals, prime_field };
  Kind kind = Kind::integers;
  unsigned long p = 0;  // modulus, set iff kind == prime_field

  static RingSpec Z() { return RingSpec{Kind::integers, 0}; }
  static RingSpec Q() { return RingSpec{Kind::rationals, 0}; }
  static RingSpec Zp(unsigned long p);

  bool is_field() const { return kind != Kind::integers; }
  bool operator==(const RingSpec& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const RingSpec& o) const { return !(*this == o); }
  std::string name() const;
};

// Accepts "Z", "Q", "Zp:<p>" (as the command line spells rings).
RingSpec parse_ring(const std::string& s);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Process-wide cap on top-dimensional simplices a construction may produce.
long long top_simplex_budget();
void set_top_simplex_budget(long long n);

}  // namespace ih
