#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace twpa {

/// Arbitrary precision integer used for every coefficient, constant and weight.
using Int = mpz_class;

/// Weight vector in Z^d.
using Vector = std::vector<Int>;

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Remainder in [0, |m|).
inline Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline bool divides(const Int& m, const Int& a) {
  return mpz_divisible_p(a.get_mpz_t(), m.get_mpz_t()) != 0;
}

inline std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Vector& v);

Vector zero_vector(std::size_t d);

Vector& operator+=(Vector& a, const Vector& b);

struct IntHash {
  std::size_t operator()(const Int& v) const;
};

struct VectorHash {
  std::size_t operator()(const Vector& v) const;
};

}  // namespace twpa
