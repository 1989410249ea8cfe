#include "twpa/integer.hpp"

namespace twpa {

std::string to_string(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out + ")";
}

Vector zero_vector(std::size_t d) { return Vector(d, Int(0)); }

Vector& operator+=(Vector& a, const Vector& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) a[i] += b[i];
  return a;
}

std::size_t IntHash::operator()(const Int& v) const {
  if (v.fits_slong_p()) return std::hash<long>()(v.get_si());
  return std::hash<std::string>()(v.get_str(16));
}

std::size_t VectorHash::operator()(const Vector& v) const {
  std::size_t h = v.size();
  for (const auto& x : v) h = h * 1000003u ^ IntHash()(x);
  return h;
}

}  // namespace twpa
