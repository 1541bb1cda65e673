#include "prexpect/rational.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace prexpect {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational q(text, 10);
    q.canonicalize();
    return q;
  }
  std::string whole = text.substr(0, dot);
  std::string frac = text.substr(dot + 1);
  bool negative = !whole.empty() && whole[0] == '-';
  if (negative) whole.erase(0, 1);
  if (whole.empty()) whole = "0";
  Integer scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Integer num(whole + frac, 10);
  Rational q(num, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational from_double(double d) {
  if (!std::isfinite(d)) throw std::domain_error("non-finite double");
  Rational q(d);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) {
  double d = q.get_d();  // truncated toward zero
  if (from_double(d) == q) return d;
  double other = std::nextafter(d, q > 0 ? INFINITY : -INFINITY);
  Rational err_d = abs(q - from_double(d));
  Rational err_o = abs(q - from_double(other));
  if (err_o < err_d) return other;
  if (err_d < err_o) return d;
  // Tie: pick the even mantissa.
  std::int64_t bits_d;
  static_assert(sizeof(bits_d) == sizeof(d));
  std::memcpy(&bits_d, &d, sizeof d);
  return (bits_d & 1) == 0 ? d : other;
}

Rational snap(double d, std::int64_t max_den) {
  Rational x = from_double(d);
  // Convergents h/k of the continued fraction of x.
  Integer h_prev = 1, h = floor(x);
  Integer k_prev = 0, k = 1;
  Rational rem = x - Rational(h);
  Integer bound = max_den;
  while (rem != 0) {
    Rational inv = 1 / rem;
    Integer a = floor(inv);
    Integer k_next = a * k + k_prev;
    if (k_next > bound) {
      // Largest semiconvergent still inside the bound.
      Integer t = (bound - k_prev) / k;
      Rational semi(t * h + h_prev, t * k + k_prev);
      semi.canonicalize();
      Rational conv(h, k);
      conv.canonicalize();
      if (t > 0 && abs(semi - x) < abs(conv - x)) return semi;
      return conv;
    }
    Integer h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    rem = inv - Rational(a);
  }
  Rational out(h, k);
  out.canonicalize();
  return out;
}

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace prexpect
