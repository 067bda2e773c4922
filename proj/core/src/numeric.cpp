#include "emc/numeric.hpp"

#include "emc/report.hpp"

#include <algorithm>
#include <cstddef>

namespace emc {
namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

BigInt parse_digits(const std::string& s, const std::string& context) {
  if (!all_digits(s)) throw FormatError("bad rational '" + context + "'");
  return BigInt(s);
}

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(const std::string& s) {
  std::string t = s;
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  if (t.empty()) throw FormatError("bad rational '" + s + "'");

  Rational value;
  auto slash = t.find('/');
  auto dot = t.find('.');
  if (slash != std::string::npos) {
    BigInt num = parse_digits(t.substr(0, slash), s);
    BigInt den = parse_digits(t.substr(slash + 1), s);
    if (den == 0) throw FormatError("zero denominator in '" + s + "'");
    value = Rational(num, den);
  } else if (dot != std::string::npos) {
    std::string head = t.substr(0, dot);
    std::string tail = t.substr(dot + 1);
    if (head.empty() && tail.empty()) throw FormatError("bad rational '" + s + "'");
    if (head.empty()) head = "0";
    if (tail.empty()) tail = "0";
    BigInt num = parse_digits(head, s) * pow10(static_cast<int>(tail.size())) +
                 parse_digits(tail, s);
    value = Rational(num, pow10(static_cast<int>(tail.size())));
  } else {
    value = Rational(parse_digits(t, s));
  }
  return neg ? -value : value;
}

std::string format_rational(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string decimal_string(const Rational& r, int digits) {
  if (digits < 1) digits = 1;
  if (r == 0) return "0";

  BigInt a = numerator(r);
  BigInt b = denominator(r);
  const bool neg = a < 0;
  if (neg) a = -a;

  // e = floor(log10(a/b)), found by integer comparison around a digit-count guess.
  int e = static_cast<int>(a.str().size()) - static_cast<int>(b.str().size());
  auto less_than_pow = [&](int k) {
    // a/b < 10^k ?
    return k >= 0 ? a < b * pow10(k) : a * pow10(-k) < b;
  };
  while (!less_than_pow(e + 1)) ++e;
  while (less_than_pow(e)) --e;

  // D = round(a/b * 10^(digits-1-e)), half away from zero.
  const int shift = digits - 1 - e;
  BigInt num = shift >= 0 ? a * pow10(shift) : a;
  BigInt den = shift >= 0 ? b : b * pow10(-shift);
  BigInt d_val = (2 * num + den) / (2 * den);
  if (d_val >= pow10(digits)) {
    d_val /= 10;
    ++e;
  }

  std::string ds = d_val.str();
  std::string out;
  if (e >= -4 && e < digits) {
    if (e >= 0) {
      std::string ip = ds.substr(0, static_cast<std::size_t>(e) + 1);
      std::string fp = ds.substr(static_cast<std::size_t>(e) + 1);
      while (!fp.empty() && fp.back() == '0') fp.pop_back();
      out = fp.empty() ? ip : ip + "." + fp;
    } else {
      std::string fp(static_cast<std::size_t>(-e - 1), '0');
      fp += ds;
      while (!fp.empty() && fp.back() == '0') fp.pop_back();
      out = "0." + fp;
    }
  } else {
    std::string mant = ds.substr(0, 1);
    std::string fp = ds.substr(1);
    while (!fp.empty() && fp.back() == '0') fp.pop_back();
    out = fp.empty() ? mant : mant + "." + fp;
    out += 'e';
    out += e < 0 ? '-' : '+';
    std::string es = std::to_string(e < 0 ? -e : e);
    if (es.size() < 2) es = "0" + es;
    out += es;
  }
  return neg ? "-" + out : out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Rational rational_pow(const Rational& base, unsigned e) {
  using boost::multiprecision::pow;
  if (e == 0) return Rational(1);
  return Rational(pow(numerator(base), e), pow(denominator(base), e));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace emc
