// Arbitrary-precision scalar support: exact rationals for resonance and
// Liouville constructions, 256-bit binary floats for irrational probes.
#ifndef TORUSCAUCHY_BIGMATH_HPP
#define TORUSCAUCHY_BIGMATH_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace toruscauchy {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using BigFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

struct BigComplex {
  BigFloat re;
  BigFloat im;
};

inline BigComplex operator+(const BigComplex& a, const BigComplex& b) {
  return {a.re + b.re, a.im + b.im};
}
inline BigComplex operator-(const BigComplex& a, const BigComplex& b) {
  return {a.re - b.re, a.im - b.im};
}
inline BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  const BigFloat d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline BigFloat abs(const BigComplex& z) { return sqrt(z.re * z.re + z.im * z.im); }

inline BigComplex big_exp(const BigComplex& z) {
  const BigFloat r = exp(z.re);
  return {r * cos(z.im), r * sin(z.im)};
}

inline const BigFloat& big_pi() {
  static const BigFloat pi = acos(BigFloat(-1));
  return pi;
}

inline BigFloat to_bigfloat(const BigRational& r) {
  return BigFloat(numerator(r)) / BigFloat(denominator(r));
}

inline BigFloat to_bigfloat(const BigInt& n) { return BigFloat(n); }

// Nearest integer with ties to even.
inline BigInt round_half_even(const BigFloat& x) {
  BigFloat f = floor(x);
  BigInt n = f.convert_to<BigInt>();
  BigFloat frac = x - f;
  if (frac > BigFloat(0.5)) return n + 1;
  if (frac < BigFloat(0.5)) return n;
  return (n % 2 == 0) ? n : n + 1;
}

inline BigInt round_half_even(const BigRational& x) {
  BigInt n = numerator(x) / denominator(x);
  if (x < 0 && BigRational(n) != x) n -= 1;  // floor for negatives
  BigRational frac = x - BigRational(n);
  if (frac > BigRational(1, 2)) return n + 1;
  if (frac < BigRational(1, 2)) return n;
  return (n % 2 == 0) ? n : n + 1;
}

// A declared scalar constant, optionally carrying more precision than its
// double image: an exact rational, √n, or a truncated Liouville sum.
class ScalarValue {
 public:
  enum class Kind { Double, Rational, Sqrt };

  static ScalarValue from_double(std::complex<double> v) {
    ScalarValue s;
    s.kind_ = Kind::Double;
    s.approx_ = v;
    return s;
  }

  static ScalarValue rational(BigRational re, BigRational im = BigRational(0)) {
    ScalarValue s;
    s.kind_ = Kind::Rational;
    s.re_ = std::move(re);
    s.im_ = std::move(im);
    s.approx_ = {to_bigfloat(s.re_).convert_to<double>(), to_bigfloat(s.im_).convert_to<double>()};
    return s;
  }

  static ScalarValue sqrt_of(BigInt n) {
    if (n < 0) throw std::invalid_argument("ScalarValue::sqrt_of: negative radicand");
    ScalarValue s;
    s.kind_ = Kind::Sqrt;
    s.radicand_ = std::move(n);
    s.approx_ = {sqrt(BigFloat(s.radicand_)).convert_to<double>(), 0.0};
    return s;
  }

  // Σ_{k=1..depth} base^{-k!}, kept exact. The factorial denominators grow
  // violently; depth is capped so the numbers stay printable.
  static ScalarValue liouville(int base, int depth) {
    if (base < 2) throw std::invalid_argument("liouville_number: base must be >= 2");
    if (depth < 1 || depth > 6) throw std::invalid_argument("liouville_number: depth overflow (1 <= K <= 6)");
    BigRational sum(0);
    BigInt factorial(1);
    for (int k = 1; k <= depth; ++k) {
      factorial *= k;
      BigInt den = pow(BigInt(base), factorial.convert_to<unsigned>());
      sum += BigRational(1, den);
    }
    return rational(sum);
  }

  // Accepts "p/q", integers, decimal strings, "sqrt2"/"sqrt(n)" and
  // "liouville(b,k)".
  static ScalarValue parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::complex<double> approx() const { return approx_; }

  bool is_exact_rational() const { return kind_ == Kind::Rational; }
  bool is_real() const {
    switch (kind_) {
      case Kind::Double: return approx_.imag() == 0.0;
      case Kind::Rational: return im_ == 0;
      case Kind::Sqrt: return true;
    }
    return false;
  }

  const BigRational& rational_re() const { return re_; }
  const BigRational& rational_im() const { return im_; }
  const BigInt& radicand() const { return radicand_; }

  bool has_high_precision() const { return kind_ != Kind::Double; }

  BigComplex high_precision() const {
    switch (kind_) {
      case Kind::Double: return {BigFloat(approx_.real()), BigFloat(approx_.imag())};
      case Kind::Rational: return {to_bigfloat(re_), to_bigfloat(im_)};
      case Kind::Sqrt: return {sqrt(BigFloat(radicand_)), BigFloat(0)};
    }
    throw std::logic_error("unreachable scalar kind");
  }

 private:
  Kind kind_ = Kind::Double;
  std::complex<double> approx_{0.0, 0.0};
  BigRational re_{0};
  BigRational im_{0};
  BigInt radicand_{0};
};

// cpp_int's string constructor treats a leading 0 as a base prefix; decimal
// literals must be normalized first.
inline BigInt parse_integer_literal(std::string text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.erase(text.begin());
  }
  std::size_t first = 0;
  while (first + 1 < text.size() && text[first] == '0') ++first;
  text = text.substr(first);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("not a decimal integer literal: '" + text + "'");
  BigInt v(text);
  return negative ? -v : v;
}

inline BigRational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_integer_literal(text.substr(0, slash));
    BigInt den = parse_integer_literal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational literal: zero denominator");
    return BigRational(num, den);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t decimals = text.size() - dot - 1;
    if (decimals == 0) throw std::invalid_argument("rational literal: trailing dot");
    return BigRational(parse_integer_literal(digits), pow(BigInt(10), static_cast<unsigned>(decimals)));
  }
  return BigRational(parse_integer_literal(text));
}

inline ScalarValue ScalarValue::parse(const std::string& text) {
  try {
    if (text.rfind("sqrt", 0) == 0) {
      std::string arg = text.substr(4);
      if (!arg.empty() && arg.front() == '(' && arg.back() == ')')
        arg = arg.substr(1, arg.size() - 2);
      return sqrt_of(BigInt(arg));
    }
    if (text.rfind("liouville(", 0) == 0 && text.back() == ')') {
      const std::string args = text.substr(10, text.size() - 11);
      const auto comma = args.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("liouville literal: expected liouville(base,depth)");
      return liouville(std::stoi(args.substr(0, comma)), std::stoi(args.substr(comma + 1)));
    }
    return rational(parse_rational(text));
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("unparseable scalar literal: '" + text + "'");
  }
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_BIGMATH_HPP
