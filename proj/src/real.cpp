#include "mub/real.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "mub/complex_ap.hpp"
#include "mub/error.hpp"

namespace mub {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRegion: return "OutOfRegion";
    case ErrorKind::ConstructionFailure: return "ConstructionFailure";
    case ErrorKind::SigmaZero: return "SigmaZero";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotRepresentable: return "NotRepresentable";
    case ErrorKind::WrongSource: return "WrongSource";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::ResourceBudgetExceeded: return "ResourceBudgetExceeded";
    case ErrorKind::NotZeroDimensional: return "NotZeroDimensional";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::UndecidablePair: return "UndecidablePair";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::IOFailure: return "IOFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Real make_real(const mpq_class& q, unsigned digits) {
  Real num(0, digits), den(0, digits);
  mpfr_set_z(num.backend().data(), q.get_num_mpz_t(), MPFR_RNDN);
  mpfr_set_z(den.backend().data(), q.get_den_mpz_t(), MPFR_RNDN);
  return Real(num / den, digits);
}

Real make_real(const std::string& decimal, unsigned digits) {
  Real r(0, digits);
  if (decimal.find('/') != std::string::npos) return make_real(parse_rational(decimal), digits);
  if (mpfr_set_str(r.backend().data(), decimal.c_str(), 10, MPFR_RNDN) != 0) {
    throw Error(ErrorKind::InvalidArgument, "not a decimal number: " + decimal);
  }
  return r;
}

Real pi_real(unsigned digits) {
  Real r(0, digits);
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real sqrt3_real(unsigned digits) { return Real(sqrt(Real(3, digits)), digits); }

std::string to_decimal(const Real& x, unsigned digits) {
  if (x == 0) return "0";
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, digits, x.backend().data(), MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::ostringstream os;
  os << sign << mant[0];
  if (mant.size() > 1) os << '.' << mant.substr(1);
  if (exp - 1 != 0) os << 'e' << (exp - 1);
  return os.str();
}

mpq_class to_rational(const Real& x) {
  if (x == 0) return 0;
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.backend().data());
  mpq_class q(m);
  if (e >= 0) {
    mpz_class p;
    mpz_mul_2exp(p.get_mpz_t(), mpz_class(1).get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    q *= p;
  } else {
    mpz_class p;
    mpz_mul_2exp(p.get_mpz_t(), mpz_class(1).get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    q /= p;
  }
  q.canonicalize();
  return q;
}

namespace {

mpz_class pow10(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

// floor(log10(|q|)) for q != 0, exact.
long floor_log10(const mpq_class& q) {
  mpq_class a = abs(q);
  long e = static_cast<long>(std::floor(std::log10(a.get_d())));
  // get_d may be off by one near powers of ten or under/overflow; fix exactly.
  auto ten_pow = [](long k) {
    return k >= 0 ? mpq_class(pow10(k)) : mpq_class(1, 1) / mpq_class(pow10(-k));
  };
  if (!std::isfinite(a.get_d()) || a.get_d() == 0.0) {
    e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
        static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
  }
  while (ten_pow(e) > a) --e;
  while (ten_pow(e + 1) <= a) ++e;
  return e;
}

}  // namespace

mpq_class round_significant(const mpq_class& x, unsigned digits) {
  if (x == 0) return 0;
  long e = floor_log10(x) - static_cast<long>(digits) + 1;
  mpq_class scaled = e >= 0 ? mpq_class(x / mpq_class(pow10(e))) : mpq_class(x * mpq_class(pow10(-e)));
  // round half away from zero
  mpq_class a = abs(scaled) + mpq_class(1, 2);
  mpz_class m;
  mpz_fdiv_q(m.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  if (scaled < 0) m = -m;
  mpq_class r = e >= 0 ? mpq_class(m * pow10(e)) : mpq_class(m, pow10(-e));
  r.canonicalize();
  return r;
}

mpq_class round_significant(const Real& x, unsigned digits) {
  return round_significant(to_rational(x), digits);
}

mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos || s.find_first_of(".eE") == std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw Error(ErrorKind::InvalidArgument, "bad rational: " + s);
    q.canonicalize();
    return q;
  }
  // decimal literal: mantissa digits and exponent, exact
  std::string t = s;
  long exp10 = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(t.substr(epos + 1));
    t = t.substr(0, epos);
  }
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<long>(t.size() - dot - 1);
    t.erase(dot, 1);
  }
  mpz_class m;
  if (t.empty() || m.set_str(t, 10) != 0) throw Error(ErrorKind::InvalidArgument, "bad decimal: " + s);
  if (neg) m = -m;
  mpq_class r = exp10 >= 0 ? mpq_class(m * pow10(exp10)) : mpq_class(m, pow10(-exp10));
  r.canonicalize();
  return r;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(10); }

// ---- ComplexAP ----

ComplexAP ComplexAP::polar(const Real& phase, unsigned d) {
  PrecisionGuard g(d + 10);
  Real p(phase, d + 10);
  return {Real(cos(p), d), Real(sin(p), d), d};
}

ComplexAP ComplexAP::unit_turns(const Real& turns, unsigned d) {
  PrecisionGuard g(d + 10);
  Real p = 2 * pi_real(d + 10) * Real(turns, d + 10);
  return polar(p, d);
}

ComplexAP& ComplexAP::operator+=(const ComplexAP& o) {
  digits = std::min(digits, o.digits);
  re = Real(re + o.re, digits);
  im = Real(im + o.im, digits);
  return *this;
}

ComplexAP& ComplexAP::operator-=(const ComplexAP& o) {
  digits = std::min(digits, o.digits);
  re = Real(re - o.re, digits);
  im = Real(im - o.im, digits);
  return *this;
}

ComplexAP& ComplexAP::operator*=(const ComplexAP& o) {
  digits = std::min(digits, o.digits);
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = Real(r, digits);
  im = Real(i, digits);
  return *this;
}

ComplexAP& ComplexAP::operator/=(const ComplexAP& o) {
  digits = std::min(digits, o.digits);
  Real den = o.re * o.re + o.im * o.im;
  Real r = (re * o.re + im * o.im) / den;
  Real i = (im * o.re - re * o.im) / den;
  re = Real(r, digits);
  im = Real(i, digits);
  return *this;
}

ComplexAP& ComplexAP::operator*=(const Real& s) {
  re = Real(re * s, digits);
  im = Real(im * s, digits);
  return *this;
}

ComplexAP sqrt(const ComplexAP& z) {
  unsigned d = z.digits;
  PrecisionGuard g(d + 10);
  Real r = sqrt(z.re * z.re + z.im * z.im);
  Real a = sqrt((r + z.re) / 2);
  Real b = sqrt((r - z.re) / 2);
  if (z.im < 0) b = -b;
  return {Real(a, d), Real(b, d), d};
}

}  // namespace mub
