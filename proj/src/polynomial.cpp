#include "mub/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "mub/error.hpp"

namespace mub {

int QSqrt3::sign() const {
  int sa = sgn(a), sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare a^2 with 3 b^2
  int c = cmp(a * a, 3 * b * b);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

QSqrt3 QSqrt3::inverse() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw Error(ErrorKind::InvalidArgument, "division by zero in Q(sqrt 3)");
  return {a / n, -b / n};
}

QSqrt3& QSqrt3::operator*=(const QSqrt3& o) {
  if (sgn(b) == 0 && sgn(o.b) == 0) {
    a *= o.a;
    return *this;
  }
  mpq_class na = a * o.a + 3 * b * o.b;
  mpq_class nb = a * o.b + b * o.a;
  a = std::move(na);
  b = std::move(nb);
  return *this;
}

Real QSqrt3::to_real(unsigned digits) const {
  Real r = make_real(a, digits);
  if (sgn(b) != 0) r += make_real(b, digits) * sqrt3_real(digits);
  return r;
}

std::string QSqrt3::to_string() const {
  if (sgn(b) == 0) return rational_to_string(a);
  std::string s;
  if (sgn(a) != 0) s = rational_to_string(a) + (sgn(b) > 0 ? "+" : "");
  if (b == 1) return s + "s3";
  if (b == -1) return s + "-s3";
  return s + rational_to_string(b) + "*s3";
}

int Monomial::degree() const {
  int d = 0;
  for (auto v : e_) d += v;
  return d;
}

bool Monomial::divides(const Monomial& o) const {
  for (int i = 0; i < kMaxVars; ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    int v = e_[i] + o.e_[i];
    if (v > 127) throw Error(ErrorKind::ResourceBudgetExceeded, "monomial exponent overflow");
    r.e_[i] = static_cast<uint8_t>(v);
  }
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e_[i] = static_cast<uint8_t>(e_[i] - o.e_[i]);
  return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
  return r;
}

bool Monomial::coprime(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kMaxVars; ++i)
    if (a.e_[i] && b.e_[i]) return false;
  return true;
}

MultiPoly::MultiPoly(int nvars, std::vector<Term> terms) : nvars_(nvars), terms_(std::move(terms)) {
  if (nvars_ > kMaxVars) throw Error(ErrorKind::InvalidArgument, "too many variables");
  normalize();
}

void MultiPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return y.mono < x.mono; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) out.back().coeff += t.coeff;
    else out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coeff.is_zero(); }), out.end());
  terms_ = std::move(out);
}

MultiPoly MultiPoly::constant(int nvars, const QSqrt3& c) {
  MultiPoly p(nvars);
  if (!c.is_zero()) p.terms_.push_back({Monomial(), c});
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int i) {
  MultiPoly p(nvars);
  p.terms_.push_back({Monomial::var(i), QSqrt3(1)});
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

bool MultiPoly::is_rational() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff.is_rational(); });
}

QSqrt3 MultiPoly::coeff(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.mono == m) return t.coeff;
  return {};
}

namespace {

// Merges two sorted term lists, b scaled by sign.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && b[j].mono < a[i].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || a[i].mono < b[j].mono) {
      out.push_back(b[j++]);
      if (subtract) out.back().coeff = -out.back().coeff;
    } else {
      QSqrt3 c = subtract ? a[i].coeff - b[j].coeff : a[i].coeff + b[j].coeff;
      if (!c.is_zero()) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  nvars_ = std::max(nvars_, o.nvars_);
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  nvars_ = std::max(nvars_, o.nvars_);
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const QSqrt3& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  std::map<Monomial, QSqrt3> acc;
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) acc[s.mono * t.mono] += s.coeff * t.coeff;
  std::vector<Term> terms;
  for (auto& [m, c] : acc) terms.push_back({m, c});
  return MultiPoly(std::max(a.nvars_, b.nvars_), std::move(terms));
}

MultiPoly MultiPoly::mul_term(const Monomial& m, const QSqrt3& c) const {
  MultiPoly r(nvars_);
  if (c.is_zero()) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

MultiPoly MultiPoly::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.mono[var];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(var, e - 1);
    out.push_back({m, t.coeff * QSqrt3(e)});
  }
  return MultiPoly(nvars_, std::move(out));
}

MultiPoly MultiPoly::primitive() const {
  if (terms_.empty()) return *this;
  bool pure_sqrt3 = std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return sgn(t.coeff.a) == 0; });
  if (pure_sqrt3) return (*this * QSqrt3::sqrt3()).primitive();
  mpz_class den_lcm = 1, num_gcd = 0;
  for (const auto& t : terms_) {
    for (const auto* q : {&t.coeff.a, &t.coeff.b}) {
      if (sgn(*q) == 0) continue;
      den_lcm = lcm(den_lcm, q->get_den());
      num_gcd = gcd(num_gcd, q->get_num());
    }
  }
  mpq_class scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (terms_.front().coeff.sign() < 0) scale = -scale;
  return *this * QSqrt3(scale);
}

Real MultiPoly::evaluate(const std::vector<Real>& point, unsigned digits) const {
  if (static_cast<int>(point.size()) < nvars_)
    throw Error(ErrorKind::DimensionMismatch, "evaluation point has too few coordinates");
  PrecisionGuard guard(digits);
  Real sum(0, digits);
  Real s3 = sqrt3_real(digits);
  for (const auto& t : terms_) {
    Real v = make_real(t.coeff.a, digits);
    if (sgn(t.coeff.b) != 0) v += make_real(t.coeff.b, digits) * s3;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < t.mono[i]; ++k) v *= point[i];
    sum += v;
  }
  return sum;
}

double MultiPoly::evaluate(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) < nvars_)
    throw Error(ErrorKind::DimensionMismatch, "evaluation point has too few coordinates");
  double sum = 0;
  const double s3 = 1.7320508075688772;
  for (const auto& t : terms_) {
    double v = t.coeff.a.get_d() + t.coeff.b.get_d() * s3;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < t.mono[i]; ++k) v *= point[i];
    sum += v;
  }
  return sum;
}

std::string MultiPoly::to_string(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    std::string c = t.coeff.to_string();
    bool compound = !t.coeff.is_rational() && sgn(t.coeff.a) != 0;
    if (compound) c = "(" + c + ")";
    bool neg = !compound && c[0] == '-';
    if (neg) c = c.substr(1);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    bool one = c == "1";
    if (!one || t.mono.is_one()) os << c;
    bool need_star = !one;
    for (int i = 0; i < nvars_; ++i) {
      if (t.mono[i] == 0) continue;
      if (need_star) os << "*";
      os << vars[i];
      if (t.mono[i] > 1) os << "^" << t.mono[i];
      need_star = true;
    }
  }
  return os.str();
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  MultiPoly run() {
    MultiPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "polynomial parse error (" + what + ") at position " +
                                                std::to_string(pos_) + " in: " + s_);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  int n() const { return static_cast<int>(vars_.size()); }

  MultiPoly expr() {
    MultiPoly p = term();
    for (;;) {
      if (eat('+')) p += term();
      else if (eat('-')) p -= term();
      else return p;
    }
  }
  MultiPoly term() {
    MultiPoly p = factor();
    for (;;) {
      if (eat('*')) {
        p = p * factor();
      } else if (eat('/')) {
        mpq_class q = number();
        if (sgn(q) == 0) fail("division by zero");
        p *= QSqrt3(mpq_class(1 / q));
      } else {
        return p;
      }
    }
  }
  MultiPoly factor() {
    if (eat('-')) return -factor();
    MultiPoly base = primary();
    if (eat('^')) {
      mpq_class e = number();
      if (e.get_den() != 1 || e < 0) fail("bad exponent");
      MultiPoly r = MultiPoly::constant(n(), QSqrt3(1));
      for (long k = 0; k < e.get_num().get_si(); ++k) r = r * base;
      return r;
    }
    return base;
  }
  mpq_class number() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ > start) {
      size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (start == pos_) fail("expected number");
    return parse_rational(s_.substr(start, pos_ - start));
  }
  MultiPoly primary() {
    skip();
    if (eat('(')) {
      MultiPoly p = expr();
      if (!eat(')')) fail("expected )");
      return p;
    }
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      return MultiPoly::constant(n(), QSqrt3(number()));
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id = s_.substr(start, pos_ - start);
    if (id.empty()) fail("unexpected character");
    if (id == "s3") return MultiPoly::constant(n(), QSqrt3::sqrt3());
    auto it = std::find(vars_.begin(), vars_.end(), id);
    if (it == vars_.end()) fail("unknown variable " + id);
    return MultiPoly::variable(n(), static_cast<int>(it - vars_.begin()));
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;
};

}  // namespace

MultiPoly MultiPoly::parse(const std::string& text, const std::vector<std::string>& vars) {
  return Parser(text, vars).run();
}

}  // namespace mub
