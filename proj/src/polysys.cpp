#include "mub/polysys.hpp"

#include <map>

#include "mub/error.hpp"

namespace mub::polysys {

std::string Mode::to_string() const {
  return is_exact() ? "exact" : "approx(" + std::to_string(digits) + ")";
}

Mode Mode::parse(const std::string& s) {
  if (s == "exact") return exact();
  if (s.rfind("approx(", 0) == 0 && s.back() == ')') return approx(std::stoul(s.substr(7, s.size() - 8)));
  throw Error(ErrorKind::InvalidArgument, "unknown coefficient mode: " + s);
}

std::vector<std::string> variable_names(int dim) {
  std::vector<std::string> v;
  for (int j = 1; j < dim; ++j) v.push_back("x" + std::to_string(j));
  for (int j = 1; j < dim; ++j) v.push_back("y" + std::to_string(j));
  return v;
}

std::vector<std::string> PolynomialSystem::vars() const { return variable_names(dim); }

namespace {

using Lattice = std::vector<std::vector<mpz_class>>;

mpq_class dot(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  mpq_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Textbook LLL (delta = 3/4) with exact rational Gram-Schmidt; meant for a
// handful of short vectors.
void lll_reduce(Lattice& b) {
  const size_t n = b.size();
  auto as_q = [](const std::vector<mpz_class>& v) {
    std::vector<mpq_class> q(v.begin(), v.end());
    return q;
  };
  std::vector<std::vector<mpq_class>> bs(n);
  std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n));
  std::vector<mpq_class> bn(n);
  auto gram_schmidt = [&] {
    for (size_t i = 0; i < n; ++i) {
      bs[i] = as_q(b[i]);
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(as_q(b[i]), bs[j]) / bn[j];
        for (size_t t = 0; t < bs[i].size(); ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      bn[i] = dot(bs[i], bs[i]);
    }
  };
  gram_schmidt();
  size_t k = 1;
  int guard = 0;
  while (k < n && guard++ < 10000) {
    for (size_t j = k; j-- > 0;) {
      mpq_class m = mu[k][j];
      mpz_class r;
      mpq_class half = m + mpq_class(1, 2);
      mpz_fdiv_q(r.get_mpz_t(), half.get_num_mpz_t(), half.get_den_mpz_t());
      if (r != 0) {
        for (size_t t = 0; t < b[k].size(); ++t) b[k][t] -= r * b[j][t];
        gram_schmidt();
      }
    }
    if (bn[k] >= (mpq_class(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<size_t>(k - 1, 1);
    }
  }
}

constexpr long kMaxRelationCoeff = 1000000;

}  // namespace

std::optional<QSqrt3> detect_qsqrt3(const Real& v, unsigned digits) {
  const unsigned wd = digits + 10;
  PrecisionGuard guard(wd);
  const int scale_digits = std::min<int>(30, static_cast<int>(digits) - 5);
  if (scale_digits < 12) return std::nullopt;
  Real scale = pow(Real(10, wd), scale_digits);
  Real s3 = sqrt3_real(wd);
  auto to_z = [](const Real& x) {
    mpq_class q = to_rational(Real(round(x)));
    return mpz_class(q.get_num());
  };
  Lattice b = {{1, 0, 0, to_z(v * scale)}, {0, 1, 0, to_z(scale)}, {0, 0, 1, to_z(s3 * scale)}};
  lll_reduce(b);
  for (const auto& row : b) {
    const mpz_class &p = row[0], &q = row[1], &r = row[2];
    if (p == 0) continue;
    if (abs(p) > kMaxRelationCoeff || abs(q) > kMaxRelationCoeff || abs(r) > kMaxRelationCoeff) continue;
    QSqrt3 cand(mpq_class(-q, p), mpq_class(-r, p));
    cand.a.canonicalize();
    cand.b.canonicalize();
    Real err = abs(cand.to_real(wd) - v);
    Real tol = pow(Real(10, wd), -std::min<int>(30, static_cast<int>(digits) - 8));
    if (err < tol) return cand;
  }
  return std::nullopt;
}

namespace {

struct ColumnPolys {
  std::vector<MultiPoly> u;  // one per column, pair-sum form
};

// u_k = sum_{j<l} Re[c_j conj(c_l) z_j conj(z_l)] with c_j = conj(sqrt(d) H_jk),
// z_0 = 1, z_j = x_j + i y_j. Equals (|S_k|^2 - sum |z_j|^2) / 2.
ColumnPolys column_polys(const catalog::HadamardMatrix& h, Mode mode) {
  const int d = h.dim();
  const int n = d - 1;
  const int nv = 2 * n;
  const unsigned hd = h.digits();
  PrecisionGuard guard(hd + 10);
  Real root_d = sqrt(Real(d, hd + 10));
  Real zero_tol = pow(Real(10, hd + 10), -static_cast<int>(hd) + 6);

  std::map<std::string, QSqrt3> cache;
  auto coeff = [&](const Real& v) -> QSqrt3 {
    if (abs(v) < zero_tol) return {};
    if (!mode.is_exact()) return QSqrt3(round_significant(v, mode.digits));
    std::string key = to_decimal(v, hd - 6);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto q = detect_qsqrt3(v, hd);
    if (!q)
      throw Error(ErrorKind::NotRepresentable,
                  "coefficient " + to_decimal(v, 20) + " is not in Q(sqrt 3) within 1e-30");
    cache.emplace(key, *q);
    return *q;
  };

  auto xv = [&](int j) { return Monomial::var(j - 1); };
  auto yv = [&](int j) { return Monomial::var(n + j - 1); };

  ColumnPolys out;
  for (int k = 0; k < d; ++k) {
    std::vector<ComplexAP> c(d);
    for (int j = 0; j < d; ++j) {
      c[j] = h(j, k).conj();
      c[j] *= root_d;
    }
    std::vector<Term> terms;
    for (int j = 0; j < d; ++j)
      for (int l = j + 1; l < d; ++l) {
        ComplexAP w = c[j] * c[l].conj();
        QSqrt3 alpha = coeff(w.re), beta = coeff(w.im);
        if (j == 0) {
          terms.push_back({xv(l), alpha});
          terms.push_back({yv(l), beta});
        } else {
          terms.push_back({xv(j) * xv(l), alpha});
          terms.push_back({yv(j) * yv(l), alpha});
          terms.push_back({yv(j) * xv(l), -beta});
          terms.push_back({xv(j) * yv(l), beta});
        }
      }
    out.u.emplace_back(nv, std::move(terms));
  }
  return out;
}

MultiPoly normalize_exact(const MultiPoly& p, Mode mode) { return mode.is_exact() ? p.primitive() : p; }

std::vector<MultiPoly> modulus_polys(int d) {
  const int n = d - 1;
  std::vector<MultiPoly> out;
  for (int j = 0; j < n; ++j) {
    std::vector<Term> t = {{Monomial::var(j, 2), QSqrt3(1)}, {Monomial::var(n + j, 2), QSqrt3(1)},
                           {Monomial(), QSqrt3(-1)}};
    out.emplace_back(2 * n, std::move(t));
  }
  return out;
}

}  // namespace

PolynomialSystem mu_system(const catalog::HadamardMatrix& h, Mode mode) {
  if (!catalog::validate_hadamard(h).pass)
    throw Error(ErrorKind::InvalidArgument, "input matrix is not a complex Hadamard matrix");
  const int d = h.dim();
  if (2 * (d - 1) > kMaxVars) throw Error(ErrorKind::DimensionMismatch, "dimension too large for the polynomial layer");
  if (!mode.is_exact() && mode.digits < 3) throw Error(ErrorKind::InvalidArgument, "approx mode needs at least 3 digits");
  ColumnPolys cols = column_polys(h, mode);

  PolynomialSystem p;
  p.dim = d;
  p.mode = mode;
  p.polys = modulus_polys(d);
  for (int k = 0; k + 1 < d; ++k) p.polys.push_back(normalize_exact(cols.u[k], mode));
  p.dropped_column = normalize_exact(cols.u[d - 1], mode);
  p.source_family = h.family();
  for (const auto& v : h.params()) p.source_params.push_back(to_decimal(v, h.digits()));
  return p;
}

bool is_fourier6_system(const PolynomialSystem& p) {
  if (p.dim != 6 || !p.mode.is_exact() || p.simplified) return false;
  static const PolynomialSystem ref = mu_system(catalog::fourier(6), Mode::exact());
  if (p.polys.size() != ref.polys.size()) return false;
  for (size_t i = 0; i < ref.polys.size(); ++i)
    if (!(p.polys[i] == ref.polys[i])) return false;
  return true;
}

PolynomialSystem simplify_fourier6(const PolynomialSystem& p) {
  if (!is_fourier6_system(p)) throw Error(ErrorKind::WrongSource, "simplification applies only to the exact F6 system");
  ColumnPolys cols = column_polys(catalog::fourier(6), Mode::exact());
  // column roles: p+ 0, p- 3, q+ 1, q- 2, r+ 4, r- 5
  const MultiPoly &pp = cols.u[0], &pm = cols.u[3], &qp = cols.u[1], &qm = cols.u[2], &rp = cols.u[4],
                  &rm = cols.u[5];
  auto two = QSqrt3(2);
  std::vector<MultiPoly> combos = {
      pp * two - pm * two + qp - qm - rp + rm,
      qp + qm - rp - rm,
      pp - pm - qp + qm + rp - rm,
      pp + pm,
      qp - qm + rp - rm,
  };
  PolynomialSystem out = p;
  out.polys = modulus_polys(6);
  for (auto& c : combos) out.polys.push_back(c.primitive());
  out.simplified = true;
  return out;
}

PolynomialSystem round_coefficients(const PolynomialSystem& p, unsigned digits) {
  if (digits < 3) throw Error(ErrorKind::InvalidArgument, "rounding needs at least 3 digits");
  const unsigned wd = std::max(60u, digits + 20);
  auto round_poly = [&](const MultiPoly& f) {
    std::vector<Term> t;
    for (const auto& term : f.terms()) {
      mpq_class r = term.coeff.is_rational() ? round_significant(term.coeff.a, digits)
                                             : round_significant(term.coeff.to_real(wd), digits);
      t.push_back({term.mono, QSqrt3(r)});
    }
    return MultiPoly(f.nvars(), std::move(t));
  };
  PolynomialSystem out = p;
  out.mode = Mode::approx(digits);
  for (auto& f : out.polys) f = round_poly(f);
  out.dropped_column = round_poly(p.dropped_column);
  return out;
}

Real evaluate_residual(const PolynomialSystem& p, const std::vector<Real>& point, unsigned digits) {
  if (static_cast<int>(point.size()) != p.nvars())
    throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(point.size()) + " coordinates, system has " +
                                                  std::to_string(p.nvars()) + " variables");
  Real worst(0, digits);
  for (const auto& f : p.polys) {
    Real v = abs(f.evaluate(point, digits));
    if (v > worst) worst = v;
  }
  return worst;
}

Real dropped_column_residual(const PolynomialSystem& p, const std::vector<Real>& point, unsigned digits) {
  if (static_cast<int>(point.size()) != p.nvars())
    throw Error(ErrorKind::DimensionMismatch, "point dimension does not match the system");
  return abs(p.dropped_column.evaluate(point, digits));
}

}  // namespace mub::polysys
