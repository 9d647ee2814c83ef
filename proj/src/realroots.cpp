#include "mub/realroots.hpp"

#include <algorithm>
#include <cmath>

#include "mub/complex_ap.hpp"
#include "mub/error.hpp"

namespace mub::realroots {

namespace {

void trim(UniPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

QSqrt3 abs_q(const QSqrt3& c) { return c.sign() < 0 ? -c : c; }

UniPoly scaled(UniPoly p, const QSqrt3& c) {
  for (auto& x : p) x *= c;
  trim(p);
  return p;
}

UniPoly monic(const UniPoly& p) { return p.empty() ? p : scaled(p, p.back().inverse()); }

// remainder of a modulo b over the field
UniPoly rem(UniPoly a, const UniPoly& b) {
  const int db = degree(b);
  if (db < 0) throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
  QSqrt3 inv = b.back().inverse();
  while (degree(a) >= db) {
    const int shift = degree(a) - db;
    QSqrt3 q = a.back() * inv;
    for (int k = 0; k <= db; ++k) a[shift + k] -= q * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

UniPoly quotient(UniPoly a, const UniPoly& b) {
  const int db = degree(b);
  QSqrt3 inv = b.back().inverse();
  UniPoly q(std::max(0, degree(a) - db + 1));
  while (degree(a) >= db) {
    const int shift = degree(a) - db;
    QSqrt3 c = a.back() * inv;
    q[shift] = c;
    for (int k = 0; k <= db; ++k) a[shift + k] -= c * b[k];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return q;
}

UniPoly gcd(UniPoly a, UniPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UniPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

double approx(const QSqrt3& c) { return c.a.get_d() + c.b.get_d() * 1.7320508075688772; }

// Strict bound on the absolute value of all roots.
mpq_class root_bound(const UniPoly& p) {
  const double lead = std::abs(approx(p.back()));
  double m = 0;
  for (int k = 0; k < degree(p); ++k) m = std::max(m, std::abs(approx(p[k])) / lead);
  double b = std::ceil(1.0 + m * 1.001) + 1.0;
  mpz_class pow2 = 1;
  while (mpq_class(pow2) < b) pow2 *= 2;
  return pow2;
}

}  // namespace

int degree(const UniPoly& p) {
  int d = static_cast<int>(p.size()) - 1;
  while (d >= 0 && p[d].is_zero()) --d;
  return d;
}

UniPoly univariate(const MultiPoly& f, int var) {
  UniPoly p;
  for (const auto& t : f.terms()) {
    if (t.mono.degree() != t.mono[var])
      throw Error(ErrorKind::InvalidArgument, "polynomial is not univariate in the requested variable");
    const int e = t.mono[var];
    if (static_cast<int>(p.size()) <= e) p.resize(e + 1);
    p[e] += t.coeff;
  }
  trim(p);
  return p;
}

UniPoly parse_univariate(const std::string& text) { return univariate(MultiPoly::parse(text, {"t"}), 0); }

UniPoly derivative(const UniPoly& p) {
  UniPoly d;
  for (size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * QSqrt3(static_cast<long>(k)));
  trim(d);
  return d;
}

UniPoly square_free(const UniPoly& p) {
  UniPoly q = p;
  trim(q);
  if (degree(q) <= 0) return monic(q);
  UniPoly g = gcd(q, derivative(q));
  return monic(degree(g) > 0 ? quotient(q, g) : q);
}

int sign_at(const UniPoly& p, const mpq_class& t) {
  mpq_class a = 0, b = 0;
  for (size_t k = p.size(); k-- > 0;) {
    a = a * t + p[k].a;
    b = b * t + p[k].b;
  }
  return QSqrt3(a, b).sign();
}

Real evaluate(const UniPoly& p, const Real& t, unsigned digits) {
  PrecisionGuard guard(digits);
  Real v(0, digits);
  for (size_t k = p.size(); k-- > 0;) v = v * t + p[k].to_real(digits);
  return v;
}

std::vector<UniPoly> sturm_sequence(const UniPoly& p) {
  std::vector<UniPoly> seq;
  UniPoly a = p;
  trim(a);
  if (a.empty()) return seq;
  seq.push_back(a);
  UniPoly b = derivative(a);
  while (!b.empty()) {
    b = scaled(b, abs_q(b.back()).inverse());
    seq.push_back(b);
    UniPoly r = rem(seq[seq.size() - 2], b);
    for (auto& c : r) c = -c;
    b = std::move(r);
  }
  return seq;
}

namespace {

int count_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace

int sign_variations(const std::vector<UniPoly>& seq, const mpq_class& t) {
  std::vector<int> s;
  for (const auto& p : seq) s.push_back(sign_at(p, t));
  return count_variations(s);
}

int sign_variations_at_infinity(const std::vector<UniPoly>& seq, int inf_sign) {
  std::vector<int> s;
  for (const auto& p : seq) {
    int sg = p.back().sign();
    if (inf_sign < 0 && degree(p) % 2 == 1) sg = -sg;
    s.push_back(sg);
  }
  return count_variations(s);
}

Real IsolatingInterval::midpoint(unsigned digits) const {
  if (exact) return make_real(lo, digits);
  return make_real(mpq_class((lo + hi) / 2), digits);
}

std::vector<IsolatingInterval> sturm_isolate(const UniPoly& input) {
  UniPoly p = input;
  trim(p);
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, "cannot isolate the roots of the zero polynomial");
  if (degree(p) == 0) return {};
  UniPoly sf = square_free(p);
  const bool was_squarefree = degree(sf) == degree(p);
  auto seq = sturm_sequence(sf);
  const int total = sign_variations_at_infinity(seq, -1) - sign_variations_at_infinity(seq, 1);

  mpq_class bound = root_bound(sf);
  struct Job {
    mpq_class lo, hi;
    int vlo, vhi;
  };
  std::vector<Job> stack = {{-bound, bound, sign_variations(seq, -bound), sign_variations(seq, bound)}};
  std::vector<IsolatingInterval> out;
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    const int count = j.vlo - j.vhi;
    if (count <= 0) continue;
    if (count == 1) {
      IsolatingInterval iv;
      iv.squarefree = was_squarefree;
      if (sign_at(sf, j.hi) == 0) {
        iv.lo = iv.hi = j.hi;
        iv.exact = true;
      } else {
        iv.lo = j.lo;
        iv.hi = j.hi;
      }
      out.push_back(iv);
      continue;
    }
    mpq_class mid = (j.lo + j.hi) / 2;
    const int vm = sign_variations(seq, mid);
    stack.push_back({mid, j.hi, vm, j.vhi});
    stack.push_back({j.lo, mid, j.vlo, vm});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  if (static_cast<int>(out.size()) != total)
    throw Error(ErrorKind::PrecisionExhausted, "Sturm count mismatch: " + std::to_string(out.size()) + " intervals for " +
                                                   std::to_string(total) + " roots");
  return out;
}

IsolatingInterval refine(const IsolatingInterval& iv, const UniPoly& input, unsigned digits) {
  if (iv.exact) return iv;
  UniPoly p = iv.squarefree ? input : square_free(input);
  trim(p);
  IsolatingInterval r = iv;
  const int s_hi = sign_at(p, r.hi);
  if (s_hi == 0) {
    r.lo = r.hi;
    r.exact = true;
    return r;
  }
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, digits);
  const mpq_class base_tol(mpz_class(1), ten_pow);
  auto tolerance = [&] {
    mpq_class m = abs(r.lo) > abs(r.hi) ? mpq_class(abs(r.lo)) : mpq_class(abs(r.hi));
    return m > 1 ? mpq_class(base_tol * m) : base_tol;
  };
  auto bisect = [&](int steps) {
    for (int k = 0; k < steps && r.width() > tolerance(); ++k) {
      mpq_class mid = (r.lo + r.hi) / 2;
      const int s = sign_at(p, mid);
      if (s == 0) {
        r.lo = r.hi = mid;
        r.exact = true;
        return;
      }
      if (s == s_hi) r.hi = mid;
      else r.lo = mid;
    }
  };
  const unsigned wd = digits + 20;
  const UniPoly dp = derivative(p);
  bisect(40);
  while (!r.exact && r.width() > tolerance()) {
    // Newton guess, accepted only when a sign change certifies it.
    PrecisionGuard guard(wd);
    Real x = r.midpoint(wd);
    for (int it = 0; it < 200; ++it) {
      Real fx = evaluate(p, x, wd), dfx = evaluate(dp, x, wd);
      if (dfx == 0) break;
      Real step = fx / dfx;
      x -= step;
      if (abs(step) <= abs(x) * pow(Real(10, wd), -static_cast<int>(digits) - 10) || step == 0) break;
    }
    mpq_class tol = tolerance() / 4;
    mpq_class guess = to_rational(x);
    mpq_class a = guess - tol, b = guess + tol;
    if (a > r.lo && b < r.hi) {
      int sa = sign_at(p, a), sb = sign_at(p, b);
      if (sa == 0 || sb == 0) {
        r.lo = r.hi = sa == 0 ? a : b;
        r.exact = true;
        break;
      }
      if (sb == s_hi && sa != s_hi) {
        r.lo = a;
        r.hi = b;
        break;
      }
    }
    bisect(30);
  }
  return r;
}

std::vector<Real> real_roots(const UniPoly& p, unsigned digits) {
  UniPoly sf = square_free(p);
  std::vector<Real> out;
  for (const auto& iv : sturm_isolate(sf)) out.push_back(refine(iv, sf, digits + 5).midpoint(digits + 10));
  return out;
}

// ---------------------------------------------------------------------------
// Back-substitution

namespace {

struct Ball {
  Real mid;
  Real rad;
};

// Value and error radius of f at a point whose coordinates carry radii.
Ball evaluate_ball(const MultiPoly& f, const std::vector<Real>& x, const std::vector<Real>& rad, unsigned wd) {
  PrecisionGuard guard(wd);
  Real s3 = sqrt3_real(wd);
  Real value(0, wd), spread(0, wd), magnitude(0, wd);
  for (const auto& t : f.terms()) {
    Real c = make_real(t.coeff.a, wd);
    if (sgn(t.coeff.b) != 0) c += make_real(t.coeff.b, wd) * s3;
    Real m(1, wd), upper(1, wd), lower(1, wd);
    for (int i = 0; i < f.nvars(); ++i)
      for (int k = 0; k < t.mono[i]; ++k) {
        m *= x[i];
        upper *= abs(x[i]) + rad[i];
        lower *= abs(x[i]);
      }
    value += c * m;
    spread += abs(c) * (upper - lower);
    magnitude += abs(c) * upper;
  }
  Real eps = pow(Real(10, wd), -static_cast<int>(wd) + 4);
  return {value, spread + magnitude * eps};
}

bool excludes_zero(const Ball& b) { return abs(b.mid) > b.rad; }

// Aberth iteration; returns all complex roots of sum c_k t^k.
std::vector<ComplexAP> complex_roots(const std::vector<Real>& c, unsigned wd) {
  PrecisionGuard guard(wd);
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<ComplexAP> z(n);
  if (n == 1) {
    z[0] = ComplexAP(Real(-c[0] / c[1], wd), Real(0, wd), wd);
    return z;
  }
  Real bound(0, wd);
  for (int k = 0; k < n; ++k) bound = max(bound, Real(abs(c[k] / c[n]), wd));
  Real radius = Real(1, wd) + bound;
  Real tau = 2 * pi_real(wd);
  for (int k = 0; k < n; ++k) {
    Real ang = tau * (Real(k, wd) + Real("0.25", wd)) / n + Real("0.4", wd);
    z[k] = ComplexAP(Real(radius * cos(ang) / 2, wd), Real(radius * sin(ang) / 2, wd), wd);
  }
  auto eval = [&](const ComplexAP& t, ComplexAP& v, ComplexAP& dv) {
    v = ComplexAP(Real(c[n], wd), Real(0, wd), wd);
    dv = ComplexAP(wd);
    for (int k = n - 1; k >= 0; --k) {
      dv = dv * t + v;
      v = v * t + ComplexAP(Real(c[k], wd), Real(0, wd), wd);
    }
  };
  Real tol = pow(Real(10, wd), -static_cast<int>(wd) + 8);
  std::vector<char> done(n, 0);
  for (int it = 0; it < 2000; ++it) {
    bool all = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      ComplexAP v, dv;
      eval(z[k], v, dv);
      if (v.re == 0 && v.im == 0) {
        done[k] = 1;
        continue;
      }
      ComplexAP ratio = v / dv;
      ComplexAP sum(wd);
      for (int j = 0; j < n; ++j)
        if (j != k) sum += ComplexAP::from_int(1, 0, wd) / (z[k] - z[j]);
      ComplexAP corr = ratio / (ComplexAP::from_int(1, 0, wd) - ratio * sum);
      z[k] -= corr;
      if (corr.abs() <= tol * max(Real(1, wd), z[k].abs())) done[k] = 1;
      else all = false;
    }
    if (all) break;
  }
  return z;
}

struct Partial {
  std::vector<Real> x;
  std::vector<Real> rad;
};

int main_rank(const MultiPoly& f, const std::vector<int>& rank_of) {
  int best = static_cast<int>(rank_of.size());
  for (const auto& t : f.terms())
    for (int v = 0; v < f.nvars(); ++v)
      if (t.mono[v] > 0) best = std::min(best, rank_of[v]);
  return best;
}

// Coefficients (as balls) of f viewed as a polynomial in `var`.
std::vector<Ball> specialize(const MultiPoly& f, int var, const Partial& p, unsigned wd) {
  int deg = 0;
  for (const auto& t : f.terms()) deg = std::max(deg, t.mono[var]);
  std::vector<std::vector<Term>> parts(deg + 1);
  for (const auto& t : f.terms()) {
    Monomial m = t.mono;
    m.set(var, 0);
    parts[t.mono[var]].push_back({m, t.coeff});
  }
  std::vector<Ball> out;
  for (auto& terms : parts) out.push_back(evaluate_ball(MultiPoly(f.nvars(), std::move(terms)), p.x, p.rad, wd));
  return out;
}

struct Candidate {
  Real value;
  Real rad;
};

// Real roots of the ball polynomial c, as value plus radius. Clustered
// roots (multiple roots of the exact polynomial) are merged.
std::vector<Candidate> real_candidates(const std::vector<Ball>& c, int deg, unsigned wd) {
  PrecisionGuard guard(wd);
  std::vector<Real> mids;
  for (int k = 0; k <= deg; ++k) mids.push_back(c[k].mid);
  auto z = complex_roots(mids, wd);
  const Real cluster_tol = pow(Real(10, wd), -static_cast<int>(wd) / 8);
  const Real im_tol = pow(Real(10, wd), -static_cast<int>(wd) / 8);
  std::vector<Candidate> out;
  std::vector<char> used(z.size(), 0);
  for (size_t k = 0; k < z.size(); ++k) {
    if (used[k]) continue;
    std::vector<size_t> members = {k};
    for (size_t j = k + 1; j < z.size(); ++j)
      if (!used[j] && (z[j] - z[k]).abs() < cluster_tol) members.push_back(j);
    Real re(0, wd), im(0, wd);
    for (size_t j : members) {
      used[j] = 1;
      re += z[j].re;
      im += z[j].im;
    }
    re /= members.size();
    im /= members.size();
    if (abs(im) > im_tol) continue;
    Real spread(0, wd);
    for (size_t j : members) spread = max(spread, Real((z[j] - ComplexAP(re, im, wd)).abs(), wd));
    Real rad = 2 * spread + pow(Real(10, wd), -static_cast<int>(wd) / 3);
    if (members.size() == 1) {
      // Simple root: radius from the coefficient errors over |g'(r)|.
      Real dg(0, wd), err(0, wd), tp(1, wd);
      for (int e = 0; e <= deg; ++e) {
        err += c[e].rad * tp;
        if (e + 1 <= deg) dg += (e + 1) * c[e + 1].mid * tp;
        tp *= re;
      }
      if (dg != 0) rad = max(rad, Real(4 * err / abs(dg), wd));
    }
    out.push_back({re, rad});
  }
  return out;
}

}  // namespace

Real newton_polish(const polysys::PolynomialSystem& sys, std::vector<Real>& x, unsigned wd, int max_iter,
                   bool singular_ok) {
  PrecisionGuard guard(wd);
  const int n = sys.nvars();
  std::vector<std::vector<MultiPoly>> jac(sys.polys.size());
  for (size_t i = 0; i < sys.polys.size(); ++i)
    for (int v = 0; v < n; ++v) jac[i].push_back(sys.polys[i].derivative(v));
  Real last(-1, wd);
  std::vector<Real> start = x;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::vector<Real>> a(n, std::vector<Real>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (int v = 0; v < n; ++v) a[i][v] = jac[i][v].evaluate(x, wd);
      a[i][n] = -sys.polys[i].evaluate(x, wd);
    }
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
      if (abs(a[piv][col]) < pow(Real(10, wd), -static_cast<int>(wd) / 4)) {
        if (singular_ok && it > 0) return last;
        x = start;
        return Real(-1, wd);
      }
      std::swap(a[piv], a[col]);
      for (int r = col + 1; r < n; ++r) {
        Real f = a[r][col] / a[col][col];
        for (int k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
      }
    }
    std::vector<Real> dx(n);
    for (int r = n - 1; r >= 0; --r) {
      Real s = a[r][n];
      for (int k = r + 1; k < n; ++k) s -= a[r][k] * dx[k];
      dx[r] = s / a[r][r];
    }
    Real step(0, wd);
    for (int i = 0; i < n; ++i) {
      x[i] += dx[i];
      step = max(step, Real(abs(dx[i]), wd));
    }
    last = step;
    if (step < pow(Real(10, wd), -static_cast<int>(wd) + 10)) break;
  }
  return last;
}

namespace {

SolutionSet solve_at(const groebner::GroebnerBasis& g, const polysys::PolynomialSystem& original, unsigned digits,
                     unsigned wd) {
  PrecisionGuard guard(wd);
  const auto& order = g.order;
  const int n = order.nvars();
  std::vector<int> rank_of(n);
  for (int r = 0; r < n; ++r) rank_of[order.vars[r]] = r;

  SolutionSet out;
  out.dim = original.dim;
  out.mode = original.mode;
  out.refinement_digits = digits;
  out.stats.working_digits = wd;
  out.error_bound = Real(0, digits + 10);

  std::vector<std::vector<const MultiPoly*>> levels(n);
  for (const auto& f : g.polys) {
    int r = main_rank(f, rank_of);
    if (r == n) return out;  // basis {1}: no solutions
    levels[r].push_back(&f);
  }

  const int inner = order.vars[n - 1];
  std::vector<Partial> partials;
  {
    UniPoly p = univariate(*levels[n - 1].front(), inner);
    for (const auto& iv : sturm_isolate(p)) {
      UniPoly sf = square_free(p);
      IsolatingInterval r = refine(iv, sf, wd - 10);
      Partial part;
      part.x.assign(n, Real(0, wd));
      part.rad.assign(n, Real(0, wd));
      part.x[inner] = r.midpoint(wd);
      part.rad[inner] = make_real(mpq_class(r.width() / 2), wd) + pow(Real(10, wd), -static_cast<int>(wd) + 4);
      partials.push_back(std::move(part));
    }
    out.stats.explored += partials.size();
  }

  for (int rank = n - 2; rank >= 0; --rank) {
    const int var = order.vars[rank];
    std::vector<Partial> next;
    for (const auto& part : partials) {
      // pivot: least certified degree in var
      int best_deg = -1;
      std::vector<Ball> best;
      for (const MultiPoly* f : levels[rank]) {
        auto c = specialize(*f, var, part, wd);
        int d = static_cast<int>(c.size()) - 1;
        while (d >= 0 && !excludes_zero(c[d])) --d;
        if (d > 0 && (best_deg < 0 || d < best_deg)) {
          best_deg = d;
          best = c;
        }
      }
      if (best_deg < 0)
        throw Error(ErrorKind::PrecisionExhausted, "no certified pivot polynomial at level " + std::to_string(rank));
      auto cands = real_candidates(best, best_deg, wd);
      out.stats.explored += cands.size();
      for (auto& cand : cands) {
        Partial q = part;
        q.x[var] = cand.value;
        q.rad[var] = cand.rad;
        bool ok = true;
        for (const MultiPoly* f : levels[rank])
          if (excludes_zero(evaluate_ball(*f, q.x, q.rad, wd))) {
            ok = false;
            break;
          }
        if (!ok) {
          ++out.stats.rejected;
          continue;
        }
        next.push_back(std::move(q));
      }
    }
    partials = std::move(next);
  }

  const Real res_tol = pow(Real(10, wd), 2 - static_cast<int>(digits));
  const Real target = pow(Real(10, wd), -static_cast<int>(digits));
  std::vector<std::vector<Real>> pts;
  for (auto& part : partials) {
    std::vector<Real> x = part.x;
    Real err(0, wd);
    for (const auto& r : part.rad) err = max(err, r);
    Real step = newton_polish(original, x, wd);
    if (step >= 0) {
      err = step * 10 + pow(Real(10, wd), -static_cast<int>(wd) + 10);
    } else {
      x = part.x;
    }
    if (polysys::evaluate_residual(original, x, wd) >= res_tol) {
      ++out.stats.rejected;
      continue;
    }
    if (err > target)
      throw Error(ErrorKind::PrecisionExhausted, "coordinate error " + to_decimal(err, 3) + " above 1e-" +
                                                      std::to_string(digits));
    out.error_bound = max(out.error_bound, Real(err, digits + 10));
    bool dup = false;
    for (const auto& p : pts) {
      Real dist(0, wd);
      for (int i = 0; i < n; ++i) dist = max(dist, Real(abs(p[i] - x[i]), wd));
      if (dist < 2 * target) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    pts.push_back(std::move(x));
  }
  std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
    for (int i = 0; i < n; ++i)
      if (abs(a[i] - b[i]) > 2 * target) return a[i] < b[i];
    return false;
  });
  for (auto& p : pts) {
    std::vector<Real> q;
    for (auto& v : p) q.push_back(Real(v, digits + 10));
    out.points.push_back(std::move(q));
  }
  out.stats.accepted = out.points.size();
  return out;
}

}  // namespace

SolutionSet solve_triangular(const groebner::GroebnerBasis& g, const polysys::PolynomialSystem& original,
                             unsigned digits) {
  if (g.order.kind != groebner::OrderKind::Lex)
    throw Error(ErrorKind::InvalidArgument, "back-substitution needs a lex basis");
  if (!g.polys.empty() && g.polys[0].nvars() != original.nvars())
    throw Error(ErrorKind::DimensionMismatch, "basis and system use different variables");
  if (!groebner::is_zero_dimensional(g)) throw Error(ErrorKind::NotZeroDimensional, "the basis has a positive-dimensional variety");
  const unsigned base = 3 * digits + 40;
  for (unsigned wd = base;; wd *= 2) {
    try {
      return solve_at(g, original, digits, wd);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PrecisionExhausted || wd >= 4 * base) throw;
    }
  }
}

}  // namespace mub::realroots
