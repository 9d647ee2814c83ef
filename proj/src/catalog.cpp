#include "mub/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "mub/error.hpp"

namespace mub::catalog {

namespace {

constexpr unsigned kGuard = 20;

using Grid = std::vector<std::vector<ComplexAP>>;

// Scales a unimodular grid by 1/sqrt(d) into a HadamardMatrix.
HadamardMatrix from_unimodular(const Grid& u, Family family, std::vector<Real> params,
                               std::optional<Branch> branch, unsigned digits) {
  int d = static_cast<int>(u.size());
  PrecisionGuard g(digits + kGuard);
  Real scale = 1 / sqrt(Real(d, digits + kGuard));
  std::vector<ComplexAP> entries;
  entries.reserve(d * d);
  for (const auto& row : u) {
    for (const auto& z : row) {
      ComplexAP e = z;
      e *= scale;
      entries.emplace_back(Real(e.re, digits), Real(e.im, digits), digits);
    }
  }
  return HadamardMatrix(d, std::move(entries), family, std::move(params), branch, digits);
}

Real tolerance_for(unsigned digits) {
  Real tol(10, digits);
  return Real(pow(tol, 2 - static_cast<int>(digits)), digits);
}

ComplexAP cint(long re, long im, unsigned digits) { return ComplexAP::from_int(re, im, digits); }

Grid dita0_grid(unsigned digits) {
  static const int kRe[6][6] = {{1, 1, 1, 1, 1, 1},   {1, -1, 0, 0, 0, 0}, {1, 0, -1, 0, 0, 0},
                                {1, 0, 0, -1, 0, 0},  {1, 0, 0, 0, -1, 0}, {1, 0, 0, 0, 0, -1}};
  static const int kIm[6][6] = {{0, 0, 0, 0, 0, 0},   {0, 0, 1, -1, -1, 1}, {0, 1, 0, 1, -1, -1},
                                {0, -1, 1, 0, 1, -1}, {0, -1, -1, 1, 0, 1}, {0, 1, -1, -1, 1, 0}};
  Grid g(6, std::vector<ComplexAP>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) g[i][j] = cint(kRe[i][j], kIm[i][j], digits);
  return g;
}

// Hadamard (entrywise) product with Exp[2 pi i R].
void apply_phases(Grid& g, const std::vector<std::vector<Real>>& r, unsigned digits) {
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j)
      if (r[i][j] != 0) g[i][j] *= ComplexAP::unit_turns(r[i][j], digits);
}

Grid fourier_grid(int d, unsigned digits) {
  Grid g(d, std::vector<ComplexAP>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      int m = (j * k) % d;
      g[j][k] = ComplexAP::unit_turns(Real(m, digits) / d, digits);
    }
  // exact values for the obvious roots of unity
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      int m = (j * k) % d;
      if (m == 0) g[j][k] = cint(1, 0, digits);
      else if (2 * m == d) g[j][k] = cint(-1, 0, digits);
      else if (4 * m == d) g[j][k] = cint(0, 1, digits);
      else if (4 * m == 3 * d) g[j][k] = cint(0, -1, digits);
    }
  return g;
}

Grid transpose(const Grid& g) {
  Grid t = g;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) t[i][j] = g[j][i];
  return t;
}

Grid spectral_grid(unsigned digits) {
  ComplexAP one = cint(1, 0, digits);
  ComplexAP w = ComplexAP::unit_turns(Real(1, digits) / 3, digits);
  ComplexAP w2 = w.conj();
  return {{one, one, one, one, one, one}, {one, one, w, w, w2, w2},   {one, w, one, w2, w2, w},
          {one, w, w2, one, w, w2},       {one, w2, w2, w, one, w},   {one, w2, w, w2, w, one}};
}

Grid circulant_grid(unsigned digits) {
  PrecisionGuard guard(digits + kGuard);
  unsigned wd = digits + kGuard;
  Real s3 = sqrt3_real(wd);
  ComplexAP z(Real((1 - s3) / 2, wd), Real(sqrt(s3 / 2), wd), wd);
  ComplexAP i = cint(0, 1, wd);
  std::array<ComplexAP, 6> row = {cint(1, 0, wd), i * z, -z, -i, -z.conj(), i * z.conj()};
  Grid g(6, std::vector<ComplexAP>(6));
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) g[j][k] = row[((k - j) % 6 + 6) % 6];
  return g;
}

Grid hermitean_grid(const Real& theta, Branch branch, unsigned digits) {
  unsigned wd = digits + kGuard;
  PrecisionGuard guard(wd);
  ComplexAP one = cint(1, 0, wd), two = cint(2, 0, wd);
  ComplexAP y = ComplexAP::unit_turns(theta, wd);
  ComplexAP y2 = y * y;
  ComplexAP z = (one + two * y - y2) / (y * (-one + two * y + y2));
  ComplexAP disc = two * (one + two * y + two * y2 * y + y2 * y2);
  ComplexAP root = sqrt(disc);
  if (branch == Branch::Minus) root = -root;
  ComplexAP x = (one + two * y + y2 + root) / (one + two * y - y2);
  ComplexAP t = x * y * z;
  auto c = [](const ComplexAP& v) { return v.conj(); };
  return {{one, one, one, one, one, one},
          {one, -one, -c(x), -y, y, c(x)},
          {one, -x, one, y, c(z), -c(t)},
          {one, -c(y), c(y), -one, -c(t), c(t)},
          {one, c(y), z, -t, one, -c(x)},
          {one, x, -t, t, -x, -one}};
}

Grid symmetric_grid(const SymmetricEntries& e) {
  ComplexAP one = cint(1, 0, e.x.digits);
  const auto& x = e.x;
  return {{one, one, one, one, one, one}, {one, -one, x, x, -x, -x},   {one, x, e.d, e.a, e.b, e.c},
          {one, x, e.a, e.d, e.c, e.b},   {one, -x, e.b, e.c, e.p, e.q}, {one, -x, e.c, e.b, e.q, e.p}};
}

Grid szollosi_grid(const SzollosiEntries& e) {
  const auto &x = e.x, &y = e.y, &u = e.u, &v = e.v;
  ComplexAP one = cint(1, 0, x.digits);
  ComplexAP xy = x * y, uv = u * v;
  return {{one, one, one, one, one, one},
          {one, x * xy, xy * y, xy / uv, u * xy, v * xy},
          {one, x / y, x * xy, x / u, x / v, uv * x},
          {one, uv * x, u * xy, -one, -(u * xy), -(uv * x)},
          {one, x / u, v * xy, -(x / u), -one, -(v * xy)},
          {one, x / v, xy / uv, -(xy / uv), -(x / v), -one}};
}

bool grid_is_hadamard(const Grid& g, unsigned digits) {
  HadamardMatrix h = from_unimodular(g, Family::Custom, {}, std::nullopt, digits);
  return validate_hadamard(h).pass;
}

Real to_param(double v, unsigned digits) { return Real(v, digits); }

void require_region(Family f, const std::vector<Real>& params, const BuildOptions& opts) {
  if (opts.override_region) return;
  if (!fundamental_region(f).contains(params, opts.dim)) {
    std::string s;
    for (const auto& p : params) s += to_decimal(p, 12) + " ";
    throw Error(ErrorKind::OutOfRegion, to_string(f) + " parameters outside fundamental region: " + s);
  }
}

void require_count(Family f, const std::vector<Real>& params, size_t n) {
  if (params.size() != n)
    throw Error(ErrorKind::InvalidArgument,
                to_string(f) + " expects " + std::to_string(n) + " parameter(s), got " + std::to_string(params.size()));
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Fourier: return "Fourier";
    case Family::FourierT: return "FourierT";
    case Family::Dita: return "Dita";
    case Family::Hermitean: return "Hermitean";
    case Family::Symmetric: return "Symmetric";
    case Family::Szollosi: return "Szollosi";
    case Family::SzollosiT: return "SzollosiT";
    case Family::Circulant: return "Circulant";
    case Family::Spectral: return "Spectral";
    case Family::Custom: return "Custom";
  }
  return "Custom";
}

Family family_from_string(const std::string& name) {
  std::string n;
  for (char ch : name) n += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (n == "fourier" || n == "f") return Family::Fourier;
  if (n == "fouriert" || n == "ft") return Family::FourierT;
  if (n == "dita" || n == "d") return Family::Dita;
  if (n == "hermitean" || n == "hermitian" || n == "b") return Family::Hermitean;
  if (n == "symmetric" || n == "m") return Family::Symmetric;
  if (n == "szollosi" || n == "x") return Family::Szollosi;
  if (n == "szollosit" || n == "xt") return Family::SzollosiT;
  if (n == "circulant" || n == "c") return Family::Circulant;
  if (n == "spectral" || n == "s") return Family::Spectral;
  if (n == "custom") return Family::Custom;
  throw Error(ErrorKind::InvalidArgument, "unknown family: " + name);
}

HadamardMatrix::HadamardMatrix(int dim, std::vector<ComplexAP> entries, Family family,
                               std::vector<Real> params, std::optional<Branch> branch, unsigned digits)
    : dim_(dim),
      entries_(std::move(entries)),
      family_(family),
      params_(std::move(params)),
      branch_(branch),
      digits_(digits) {
  if (dim_ < 1 || entries_.size() != static_cast<size_t>(dim_ * dim_))
    throw Error(ErrorKind::DimensionMismatch, "matrix entry count does not match dimension");
}

HadamardMatrix HadamardMatrix::transposed() const {
  std::vector<ComplexAP> t(entries_.size());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t[i * dim_ + j] = entries_[j * dim_ + i];
  return {dim_, std::move(t), family_, params_, branch_, digits_};
}

HadamardMatrix HadamardMatrix::conjugated() const {
  std::vector<ComplexAP> t;
  t.reserve(entries_.size());
  for (const auto& z : entries_) t.push_back(z.conj());
  return {dim_, std::move(t), family_, params_, branch_, digits_};
}

HadamardMatrix HadamardMatrix::permuted(const std::vector<int>& rows, const std::vector<int>& cols) const {
  std::vector<ComplexAP> t(entries_.size());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t[i * dim_ + j] = entries_[rows[i] * dim_ + cols[j]];
  return {dim_, std::move(t), Family::Custom, {}, std::nullopt, digits_};
}

HadamardMatrix HadamardMatrix::with_family(Family f, std::vector<Real> params) const {
  return {dim_, entries_, f, std::move(params), branch_, digits_};
}

Real hermitean_theta0(unsigned digits) {
  PrecisionGuard g(digits + kGuard);
  Real v = acos(1 - sqrt3_real(digits + kGuard)) / (2 * pi_real(digits + kGuard));
  return Real(v, digits);
}

Real deltoid(const Real& a, const Real& b) {
  Real r2 = a * a + b * b;
  Real re_cube = a * a * a - 3 * a * b * b;
  return r2 * r2 + 18 * r2 - 8 * re_cube - 27;
}

bool FundamentalRegion::contains(const std::vector<Real>& p, int dim) const {
  switch (family) {
    case Family::Fourier:
    case Family::FourierT:
      if (dim != 6) return p.empty();
      if (p.empty()) return true;
      if (p.size() != 2) return false;
      return p[0] <= Real(1) / 6 && p[1] >= 0 && 2 * p[1] <= p[0];
    case Family::Dita:
      return p.size() == 1 && abs(p[0]) <= Real(1) / 8;
    case Family::Symmetric:
      return p.size() == 1 && p[0] >= 0 && p[0] <= Real(1) / 2;
    case Family::Hermitean: {
      if (p.size() != 1) return false;
      Real t0 = hermitean_theta0(static_cast<unsigned>(p[0].precision()));
      // the endpoint is irrational; allow rounding at the working precision
      Real slack = pow(Real(10), -static_cast<int>(p[0].precision()) + 5);
      return p[0] >= t0 - slack && p[0] <= 1 - t0 + slack;
    }
    case Family::Szollosi:
    case Family::SzollosiT: {
      if (p.size() != 2) return false;
      const Real &a = p[0], &b = p[1];
      Real slack = pow(Real(10), -static_cast<int>(a.precision()) + 5);
      if (deltoid(a, b) > slack || deltoid(-a, -b) > slack) return false;
      if (a == 0 && b == 0) return true;
      Real arg = atan2(b, a);
      return arg >= -slack && arg <= pi_real(static_cast<unsigned>(a.precision())) / 3 + slack;
    }
    case Family::Circulant:
    case Family::Spectral:
      return p.empty();
    case Family::Custom:
      return true;
  }
  return false;
}

FundamentalRegion fundamental_region(Family f) {
  switch (f) {
    case Family::Fourier:
    case Family::FourierT:
      return {f, "triangle (0,0), (1/6,0), (1/6,1/12) in (x1,x2)"};
    case Family::Dita: return {f, "|x| <= 1/8"};
    case Family::Symmetric: return {f, "t in [0, 1/2]"};
    case Family::Hermitean: return {f, "theta in [theta0, 1 - theta0], 2 pi theta0 = arccos(1 - sqrt 3)"};
    case Family::Szollosi:
    case Family::SzollosiT:
      return {f, "D(alpha) <= 0, D(-alpha) <= 0, 0 <= arg(alpha) <= pi/3, alpha = a + ib"};
    case Family::Circulant:
    case Family::Spectral: return {f, "isolated point (no parameters)"};
    case Family::Custom: return {f, "unconstrained"};
  }
  return {f, ""};
}

HadamardMatrix fourier(int d, unsigned digits) {
  return build(Family::Fourier, std::vector<Real>{}, BuildOptions{.dim = d, .branch = std::nullopt, .digits = digits});
}

HadamardMatrix build(Family family, std::initializer_list<double> params, const BuildOptions& opts) {
  std::vector<Real> p;
  for (double v : params) p.push_back(to_param(v, opts.digits + kGuard));
  return build(family, p, opts);
}

HadamardMatrix build(Family family, const std::vector<Real>& params_in, const BuildOptions& opts) {
  const unsigned digits = opts.digits;
  if (digits < 15) throw Error(ErrorKind::InvalidArgument, "precision must be at least 15 digits");
  std::vector<Real> params;
  for (const auto& p : params_in) params.emplace_back(p, digits + kGuard);
  const unsigned wd = digits + kGuard;
  PrecisionGuard guard(wd);

  switch (family) {
    case Family::Fourier:
    case Family::FourierT: {
      int d = opts.dim;
      if (d < 2) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 2");
      if (d != 6 && !params.empty())
        throw Error(ErrorKind::InvalidArgument, "only the d=6 Fourier family takes parameters");
      require_region(family, params, opts);
      Grid g = fourier_grid(d, wd);
      if (d == 6 && !params.empty()) {
        require_count(family, params, 2);
        std::vector<std::vector<Real>> r(6, std::vector<Real>(6, Real(0, wd)));
        for (int i : {1, 3, 5}) {
          r[i][1] = r[i][4] = params[0];
          r[i][2] = r[i][5] = params[1];
        }
        apply_phases(g, r, wd);
      }
      if (family == Family::FourierT) g = transpose(g);
      return from_unimodular(g, family, params, std::nullopt, digits);
    }
    case Family::Dita: {
      require_count(family, params, 1);
      require_region(family, params, opts);
      Grid g = dita0_grid(wd);
      const Real& x = params[0];
      std::vector<std::vector<Real>> r(6, std::vector<Real>(6, Real(0, wd)));
      r[2][3] = r[2][4] = x;
      r[3][2] = r[3][5] = -x;
      r[4][2] = r[4][5] = -x;
      r[5][3] = r[5][4] = x;
      apply_phases(g, r, wd);
      return from_unimodular(g, family, params, std::nullopt, digits);
    }
    case Family::Hermitean: {
      require_count(family, params, 1);
      require_region(family, params, opts);
      Branch br = opts.branch.value_or(Branch::Plus);
      Grid g = hermitean_grid(params[0], br, digits);
      if (!grid_is_hadamard(g, digits))
        throw Error(ErrorKind::ConstructionFailure, "Hermitean branch does not yield a Hadamard matrix");
      return from_unimodular(g, family, params, br, digits);
    }
    case Family::Symmetric: {
      require_count(family, params, 1);
      require_region(family, params, opts);
      SymmetricEntries e = solve_symmetric_entries(params[0], digits);
      return from_unimodular(symmetric_grid(e), family, params, std::nullopt, digits);
    }
    case Family::Szollosi:
    case Family::SzollosiT: {
      require_count(family, params, 2);
      require_region(family, params, opts);
      SzollosiEntries e = solve_szollosi_entries(params[0], params[1], digits);
      Grid g = szollosi_grid(e);
      if (family == Family::SzollosiT) g = transpose(g);
      return from_unimodular(g, family, params, std::nullopt, digits);
    }
    case Family::Circulant: {
      require_count(family, params, 0);
      Grid g = circulant_grid(digits);
      return from_unimodular(g, family, params, std::nullopt, digits);
    }
    case Family::Spectral: {
      require_count(family, params, 0);
      return from_unimodular(spectral_grid(wd), family, params, std::nullopt, digits);
    }
    case Family::Custom:
      throw Error(ErrorKind::InvalidArgument, "custom matrices are loaded, not built");
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family");
}

// ---- symmetric family ----

namespace {

// The two unimodular numbers with sum s, in both orders. Empty if |s| > 2.
std::vector<std::pair<ComplexAP, ComplexAP>> unimodular_pair(const ComplexAP& s) {
  unsigned d = s.digits;
  Real m = s.abs();
  if (m > 2) return {};
  Real r = sqrt(max(Real(0), 1 - m * m / 4));
  ComplexAP half = s * Real(Real(1) / 2);
  ComplexAP dir(Real(-s.im / m, d), Real(s.re / m, d), d);  // i s / |s|
  ComplexAP off = dir * r;
  return {{half + off, half - off}, {half - off, half + off}};
}

// Roots of alpha2 z^2 + alpha1 z + alpha0.
std::array<ComplexAP, 2> quadratic_roots(const ComplexAP& a2, const ComplexAP& a1, const ComplexAP& a0) {
  unsigned d = a2.digits;
  ComplexAP four = ComplexAP::from_int(4, 0, d), two = ComplexAP::from_int(2, 0, d);
  ComplexAP disc = sqrt(a1 * a1 - four * a2 * a0);
  return {(-a1 + disc) / (two * a2), (-a1 - disc) / (two * a2)};
}

}  // namespace

Real symmetric_entry_residual(const SymmetricEntries& e) {
  unsigned d = e.x.digits;
  ComplexAP one = ComplexAP::from_int(1, 0, d), two = ComplexAP::from_int(2, 0, d);
  const auto& x = e.x;
  ComplexAP r1 = one + x + e.d + e.a + e.b + e.c;
  ComplexAP r2 = x * x - two * x - two * e.a - two * e.d - one;
  ComplexAP r3 = one - x + e.b + e.c + e.p + e.q;
  ComplexAP r4 = x * x + two * e.b + two * e.c + one;
  return max(max(r1.abs(), r2.abs()), max(r3.abs(), r4.abs()));
}

SymmetricEntries solve_symmetric_entries(const Real& t, unsigned digits) {
  if (abs(t) > 1) throw Error(ErrorKind::OutOfRegion, "symmetric family parameter outside [-1, 1]");
  const unsigned wd = digits + kGuard;
  PrecisionGuard guard(wd);
  ComplexAP one = ComplexAP::from_int(1, 0, wd), two = ComplexAP::from_int(2, 0, wd);
  ComplexAP x = ComplexAP::unit_turns(Real(t, wd), wd);
  Real sigma_floor = pow(Real(10), -static_cast<int>(digits) / 2);

  ComplexAP s_ad = (x * x - two * x - one) / two;
  if (s_ad.abs() < sigma_floor) throw Error(ErrorKind::SigmaZero, "a + d vanishes");
  auto ad_pairs = unimodular_pair(s_ad);
  if (ad_pairs.empty()) throw Error(ErrorKind::ConstructionFailure, "|a + d| > 2");

  for (const auto& [a, d] : ad_pairs) {
    // Row (1, x, d, a, b, c): b, c complete the row from Sigma = (1 + x + d + a) / 2.
    ComplexAP sigma = (one + x + d + a) / two;
    std::vector<std::pair<ComplexAP, ComplexAP>> bc_pairs;
    ComplexAP s_bc = -(two * sigma);
    bool sigma_zero = sigma.abs() < sigma_floor;
    if (!sigma_zero) bc_pairs = unimodular_pair(s_bc);
    // Orthogonality of rows (1,x,d,a,b,c) and (1,-x,b,c,p,q) with c = s - b gives
    // conj(p - q) b^2 + (a conj(s) + s conj(q)) b + (d - a) = 0. This fixes b when
    // Sigma = 0 and stays well conditioned when Sigma is merely small.
    for (const auto& [p, q] : unimodular_pair(-one + x - s_bc)) {
      ComplexAP lead = (p - q).conj();
      if (lead.abs() < sigma_floor) continue;
      for (const auto& b : quadratic_roots(lead, a * s_bc.conj() + s_bc * q.conj(), d - a))
        bc_pairs.push_back({b, s_bc - b});
    }
    if (bc_pairs.empty() && sigma_zero)
      throw Error(ErrorKind::SigmaZero, "row completion and orthogonality both degenerate");
    for (const auto& [b, c] : bc_pairs) {
      ComplexAP sigma2 = (one - x + b + c) / two;
      if (sigma2.abs() < sigma_floor) throw Error(ErrorKind::SigmaZero, "p + q row completion degenerate");
      for (const auto& [p, q] : unimodular_pair(-(two * sigma2))) {
        SymmetricEntries e{x, a, b, c, d, p, q};
        if (grid_is_hadamard(symmetric_grid(e), digits)) {
          auto cut = [digits](const ComplexAP& z) { return ComplexAP(z.re, z.im, digits); };
          return {cut(x), cut(a), cut(b), cut(c), cut(d), cut(p), cut(q)};
        }
      }
    }
  }
  throw Error(ErrorKind::ConstructionFailure, "no sign choice yields a symmetric Hadamard matrix");
}

// ---- Szollosi family ----

std::vector<ComplexAP> szollosi_cubic_roots(const Real& a, const Real& b, unsigned digits) {
  const unsigned wd = digits + kGuard;
  PrecisionGuard guard(wd);
  ComplexAP alpha(Real(a, wd), Real(b, wd), wd);
  ComplexAP one = ComplexAP::from_int(1, 0, wd);
  // monic cubic z^3 + c2 z^2 + c1 z + c0
  ComplexAP c2 = -alpha, c1 = alpha.conj(), c0 = -one;
  auto f = [&](const ComplexAP& z) { return ((z + c2) * z + c1) * z + c0; };
  auto df = [&](const ComplexAP& z) {
    return (ComplexAP::from_int(3, 0, wd) * z + ComplexAP::from_int(2, 0, wd) * c2) * z + c1;
  };
  auto ddf = [&](const ComplexAP& z) {
    return ComplexAP::from_int(6, 0, wd) * z + ComplexAP::from_int(2, 0, wd) * c2;
  };

  // double-precision start via Durand-Kerner, then Newton in full precision
  std::array<std::complex<double>, 3> r = {std::complex<double>(0.4, 0.9), std::complex<double>(0.4, 0.9) * std::complex<double>(0.4, 0.9),
                                           std::complex<double>(0.4, 0.9) * std::complex<double>(0.4, 0.9) * std::complex<double>(0.4, 0.9)};
  std::complex<double> dc2 = c2.to_complex(), dc1 = c1.to_complex();
  auto fd = [&](std::complex<double> z) { return ((z + dc2) * z + dc1) * z - 1.0; };
  for (int it = 0; it < 500; ++it) {
    for (int i = 0; i < 3; ++i) {
      std::complex<double> den = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) den *= r[i] - r[j];
      r[i] -= fd(r[i]) / den;
    }
  }
  std::vector<ComplexAP> roots;
  for (auto z0 : r) roots.emplace_back(Real(z0.real(), wd), Real(z0.imag(), wd), wd);

  Real cluster = pow(Real(10), -4);
  auto close = [&](int i, int j) { return abs_diff(roots[i], roots[j]) < cluster; };
  std::array<bool, 3> multiple = {close(0, 1) || close(0, 2), close(0, 1) || close(1, 2), close(0, 2) || close(1, 2)};
  for (int i = 0; i < 3; ++i) {
    ComplexAP z = roots[i];
    for (int it = 0; it < 200; ++it) {
      // A double root is a simple root of f'; polish there to keep full precision.
      ComplexAP step = multiple[i] ? df(z) / ddf(z) : f(z) / df(z);
      z -= step;
      if (step.abs() < pow(Real(10), -static_cast<int>(wd) + 2)) break;
    }
    roots[i] = z;
  }
  std::sort(roots.begin(), roots.end(), [](const ComplexAP& p, const ComplexAP& q) { return p.arg() < q.arg(); });
  for (auto& z : roots) z = ComplexAP(z.re, z.im, digits);
  return roots;
}

SzollosiEntries solve_szollosi_entries(const Real& a, const Real& b, unsigned digits) {
  {
    PrecisionGuard guard(digits + kGuard);
    Real slack = pow(Real(10), -static_cast<int>(digits) + 5);
    if (deltoid(a, b) > slack || deltoid(-a, -b) > slack)
      throw Error(ErrorKind::OutOfRegion, "alpha outside the deltoid region");
  }
  const unsigned wd = digits + kGuard;
  auto rx = szollosi_cubic_roots(a, b, wd);
  auto ru = szollosi_cubic_roots(-a, -b, wd);
  for (int ix = 0; ix < 3; ++ix)
    for (int iy = 0; iy < 3; ++iy)
      for (int iu = 0; iu < 3; ++iu)
        for (int iv = 0; iv < 3; ++iv) {
          if (iv == iu) continue;
          SzollosiEntries e{rx[ix], rx[iy], ru[iu], ru[iv]};
          if (grid_is_hadamard(szollosi_grid(e), digits)) {
            auto cut = [digits](const ComplexAP& z) { return ComplexAP(z.re, z.im, digits); };
            return {cut(e.x), cut(e.y), cut(e.u), cut(e.v)};
          }
        }
  throw Error(ErrorKind::ConstructionFailure, "no root assignment of the Szollosi cubics is Hadamard");
}

// ---- predicates ----

Validation validate_hadamard(const HadamardMatrix& h, const Real& tol) {
  const int d = h.dim();
  const unsigned wd = h.digits() + kGuard;
  PrecisionGuard guard(wd);
  Real inv_sqrt = 1 / sqrt(Real(d, wd));
  Validation v;
  v.unitarity_defect = Real(0, wd);
  v.modulus_defect = Real(0, wd);
  for (const auto& z : h.entries()) {
    Real m = abs(sqrt(z.re * z.re + z.im * z.im) - inv_sqrt);
    if (m > v.modulus_defect) v.modulus_defect = m;
  }
  for (int i = 0; i < d; ++i) {
    Real row_sum(0, wd);
    for (int j = 0; j < d; ++j) {
      Real re(0, wd), im(0, wd);
      for (int k = 0; k < d; ++k) {
        const auto& a = h(k, i);  // (H^dagger)_{ik} = conj(H_ki)
        const auto& b = h(k, j);
        re += a.re * b.re + a.im * b.im;
        im += a.re * b.im - a.im * b.re;
      }
      if (i == j) re -= 1;
      row_sum += sqrt(re * re + im * im);
    }
    if (row_sum > v.unitarity_defect) v.unitarity_defect = row_sum;
  }
  v.pass = v.unitarity_defect < tol && v.modulus_defect < tol;
  return v;
}

Validation validate_hadamard(const HadamardMatrix& h) { return validate_hadamard(h, tolerance_for(h.digits())); }

HadamardMatrix dephase(const HadamardMatrix& h) {
  const int d = h.dim();
  const unsigned digits = h.digits();
  const unsigned wd = digits + kGuard;
  PrecisionGuard guard(wd);
  Real root_d = sqrt(Real(d, wd));
  auto unit = [&](int i, int j) {
    ComplexAP z(Real(h(i, j).re, wd), Real(h(i, j).im, wd), wd);
    z *= root_d;
    return z;
  };
  Grid g(d, std::vector<ComplexAP>(d));
  ComplexAP u00 = unit(0, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == 0 || j == 0) {
        g[i][j] = ComplexAP::from_int(1, 0, wd);
      } else {
        g[i][j] = unit(i, j) * unit(i, 0).conj() * unit(0, j).conj() * u00;
      }
    }
  return from_unimodular(g, h.family(), h.params(), h.branch(), digits);
}

namespace {

using CMat = std::vector<std::complex<double>>;

CMat unimodular_double(const HadamardMatrix& h) {
  const int d = h.dim();
  double s = std::sqrt(static_cast<double>(d));
  CMat m(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i * d + j] = h(i, j).to_complex() * s;
  return m;
}

// Dephase with row r and column c as the reference row/column, then move them
// to position 0.
CMat dephase_at(const CMat& a, int d, int r, int c) {
  std::vector<int> rows, cols;
  rows.push_back(r);
  cols.push_back(c);
  for (int i = 0; i < d; ++i) {
    if (i != r) rows.push_back(i);
    if (i != c) cols.push_back(i);
  }
  CMat out(d * d);
  std::complex<double> arc = a[r * d + c];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      int ri = rows[i], cj = cols[j];
      out[i * d + j] = a[ri * d + cj] * std::conj(a[ri * d + c]) * std::conj(a[r * d + cj]) * arc;
    }
  return out;
}

// Sorted real and imaginary parts of the core block: invariant under
// permutations of the non-reference rows and columns.
std::pair<std::vector<double>, std::vector<double>> block_signature(const CMat& m, int d) {
  std::vector<double> re, im;
  for (int i = 1; i < d; ++i)
    for (int j = 1; j < d; ++j) {
      re.push_back(m[i * d + j].real());
      im.push_back(m[i * d + j].imag());
    }
  std::sort(re.begin(), re.end());
  std::sort(im.begin(), im.end());
  return {re, im};
}

bool close_lists(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

bool equivalent(const HadamardMatrix& h1, const HadamardMatrix& h2, double tol) {
  if (h1.dim() != h2.dim()) return false;
  const int d = h1.dim();
  if (d > 7) throw Error(ErrorKind::DimensionTooLarge, "equivalence search is limited to d <= 7");
  CMat a = unimodular_double(h1);
  CMat b = dephase_at(unimodular_double(h2), d, 0, 0);
  auto sig_b = block_signature(b, d);
  const double prune_tol = std::max(tol * 10, 1e-9);

  std::vector<int> perm(d - 1);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      CMat ad = dephase_at(a, d, r, c);
      auto sig_a = block_signature(ad, d);
      if (!close_lists(sig_a.first, sig_b.first, prune_tol) || !close_lists(sig_a.second, sig_b.second, prune_tol))
        continue;
      std::iota(perm.begin(), perm.end(), 1);
      do {
        // column j of ad maps to column perm[j-1] of b; match rows greedily (rows
        // of a Hadamard matrix are pairwise distinct)
        std::vector<bool> used(d, false);
        bool ok = true;
        for (int i = 1; i < d && ok; ++i) {
          int match = -1;
          for (int k = 1; k < d && match < 0; ++k) {
            if (used[k]) continue;
            bool same = true;
            for (int j = 1; j < d && same; ++j) same = std::abs(ad[i * d + j] - b[k * d + perm[j - 1]]) <= tol;
            if (same) match = k;
          }
          if (match < 0) ok = false;
          else used[match] = true;
        }
        if (ok) return true;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  return false;
}

std::optional<std::vector<int>> conjugating_permutation(const HadamardMatrix& a, const HadamardMatrix& b,
                                                        double tol) {
  const int d = a.dim();
  if (b.dim() != d) throw Error(ErrorKind::DimensionMismatch, "matrices of different dimension");
  if (d > 7) throw Error(ErrorKind::DimensionTooLarge, "permutation search limited to d <= 7");
  std::vector<std::complex<double>> ca, cb;
  for (const auto& z : a.entries()) ca.push_back(std::conj(z.to_complex()));
  for (const auto& z : b.entries()) cb.push_back(z.to_complex());
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  do {
    std::vector<char> used(d, 0);
    bool ok = true;
    for (int j = 0; j < d && ok; ++j) {
      int hit = -1;
      for (int k = 0; k < d && hit < 0; ++k) {
        if (used[k]) continue;
        bool same = true;
        for (int i = 0; i < d && same; ++i) same = std::abs(cb[i * d + j] - ca[p[i] * d + k]) < tol;
        if (same) hit = k;
      }
      ok = hit >= 0;
      if (ok) used[hit] = 1;
    }
    if (ok) return p;
  } while (std::next_permutation(p.begin(), p.end()));
  return std::nullopt;
}

HadamardMatrix scramble(const HadamardMatrix& h, unsigned long long seed) {
  const int d = h.dim();
  std::mt19937_64 rng(seed);
  std::vector<int> rows(d), cols(d);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  HadamardMatrix p = h.permuted(rows, cols);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const unsigned digits = h.digits();
  std::vector<ComplexAP> rphase, cphase;
  for (int i = 0; i < d; ++i) rphase.push_back(ComplexAP::unit_turns(Real(u(rng), digits), digits));
  for (int i = 0; i < d; ++i) cphase.push_back(ComplexAP::unit_turns(Real(u(rng), digits), digits));
  std::vector<ComplexAP> e;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e.push_back(rphase[i] * p(i, j) * cphase[j]);
  return {d, std::move(e), Family::Custom, {}, std::nullopt, digits};
}

}  // namespace mub::catalog
