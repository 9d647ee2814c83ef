#include "mub/groebner.hpp"

#include <gmpxx.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "mub/error.hpp"

namespace mub::groebner {

MonomialOrder MonomialOrder::mu_default(int dim, OrderKind kind) {
  const int n = dim - 1;
  MonomialOrder o;
  o.kind = kind;
  for (int j = 0; j < n; ++j) {
    o.vars.push_back(j);
    o.vars.push_back(n + j);
  }
  return o;
}

MonomialOrder MonomialOrder::canonical(int nvars, OrderKind kind) {
  MonomialOrder o;
  o.kind = kind;
  for (int i = 0; i < nvars; ++i) o.vars.push_back(i);
  return o;
}

std::string MonomialOrder::to_string(const std::vector<std::string>& names) const {
  std::string s = kind == OrderKind::Lex ? "lex(" : "grevlex(";
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) s += " > ";
    s += vars[i] < static_cast<int>(names.size()) ? names[vars[i]] : "v" + std::to_string(vars[i]);
  }
  return s + ")";
}

int compare(const Monomial& a, const Monomial& b, const MonomialOrder& order) {
  if (order.kind == OrderKind::GrevLex) {
    int da = 0, db = 0;
    for (int v : order.vars) {
      da += a[v];
      db += b[v];
    }
    if (da != db) return da < db ? -1 : 1;
    for (auto it = order.vars.rbegin(); it != order.vars.rend(); ++it)
      if (a[*it] != b[*it]) return a[*it] > b[*it] ? -1 : 1;
    return 0;
  }
  for (int v : order.vars)
    if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
  return 0;
}

namespace {

const Term& leading_term(const MultiPoly& f, const MonomialOrder& order) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no leading term");
  const Term* best = &f.terms()[0];
  for (const auto& t : f.terms())
    if (compare(t.mono, best->mono, order) > 0) best = &t;
  return *best;
}

}  // namespace

Monomial leading_monomial(const MultiPoly& f, const MonomialOrder& order) { return leading_term(f, order).mono; }
QSqrt3 leading_coeff(const MultiPoly& f, const MonomialOrder& order) { return leading_term(f, order).coeff; }

MultiPoly monic(const MultiPoly& f, const MonomialOrder& order) {
  if (f.is_zero()) return f;
  return f * leading_coeff(f, order).inverse();
}

uint64_t parse_bytes(const std::string& s) {
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty size");
  size_t pos = 0;
  double v = std::stod(s, &pos);
  std::string unit = s.substr(pos);
  double mult = 1;
  if (unit == "K" || unit == "k" || unit == "KB") mult = 1024.0;
  else if (unit == "M" || unit == "MB") mult = 1024.0 * 1024;
  else if (unit == "G" || unit == "GB") mult = 1024.0 * 1024 * 1024;
  else if (!unit.empty()) throw Error(ErrorKind::InvalidArgument, "unknown size unit: " + unit);
  if (v <= 0) throw Error(ErrorKind::InvalidArgument, "size must be positive");
  return static_cast<uint64_t>(v * mult);
}

Budget Budget::from_env() {
  Budget b;
  if (const char* env = std::getenv("MUB_BUDGET_MEM")) b.max_memory_bytes = parse_bytes(env);
  return b;
}

uint64_t current_rss_bytes() {
  std::ifstream in("/proc/self/statm");
  uint64_t size = 0, resident = 0;
  if (!(in >> size >> resident)) return 0;
  return resident * static_cast<uint64_t>(sysconf(_SC_PAGESIZE));
}

// ---------------------------------------------------------------------------
// Field-level helpers on MultiPoly (used by the public reduce/s_polynomial and
// for verification; the engine below works on packed integer polynomials).

MultiPoly s_polynomial(const MultiPoly& f, const MultiPoly& g, const MonomialOrder& order) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorKind::InvalidArgument, "S-polynomial of a zero polynomial");
  const Term& tf = leading_term(f, order);
  const Term& tg = leading_term(g, order);
  Monomial l = Monomial::lcm(tf.mono, tg.mono);
  return f.mul_term(l / tf.mono, tf.coeff.inverse()) - g.mul_term(l / tg.mono, tg.coeff.inverse());
}

MultiPoly reduce(const MultiPoly& f, const std::vector<MultiPoly>& g, const MonomialOrder& order) {
  for (const auto& q : g)
    if (q.nvars() != f.nvars()) throw Error(ErrorKind::ModeMismatch, "polynomials live in different variable spaces");
  std::vector<const Term*> leads;
  std::vector<QSqrt3> inv;
  for (const auto& q : g) {
    if (q.is_zero()) {
      leads.push_back(nullptr);
      inv.emplace_back();
      continue;
    }
    leads.push_back(&leading_term(q, order));
    inv.push_back(leads.back()->coeff.inverse());
  }
  MultiPoly rest = f;
  std::vector<Term> rem;
  while (!rest.is_zero()) {
    const Term lt = leading_term(rest, order);
    bool divided = false;
    for (size_t i = 0; i < g.size(); ++i) {
      if (!leads[i] || !leads[i]->mono.divides(lt.mono)) continue;
      rest -= g[i].mul_term(lt.mono / leads[i]->mono, lt.coeff * inv[i]);
      divided = true;
      break;
    }
    if (!divided) {
      rem.push_back(lt);
      rest -= MultiPoly(f.nvars(), {lt});
    }
  }
  return MultiPoly(f.nvars(), std::move(rem));
}

MultiPoly reduce(const MultiPoly& f, const polysys::Mode& f_mode, const GroebnerBasis& g) {
  if (!(f_mode == g.mode)) throw Error(ErrorKind::ModeMismatch, "polynomial mode " + f_mode.to_string() +
                                                                     " differs from basis mode " + g.mode.to_string());
  return reduce(f, g.polys, g.order);
}

namespace {

// ---------------------------------------------------------------------------
// Packed monomials: exponent of the variable with rank r (0 = largest) lives
// in byte 7 - (r % 8) of word r / 8, so lex comparison is a two-word unsigned
// comparison.

constexpr uint64_t kHigh = 0x8080808080808080ull;
constexpr uint64_t kLow7 = 0x7f7f7f7f7f7f7f7full;

struct PM {
  uint64_t w[2] = {0, 0};
  friend bool operator==(const PM& a, const PM& b) { return a.w[0] == b.w[0] && a.w[1] == b.w[1]; }
};

inline int byte_sum(uint64_t x) {
  uint64_t pairs = (x & 0x00ff00ff00ff00ffull) + ((x >> 8) & 0x00ff00ff00ff00ffull);
  return static_cast<int>((pairs * 0x0001000100010001ull) >> 48);
}

inline int pm_degree(const PM& m) { return byte_sum(m.w[0]) + byte_sum(m.w[1]); }

inline bool pm_divides(const PM& a, const PM& b) {
  return (((b.w[0] | kHigh) - a.w[0]) & kHigh) == kHigh && (((b.w[1] | kHigh) - a.w[1]) & kHigh) == kHigh;
}

inline PM pm_mul(const PM& a, const PM& b) {
  PM r;
  r.w[0] = a.w[0] + b.w[0];
  r.w[1] = a.w[1] + b.w[1];
  if ((r.w[0] | r.w[1]) & kHigh) throw Error(ErrorKind::ResourceBudgetExceeded, "exponent overflow (degree > 127)");
  return r;
}

inline PM pm_div(const PM& a, const PM& b) {
  PM r;
  r.w[0] = a.w[0] - b.w[0];
  r.w[1] = a.w[1] - b.w[1];
  return r;
}

inline uint64_t word_max(uint64_t a, uint64_t b) {
  uint64_t ge = ((a | kHigh) - b) & kHigh;  // top bit set where a_i >= b_i
  uint64_t mask = (ge >> 7) * 0xff;
  return (a & mask) | (b & ~mask);
}

inline PM pm_lcm(const PM& a, const PM& b) {
  PM r;
  r.w[0] = word_max(a.w[0], b.w[0]);
  r.w[1] = word_max(a.w[1], b.w[1]);
  return r;
}

inline bool pm_coprime(const PM& a, const PM& b) {
  // both nonzero in some byte <=> min > 0
  auto nz = [](uint64_t x) { return (((x & kLow7) + kLow7) | x) & kHigh; };
  return (nz(a.w[0]) & nz(b.w[0])) == 0 && (nz(a.w[1]) & nz(b.w[1])) == 0;
}

struct Ctx {
  bool lex = true;
  int nvars = 0;
  std::vector<int> canon_of_rank;

  PM pack(const Monomial& m) const {
    PM p;
    for (int r = 0; r < nvars; ++r) {
      uint64_t e = static_cast<uint64_t>(m[canon_of_rank[r]]);
      if (e > 127) throw Error(ErrorKind::InvalidArgument, "exponent too large");
      p.w[r / 8] |= e << (8 * (7 - r % 8));
    }
    return p;
  }
  Monomial unpack(const PM& p) const {
    Monomial m;
    for (int r = 0; r < nvars; ++r) m.set(canon_of_rank[r], static_cast<int>((p.w[r / 8] >> (8 * (7 - r % 8))) & 0xff));
    return m;
  }

  // true when a > b
  bool greater(const PM& a, const PM& b) const {
    if (lex) return a.w[0] != b.w[0] ? a.w[0] > b.w[0] : a.w[1] > b.w[1];
    int da = pm_degree(a), db = pm_degree(b);
    if (da != db) return da > db;
    for (int k = 1; k >= 0; --k) {
      uint64_t x = a.w[k] ^ b.w[k];
      if (!x) continue;
      int shift = __builtin_ctzll(x) & ~7;
      return ((a.w[k] >> shift) & 0xff) < ((b.w[k] >> shift) & 0xff);
    }
    return false;
  }
  int cmp(const PM& a, const PM& b) const { return greater(a, b) ? 1 : (greater(b, a) ? -1 : 0); }
};

// ---------------------------------------------------------------------------
// Coefficient rings for fraction-free arithmetic. Basis leading coefficients
// are always positive integers.

struct IntRing {
  using C = mpz_class;
  static bool is_zero(const C& c) { return sgn(c) == 0; }
  static void content_acc(mpz_class& g, const C& c) { mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t()); }
  static void divexact(C& c, const mpz_class& g) { mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t()); }
  static void scale(C& c, const mpz_class& k) { c *= k; }
  // out = a*x - b*y
  static void axpby(C& out, const mpz_class& a, const C& x, const C& b, const C& y) {
    out = a * x;
    mpz_submul(out.get_mpz_t(), b.get_mpz_t(), y.get_mpz_t());
  }
  static void neg_mul(C& out, const C& b, const C& y) {
    out = b * y;
    out = -out;
  }
  // Multiplier making the leading coefficient a positive integer.
  static C lc_normalizer(const C& lc) { return sgn(lc) < 0 ? C(-1) : C(1); }
  static void mul(C& c, const C& k) { c *= k; }
  static mpz_class as_integer(const C& c) { return c; }
  static bool is_integer(const C&) { return true; }
  static size_t bits(const C& c) { return mpz_sizeinbase(c.get_mpz_t(), 2); }
  static C from(const QSqrt3& q, const mpz_class& den) {
    mpq_class v = q.a * den;
    return v.get_num();
  }
  static QSqrt3 to_q(const C& c) { return QSqrt3(mpq_class(c)); }
};

struct Z3 {
  mpz_class a, b;  // a + b sqrt 3
};

struct Z3Ring {
  using C = Z3;
  static bool is_zero(const C& c) { return sgn(c.a) == 0 && sgn(c.b) == 0; }
  static void content_acc(mpz_class& g, const C& c) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.a.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.b.get_mpz_t());
  }
  static void divexact(C& c, const mpz_class& g) {
    mpz_divexact(c.a.get_mpz_t(), c.a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(c.b.get_mpz_t(), c.b.get_mpz_t(), g.get_mpz_t());
  }
  static void scale(C& c, const mpz_class& k) {
    c.a *= k;
    c.b *= k;
  }
  static void mul(C& c, const C& k) {
    mpz_class a = c.a * k.a + 3 * c.b * k.b;
    mpz_class b = c.a * k.b + c.b * k.a;
    c.a = std::move(a);
    c.b = std::move(b);
  }
  static void axpby(C& out, const mpz_class& a, const C& x, const C& b, const C& y) {
    // b*y with b in Z[sqrt3]
    out.a = a * x.a;
    out.b = a * x.b;
    mpz_submul(out.a.get_mpz_t(), b.a.get_mpz_t(), y.a.get_mpz_t());
    mpz_class t = 3 * b.b;
    mpz_submul(out.a.get_mpz_t(), t.get_mpz_t(), y.b.get_mpz_t());
    mpz_submul(out.b.get_mpz_t(), b.a.get_mpz_t(), y.b.get_mpz_t());
    mpz_submul(out.b.get_mpz_t(), b.b.get_mpz_t(), y.a.get_mpz_t());
  }
  static void neg_mul(C& out, const C& b, const C& y) {
    out = y;
    mul(out, b);
    out.a = -out.a;
    out.b = -out.b;
  }
  static C lc_normalizer(const C& lc) {
    if (sgn(lc.b) == 0) return {sgn(lc.a) < 0 ? mpz_class(-1) : mpz_class(1), 0};
    C conj{lc.a, -lc.b};
    mpz_class n = lc.a * lc.a - 3 * lc.b * lc.b;
    if (sgn(n) < 0) {
      conj.a = -conj.a;
      conj.b = -conj.b;
    }
    return conj;
  }
  static mpz_class as_integer(const C& c) { return c.a; }
  static bool is_integer(const C& c) { return sgn(c.b) == 0; }
  static size_t bits(const C& c) {
    return std::max(mpz_sizeinbase(c.a.get_mpz_t(), 2), mpz_sizeinbase(c.b.get_mpz_t(), 2));
  }
  static C from(const QSqrt3& q, const mpz_class& den) {
    mpq_class a = q.a * den, b = q.b * den;
    return {a.get_num(), b.get_num()};
  }
  static QSqrt3 to_q(const C& c) { return QSqrt3(mpq_class(c.a), mpq_class(c.b)); }
};

template <class R>
struct Poly {
  std::vector<PM> mon;  // decreasing
  std::vector<typename R::C> coef;
  size_t size() const { return mon.size(); }
  bool empty() const { return mon.empty(); }
};

struct BudgetGuard {
  const Budget& budget;
  BasisStats& stats;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_check = start;

  void check_terms(size_t n) {
    stats.max_terms = std::max<uint64_t>(stats.max_terms, n);
    if (n > budget.max_terms)
      throw Error(ErrorKind::ResourceBudgetExceeded, "polynomial with " + std::to_string(n) + " terms exceeds term limit");
  }
  void tick() {
    auto now = std::chrono::steady_clock::now();
    if (now - last_check < std::chrono::milliseconds(100)) return;
    last_check = now;
    uint64_t rss = current_rss_bytes();
    stats.peak_rss_bytes = std::max(stats.peak_rss_bytes, rss);
    if (rss > budget.max_memory_bytes)
      throw Error(ErrorKind::ResourceBudgetExceeded, "memory guard hit at " + std::to_string(rss >> 20) + " MiB");
    if (budget.max_seconds > 0 && elapsed() > budget.max_seconds)
      throw Error(ErrorKind::ResourceBudgetExceeded, "time limit exceeded");
  }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct Pair {
  int i, j;
  PM lcm;
  int degree;
};

template <class R>
class Engine {
 public:
  using C = typename R::C;

  Engine(const Ctx& ctx, const Options& opts, BasisStats& stats) : ctx_(ctx), opts_(opts), guard_{opts.budget, stats} {}

  void make_primitive(Poly<R>& p) {
    if (p.empty()) return;
    mpz_class g = 0;
    for (const auto& c : p.coef) {
      R::content_acc(g, c);
      if (g == 1) break;
    }
    if (g > 1)
      for (auto& c : p.coef) R::divexact(c, g);
  }

  // Leading coefficient becomes a positive integer, content removed.
  void normalize(Poly<R>& p) {
    if (p.empty()) return;
    make_primitive(p);
    C k = R::lc_normalizer(p.coef[0]);
    for (auto& c : p.coef) R::mul(c, k);
    make_primitive(p);
  }

  // h <- a*h - b*m*f where the term at `pos` cancels; terms before pos only scale.
  void step(Poly<R>& h, size_t pos, const mpz_class& a, const C& b, const PM& m, const Poly<R>& f) {
    Poly<R> out;
    out.mon.reserve(h.size() + f.size());
    out.coef.reserve(h.size() + f.size());
    for (size_t i = 0; i < pos; ++i) {
      out.mon.push_back(h.mon[i]);
      out.coef.push_back(std::move(h.coef[i]));
      if (a != 1) R::scale(out.coef.back(), a);
    }
    size_t i = pos + 1, j = 1;
    C tmp;
    static const C zero{};
    PM fm;
    size_t fm_index = 0;
    while (i < h.size() || j < f.size()) {
      bool have_f = j < f.size();
      if (have_f && fm_index != j) {
        fm = pm_mul(m, f.mon[j]);
        fm_index = j;
      }
      int c = i >= h.size() ? -1 : (!have_f ? 1 : ctx_.cmp(h.mon[i], fm));
      if (c > 0) {
        out.mon.push_back(h.mon[i]);
        out.coef.push_back(std::move(h.coef[i]));
        if (a != 1) R::scale(out.coef.back(), a);
        ++i;
      } else if (c < 0) {
        R::neg_mul(tmp, b, f.coef[j]);
        out.mon.push_back(fm);
        out.coef.push_back(std::move(tmp));
        ++j;
      } else {
        R::axpby(tmp, a, h.coef[i], b, f.coef[j]);
        if (!R::is_zero(tmp)) {
          out.mon.push_back(fm);
          out.coef.push_back(std::move(tmp));
        }
        ++i;
        ++j;
      }
    }
    h = std::move(out);
    guard_.check_terms(h.size());
    guard_.tick();
  }

  int find_reducer(const PM& m) const {
    int best = -1;
    for (int k : active_) {
      if (!pm_divides(basis_[k].mon[0], m)) continue;
      if (best < 0 || basis_[k].size() < basis_[best].size()) best = k;
    }
    return best;
  }

  // Full reduction against the active basis; with keep_lead only the tail.
  void full_reduce(Poly<R>& h, bool keep_lead, const std::vector<int>* reducers = nullptr) {
    size_t pos = keep_lead ? 1 : 0;
    size_t steps = 0;
    while (pos < h.size()) {
      int k = -1;
      if (reducers) {
        for (int r : *reducers)
          if (pm_divides(basis_[r].mon[0], h.mon[pos]) && (k < 0 || basis_[r].size() < basis_[k].size())) k = r;
      } else {
        k = find_reducer(h.mon[pos]);
      }
      if (k < 0) {
        ++pos;
        continue;
      }
      const Poly<R>& f = basis_[k];
      const mpz_class lc = R::as_integer(f.coef[0]);
      mpz_class g = lc;
      R::content_acc(g, h.coef[pos]);
      mpz_class a = lc / g;
      C b = h.coef[pos];
      R::divexact(b, g);
      step(h, pos, a, b, pm_div(h.mon[pos], f.mon[0]), f);
      if (++steps % 16 == 0) make_primitive(h);
    }
    make_primitive(h);
  }

  Poly<R> spoly(int i, int j, const PM& lcm) {
    const Poly<R>& f = basis_[i];
    const Poly<R>& g = basis_[j];
    mpz_class nf = R::as_integer(f.coef[0]), ng = R::as_integer(g.coef[0]);
    mpz_class gg;
    mpz_gcd(gg.get_mpz_t(), nf.get_mpz_t(), ng.get_mpz_t());
    mpz_class af = ng / gg;
    C bg;
    if constexpr (std::is_same_v<R, IntRing>) bg = nf / gg;
    else bg = C{nf / gg, 0};
    // h = af * (lcm/lm f) * f, then subtract bg * (lcm/lm g) * g
    Poly<R> h;
    PM mf = pm_div(lcm, f.mon[0]);
    h.mon.reserve(f.size());
    for (size_t k = 0; k < f.size(); ++k) {
      h.mon.push_back(pm_mul(mf, f.mon[k]));
      h.coef.push_back(f.coef[k]);
      if (af != 1) R::scale(h.coef.back(), af);
    }
    // position 0 cancels against g's leading term
    step(h, 0, mpz_class(1), bg, pm_div(lcm, g.mon[0]), g);
    return h;
  }

  void add_pairs_and_insert(Poly<R> h) {
    const int hi = static_cast<int>(basis_.size());
    basis_.push_back(std::move(h));
    const PM& hm = basis_[hi].mon[0];
    auto& stats = guard_.stats;

    if (!opts_.use_criteria) {
      for (int g : active_) {
        PM l = pm_lcm(basis_[g].mon[0], hm);
        pairs_.push_back({g, hi, l, pm_degree(l)});
        ++stats.pairs_created;
      }
      active_.push_back(hi);
      return;
    }

    // Gebauer-Moeller update
    std::vector<Pair> cand;
    for (int g : active_) {
      PM l = pm_lcm(basis_[g].mon[0], hm);
      cand.push_back({g, hi, l, pm_degree(l)});
      ++stats.pairs_created;
    }
    std::vector<char> keep(cand.size(), 1);
    for (size_t a = 0; a < cand.size(); ++a) {
      if (pm_coprime(basis_[cand[a].i].mon[0], hm)) continue;
      for (size_t b = 0; b < cand.size(); ++b) {
        if (a == b || !keep[b]) continue;
        if (pm_divides(cand[b].lcm, cand[a].lcm) && (!(cand[b].lcm == cand[a].lcm) || b < a)) {
          keep[a] = 0;
          ++stats.pruned_chain;
          break;
        }
      }
    }
    // Equal lcms where one pair is coprime: the coprime one absorbs the class.
    for (size_t a = 0; a < cand.size(); ++a) {
      if (!keep[a] || !pm_coprime(basis_[cand[a].i].mon[0], hm)) continue;
      for (size_t b = 0; b < cand.size(); ++b)
        if (b != a && keep[b] && cand[b].lcm == cand[a].lcm) {
          keep[b] = 0;
          ++stats.pruned_chain;
        }
    }
    std::vector<Pair> fresh;
    for (size_t a = 0; a < cand.size(); ++a) {
      if (!keep[a]) continue;
      if (pm_coprime(basis_[cand[a].i].mon[0], hm)) {
        ++stats.pruned_coprime;
        continue;
      }
      fresh.push_back(cand[a]);
    }
    // Old pairs made redundant by the new element
    std::vector<Pair> old;
    old.reserve(pairs_.size());
    for (const auto& p : pairs_) {
      if (pm_divides(hm, p.lcm) && !(pm_lcm(basis_[p.i].mon[0], hm) == p.lcm) &&
          !(pm_lcm(basis_[p.j].mon[0], hm) == p.lcm)) {
        ++stats.pruned_chain;
        continue;
      }
      old.push_back(p);
    }
    pairs_ = std::move(old);
    for (auto& p : fresh) pairs_.push_back(p);

    std::vector<int> next;
    for (int g : active_)
      if (!pm_divides(hm, basis_[g].mon[0])) next.push_back(g);
    next.push_back(hi);
    active_ = std::move(next);
  }

  size_t select_pair() const {
    size_t best = 0;
    for (size_t k = 1; k < pairs_.size(); ++k) {
      const Pair &p = pairs_[k], &q = pairs_[best];
      if (p.degree != q.degree) {
        if (p.degree < q.degree) best = k;
        continue;
      }
      int c = ctx_.cmp(p.lcm, q.lcm);
      if (c < 0 || (c == 0 && (p.j < q.j || (p.j == q.j && p.i < q.i)))) best = k;
    }
    return best;
  }

  std::vector<Poly<R>> run(std::vector<Poly<R>> input) {
    auto& stats = guard_.stats;
    // Sort inputs by increasing leading monomial; reduce each against the
    // previous ones before entering the basis.
    std::sort(input.begin(), input.end(),
              [&](const Poly<R>& a, const Poly<R>& b) { return ctx_.greater(b.mon[0], a.mon[0]); });
    for (auto& p : input) {
      full_reduce(p, false);
      if (p.empty()) continue;
      normalize(p);
      add_pairs_and_insert(std::move(p));
    }
    while (!pairs_.empty()) {
      if (stats.pairs_reduced >= opts_.budget.max_pairs)
        throw Error(ErrorKind::ResourceBudgetExceeded, "pair limit of " + std::to_string(opts_.budget.max_pairs) + " reached");
      size_t k = select_pair();
      Pair p = pairs_[k];
      pairs_[k] = pairs_.back();
      pairs_.pop_back();
      ++stats.pairs_reduced;
      Poly<R> h = spoly(p.i, p.j, p.lcm);
      full_reduce(h, false);
      guard_.tick();
      if (h.empty()) {
        ++stats.zero_reductions;
        continue;
      }
      normalize(h);
      add_pairs_and_insert(std::move(h));
    }
    return interreduce();
  }

  std::vector<Poly<R>> interreduce() {
    // minimal basis: drop elements whose leading monomial is divisible by another's
    std::vector<int> minimal;
    for (int a : active_) {
      bool redundant = false;
      for (int b : active_)
        if (a != b && pm_divides(basis_[b].mon[0], basis_[a].mon[0]) &&
            (!(basis_[b].mon[0] == basis_[a].mon[0]) || b < a)) {
          redundant = true;
          break;
        }
      if (!redundant) minimal.push_back(a);
    }
    std::sort(minimal.begin(), minimal.end(),
              [&](int a, int b) { return ctx_.greater(basis_[b].mon[0], basis_[a].mon[0]); });
    std::vector<Poly<R>> out;
    for (size_t k = 0; k < minimal.size(); ++k) {
      std::vector<int> others;
      for (size_t l = 0; l < minimal.size(); ++l)
        if (l != k) others.push_back(minimal[l]);
      Poly<R> h = basis_[minimal[k]];
      full_reduce(h, true, &others);
      normalize(h);
      out.push_back(std::move(h));
    }
    basis_ = out;
    return basis_;
  }

  BudgetGuard& guard() { return guard_; }

 private:
  const Ctx& ctx_;
  const Options& opts_;
  BudgetGuard guard_;
  std::vector<Poly<R>> basis_;
  std::vector<int> active_;
  std::vector<Pair> pairs_;
};

Ctx make_ctx(const MonomialOrder& order, int nvars) {
  if (order.nvars() != nvars)
    throw Error(ErrorKind::DimensionMismatch, "order ranks " + std::to_string(order.nvars()) + " variables, system has " +
                                                  std::to_string(nvars));
  std::vector<int> seen(nvars, 0);
  for (int v : order.vars) {
    if (v < 0 || v >= nvars || seen[v]++) throw Error(ErrorKind::InvalidArgument, "variable order is not a permutation");
  }
  Ctx ctx;
  ctx.lex = order.kind == OrderKind::Lex;
  ctx.nvars = nvars;
  ctx.canon_of_rank = order.vars;
  return ctx;
}

template <class R>
std::vector<MultiPoly> run_engine(const std::vector<MultiPoly>& polys, const Ctx& ctx, const Options& opts,
                                  BasisStats& stats) {
  std::vector<Poly<R>> in;
  for (const auto& f : polys) {
    if (f.is_zero()) continue;
    mpz_class den = 1;
    for (const auto& t : f.terms()) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.a.get_den_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.b.get_den_mpz_t());
    }
    std::vector<std::pair<PM, typename R::C>> terms;
    for (const auto& t : f.terms()) terms.emplace_back(ctx.pack(t.mono), R::from(t.coeff, den));
    std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) { return ctx.greater(a.first, b.first); });
    Poly<R> p;
    for (auto& [m, c] : terms) {
      p.mon.push_back(m);
      p.coef.push_back(std::move(c));
    }
    in.push_back(std::move(p));
  }
  Engine<R> engine(ctx, opts, stats);
  for (auto& p : in) engine.normalize(p);
  auto basis = engine.run(std::move(in));
  stats.seconds = engine.guard().elapsed();

  std::vector<MultiPoly> out;
  for (const auto& p : basis) {
    QSqrt3 inv = QSqrt3(mpq_class(R::as_integer(p.coef[0]))).inverse();
    std::vector<Term> terms;
    for (size_t k = 0; k < p.size(); ++k) terms.push_back({ctx.unpack(p.mon[k]), R::to_q(p.coef[k]) * inv});
    out.emplace_back(ctx.nvars, std::move(terms));
  }
  return out;
}

}  // namespace

namespace {

GroebnerBasis run_direct(const std::vector<MultiPoly>& polys, const MonomialOrder& order, const Options& opts) {
  const int nvars = polys[0].nvars();
  bool rational = true;
  for (const auto& f : polys) {
    if (f.nvars() != nvars) throw Error(ErrorKind::ModeMismatch, "polynomials live in different variable spaces");
    rational = rational && f.is_rational();
  }
  Ctx ctx = make_ctx(order, nvars);
  GroebnerBasis g;
  g.order = order;
  g.mode = polysys::Mode::exact();
  g.polys = rational ? run_engine<IntRing>(polys, ctx, opts, g.stats) : run_engine<Z3Ring>(polys, ctx, opts, g.stats);
  g.reduced = true;
  return g;
}

}  // namespace

GroebnerBasis buchberger(const std::vector<MultiPoly>& polys, const MonomialOrder& order, const Options& opts) {
  if (polys.empty()) throw Error(ErrorKind::InvalidArgument, "empty polynomial list");
  if (order.kind != OrderKind::Lex || !opts.lex_via_fglm) return run_direct(polys, order, opts);
  MonomialOrder grevlex = order;
  grevlex.kind = OrderKind::GrevLex;
  GroebnerBasis g = run_direct(polys, grevlex, opts);
  if (!is_zero_dimensional(g)) return run_direct(polys, order, opts);
  GroebnerBasis lex = fglm(g, order);
  lex.stats = g.stats;
  return lex;
}

std::vector<Monomial> standard_monomials(const GroebnerBasis& g, size_t limit) {
  if (g.polys.empty()) throw Error(ErrorKind::InvalidArgument, "empty basis");
  const int nvars = g.polys[0].nvars();
  std::vector<Monomial> lms;
  for (const auto& f : g.polys) lms.push_back(leading_monomial(f, g.order));
  auto reducible = [&](const Monomial& m) {
    for (const auto& l : lms)
      if (l.divides(m)) return true;
    return false;
  };
  std::vector<Monomial> out;
  if (reducible(Monomial())) return out;
  std::set<Monomial> seen = {Monomial()};
  std::vector<Monomial> frontier = {Monomial()};
  while (!frontier.empty()) {
    Monomial m = frontier.back();
    frontier.pop_back();
    out.push_back(m);
    for (int v = 0; v < nvars; ++v) {
      Monomial n = m * Monomial::var(v);
      if (seen.count(n) || reducible(n)) continue;
      seen.insert(n);
      frontier.push_back(n);
      if (seen.size() > limit)
        throw Error(ErrorKind::NotZeroDimensional, "more than " + std::to_string(limit) + " standard monomials");
    }
  }
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return compare(a, b, g.order) < 0; });
  return out;
}

GroebnerBasis fglm(const GroebnerBasis& g, const MonomialOrder& target) {
  if (!is_zero_dimensional(g)) throw Error(ErrorKind::NotZeroDimensional, "change of order needs a finite variety");
  const int nvars = g.polys[0].nvars();
  if (target.nvars() != nvars) throw Error(ErrorKind::DimensionMismatch, "target order has the wrong number of variables");
  GroebnerBasis out;
  out.order = target;
  out.mode = g.mode;
  out.dim = g.dim;
  out.reduced = true;
  const std::vector<Monomial> basis = standard_monomials(g);
  if (basis.empty()) {
    out.polys = {MultiPoly::constant(nvars, QSqrt3(1))};
    return out;
  }
  const size_t dim = basis.size();
  std::map<Monomial, size_t> index;
  for (size_t k = 0; k < dim; ++k) index[basis[k]] = k;

  using Vec = std::vector<QSqrt3>;
  std::map<Monomial, Vec> nf_cache;
  auto normal_form = [&](const Monomial& m) -> const Vec& {
    auto it = nf_cache.find(m);
    if (it != nf_cache.end()) return it->second;
    Vec v(dim);
    auto hit = index.find(m);
    if (hit != index.end()) {
      v[hit->second] = QSqrt3(1);
    } else {
      MultiPoly r = reduce(MultiPoly(nvars, {{m, QSqrt3(1)}}), g.polys, g.order);
      for (const auto& t : r.terms()) v[index.at(t.mono)] = t.coeff;
    }
    return nf_cache.emplace(m, std::move(v)).first->second;
  };
  // NF(x_v * s) from NF(s) through the multiplication map of x_v
  auto times_var = [&](int var, const Vec& w) {
    Vec r(dim);
    for (size_t j = 0; j < dim; ++j) {
      if (w[j].is_zero()) continue;
      const Vec& col = normal_form(basis[j] * Monomial::var(var));
      for (size_t k = 0; k < dim; ++k)
        if (!col[k].is_zero()) r[k] += w[j] * col[k];
    }
    return r;
  };

  struct Row {
    Vec v;        // echelon row, v[pivot] = 1
    size_t pivot;
    Vec comb;     // row as a combination of the new standard monomials
  };
  std::vector<Row> rows;
  std::vector<Monomial> new_std;
  std::vector<Vec> new_vec;
  std::map<Monomial, size_t> new_index;
  std::vector<Monomial> new_lms;
  std::vector<MultiPoly> polys;
  auto cmp = [&](const Monomial& a, const Monomial& b) { return compare(a, b, target) < 0; };
  std::set<Monomial, decltype(cmp)> candidates(cmp);
  candidates.insert(Monomial());

  while (!candidates.empty()) {
    Monomial m = *candidates.begin();
    candidates.erase(candidates.begin());
    bool multiple = false;
    for (const auto& l : new_lms)
      if (l.divides(m)) {
        multiple = true;
        break;
      }
    if (multiple) continue;
    Vec v;
    if (m.is_one()) {
      v = normal_form(m);
    } else {
      bool found = false;
      for (int var = 0; var < nvars && !found; ++var) {
        if (m[var] == 0) continue;
        auto it = new_index.find(m / Monomial::var(var));
        if (it == new_index.end()) continue;
        v = times_var(var, new_vec[it->second]);
        found = true;
      }
      if (!found) v = normal_form(m);
    }
    Vec reduced = v;
    Vec tot(new_std.size());
    for (const auto& row : rows) {
      QSqrt3 c = reduced[row.pivot];
      if (c.is_zero()) continue;
      for (size_t k = 0; k < dim; ++k)
        if (!row.v[k].is_zero()) reduced[k] -= c * row.v[k];
      for (size_t k = 0; k < row.comb.size(); ++k)
        if (!row.comb[k].is_zero()) tot[k] += c * row.comb[k];
    }
    size_t pivot = dim;
    for (size_t k = 0; k < dim; ++k)
      if (!reduced[k].is_zero()) {
        pivot = k;
        break;
      }
    if (pivot == dim) {
      std::vector<Term> terms = {{m, QSqrt3(1)}};
      for (size_t k = 0; k < tot.size(); ++k)
        if (!tot[k].is_zero()) terms.push_back({new_std[k], -tot[k]});
      polys.emplace_back(nvars, std::move(terms));
      new_lms.push_back(m);
      continue;
    }
    QSqrt3 inv = reduced[pivot].inverse();
    for (auto& c : reduced) c *= inv;
    Vec comb(new_std.size() + 1);
    for (size_t k = 0; k < tot.size(); ++k) comb[k] = -tot[k] * inv;
    comb[new_std.size()] = inv;
    for (auto& row : rows) row.comb.resize(new_std.size() + 1);
    rows.push_back({std::move(reduced), pivot, std::move(comb)});
    new_index[m] = new_std.size();
    new_std.push_back(m);
    new_vec.push_back(std::move(v));
    for (int var = 0; var < nvars; ++var) candidates.insert(m * Monomial::var(var));
  }
  std::sort(polys.begin(), polys.end(), [&](const MultiPoly& a, const MultiPoly& b) {
    return compare(leading_monomial(a, target), leading_monomial(b, target), target) < 0;
  });
  out.polys = std::move(polys);
  return out;
}

GroebnerBasis buchberger(const polysys::PolynomialSystem& p, const MonomialOrder& order, const Options& opts) {
  if (p.polys.empty()) throw Error(ErrorKind::InvalidArgument, "empty polynomial system");
  GroebnerBasis g = buchberger(p.polys, order, opts);
  g.mode = p.mode;
  g.dim = p.dim;
  return g;
}

bool satisfies_buchberger_criterion(const GroebnerBasis& g) {
  for (size_t i = 0; i < g.polys.size(); ++i)
    for (size_t j = i + 1; j < g.polys.size(); ++j)
      if (!reduce(s_polynomial(g.polys[i], g.polys[j], g.order), g.polys, g.order).is_zero()) return false;
  return true;
}

bool is_zero_dimensional(const GroebnerBasis& g) {
  if (g.polys.empty()) return false;
  const int nvars = g.polys[0].nvars();
  for (const auto& f : g.polys)
    if (f.terms().size() == 1 && f.terms()[0].mono.is_one()) return true;  // empty variety
  for (int v = 0; v < nvars; ++v) {
    bool found = false;
    for (const auto& f : g.polys) {
      Monomial lm = leading_monomial(f, g.order);
      if (lm[v] > 0 && lm.degree() == lm[v]) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace mub::groebner
