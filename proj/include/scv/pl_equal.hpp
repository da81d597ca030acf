#pragma once

#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <variant>

#include "scv/plexpr.hpp"

namespace scv {

struct StrategyInapplicable : ScvError {
  explicit StrategyInapplicable(const std::string& msg) : ScvError(msg) {}
};

// Equality strategies. ExactAxisAligned decides equality exactly whenever all
// breakpoints encountered are axis-aligned hyperplanes t_i = c; it raises
// StrategyInapplicable on genuinely multi-variable breakpoints (diagonal
// min/max arguments) or products sharing variables. Sampled compares values
// on a full grid, seeded random rational points, and tied-coordinate probes.
struct ExactAxisAligned {
  int max_cells = 200000;
};

struct Sampled {
  int grid_denominator = 12;
  int random_count = 200;
  uint64_t seed = 0;
};

using EqStrategy = std::variant<ExactAxisAligned, Sampled>;

struct EqReport {
  bool equal = false;
  bool exact = false;          // decided by subdivision rather than sampling
  long points = 0;             // sampled mode: number of points compared
  std::optional<ParamPoint> witness;
};

namespace detail {

// Polynomial of degree <= 1 in each variable separately; monomials are
// variable bitmasks. Closed under the operations the cell resolver performs,
// and determined on any box by its values at the box's vertices.
struct MultiAffine {
  std::map<uint64_t, Rational> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  uint64_t support() const {
    uint64_t s = 0;
    for (const auto& [mono, c] : coeffs) s |= mono;
    return s;
  }

  void add_term(uint64_t mono, const Rational& c) {
    auto it = coeffs.find(mono);
    if (it == coeffs.end()) {
      if (!c.is_zero()) coeffs.emplace(mono, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) coeffs.erase(it);
  }

  static MultiAffine constant(const Rational& v) {
    MultiAffine p;
    p.add_term(0, v);
    return p;
  }

  static MultiAffine variable(int i) {
    MultiAffine p;
    p.add_term(1ULL << i, Rational(1));
    return p;
  }

  MultiAffine scaled(const Rational& c) const {
    MultiAffine p;
    if (c.is_zero()) return p;
    for (const auto& [mono, v] : coeffs) p.coeffs.emplace(mono, c * v);
    return p;
  }

  MultiAffine plus(const MultiAffine& o) const {
    MultiAffine p = *this;
    for (const auto& [mono, v] : o.coeffs) p.add_term(mono, v);
    return p;
  }

  MultiAffine minus(const MultiAffine& o) const { return plus(o.scaled(Rational(-1))); }

  // Defined only when the two factors use disjoint variables.
  std::optional<MultiAffine> times(const MultiAffine& o) const {
    if ((support() & o.support()) != 0) return std::nullopt;
    MultiAffine p;
    for (const auto& [m1, c1] : coeffs) {
      for (const auto& [m2, c2] : o.coeffs) p.add_term(m1 | m2, c1 * c2);
    }
    return p;
  }

  Rational eval(const ParamPoint& point) const {
    Rational total;
    for (const auto& [mono, c] : coeffs) {
      Rational term = c;
      uint64_t m = mono;
      while (m != 0) {
        int i = __builtin_ctzll(m);
        term *= point[static_cast<size_t>(i)];
        m &= m - 1;
      }
      total += term;
    }
    return total;
  }
};

struct Cell {
  std::vector<std::pair<Rational, Rational>> bounds;
};

enum class SignClass { Zero, NonNeg, NonPos, Mixed };

// Multi-affine functions attain their extrema over a box at its vertices.
inline SignClass sign_on_cell(const MultiAffine& p, const Cell& cell, ParamPoint* neg_witness,
                              ParamPoint* pos_witness) {
  uint64_t sup = p.support();
  std::vector<int> vars;
  for (int i = 0; i < 64; ++i) {
    if (sup & (1ULL << i)) vars.push_back(i);
  }
  ParamPoint point(cell.bounds.size());
  for (size_t i = 0; i < point.size(); ++i) point[i] = cell.bounds[i].first;
  bool any_neg = false, any_pos = false;
  size_t corners = 1ULL << vars.size();
  for (size_t corner = 0; corner < corners; ++corner) {
    for (size_t j = 0; j < vars.size(); ++j) {
      const auto& b = cell.bounds[static_cast<size_t>(vars[j])];
      point[static_cast<size_t>(vars[j])] = (corner >> j) & 1 ? b.second : b.first;
    }
    int s = p.eval(point).sign();
    if (s < 0) {
      any_neg = true;
      if (neg_witness) *neg_witness = point;
    } else if (s > 0) {
      any_pos = true;
      if (pos_witness) *pos_witness = point;
    }
    if (any_neg && any_pos) return SignClass::Mixed;
  }
  if (any_neg) return SignClass::NonPos;
  if (any_pos) return SignClass::NonNeg;
  return SignClass::Zero;
}

struct Resolution {
  enum class Status { Ok, Split, Fail } status = Status::Fail;
  MultiAffine poly;     // Ok
  int split_var = -1;   // Split
  Rational split_at;    // Split
  std::string why;      // Fail
};

struct CellResolver {
  const Cell& cell;
  std::unordered_map<const Expr*, Resolution> memo;

  explicit CellResolver(const Cell& c) : cell(c) {}

  // Mixed-sign difference: split if its breakpoint is an axis hyperplane.
  Resolution split_or_fail(const MultiAffine& diff, const char* what) {
    uint64_t sup = diff.support();
    if (sup != 0 && (sup & (sup - 1)) == 0) {
      int var = __builtin_ctzll(sup);
      Rational slope, constant;
      for (const auto& [mono, c] : diff.coeffs) {
        if (mono == 0) constant = c;
        else slope = c;
      }
      Resolution r;
      r.status = Resolution::Status::Split;
      r.split_var = var;
      r.split_at = -constant / slope;
      return r;
    }
    Resolution r;
    r.status = Resolution::Status::Fail;
    r.why = std::string(what) + " with a multi-variable breakpoint";
    return r;
  }

  Resolution resolve(const Expr* e) {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    Resolution r = resolve_uncached(e);
    memo.emplace(e, r);
    return r;
  }

  Resolution resolve_uncached(const Expr* e) {
    Resolution r;
    switch (e->kind) {
      case ExprKind::Const:
        r.status = Resolution::Status::Ok;
        r.poly = MultiAffine::constant(e->value);
        return r;
      case ExprKind::Var:
        r.status = Resolution::Status::Ok;
        r.poly = MultiAffine::variable(e->var);
        return r;
      case ExprKind::Affine: {
        MultiAffine acc = MultiAffine::constant(e->value);
        for (const auto& [c, sub] : e->terms) {
          Resolution sr = resolve(sub.get());
          if (sr.status != Resolution::Status::Ok) return sr;
          acc = acc.plus(sr.poly.scaled(c));
        }
        r.status = Resolution::Status::Ok;
        r.poly = std::move(acc);
        return r;
      }
      case ExprKind::Min:
      case ExprKind::Max: {
        Resolution best = resolve(e->args[0].get());
        if (best.status != Resolution::Status::Ok) return best;
        for (size_t i = 1; i < e->args.size(); ++i) {
          Resolution cand = resolve(e->args[i].get());
          if (cand.status != Resolution::Status::Ok) return cand;
          MultiAffine diff = best.poly.minus(cand.poly);
          if (diff.is_zero()) continue;
          SignClass s = sign_on_cell(diff, cell, nullptr, nullptr);
          bool cand_wins = e->kind == ExprKind::Min ? s == SignClass::NonNeg || s == SignClass::Zero
                                                    : s == SignClass::NonPos || s == SignClass::Zero;
          bool best_wins = e->kind == ExprKind::Min ? s == SignClass::NonPos : s == SignClass::NonNeg;
          if (cand_wins) {
            best = cand;
          } else if (!best_wins) {
            return split_or_fail(diff, "min/max");
          }
        }
        return best;
      }
      case ExprKind::Abs: {
        Resolution sr = resolve(e->args[0].get());
        if (sr.status != Resolution::Status::Ok) return sr;
        SignClass s = sign_on_cell(sr.poly, cell, nullptr, nullptr);
        if (s == SignClass::NonNeg || s == SignClass::Zero) return sr;
        if (s == SignClass::NonPos) {
          sr.poly = sr.poly.scaled(Rational(-1));
          return sr;
        }
        return split_or_fail(sr.poly, "abs");
      }
      case ExprKind::Mul: {
        Resolution lr = resolve(e->args[0].get());
        if (lr.status != Resolution::Status::Ok) return lr;
        Resolution rr = resolve(e->args[1].get());
        if (rr.status != Resolution::Status::Ok) return rr;
        auto prod = lr.poly.times(rr.poly);
        if (!prod) {
          Resolution f;
          f.status = Resolution::Status::Fail;
          f.why = "product of expressions sharing a variable";
          return f;
        }
        r.status = Resolution::Status::Ok;
        r.poly = std::move(*prod);
        return r;
      }
      case ExprKind::Cond: {
        Resolution gr = resolve(e->args[0].get());
        if (gr.status != Resolution::Status::Ok) return gr;
        SignClass s = sign_on_cell(gr.poly, cell, nullptr, nullptr);
        if (s == SignClass::NonPos || s == SignClass::Zero) {
          Resolution nr = resolve(e->args[1].get());
          if (s == SignClass::Zero && nr.status == Resolution::Status::Ok) {
            Resolution pr = resolve(e->args[2].get());
            if (pr.status == Resolution::Status::Ok &&
                !nr.poly.minus(pr.poly).is_zero()) {
              ParamPoint at(cell.bounds.size());
              for (size_t i = 0; i < at.size(); ++i) at[i] = cell.bounds[i].first;
              throw SeamMismatch("piecewise branches disagree where the guard vanishes");
            }
          }
          return nr;
        }
        if (s == SignClass::NonNeg) return resolve(e->args[2].get());
        return split_or_fail(gr.poly, "piecewise guard");
      }
    }
    r.status = Resolution::Status::Fail;
    r.why = "unreachable";
    return r;
  }
};

inline ParamPoint poly_difference_witness(const MultiAffine& diff, const Cell& cell) {
  ParamPoint neg, pos;
  SignClass s = sign_on_cell(diff, cell, &neg, &pos);
  if (s == SignClass::NonPos || s == SignClass::Mixed) return neg;
  return pos;
}

}  // namespace detail

inline EqReport pl_equal_exact(const ExprPtr& a, const ExprPtr& b, int arity,
                               const ExactAxisAligned& opts = {}) {
  uint64_t allowed = arity >= 64 ? ~0ULL : (1ULL << arity) - 1;
  if ((a->support & ~allowed) != 0 || (b->support & ~allowed) != 0) {
    throw IndexOutOfRange("expression uses a variable beyond the stated arity");
  }
  std::deque<detail::Cell> work;
  detail::Cell root;
  root.bounds.assign(static_cast<size_t>(arity), {Rational(-1), Rational(1)});
  work.push_back(std::move(root));
  int cells_processed = 0;
  while (!work.empty()) {
    detail::Cell cell = std::move(work.front());
    work.pop_front();
    if (++cells_processed > opts.max_cells) {
      throw StrategyInapplicable("cell subdivision exceeded the configured bound");
    }
    detail::CellResolver resolver(cell);
    detail::Resolution ra = resolver.resolve(a.get());
    detail::Resolution rb = ra.status == detail::Resolution::Status::Ok
                                ? resolver.resolve(b.get())
                                : ra;
    const detail::Resolution& blocker =
        ra.status != detail::Resolution::Status::Ok ? ra : rb;
    if (blocker.status == detail::Resolution::Status::Split) {
      detail::Cell lo = cell, hi = cell;
      auto& lb = lo.bounds[static_cast<size_t>(blocker.split_var)];
      auto& hb = hi.bounds[static_cast<size_t>(blocker.split_var)];
      if (!(lb.first < blocker.split_at && blocker.split_at < lb.second)) {
        throw ScvError("internal: split point not interior to its cell");
      }
      lb.second = blocker.split_at;
      hb.first = blocker.split_at;
      work.push_back(std::move(lo));
      work.push_back(std::move(hi));
      continue;
    }
    if (blocker.status == detail::Resolution::Status::Fail) {
      throw StrategyInapplicable(blocker.why);
    }
    detail::MultiAffine diff = ra.poly.minus(rb.poly);
    if (!diff.is_zero()) {
      EqReport report;
      report.equal = false;
      report.exact = true;
      report.witness = detail::poly_difference_witness(diff, cell);
      return report;
    }
  }
  EqReport report;
  report.equal = true;
  report.exact = true;
  return report;
}

namespace detail {

struct SplitMix {
  uint64_t state;
  explicit SplitMix(uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }
  Rational coordinate(int denominator) {
    long long den = denominator;
    long long num = static_cast<long long>(below(static_cast<uint64_t>(2 * den + 1))) - den;
    return Rational(num, den);
  }
};

}  // namespace detail

// All points of ([-1,1] n (1/den)Z)^arity, in deterministic lexicographic order.
inline std::vector<ParamPoint> sample_grid(int arity, int denominator) {
  if (denominator < 1) throw ScvError("grid denominator must be >= 1");
  std::vector<ParamPoint> points;
  ParamPoint current(static_cast<size_t>(arity));
  long long steps = 2 * denominator + 1;
  long long total = 1;
  for (int i = 0; i < arity; ++i) {
    total *= steps;
    if (total > 4000000) throw ScvError("grid too large");
  }
  points.reserve(static_cast<size_t>(total));
  std::vector<long long> idx(static_cast<size_t>(arity), 0);
  for (long long k = 0; k < total; ++k) {
    long long rem = k;
    for (int i = arity - 1; i >= 0; --i) {
      idx[static_cast<size_t>(i)] = rem % steps;
      rem /= steps;
    }
    for (int i = 0; i < arity; ++i) {
      current[static_cast<size_t>(i)] = Rational(idx[static_cast<size_t>(i)] - denominator,
                                                 denominator);
    }
    points.push_back(current);
  }
  return points;
}

// Grid + seeded random + tied-coordinate probe points for sampled equality.
inline std::vector<ParamPoint> sample_points(int arity, const Sampled& opts) {
  std::vector<ParamPoint> points = sample_grid(arity, opts.grid_denominator);
  detail::SplitMix rng(opts.seed * 1000003ULL + static_cast<uint64_t>(arity));
  const int random_den = 97;
  for (int k = 0; k < opts.random_count; ++k) {
    ParamPoint p(static_cast<size_t>(arity));
    for (int i = 0; i < arity; ++i) p[static_cast<size_t>(i)] = rng.coordinate(random_den);
    points.push_back(std::move(p));
  }
  // Tied coordinates t_i = t_j and t_i = -t_j probe diagonal breakpoints.
  for (int i = 0; i < arity; ++i) {
    for (int j = i + 1; j < arity; ++j) {
      for (long long v = -opts.grid_denominator; v <= opts.grid_denominator; ++v) {
        Rational tie(v, opts.grid_denominator);
        for (int flip = 0; flip < 2; ++flip) {
          ParamPoint p(static_cast<size_t>(arity));
          for (int m = 0; m < arity; ++m) p[static_cast<size_t>(m)] = rng.coordinate(random_den);
          p[static_cast<size_t>(i)] = tie;
          p[static_cast<size_t>(j)] = flip ? -tie : tie;
          points.push_back(std::move(p));
        }
      }
    }
  }
  return points;
}

inline EqReport pl_equal_sampled(const ExprPtr& a, const ExprPtr& b, int arity,
                                 const Sampled& opts) {
  EqReport report;
  report.exact = false;
  for (const auto& point : sample_points(arity, opts)) {
    ++report.points;
    if (!(pl_eval(a, point) == pl_eval(b, point))) {
      report.equal = false;
      report.witness = point;
      return report;
    }
  }
  report.equal = true;
  return report;
}

inline EqReport pl_equal(const ExprPtr& a, const ExprPtr& b, int arity,
                         const EqStrategy& strategy) {
  if (std::holds_alternative<ExactAxisAligned>(strategy)) {
    return pl_equal_exact(a, b, arity, std::get<ExactAxisAligned>(strategy));
  }
  return pl_equal_sampled(a, b, arity, std::get<Sampled>(strategy));
}

// Exact when the subdivision applies, sampled otherwise; the report records
// which strategy decided.
inline EqReport pl_equal_auto(const ExprPtr& a, const ExprPtr& b, int arity,
                              const Sampled& fallback = {}) {
  if (ex_identical(a, b)) {
    EqReport r;
    r.equal = true;
    r.exact = true;
    return r;
  }
  try {
    return pl_equal_exact(a, b, arity);
  } catch (const StrategyInapplicable&) {
    return pl_equal_sampled(a, b, arity, fallback);
  }
}

}  // namespace scv
