#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "scv/rational.hpp"

namespace scv {

struct IndexOutOfRange : ScvError {
  explicit IndexOutOfRange(const std::string& msg) : ScvError(msg) {}
};

// Raised when the two branches of a piecewise expression disagree at a point
// where its guard vanishes. Gluing continuity is verified, never assumed.
struct SeamMismatch : ScvError {
  explicit SeamMismatch(const std::string& msg) : ScvError(msg) {}
};

using ParamPoint = std::vector<Rational>;

enum class ExprKind { Const, Var, Affine, Min, Max, Abs, Mul, Cond };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Scalar expression in parameters t_1..t_k, exactly evaluable at rational
// points. Affine nodes are constant + sum of rational multiples of children.
// Min/Max/Abs give piecewise-affine functions; Mul and Cond extend the
// language to the piecewise multi-affine functions needed by the convex
// homotopy weights and by glued (piecewise-defined) cubes. Cond(guard, a, b)
// is a where guard < 0, b where guard > 0, and both (asserted equal) at 0.
struct Expr {
  ExprKind kind;
  Rational value;                                   // Const value / Affine constant term
  int var = -1;                                     // Var index (0-based)
  std::vector<std::pair<Rational, ExprPtr>> terms;  // Affine
  std::vector<ExprPtr> args;                        // Min/Max args; Abs [x]; Mul [l,r]; Cond [g,neg,pos]
  uint64_t support = 0;                             // bitmask of variables used
  size_t hash = 0;                                  // structural hash

  Expr(ExprKind k) : kind(k) {}
};

namespace detail {

inline size_t hash_mix(size_t h, size_t v) {
  return (h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline ExprPtr finish(std::shared_ptr<Expr> e) {
  size_t h = static_cast<size_t>(e->kind) * 1000003u;
  h = hash_mix(h, e->value.hash());
  h = hash_mix(h, static_cast<size_t>(e->var + 1));
  uint64_t support = 0;
  if (e->kind == ExprKind::Var) support |= 1ULL << e->var;
  for (const auto& [c, sub] : e->terms) {
    h = hash_mix(h, c.hash());
    h = hash_mix(h, sub->hash);
    support |= sub->support;
  }
  for (const auto& a : e->args) {
    h = hash_mix(h, a->hash);
    support |= a->support;
  }
  e->support = support;
  e->hash = h;
  return e;
}

}  // namespace detail

inline ExprPtr ex_const(const Rational& v) {
  auto e = std::make_shared<Expr>(ExprKind::Const);
  e->value = v;
  return detail::finish(std::move(e));
}

inline ExprPtr ex_const(long long v) { return ex_const(Rational(v)); }

inline ExprPtr ex_var(int index) {
  if (index < 0 || index >= 64) throw IndexOutOfRange("variable index out of range");
  auto e = std::make_shared<Expr>(ExprKind::Var);
  e->var = index;
  return detail::finish(std::move(e));
}

inline bool ex_identical(const ExprPtr& a, const ExprPtr& b);

// constant + sum coeff_i * expr_i, with nested affine/constant children
// folded and like terms combined.
inline ExprPtr ex_affine(Rational constant, std::vector<std::pair<Rational, ExprPtr>> in) {
  std::vector<std::pair<Rational, ExprPtr>> flat;
  std::vector<std::pair<Rational, ExprPtr>> work = std::move(in);
  while (!work.empty()) {
    auto [c, sub] = std::move(work.back());
    work.pop_back();
    if (c.is_zero()) continue;
    if (sub->kind == ExprKind::Const) {
      constant += c * sub->value;
    } else if (sub->kind == ExprKind::Affine) {
      constant += c * sub->value;
      for (const auto& [c2, sub2] : sub->terms) work.emplace_back(c * c2, sub2);
    } else {
      bool merged = false;
      for (auto& [c0, sub0] : flat) {
        if (sub0->hash == sub->hash && ex_identical(sub0, sub)) {
          c0 += c;
          merged = true;
          break;
        }
      }
      if (!merged) flat.emplace_back(std::move(c), std::move(sub));
    }
  }
  std::erase_if(flat, [](const auto& t) { return t.first.is_zero(); });
  if (flat.empty()) return ex_const(constant);
  if (flat.size() == 1 && flat[0].first == Rational(1) && constant.is_zero()) {
    return flat[0].second;
  }
  auto e = std::make_shared<Expr>(ExprKind::Affine);
  e->value = std::move(constant);
  e->terms = std::move(flat);
  return detail::finish(std::move(e));
}

inline ExprPtr ex_add(const ExprPtr& a, const ExprPtr& b) {
  return ex_affine(Rational(0), {{Rational(1), a}, {Rational(1), b}});
}

inline ExprPtr ex_sub(const ExprPtr& a, const ExprPtr& b) {
  return ex_affine(Rational(0), {{Rational(1), a}, {Rational(-1), b}});
}

inline ExprPtr ex_scale(const Rational& c, const ExprPtr& a) {
  return ex_affine(Rational(0), {{c, a}});
}

inline ExprPtr ex_neg(const ExprPtr& a) { return ex_scale(Rational(-1), a); }

inline ExprPtr ex_shift(const ExprPtr& a, const Rational& c) {
  return ex_affine(c, {{Rational(1), a}});
}

namespace detail {

inline ExprPtr make_lattice(ExprKind kind, std::vector<ExprPtr> args) {
  if (args.empty()) throw ScvError("min/max of empty list");
  bool all_const = true;
  for (const auto& a : args) all_const = all_const && a->kind == ExprKind::Const;
  if (all_const) {
    Rational best = args[0]->value;
    for (const auto& a : args) {
      best = kind == ExprKind::Min ? rat_min(best, a->value) : rat_max(best, a->value);
    }
    return ex_const(best);
  }
  if (args.size() == 1) return args[0];
  auto e = std::make_shared<Expr>(kind);
  e->args = std::move(args);
  return finish(std::move(e));
}

}  // namespace detail

inline ExprPtr ex_min(std::vector<ExprPtr> args) {
  return detail::make_lattice(ExprKind::Min, std::move(args));
}

inline ExprPtr ex_max(std::vector<ExprPtr> args) {
  return detail::make_lattice(ExprKind::Max, std::move(args));
}

inline ExprPtr ex_abs(const ExprPtr& a) {
  if (a->kind == ExprKind::Const) return ex_const(a->value.abs());
  auto e = std::make_shared<Expr>(ExprKind::Abs);
  e->args = {a};
  return detail::finish(std::move(e));
}

inline ExprPtr ex_mul(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind == ExprKind::Const) return ex_scale(a->value, b);
  if (b->kind == ExprKind::Const) return ex_scale(b->value, a);
  auto e = std::make_shared<Expr>(ExprKind::Mul);
  e->args = {a, b};
  return detail::finish(std::move(e));
}

inline ExprPtr ex_cond(const ExprPtr& guard, const ExprPtr& neg, const ExprPtr& pos) {
  if (ex_identical(neg, pos)) return neg;
  if (guard->kind == ExprKind::Const) {
    int s = guard->value.sign();
    if (s < 0) return neg;
    if (s > 0) return pos;
    // Guard identically zero: branches must agree; prefer neg, evaluation of
    // a genuine tie is checked in pl_eval.
  }
  auto e = std::make_shared<Expr>(ExprKind::Cond);
  e->args = {guard, neg, pos};
  return detail::finish(std::move(e));
}

// Structural equality (same tree up to shared nodes). Semantic equality is
// pl_equal's job; this is only a cheap early-out and dedup key.
inline bool ex_identical(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  if (!(a->value == b->value) || a->var != b->var) return false;
  if (a->terms.size() != b->terms.size() || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->terms.size(); ++i) {
    if (!(a->terms[i].first == b->terms[i].first)) return false;
    if (!ex_identical(a->terms[i].second, b->terms[i].second)) return false;
  }
  for (size_t i = 0; i < a->args.size(); ++i) {
    if (!ex_identical(a->args[i], b->args[i])) return false;
  }
  return true;
}

namespace detail {

using EvalMemo = std::unordered_map<const Expr*, Rational>;

inline Rational eval_rec(const Expr* e, const ParamPoint& point, EvalMemo& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  Rational result;
  switch (e->kind) {
    case ExprKind::Const:
      result = e->value;
      break;
    case ExprKind::Var:
      if (e->var >= static_cast<int>(point.size())) {
        throw IndexOutOfRange("variable t_" + std::to_string(e->var + 1) +
                              " evaluated at a point of arity " + std::to_string(point.size()));
      }
      result = point[static_cast<size_t>(e->var)];
      break;
    case ExprKind::Affine: {
      result = e->value;
      for (const auto& [c, sub] : e->terms) result += c * eval_rec(sub.get(), point, memo);
      break;
    }
    case ExprKind::Min:
    case ExprKind::Max: {
      result = eval_rec(e->args[0].get(), point, memo);
      for (size_t i = 1; i < e->args.size(); ++i) {
        Rational v = eval_rec(e->args[i].get(), point, memo);
        result = e->kind == ExprKind::Min ? rat_min(result, v) : rat_max(result, v);
      }
      break;
    }
    case ExprKind::Abs:
      result = eval_rec(e->args[0].get(), point, memo).abs();
      break;
    case ExprKind::Mul:
      result = eval_rec(e->args[0].get(), point, memo) * eval_rec(e->args[1].get(), point, memo);
      break;
    case ExprKind::Cond: {
      int s = eval_rec(e->args[0].get(), point, memo).sign();
      if (s < 0) {
        result = eval_rec(e->args[1].get(), point, memo);
      } else if (s > 0) {
        result = eval_rec(e->args[2].get(), point, memo);
      } else {
        Rational lo = eval_rec(e->args[1].get(), point, memo);
        Rational hi = eval_rec(e->args[2].get(), point, memo);
        if (!(lo == hi)) {
          throw SeamMismatch("piecewise branches disagree on the guard's zero set: " +
                             lo.to_string() + " vs " + hi.to_string());
        }
        result = lo;
      }
      break;
    }
  }
  memo.emplace(e, result);
  return result;
}

using SubstMemo = std::unordered_map<const Expr*, ExprPtr>;

inline ExprPtr subst_rec(const ExprPtr& e, const std::vector<ExprPtr>& assignment,
                         SubstMemo& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  ExprPtr result;
  switch (e->kind) {
    case ExprKind::Const:
      result = e;
      break;
    case ExprKind::Var:
      if (e->var >= static_cast<int>(assignment.size())) {
        throw IndexOutOfRange("variable t_" + std::to_string(e->var + 1) +
                              " substituted with an assignment of arity " +
                              std::to_string(assignment.size()));
      }
      result = assignment[static_cast<size_t>(e->var)];
      break;
    case ExprKind::Affine: {
      std::vector<std::pair<Rational, ExprPtr>> terms;
      terms.reserve(e->terms.size());
      for (const auto& [c, sub] : e->terms) terms.emplace_back(c, subst_rec(sub, assignment, memo));
      result = ex_affine(e->value, std::move(terms));
      break;
    }
    case ExprKind::Min:
    case ExprKind::Max: {
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) args.push_back(subst_rec(a, assignment, memo));
      result = detail::make_lattice(e->kind, std::move(args));
      break;
    }
    case ExprKind::Abs:
      result = ex_abs(subst_rec(e->args[0], assignment, memo));
      break;
    case ExprKind::Mul:
      result = ex_mul(subst_rec(e->args[0], assignment, memo),
                      subst_rec(e->args[1], assignment, memo));
      break;
    case ExprKind::Cond:
      result = ex_cond(subst_rec(e->args[0], assignment, memo),
                       subst_rec(e->args[1], assignment, memo),
                       subst_rec(e->args[2], assignment, memo));
      break;
  }
  memo.emplace(e.get(), result);
  return result;
}

}  // namespace detail

// Exact value of the expression at a rational point.
inline Rational pl_eval(const ExprPtr& expr, const ParamPoint& point) {
  detail::EvalMemo memo;
  return detail::eval_rec(expr.get(), point, memo);
}

// Precomposition: result(t) = expr(assignment_0(t), ..., assignment_{k-1}(t)).
inline ExprPtr pl_substitute(const ExprPtr& expr, const std::vector<ExprPtr>& assignment) {
  detail::SubstMemo memo;
  return detail::subst_rec(expr, assignment, memo);
}

// Shared evaluation context for many expressions at one point.
struct EvalContext {
  const ParamPoint& point;
  detail::EvalMemo memo;
  explicit EvalContext(const ParamPoint& p) : point(p) {}
  Rational operator()(const ExprPtr& e) { return detail::eval_rec(e.get(), point, memo); }
};

}  // namespace scv
