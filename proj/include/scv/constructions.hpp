#pragma once

#include <functional>

#include "scv/chain.hpp"

namespace scv {

struct LengthMismatch : ScvError {
  explicit LengthMismatch(const std::string& m) : ScvError(m) {}
};

// --- scalar helpers -------------------------------------------------------

// sigma_+(t) = min(0, t); sigma_-(t) = -1.
inline ExprPtr sigma_expr(int sign, const ExprPtr& t) {
  if (sign > 0) return ex_min({ex_const(0), t});
  return ex_const(-1);
}

// tau over a sign string: max of 1/2 and (1+t_i)/2 for every minus entry.
inline ExprPtr tau_expr(const std::vector<int>& signs, const std::vector<ExprPtr>& ts) {
  if (signs.size() != ts.size()) throw LengthMismatch("tau needs one parameter per sign");
  std::vector<ExprPtr> args = {ex_const(Rational(1, 2))};
  for (size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] < 0) {
      args.push_back(ex_affine(Rational(1, 2), {{Rational(1, 2), ts[i]}}));
    }
  }
  return ex_max(std::move(args));
}

inline std::pair<Rational, Rational> orthant_interval(int sign) {
  return sign > 0 ? std::pair<Rational, Rational>{Rational(0), Rational(1)}
                  : std::pair<Rational, Rational>{Rational(-1), Rational(0)};
}

// --- products and the action ----------------------------------------------

// The 2^n-fold product, built by the inductive composite of widened copies of
// the binary product.
inline Configuration mu_config(int n) {
  if (n == 0) return identity_config(Color::Open, 0);
  if (n == 1) {
    Configuration mu;
    mu.dim = 1;
    mu.output = Color::Open;
    mu.boxes.emplace(Label::open(SignString::over({1}, {-1})),
                     Box{{Rational(0), Rational(1)}, {Rational(-1), Rational(0)}});
    mu.boxes.emplace(Label::open(SignString::over({1}, {+1})),
                     Box{{Rational(0), Rational(1)}, {Rational(0), Rational(1)}});
    return mu;
  }
  AxisSet head;
  for (int i = 1; i < n; ++i) head.push_back(i);
  Configuration outer = iota(head, n, mu_config(1));       // labels over {n}
  Configuration inner = iota({n}, n, mu_config(n - 1));    // labels over {1..n-1}
  return compose_many(outer, {{Label::open(SignString::over({n}, {-1})), inner},
                              {Label::open(SignString::over({n}, {+1})), inner}});
}

// Closed-form description: the component at a sign string is [0,1] times the
// product of its orthants.
inline Configuration mu_closed_form(int n) {
  Configuration mu;
  mu.dim = n;
  mu.output = Color::Open;
  for (const auto& star : all_sign_strings(axis_range(n))) {
    Box box;
    box.emplace_back(Rational(0), Rational(1));
    for (const auto& [axis, sign] : star.entries) box.push_back(orthant_interval(sign));
    mu.boxes.emplace(Label::open(star), std::move(box));
  }
  return mu;
}

// Widened product over a subset of axes.
inline Configuration mu_S_config(int n, const AxisSet& S) {
  return iota(axis_complement(S, n), n, mu_config(static_cast<int>(S.size())));
}

inline Configuration alpha_config(int n) {
  Configuration a;
  a.dim = n;
  a.output = Color::Open;
  Box closed(static_cast<size_t>(n) + 1, {Rational(-1), Rational(1)});
  Box open = closed;
  closed[0] = {Rational(1, 2), Rational(1)};
  open[0] = {Rational(0), Rational(1, 2)};
  a.boxes.emplace(Label::closed(1), std::move(closed));
  a.boxes.emplace(Label::open(SignString::empty()), std::move(open));
  return a;
}

// --- the pushing cubes ------------------------------------------------------

// The n-parameter cube that pushes the closed input from the open face to the
// orthant named by `star`. Closed component [1/2,1] x prod [sigma, -sigma];
// open component star' is [0, tau_{star star'}] x orthant(star').
inline ParamCube beta_cube(int n, const SignString& star) {
  if (static_cast<int>(star.size()) != n) throw LengthMismatch("sign string arity mismatch");
  ParamCube cube;
  cube.arity = n;
  cube.dim = n;
  cube.output = Color::Open;
  std::vector<ExprPtr> ts;
  for (int i = 0; i < n; ++i) ts.push_back(ex_var(i));
  ExprBox closed;
  closed.emplace_back(ex_const(Rational(1, 2)), ex_const(1));
  for (int i = 1; i <= n; ++i) {
    int s = star.sign_at(i);
    closed.emplace_back(sigma_expr(s, ts[static_cast<size_t>(i - 1)]),
                        ex_neg(sigma_expr(-s, ts[static_cast<size_t>(i - 1)])));
  }
  cube.boxes.emplace(Label::closed(1), std::move(closed));
  for (const auto& prime : all_sign_strings(axis_range(n))) {
    std::vector<int> product_signs;
    for (int i = 1; i <= n; ++i) product_signs.push_back(star.sign_at(i) * prime.sign_at(i));
    ExprBox box;
    box.emplace_back(ex_const(0), tau_expr(product_signs, ts));
    for (int i = 1; i <= n; ++i) {
      auto [lo, hi] = orthant_interval(prime.sign_at(i));
      box.emplace_back(ex_const(lo), ex_const(hi));
    }
    cube.boxes.emplace(Label::open(prime), std::move(box));
  }
  return cube;
}

// Widened pushing cube over a subset of axes; `star` is indexed by S. The
// empty set gives the action as a constant cube (the 0-fold push).
inline ParamCube beta_S_cube(int n, const AxisSet& S, const SignString& star) {
  std::map<int, int> down;
  for (size_t i = 0; i < S.size(); ++i) down[S[i]] = static_cast<int>(i) + 1;
  ParamCube small = beta_cube(static_cast<int>(S.size()), star.reindexed(down));
  return cube_iota(axis_complement(S, n), n, small);
}

// --- the generating cycle of the closed 2-input component -------------------

inline ParamCube ell_plus_cube(int n) {
  ParamCube cube;
  cube.arity = n;
  cube.dim = n;
  cube.output = Color::Closed;
  std::vector<ExprPtr> doubled;
  for (int i = 0; i < n; ++i) {
    doubled.push_back(ex_abs(ex_scale(Rational(2), ex_var(i))));
  }
  ExprPtr m = ex_max(doubled);
  const Rational q(1, 4);
  ExprBox first, second;
  // [ (1-M)/4, (3-M)/4 ] and [ (-3+M)/4, (-1+M)/4 ] in coordinate 0.
  first.emplace_back(ex_affine(q, {{-q, m}}), ex_affine(Rational(3, 4), {{-q, m}}));
  second.emplace_back(ex_affine(Rational(-3, 4), {{q, m}}), ex_affine(-q, {{q, m}}));
  for (int i = 0; i < n; ++i) {
    ExprPtr t = ex_var(i);
    first.emplace_back(ex_affine(-q, {{Rational(-1, 2), t}}),
                       ex_affine(q, {{Rational(-1, 2), t}}));
    second.emplace_back(ex_affine(-q, {{Rational(1, 2), t}}),
                        ex_affine(q, {{Rational(1, 2), t}}));
  }
  cube.boxes.emplace(Label::closed(1), std::move(first));
  cube.boxes.emplace(Label::closed(2), std::move(second));
  return cube;
}

// ell = ell_plus - (-1)^n ell_plus . (c1 c2); its class generates the top
// homology of the closed two-input component.
inline Chain ell_chain(int n) {
  Chain plus = chain_of(ell_plus_cube(n));
  Rational sign(n % 2 == 0 ? -1 : 1);
  return chain_add(plus, chain_scale(sign, swap_closed_chain(plus)));
}

inline Chain mu_chain(int n) { return chain_of(constant_cube(mu_config(n), 0)); }
inline Chain alpha_chain(int n) { return chain_of(constant_cube(alpha_config(n), 0)); }

// --- eta pieces --------------------------------------------------------------

// Key of one straightened piece: a full sign string, the axes still carrying
// an inner push, and the axes already finished on both sides.
struct EtaPieceKey {
  int n = 1;
  SignString star;  // over 1..n
  AxisSet S;
  AxisSet T;

  std::string to_string() const {
    auto axes_str = [](const AxisSet& a) {
      std::string s;
      for (int i : a) {
        if (!s.empty()) s += ",";
        s += std::to_string(i);
      }
      return s;
    };
    return "star=" + star.to_string() + ":S=" + axes_str(S) + ":T=" + axes_str(T);
  }
};

inline std::vector<EtaPieceKey> eta_piece_keys(int n) {
  std::vector<EtaPieceKey> keys;
  AxisSet full = axis_range(n);
  std::vector<AxisSet> subsets;
  for (size_t bits = 0; bits < (1ULL << n); ++bits) {
    AxisSet s;
    for (int i = 0; i < n; ++i) {
      if (bits & (1ULL << i)) s.push_back(i + 1);
    }
    subsets.push_back(std::move(s));
  }
  for (const auto& star : all_sign_strings(full)) {
    for (const auto& S : subsets) {
      for (const auto& T : subsets) {
        if (!axis_disjoint(S, T)) continue;
        keys.push_back({n, star, S, T});
      }
    }
  }
  return keys;
}

// Chain-valued ingredient providers, so the same assembly serves the base
// chains and their perturbed counterparts. The beta provider must return the
// action when handed the empty axis set.
using BetaProvider = std::function<Chain(const AxisSet&, const SignString&)>;
using MuProvider = std::function<Chain(const AxisSet&)>;

inline BetaProvider base_beta_provider(int n) {
  return [n](const AxisSet& S, const SignString& star) {
    return chain_of(beta_S_cube(n, S, star));
  };
}

inline MuProvider base_mu_provider(int n) {
  return [n](const AxisSet& S) { return chain_of(constant_cube(mu_S_config(n, S), 0)); };
}

inline std::vector<ExprPtr> phi_assignment(const AxisSet& s_axes, const AxisSet& t_axes, int n) {
  if (!axis_disjoint(s_axes, t_axes)) throw OverlappingSets("axis sets must be disjoint");
  std::vector<ExprPtr> t_vars;
  for (int axis : t_axes) t_vars.push_back(ex_var(axis - 1));
  ExprPtr threshold = ex_neg(ex_max(t_vars));
  std::vector<ExprPtr> assignment;
  for (int axis : axis_complement(t_axes, n)) {
    ExprPtr v = ex_var(axis - 1);
    assignment.push_back(axis_contains(s_axes, axis) ? ex_min({v, threshold})
                                                     : ex_max({v, threshold}));
  }
  return assignment;
}

namespace detail {

inline Chain embed_to_arity(const Chain& c, const AxisSet& axes, int arity) {
  std::vector<ExprPtr> assignment;
  for (int axis : axes) assignment.push_back(ex_var(axis - 1));
  return chain_reparam(c, assignment, arity);
}

}  // namespace detail

// One piece of the straightened cycle, assembled from the given ingredients
// as an n-parameter chain. With the base providers every piece is a single
// cube. Closed labels: the piece with empty T has the ambient push's closed
// box first and the inserted push's second; with nonempty T the box inserted
// at the slot opposite to star comes first.
inline Chain eta_piece_assembly(const EtaPieceKey& key, const BetaProvider& beta,
                                const MuProvider& mu) {
  const int n = key.n;
  if (key.T.empty()) {
    AxisSet rest = axis_complement(key.S, n);
    SignString star_rest = key.star.restricted(rest);
    Chain outer = detail::embed_to_arity(beta(rest, star_rest.negated()), rest, n);
    Chain mu_s = detail::embed_to_arity(mu(key.S), {}, n);
    std::vector<std::pair<Label, Chain>> slots;
    for (const auto& prime : all_sign_strings(rest)) {
      if (prime == star_rest) continue;
      slots.emplace_back(Label::open(prime), mu_s);
    }
    Chain distinguished = detail::embed_to_arity(beta(key.S, key.star.restricted(key.S)), key.S, n);
    slots.emplace_back(Label::open(star_rest), distinguished);
    return compose_chains(outer, slots);
  }
  SignString star_t = key.star.restricted(key.T);
  AxisSet keep = axis_complement(key.T, n);
  AxisSet free = axis_complement(axis_union(key.S, key.T), n);
  Chain outer = detail::embed_to_arity(mu(key.T), {}, n);
  Chain mu_keep = detail::embed_to_arity(mu(keep), {}, n);
  std::vector<std::pair<Label, Chain>> slots;
  for (const auto& prime : all_sign_strings(key.T)) {
    if (prime == star_t || prime == star_t.negated()) continue;
    slots.emplace_back(Label::open(prime), mu_keep);
  }
  // Slot opposite to star: a push over the free axes with every open input
  // finished by the widened product over S.
  Chain branch_low = detail::embed_to_arity(beta(free, key.star.restricted(free).negated()),
                                            free, n);
  Chain mu_s = detail::embed_to_arity(mu(key.S), {}, n);
  std::vector<std::pair<Label, Chain>> low_slots;
  for (const auto& prime : all_sign_strings(free)) {
    low_slots.emplace_back(Label::open(prime), mu_s);
  }
  branch_low = compose_chains(branch_low, low_slots);
  // Slot at star: the push over the kept axes, reparametrized through the
  // min/max map indexed by (S, T).
  Chain branch_high = chain_reparam(beta(keep, key.star.restricted(keep)),
                                    phi_assignment(key.S, key.T, n), n);
  slots.emplace_back(Label::open(star_t.negated()), branch_low);
  slots.emplace_back(Label::open(star_t), branch_high);
  return compose_chains(outer, slots);
}

inline ParamCube eta_piece(const EtaPieceKey& key) {
  Chain c = eta_piece_assembly(key, base_beta_provider(key.n), base_mu_provider(key.n));
  if (c.terms.size() != 1 || !(c.terms[0].coeff == Rational(1))) {
    throw ScvError("eta piece did not assemble to a single cube");
  }
  return c.terms[0].cube;
}

// Signed sum over all (star, S, T) keys; 6^n terms before normalization.
inline Chain eta_plus_assembly(int n, const BetaProvider& beta, const MuProvider& mu) {
  Chain sum = chain_zero(n, n, Color::Open);
  for (const auto& key : eta_piece_keys(n)) {
    Chain piece = eta_piece_assembly(key, beta, mu);
    sum = chain_add(sum, chain_scale(Rational(key.star.sgn()), piece));
  }
  return sum;
}

inline Chain eta_plus_chain(int n) {
  return eta_plus_assembly(n, base_beta_provider(n), base_mu_provider(n));
}

inline Chain eta_symmetrize(int n, const Chain& plus) {
  Rational sign(n % 2 == 0 ? -1 : 1);
  return chain_add(plus, chain_scale(sign, swap_closed_chain(plus)));
}

inline Chain eta_chain(int n) { return eta_symmetrize(n, eta_plus_chain(n)); }

// --- the glued evaluator ------------------------------------------------------

namespace detail {

struct AxisBranch {
  int sign;    // -1 or +1
  int region;  // 0: outer third, 1: middle third, 2: inner third
  ExprPtr rescale;
};

inline std::vector<AxisBranch> axis_branches(int var) {
  ExprPtr t = ex_var(var);
  auto affine = [&](Rational a, Rational b) { return ex_affine(b, {{a, t}}); };
  // Six intervals of [-1,1]; each rescale maps its interval onto [-1,1],
  // running outward from the center.
  return {
      {-1, 0, affine(Rational(-6), Rational(-5))},  // [-1, -2/3]
      {-1, 1, affine(Rational(-6), Rational(-3))},  // [-2/3, -1/3]
      {-1, 2, affine(Rational(-6), Rational(-1))},  // [-1/3, 0]
      {+1, 2, affine(Rational(6), Rational(-1))},   // [0, 1/3]
      {+1, 1, affine(Rational(6), Rational(-3))},   // [1/3, 2/3]
      {+1, 0, affine(Rational(6), Rational(-5))},   // [2/3, 1]
  };
}

// Selector over the six intervals of one axis, with strict guards so any
// seam evaluation compares the adjacent pieces.
inline ExprPtr axis_select(int var, const std::array<ExprPtr, 6>& leaves) {
  ExprPtr t = ex_var(var);
  ExprPtr third = ex_const(Rational(1, 3));
  ExprPtr two_thirds = ex_const(Rational(2, 3));
  ExprPtr neg = ex_cond(ex_sub(ex_neg(t), two_thirds),
                        ex_cond(ex_sub(ex_neg(t), third), leaves[2], leaves[1]), leaves[0]);
  ExprPtr pos = ex_cond(ex_sub(t, two_thirds),
                        ex_cond(ex_sub(t, third), leaves[3], leaves[4]), leaves[5]);
  return ex_cond(t, neg, pos);
}

inline ParamCube cond_combine_axis(int var, const std::array<ParamCube, 6>& parts) {
  ParamCube out;
  out.arity = parts[0].arity;
  out.dim = parts[0].dim;
  out.output = parts[0].output;
  for (const auto& [label, box] : parts[0].boxes) {
    ExprBox combined(box.size());
    for (size_t coord = 0; coord < box.size(); ++coord) {
      for (int side = 0; side < 2; ++side) {
        std::array<ExprPtr, 6> leaves;
        for (int b = 0; b < 6; ++b) {
          const auto& pb = parts[static_cast<size_t>(b)].boxes.at(label);
          leaves[static_cast<size_t>(b)] = side ? pb[coord].second : pb[coord].first;
        }
        bool all_same = true;
        for (int b = 1; b < 6; ++b) {
          all_same = all_same && ex_identical(leaves[0], leaves[static_cast<size_t>(b)]);
        }
        ExprPtr merged = all_same ? leaves[0] : axis_select(var, leaves);
        (side ? combined[coord].second : combined[coord].first) = merged;
      }
    }
    out.boxes.emplace(label, std::move(combined));
  }
  return out;
}

}  // namespace detail

// The straightened cycle as a single n-cube: on each sub-box of the thirds
// lattice it is the matching piece with its parameters rescaled, and the
// piecewise selectors double-evaluate on every seam.
inline ParamCube glued_eta_plus_cube(int n) {
  std::vector<std::vector<detail::AxisBranch>> branches;
  for (int i = 0; i < n; ++i) branches.push_back(detail::axis_branches(i));
  std::function<ParamCube(int, std::vector<int>&)> rec = [&](int axis,
                                                             std::vector<int>& chosen) -> ParamCube {
    if (axis == n) {
      EtaPieceKey key;
      key.n = n;
      std::vector<int> signs;
      std::vector<ExprPtr> assignment;
      for (int i = 0; i < n; ++i) {
        const auto& b = branches[static_cast<size_t>(i)][static_cast<size_t>(chosen[static_cast<size_t>(i)])];
        signs.push_back(b.sign);
        assignment.push_back(b.rescale);
        if (b.region == 2) key.S.push_back(i + 1);
        if (b.region == 0) key.T.push_back(i + 1);
      }
      key.star = SignString::over(axis_range(n), signs);
      return reparam(eta_piece(key), assignment, n);
    }
    std::array<ParamCube, 6> parts;
    for (int b = 0; b < 6; ++b) {
      chosen.push_back(b);
      parts[static_cast<size_t>(b)] = rec(axis + 1, chosen);
      chosen.pop_back();
    }
    return detail::cond_combine_axis(axis, parts);
  };
  std::vector<int> chosen;
  return rec(0, chosen);
}

// Point evaluation through a named piece, for explicit seam double-checks.
inline Configuration eta_piece_value(const EtaPieceKey& key, const ParamPoint& rescaled) {
  return instantiate(eta_piece(key), rescaled);
}

inline Chain eta_glued_chain(int n, const ParamCube& glued) {
  return eta_symmetrize(n, chain_of(glued));
}

// --- the pointwise composite alpha(ell, mu) ---------------------------------

inline ParamCube alpha_ell_mu_cube(int n) {
  ParamCube outer = constant_cube(alpha_config(n), n);
  ParamCube mu = constant_cube(mu_config(n), n);
  return pointwise_compose(outer, {{Label::closed(1), ell_plus_cube(n)},
                                   {Label::open(SignString::empty()), mu}});
}

inline Chain alpha_ell_mu_chain(int n) {
  Chain outer = chain_of(constant_cube(alpha_config(n), n));
  Chain mu = chain_of(constant_cube(mu_config(n), n));
  Chain ell = ell_chain(n);
  return compose_chains(outer, {{Label::closed(1), ell}, {Label::open(SignString::empty()), mu}});
}

// --- the homotopy cube --------------------------------------------------------

// The (n+1)-parameter cube interpolating between the straightened cycle and
// alpha(ell_plus, mu). Closed boxes: endpointwise convex combination with
// weights (min(1,1-u), max(0,u)). Open boxes: the orthant factors stay fixed
// and only the first coordinate interpolates, with width
// max(-u,0) * (glued open width) + (u+1)/4.
inline ParamCube gamma_plus_cube(int n, const ParamCube& glued) {
  ParamCube eta_wide = reparam(glued, [&] {
    std::vector<ExprPtr> a;
    for (int i = 0; i < n; ++i) a.push_back(ex_var(i));
    return a;
  }(), n + 1);
  ParamCube almu_wide = reparam(alpha_ell_mu_cube(n), [&] {
    std::vector<ExprPtr> a;
    for (int i = 0; i < n; ++i) a.push_back(ex_var(i));
    return a;
  }(), n + 1);
  ExprPtr u = ex_var(n);
  ExprPtr w_eta = ex_min({ex_const(1), ex_shift(ex_neg(u), Rational(1))});
  ExprPtr w_almu = ex_max({ex_const(0), u});
  ExprPtr w_open = ex_max({ex_neg(u), ex_const(0)});
  ExprPtr open_pad = ex_affine(Rational(1, 4), {{Rational(1, 4), u}});
  ParamCube out;
  out.arity = n + 1;
  out.dim = n;
  out.output = Color::Open;
  for (const auto& [label, eta_box] : eta_wide.boxes) {
    const ExprBox& almu_box = almu_wide.boxes.at(label);
    ExprBox box(eta_box.size());
    if (label.color == Color::Closed) {
      for (size_t coord = 0; coord < eta_box.size(); ++coord) {
        box[coord] = {ex_add(ex_mul(w_eta, eta_box[coord].first),
                             ex_mul(w_almu, almu_box[coord].first)),
                      ex_add(ex_mul(w_eta, eta_box[coord].second),
                             ex_mul(w_almu, almu_box[coord].second))};
      }
    } else {
      box[0] = {ex_const(0), ex_add(ex_mul(w_open, eta_box[0].second), open_pad)};
      for (size_t coord = 1; coord < eta_box.size(); ++coord) {
        auto [lo, hi] = orthant_interval(label.signs.sign_at(static_cast<int>(coord)));
        box[coord] = {ex_const(lo), ex_const(hi)};
      }
    }
    out.boxes.emplace(label, std::move(box));
  }
  return out;
}

inline Chain gamma_chain(int n, const ParamCube& gamma_plus) {
  return eta_symmetrize(n, chain_of(gamma_plus));
}

}  // namespace scv
