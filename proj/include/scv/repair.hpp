#pragma once

#include "scv/constructions.hpp"

namespace scv {

// Perturbations of the generating chains: each entry is a chain one degree
// above its base, with its own parameters first and the shared homotopy
// parameter last. A missing or zero entry means "unperturbed" and enters
// shared-parameter composites as the constant path at the base chain.
struct PerturbationData {
  std::map<AxisSet, Chain> mu_bar;  // arity 1, perturbing the widened product
  std::optional<Chain> alpha_bar;   // arity 1, perturbing the action
  std::optional<Chain> ell_bar;     // arity n+1, perturbing the loop cycle
};

inline Chain chain_degenerate_at(const Chain& c, int j) {
  Chain out = chain_zero(c.arity + 1, c.dim, c.output);
  for (const auto& term : c.terms) out.terms.push_back({term.coeff, degenerate_at(term.cube, j)});
  return out;
}

inline Chain chain_psi(const Chain& c) {
  Chain out = chain_zero(c.arity + 1, c.dim, c.output);
  for (const auto& term : c.terms) out.terms.push_back({term.coeff, psi_reparam(term.cube)});
  return out;
}

// Builds the repaired push chains and their homotopies by recursion on the
// axis set, together with the boundary identities they are required to
// satisfy. All shared-parameter composites treat unperturbed ingredients as
// constant paths, which normalization later removes.
class RepairKit {
 public:
  RepairKit(int n, PerturbationData data) : n_(n), data_(std::move(data)) {}

  int dim() const { return n_; }

  // --- perturbed 0-level ingredients ---------------------------------------

  Chain mu_star(const AxisSet& S) const {
    Chain base = chain_of(constant_cube(mu_S_config(n_, S), 0));
    auto it = data_.mu_bar.find(S);
    if (it == data_.mu_bar.end() || it->second.is_zero()) return base;
    return merge_terms(chain_add(base, boundary(it->second)));
  }

  Chain alpha_star() const {
    Chain base = chain_of(constant_cube(alpha_config(n_), 0));
    if (!data_.alpha_bar || data_.alpha_bar->is_zero()) return base;
    return merge_terms(chain_add(base, boundary(*data_.alpha_bar)));
  }

  Chain ell_star() const {
    Chain base = ell_chain(n_);
    if (!data_.ell_bar || data_.ell_bar->is_zero()) return base;
    return merge_terms(chain_add(base, boundary(*data_.ell_bar)));
  }

  // --- homotopy factors (arity = own + 1) -----------------------------------

  Chain mu_bar_factor(const AxisSet& S) const {
    auto it = data_.mu_bar.find(S);
    if (it != data_.mu_bar.end() && !it->second.is_zero()) return it->second;
    return chain_degenerate_at(chain_of(constant_cube(mu_S_config(n_, S), 0)), 1);
  }

  Chain alpha_bar_factor() const {
    if (data_.alpha_bar && !data_.alpha_bar->is_zero()) return *data_.alpha_bar;
    return chain_degenerate_at(chain_of(constant_cube(alpha_config(n_), 0)), 1);
  }

  Chain ell_bar_factor() const {
    if (data_.ell_bar && !data_.ell_bar->is_zero()) return *data_.ell_bar;
    return chain_degenerate_at(ell_chain(n_), n_ + 1);
  }

  // --- the repaired pushes ---------------------------------------------------

  // The two shared-parameter correction terms for one axis of the set, over
  // the positional layout [axes of S minus the axis, shared last].
  std::pair<Chain, Chain> correction_terms(const AxisSet& S, const SignString& star, int axis) {
    AxisSet rest = axis_minus(S, axis);
    SignString star_rest = star.restricted(rest);
    Chain breve_rest = beta_breve(rest, star_rest);
    std::vector<DeltaFactor> fills;
    for (const auto& prime : all_sign_strings(rest)) {
      fills.push_back({Label::open(prime), mu_bar_factor({axis})});
    }
    Chain term1 = delta_compose(breve_rest, fills);
    SignString at_axis = SignString::over({axis}, {star.sign_at(axis)});
    Chain term2 = delta_compose(
        mu_bar_factor({axis}),
        {DeltaFactor{Label::open(at_axis.negated()), mu_bar_factor(rest)},
         DeltaFactor{Label::open(at_axis), breve_rest}});
    return {std::move(term1), std::move(term2)};
  }

  // Reindexes a correction term from [rest..., shared] to the positional
  // layout of S, with the shared parameter standing at the repaired axis.
  Chain align_to_set(const Chain& term, const AxisSet& S, int axis) const {
    AxisSet rest = axis_minus(S, axis);
    std::vector<ExprPtr> assignment(static_cast<size_t>(term.arity));
    auto position_in = [&](int a) {
      return static_cast<int>(std::find(S.begin(), S.end(), a) - S.begin());
    };
    for (size_t p = 0; p < rest.size(); ++p) {
      assignment[p] = ex_var(position_in(rest[p]));
    }
    assignment[rest.size()] = ex_var(position_in(axis));
    return chain_reparam(term, assignment, static_cast<int>(S.size()));
  }

  // beta-tilde: the repaired push over S, with boundary pushed to the
  // perturbed composites.
  Chain beta_tilde(const AxisSet& S, const SignString& star) {
    auto key = cache_key(S, star);
    auto it = tilde_cache_.find(key);
    if (it != tilde_cache_.end()) return it->second;
    Chain total;
    if (S.empty()) {
      total = alpha_star();
    } else {
      total = chain_of(beta_S_cube(n_, S, star));
      for (size_t p = 0; p < S.size(); ++p) {
        Rational sign((p + 1) % 2 == 0 ? 1 : -1);
        auto [term1, term2] = correction_terms(S, star, S[p]);
        Chain correction = chain_sub(align_to_set(term1, S, S[p]), align_to_set(term2, S, S[p]));
        total = chain_add(total, chain_scale(sign, correction));
      }
      // Pass to the normalized-chain representative: thin correction terms
      // are zero as chains but would not stay thin under later composition.
      total = merge_terms(drop_degenerate(total));
    }
    tilde_cache_.emplace(key, total);
    return total;
  }

  // beta-breve: the homotopy from the push to its repaired version, switched
  // on by the shared final parameter through the min-coupling map.
  Chain beta_breve(const AxisSet& S, const SignString& star) {
    auto key = cache_key(S, star);
    auto it = breve_cache_.find(key);
    if (it != breve_cache_.end()) return it->second;
    Chain total;
    if (S.empty()) {
      total = alpha_bar_factor();
    } else {
      int k = static_cast<int>(S.size());
      total = chain_degenerate_at(chain_of(beta_S_cube(n_, S, star)), k + 1);
      for (size_t p = 0; p < S.size(); ++p) {
        Rational sign((p + 1) % 2 == 0 ? 1 : -1);
        auto [term1, term2] = correction_terms(S, star, S[p]);
        Chain correction = chain_sub(align_to_set(term1, S, S[p]), align_to_set(term2, S, S[p]));
        total = chain_add(total, chain_scale(sign, chain_psi(correction)));
      }
      total = merge_terms(total);
    }
    breve_cache_.emplace(key, total);
    return total;
  }

  // --- the repaired eta and gamma ---------------------------------------------

  BetaProvider tilde_beta_provider() {
    return [this](const AxisSet& S, const SignString& star) { return beta_tilde(S, star); };
  }

  MuProvider star_mu_provider() const {
    return [this](const AxisSet& S) { return mu_star(S); };
  }

  Chain eta_tilde_plus() {
    return eta_plus_assembly(n_, tilde_beta_provider(), star_mu_provider());
  }

  Chain eta_tilde() { return eta_symmetrize(n_, eta_tilde_plus()); }

  // One homotopy piece: the straightened piece with every ingredient replaced
  // by its homotopy factor, all sharing the final parameter.
  Chain eta_bar_piece(const EtaPieceKey& key) {
    const int total = n_ + 1;
    auto embed_factor = [&](const Chain& c, const AxisSet& own_axes) {
      std::vector<ExprPtr> assignment;
      for (int axis : own_axes) assignment.push_back(ex_var(axis - 1));
      assignment.push_back(ex_var(n_));
      return chain_reparam(c, assignment, total);
    };
    auto embed_shared_only = [&](const Chain& c) { return embed_factor(c, {}); };
    if (key.T.empty()) {
      AxisSet rest = axis_complement(key.S, n_);
      SignString star_rest = key.star.restricted(rest);
      Chain outer = embed_factor(beta_breve(rest, star_rest.negated()), rest);
      Chain mu_s = embed_shared_only(mu_bar_factor(key.S));
      std::vector<std::pair<Label, Chain>> slots;
      for (const auto& prime : all_sign_strings(rest)) {
        if (prime == star_rest) continue;
        slots.emplace_back(Label::open(prime), mu_s);
      }
      slots.emplace_back(Label::open(star_rest),
                         embed_factor(beta_breve(key.S, key.star.restricted(key.S)), key.S));
      return compose_chains(outer, slots);
    }
    SignString star_t = key.star.restricted(key.T);
    AxisSet keep = axis_complement(key.T, n_);
    AxisSet free = axis_complement(axis_union(key.S, key.T), n_);
    Chain outer = embed_shared_only(mu_bar_factor(key.T));
    Chain mu_keep = embed_shared_only(mu_bar_factor(keep));
    std::vector<std::pair<Label, Chain>> slots;
    for (const auto& prime : all_sign_strings(key.T)) {
      if (prime == star_t || prime == star_t.negated()) continue;
      slots.emplace_back(Label::open(prime), mu_keep);
    }
    Chain branch_low = embed_factor(beta_breve(free, key.star.restricted(free).negated()), free);
    Chain mu_s = embed_shared_only(mu_bar_factor(key.S));
    std::vector<std::pair<Label, Chain>> low_slots;
    for (const auto& prime : all_sign_strings(free)) {
      low_slots.emplace_back(Label::open(prime), mu_s);
    }
    branch_low = compose_chains(branch_low, low_slots);
    // the kept-axes homotopy factor enters through the min/max map on its own
    // parameters, with the shared parameter appended
    Chain breve_keep = beta_breve(keep, key.star.restricted(keep));
    std::vector<ExprPtr> assignment = phi_assignment(key.S, key.T, n_);
    assignment.push_back(ex_var(n_));
    Chain branch_high = chain_reparam(breve_keep, assignment, total);
    slots.emplace_back(Label::open(star_t.negated()), branch_low);
    slots.emplace_back(Label::open(star_t), branch_high);
    return compose_chains(outer, slots);
  }

  Chain eta_bar() {
    Chain sum = chain_zero(n_ + 1, n_, Color::Open);
    for (const auto& key : eta_piece_keys(n_)) {
      sum = chain_add(sum, chain_scale(Rational(key.star.sgn()), eta_bar_piece(key)));
    }
    return eta_symmetrize(n_, sum);
  }

  // alpha(ell, mu) with every ingredient replaced by its homotopy factor.
  Chain alpha_ell_mu_bar() {
    const int total = n_ + 1;
    std::vector<ExprPtr> shared_only = {ex_var(n_)};
    Chain outer = chain_reparam(alpha_bar_factor(), shared_only, total);
    std::vector<ExprPtr> identity;
    for (int i = 0; i <= n_; ++i) identity.push_back(ex_var(i));
    Chain ell = chain_reparam(ell_bar_factor(), identity, total);
    Chain mu = chain_reparam(mu_bar_factor(axis_range(n_)), shared_only, total);
    return compose_chains(outer, {{Label::closed(1), ell}, {Label::open(SignString::empty()), mu}});
  }

  Chain alpha_ell_mu_star() {
    Chain outer = detail::embed_to_arity(alpha_star(), {}, n_);
    Chain ell = ell_star();
    Chain mu = detail::embed_to_arity(mu_star(axis_range(n_)), {}, n_);
    return compose_chains(outer, {{Label::closed(1), ell}, {Label::open(SignString::empty()), mu}});
  }

  // gamma with the homotopy corrections attached. The corrections enter with
  // the sign matching d = sum (-1)^i (d_i^- - d_i^+) and homotopy parameters
  // running from the base at -1 to the repaired chain at +1: under these
  // conventions the shared-parameter face of a correction contributes
  // (base - repaired), so both corrections flip sign relative to a convention
  // where that face contributes (repaired - base).
  Chain gamma_tilde(const ParamCube& glued) {
    Chain base = gamma_chain(n_, gamma_plus_cube(n_, glued));
    return chain_add(base, chain_sub(alpha_ell_mu_bar(), eta_bar()));
  }

  // Right-hand side of the boundary identity for the repaired push: the
  // perturbed facet composites, with facet signs taken positionally in S.
  Chain push_rhs(const AxisSet& S, const SignString& star) {
    Chain rhs = chain_zero(static_cast<int>(S.size()) - 1, n_, Color::Open);
    int k = static_cast<int>(S.size());
    for (size_t p = 0; p < S.size(); ++p) {
      int axis = S[p];
      Rational sign((p + 1) % 2 == 0 ? 1 : -1);
      AxisSet rest = axis_minus(S, axis);
      SignString star_rest = star.restricted(rest);
      Chain tilde_rest = beta_tilde(rest, star_rest);
      // positional embedding: the rest axes occupy positions 1..k-1
      Chain low = tilde_rest;
      Chain mu_i = detail::embed_to_arity(mu_star({axis}), {}, k - 1);
      std::vector<std::pair<Label, Chain>> low_slots;
      for (const auto& prime : all_sign_strings(rest)) {
        low_slots.emplace_back(Label::open(prime), mu_i);
      }
      low = compose_chains(low, low_slots);
      SignString at_axis = SignString::over({axis}, {star.sign_at(axis)});
      Chain high = compose_chains(
          mu_i, {{Label::open(at_axis.negated()), detail::embed_to_arity(mu_star(rest), {}, k - 1)},
                 {Label::open(at_axis), tilde_rest}});
      rhs = chain_add(rhs, chain_scale(sign, chain_sub(low, high)));
      // cross-corrections between two repaired axes
      for (size_t pj = 0; pj < rest.size(); ++pj) {
        int other = rest[pj];
        Rational sign_j((pj + 1) % 2 == 0 ? 1 : -1);
        Chain block = cross_block(S, star, axis, other);
        rhs = chain_add(rhs, chain_scale(sign * sign_j, block));
      }
    }
    return rhs;
  }

 private:
  int n_;
  PerturbationData data_;
  std::map<std::string, Chain> tilde_cache_;
  std::map<std::string, Chain> breve_cache_;

  static std::string cache_key(const AxisSet& S, const SignString& star) {
    std::string key;
    for (int axis : S) key += std::to_string(axis) + ",";
    key += "|" + star.to_string();
    return key;
  }

  // The four-term correction exchanged between two repaired axes, as a chain
  // over the positional layout of S minus the first axis. All factors share
  // one final parameter; the homotopy of the second axis stands at its
  // position and the core axes keep theirs.
  Chain cross_block(const AxisSet& S, const SignString& star, int axis, int other) {
    AxisSet rest = axis_minus(S, axis);
    AxisSet core = axis_minus(rest, other);
    const int arity = static_cast<int>(rest.size());
    auto position_in_rest = [&](int a) {
      return static_cast<int>(std::find(rest.begin(), rest.end(), a) - rest.begin());
    };
    auto embed = [&](const Chain& c, const std::vector<int>& own_positions) {
      std::vector<ExprPtr> assignment;
      for (int pos : own_positions) assignment.push_back(ex_var(pos));
      assignment.push_back(ex_var(position_in_rest(other)));  // shared parameter
      return chain_reparam(c, assignment, arity);
    };
    std::vector<int> core_positions;
    for (int a : core) core_positions.push_back(position_in_rest(a));
    Chain breve_core = embed(beta_breve(core, star.restricted(core)), core_positions);
    Chain bar_axis = embed(mu_bar_factor({axis}), {});
    Chain bar_other = embed(mu_bar_factor({other}), {});
    Chain bar_core = embed(mu_bar_factor(core), {});
    Chain bar_rest = embed(mu_bar_factor(rest), {});
    SignString at_axis = SignString::over({axis}, {star.sign_at(axis)});
    SignString at_other = SignString::over({other}, {star.sign_at(other)});
    auto fill = [&](Chain base, const AxisSet& open_axes, const Chain& filler) {
      std::vector<std::pair<Label, Chain>> slots;
      for (const auto& prime : all_sign_strings(open_axes)) {
        slots.emplace_back(Label::open(prime), filler);
      }
      return compose_chains(base, slots);
    };
    Chain inner_push = fill(breve_core, core, bar_other);
    Chain inner_split = compose_chains(
        bar_other, {{Label::open(at_other.negated()), bar_core}, {Label::open(at_other), breve_core}});
    Chain t1 = fill(inner_push, rest, bar_axis);
    Chain t2 = fill(inner_split, rest, bar_axis);
    Chain t3 = compose_chains(
        bar_axis, {{Label::open(at_axis.negated()), bar_rest}, {Label::open(at_axis), inner_push}});
    Chain t4 = compose_chains(
        bar_axis, {{Label::open(at_axis.negated()), bar_rest}, {Label::open(at_axis), inner_split}});
    return chain_add(chain_sub(t1, t2), chain_sub(t4, t3));
  }
};

// The standard synthetic perturbation: a path shrinking the action's closed
// box, staying valid throughout, with initial face the action itself.
inline Chain synthetic_alpha_path(int n) {
  ParamCube cube;
  cube.arity = 1;
  cube.dim = n;
  cube.output = Color::Open;
  ExprBox closed(static_cast<size_t>(n) + 1, {ex_const(-1), ex_const(1)});
  ExprBox open = closed;
  closed[0] = {ex_const(Rational(1, 2)),
               ex_affine(Rational(7, 8), {{Rational(-1, 8), ex_var(0)}})};
  open[0] = {ex_const(0), ex_const(Rational(1, 2))};
  cube.boxes.emplace(Label::closed(1), std::move(closed));
  cube.boxes.emplace(Label::open(SignString::empty()), std::move(open));
  return chain_of(cube);
}

}  // namespace scv
