#include <doctest.h>

#include "scv/pl_equal.hpp"
#include "scv/plexpr.hpp"

using namespace scv;

namespace {

ExprPtr t(int i) { return ex_var(i); }

ParamPoint pt(std::initializer_list<Rational> xs) { return ParamPoint(xs); }

}  // namespace

TEST_CASE("evaluation of min, max, abs, affine") {
  // min(0, t) at -1 is -1
  ExprPtr sigma_plus = ex_min({ex_const(0), t(0)});
  CHECK(pl_eval(sigma_plus, pt({Rational(-1)})) == Rational(-1));
  CHECK(pl_eval(sigma_plus, pt({Rational(1, 2)})) == Rational(0));

  // max over a singleton constant
  CHECK(pl_eval(ex_max({ex_const(Rational(1, 2))}), {}) == Rational(1, 2));

  // max(1/2, (1+t1)/2, (1+t2)/2) at (1, -1) is 1
  ExprPtr tau = ex_max({ex_const(Rational(1, 2)),
                        ex_affine(Rational(1, 2), {{Rational(1, 2), t(0)}}),
                        ex_affine(Rational(1, 2), {{Rational(1, 2), t(1)}})});
  CHECK(pl_eval(tau, pt({Rational(1), Rational(-1)})) == Rational(1));

  CHECK(pl_eval(ex_abs(ex_affine(Rational(0), {{Rational(2), t(0)}})),
                pt({Rational(-1, 3)})) == Rational(2, 3));
  CHECK_THROWS_AS(pl_eval(t(1), pt({Rational(0)})), IndexOutOfRange);
}

TEST_CASE("substitution composes") {
  ExprPtr sigma_plus = ex_min({ex_const(0), t(0)});
  // t1 -> -1 makes the expression constantly -1
  ExprPtr faced = pl_substitute(sigma_plus, {ex_const(-1)});
  CHECK(faced->kind == ExprKind::Const);
  CHECK(faced->value == Rational(-1));

  // t1 -> max(t1, t2) inside a bare variable
  ExprPtr conn = pl_substitute(t(0), {ex_max({t(0), t(1)})});
  CHECK(pl_eval(conn, pt({Rational(1, 3), Rational(2, 3)})) == Rational(2, 3));

  // antipode through an affine: (1+t)/2 becomes (1-t)/2
  ExprPtr aff = ex_affine(Rational(1, 2), {{Rational(1, 2), t(0)}});
  ExprPtr flipped = pl_substitute(aff, {ex_neg(t(0))});
  CHECK(pl_eval(flipped, pt({Rational(1)})) == Rational(0));
  CHECK(pl_eval(flipped, pt({Rational(-1)})) == Rational(1));

  // substitution law: eval(subst(e, a), t) = eval(e, eval(a, t))
  ExprPtr e = ex_max({ex_abs(t(0)), ex_min({t(1), ex_const(Rational(1, 4))})});
  std::vector<ExprPtr> assign = {ex_min({t(0), t(1)}), ex_neg(t(0))};
  ExprPtr composed = pl_substitute(e, assign);
  for (const auto& p : sample_grid(2, 3)) {
    ParamPoint inner = {pl_eval(assign[0], p), pl_eval(assign[1], p)};
    CHECK(pl_eval(composed, p) == pl_eval(e, inner));
  }
}

TEST_CASE("piecewise expressions evaluate with seam checking") {
  // |t| built as a piecewise selection
  ExprPtr abs_t = ex_cond(t(0), ex_neg(t(0)), t(0));
  CHECK(pl_eval(abs_t, pt({Rational(-1, 2)})) == Rational(1, 2));
  CHECK(pl_eval(abs_t, pt({Rational(1, 2)})) == Rational(1, 2));
  CHECK(pl_eval(abs_t, pt({Rational(0)})) == Rational(0));

  // discontinuous selection must be detected at the seam
  ExprPtr broken = ex_cond(t(0), ex_const(0), ex_const(1));
  CHECK_THROWS_AS(pl_eval(broken, pt({Rational(0)})), SeamMismatch);
  CHECK(pl_eval(broken, pt({Rational(1, 7)})) == Rational(1));
}

TEST_CASE("exact equality by axis-aligned subdivision") {
  // min(x,0) = (x - |x|)/2
  ExprPtr lhs = ex_min({t(0), ex_const(0)});
  ExprPtr rhs = ex_affine(Rational(0), {{Rational(1, 2), t(0)}, {Rational(-1, 2), ex_abs(t(0))}});
  EqReport eq = pl_equal_exact(lhs, rhs, 1);
  CHECK(eq.equal);
  CHECK(eq.exact);

  // tau with no minus entries reduces to the constant 1/2
  CHECK(pl_equal_exact(ex_max({ex_const(Rational(1, 2))}), ex_const(Rational(1, 2)), 1).equal);

  // inequality produces a witness
  EqReport neq = pl_equal_exact(ex_min({t(0), ex_const(0)}), t(0), 1);
  CHECK(!neq.equal);
  REQUIRE(neq.witness.has_value());
  ParamPoint w = *neq.witness;
  CHECK(!(pl_eval(lhs, w) == pl_eval(t(0), w)));

  // |t| as piecewise equals the abs node, exactly
  ExprPtr abs_t = ex_cond(t(0), ex_neg(t(0)), t(0));
  CHECK(pl_equal_exact(abs_t, ex_abs(t(0)), 1).equal);

  // product of expressions in disjoint variables is handled exactly
  ExprPtr prod1 = ex_mul(ex_max({t(0), ex_const(0)}), ex_shift(t(1), Rational(1)));
  ExprPtr prod2 = ex_mul(ex_shift(t(1), Rational(1)), ex_max({t(0), ex_const(0)}));
  CHECK(pl_equal_exact(prod1, prod2, 2).equal);
}

TEST_CASE("diagonal breakpoints make the exact strategy inapplicable") {
  ExprPtr diag = ex_max({t(0), t(1)});
  ExprPtr other = ex_max({t(1), t(0)});
  CHECK_THROWS_AS(pl_equal_exact(diag, other, 2), StrategyInapplicable);
  EqReport eq = pl_equal_auto(diag, other, 2);
  CHECK(eq.equal);
  // identical trees short-circuit, so force the sampled path:
  EqReport eq2 = pl_equal_sampled(diag, ex_neg(ex_min({ex_neg(t(0)), ex_neg(t(1))})), 2, {});
  CHECK(eq2.equal);
  CHECK(!eq2.exact);
  CHECK(eq2.points > 0);
}

TEST_CASE("sampled equality refutes with a witness point") {
  // max(t1, -max(t2, t3)) vs t1 fails, e.g. at (0, 1, 1) the values differ
  ExprPtr lhs = ex_max({t(0), ex_neg(ex_max({t(1), t(2)}))});
  EqReport eq = pl_equal_sampled(lhs, t(0), 3, Sampled{2, 50, 1});
  CHECK(!eq.equal);
  REQUIRE(eq.witness.has_value());
  CHECK(!(pl_eval(lhs, *eq.witness) == pl_eval(t(0), *eq.witness)));
}

TEST_CASE("exact and sampled strategies agree on axis-aligned pairs") {
  std::vector<std::pair<ExprPtr, ExprPtr>> pairs = {
      {ex_min({t(0), ex_const(0)}),
       ex_affine(Rational(0), {{Rational(1, 2), t(0)}, {Rational(-1, 2), ex_abs(t(0))}})},
      {ex_max({ex_const(Rational(1, 2)), ex_shift(ex_scale(Rational(1, 2), t(0)), Rational(1, 2))}),
       ex_max({ex_shift(ex_scale(Rational(1, 2), t(0)), Rational(1, 2)),
               ex_const(Rational(1, 2))})},
      {ex_abs(t(0)), ex_max({t(0), ex_neg(t(0))})},
      {ex_min({t(0), ex_const(Rational(1, 3))}), t(0)},
  };
  for (const auto& [a, b] : pairs) {
    EqReport exact = pl_equal_exact(a, b, 1);
    EqReport sampled = pl_equal_sampled(a, b, 1, Sampled{12, 100, 3});
    CHECK(exact.equal == sampled.equal);
  }
}

TEST_CASE("partition of unity for the homotopy weights") {
  // min(1, 1-t) + max(0, t) = 1 on [-1, 1]
  ExprPtr w1 = ex_min({ex_const(1), ex_shift(ex_neg(t(0)), Rational(1))});
  ExprPtr w2 = ex_max({ex_const(0), t(0)});
  CHECK(pl_equal_exact(ex_add(w1, w2), ex_const(1), 1).equal);
}

TEST_CASE("grid points are deterministic and hit thirds at denominator 12") {
  auto g = sample_grid(1, 2);
  REQUIRE(g.size() == 5);
  CHECK(g[0][0] == Rational(-1));
  CHECK(g[2][0] == Rational(0));
  CHECK(g[4][0] == Rational(1));
  auto g12 = sample_grid(1, 12);
  bool has_third = false, has_two_thirds = false;
  for (const auto& p : g12) {
    has_third |= p[0] == Rational(1, 3);
    has_two_thirds |= p[0] == Rational(-2, 3);
  }
  CHECK(has_third);
  CHECK(has_two_thirds);
  CHECK(sample_grid(2, 1).size() == 9);
}
