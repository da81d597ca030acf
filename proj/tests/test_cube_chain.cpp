#include <doctest.h>

#include "test_helpers.hpp"

using namespace scv;
using namespace scv::testing;

namespace {

ParamCube beta1(int sign) { return beta_cube(1, SignString::over({1}, {sign})); }

Configuration alpha_mu() { return compose(alpha_config(1), o(), mu_config(1)); }

Configuration mu_alpha(int sign) {
  return compose(mu_config(1), open_full(1, {sign}), alpha_config(1));
}

}  // namespace

TEST_CASE("instantiation matches the closed formulas") {
  // the positive push at t=-1 is the action composed with the product
  CHECK(instantiate(beta1(+1), pt({q(-1)})) == alpha_mu());
  CHECK(instantiate(beta1(-1), pt({q(-1)})) == alpha_mu());
  // and at t=1 it is the product composed with the action
  CHECK(instantiate(beta1(+1), pt({q(1)})) == mu_alpha(+1));
  CHECK(instantiate(beta1(-1), pt({q(1)})) == mu_alpha(-1));

  Configuration loop0 = instantiate(ell_plus_cube(1), pt({q(0)}));
  CHECK(loop0.boxes.at(c(1)) == box({{q(1, 4), q(3, 4)}, {q(-1, 4), q(1, 4)}}));
  CHECK(loop0.boxes.at(c(2)) == box({{q(-3, 4), q(-1, 4)}, {q(-1, 4), q(1, 4)}}));

  Configuration b2 = instantiate(beta_cube(2, signs_full(2, {+1, +1})), pt({q(0), q(0)}));
  CHECK(b2.boxes.at(c(1)) == box({{q(1, 2), q(1)}, {q(0), q(1)}, {q(0), q(1)}}));
  for (const auto& star : all_sign_strings(axis_range(2))) {
    const Box& b = b2.boxes.at(Label::open(star));
    CHECK(b[0] == std::pair{q(0), q(1, 2)});
    CHECK(b[1] == orthant_interval(star.sign_at(1)));
    CHECK(b[2] == orthant_interval(star.sign_at(2)));
  }
}

TEST_CASE("faces specialize a parameter and renumber the rest") {
  ParamCube b = beta1(+1);
  ParamCube lo = face(b, 1, -1);
  CHECK(lo.arity == 0);
  CHECK(instantiate(lo, {}) == alpha_mu());
  CHECK(instantiate(face(b, 1, +1), {}) == mu_alpha(+1));
  CHECK_THROWS_AS(face(b, 2, -1), IndexOutOfRange);
}

TEST_CASE("cubical identities for degeneracies and connections") {
  ParamCube sigma = beta1(+1);
  // face of the inserted slot recovers the cube
  CHECK(cube_equal(face(degenerate_at(sigma, 1), 1, -1), sigma).equal);
  CHECK(cube_equal(face(degenerate_at(sigma, 2), 2, +1), sigma).equal);
  // d_j^- Gamma_j = id (both j and j+1)
  ParamCube conn = connection_at(sigma, 1);
  CHECK(cube_equal(face(conn, 1, -1), sigma).equal);
  CHECK(cube_equal(face(conn, 2, -1), sigma).equal);
  // d_j^+ Gamma_j = s_j d_j^+
  CHECK(cube_equal(face(conn, 1, +1), degenerate_at(face(sigma, 1, +1), 1)).equal);
  CHECK(cube_equal(face(conn, 2, +1), degenerate_at(face(sigma, 1, +1), 1)).equal);
  // Gamma_j s_j = s_j s_j
  ParamCube thin = degenerate_at(sigma, 1);
  CHECK(cube_equal(connection_at(thin, 1), degenerate_at(thin, 1)).equal);
  CHECK(cube_equal(connection_at(thin, 1), degenerate_at(degenerate_at(sigma, 1), 2)).equal);
}

TEST_CASE("reparametrizations implement the stated maps") {
  // the min/max reparametrization example: images of the four coordinates
  auto assignment = phi_assignment({1}, {2, 4}, 4);
  // coordinates kept are axes 1, 3
  REQUIRE(assignment.size() == 2);
  ParamPoint p = pt({q(1, 3), q(1, 2), q(-1, 5), q(-3, 4)});
  Rational thresh = -rat_max(p[1], p[3]);  // -max(t2, t4)
  CHECK(pl_eval(assignment[0], p) == rat_min(p[0], thresh));
  CHECK(pl_eval(assignment[1], p) == rat_max(p[2], thresh));

  // a constant cube stays constant with raised arity
  ParamCube constant = constant_cube(alpha_mu(), 0);
  ParamCube lifted = phi_reparam(constant, {}, {1, 2}, 2);
  CHECK(lifted.arity == 2);
  CHECK(instantiate(lifted, pt({q(1, 3), q(-2, 7)})) == alpha_mu());

  // the min-with-a-new-last-parameter map
  ParamCube b = beta1(+1);
  ParamCube psi = psi_reparam(b);
  CHECK(psi.arity == 2);
  for (const auto& point : sample_grid(2, 3)) {
    CHECK(instantiate(psi, point) == instantiate(b, {rat_min(point[0], point[1])}));
  }
  // restriction at the new parameter = 1 recovers the cube; at -1 it is thin
  CHECK(cube_equal(face(psi, 2, +1), b).equal);
  CHECK(chain_term_degenerate(face(psi, 2, -1)));

  // the antipode is an involution
  CHECK(cube_equal(antipode(antipode(b)), b).equal);
}

TEST_CASE("semantic cube equality distinguishes the pushes") {
  CHECK(cube_equal(beta1(+1), beta1(+1)).equal);
  auto lo = cube_equal(face(beta1(+1), 1, -1), face(beta1(-1), 1, -1));
  CHECK(lo.equal);
  CHECK(lo.exact);
  auto hi = cube_equal(face(beta1(+1), 1, +1), face(beta1(-1), 1, +1));
  CHECK(!hi.equal);
}

TEST_CASE("degeneracy detection") {
  ParamCube constant = constant_cube(alpha_mu(), 1);
  CHECK(chain_term_degenerate(constant));
  CHECK(is_degenerate(constant));
  CHECK(!chain_term_degenerate(beta1(+1)));
  CHECK(!is_degenerate(beta1(+1)));
  // a piece whose support is present syntactically but constant semantically
  ParamCube masked = constant;
  masked.boxes[c(1)][0].first =
      ex_add(ex_sub(ex_min({ex_var(0), ex_const(0)}), ex_min({ex_var(0), ex_const(0)})),
             ex_const(q(1, 2)));
  CHECK(chain_term_degenerate(masked));
}

TEST_CASE("the boundary of a push is its two endpoint composites") {
  Chain b = chain_of(beta1(+1));
  Chain d = boundary(b);
  // d = -(d^- - d^+): one negative term at alpha o mu, one positive at mu o alpha
  REQUIRE(d.terms.size() == 2);
  Chain expected = chain_add(chain_of(constant_cube(alpha_mu(), 0), q(-1)),
                             chain_of(constant_cube(mu_alpha(+1), 0)));
  CHECK(chain_equal(d, expected).equal);
  CHECK(boundary(chain_of(constant_cube(alpha_mu(), 1))).is_zero());
}

TEST_CASE("linear groupoid composition") {
  // two pushes glued along their shared face via a - s x + b
  ParamCube left = beta1(+1);
  ParamCube right = reparam(left, {ex_neg(ex_var(0))}, 1);  // reversed copy
  // d_1^+ left = mu o_+ alpha = d_1^- right? the reversed copy starts there
  Chain glued = groupoid_add(left, right, 1);
  CHECK(glued.terms.size() == 3);
  // boundary in direction 1: d^- = d^- left, d^+ = d^+ right
  Chain d = boundary(glued);
  Chain expected = chain_add(chain_of(constant_cube(alpha_mu(), 0), q(-1)),
                             chain_of(constant_cube(alpha_mu(), 0)));
  CHECK(chain_equal(d, expected).equal);
  CHECK(boundary(d.arity >= 1 ? d : glued).is_zero());
  // composing with the degeneracy of its own face changes nothing after
  // normalization
  ParamCube thin = degenerate_at(face(left, 1, +1), 1);
  Chain same = groupoid_add(left, thin, 1);
  CHECK(chain_equal(same, chain_of(left)).equal);
  CHECK_THROWS_AS(groupoid_add(left, left, 1), FaceMismatch);
}

TEST_CASE("pointwise composition agrees with pointwise instantiation") {
  ParamCube outer = beta1(-1);
  ParamCube inner = constant_cube(alpha_config(1), 1);
  ParamCube composite = pointwise_compose(outer, {{open_full(1, {+1}), inner}});
  for (const auto& point : sample_grid(1, 6)) {
    Configuration direct =
        compose(instantiate(outer, point), open_full(1, {+1}), instantiate(inner, point));
    CHECK(instantiate(composite, point) == direct);
  }
  // two constant factors give the constant composite
  ParamCube const_outer = constant_cube(mu_config(1), 0);
  ParamCube const_inner = constant_cube(alpha_config(1), 0);
  ParamCube const_comp = pointwise_compose(const_outer, {{open_full(1, {-1}), const_inner}});
  CHECK(instantiate(const_comp, {}) == mu_alpha(-1));
}

TEST_CASE("shared-parameter composition is bilinear and associative") {
  Chain alpha_path = chain_of(degenerate_at(constant_cube(alpha_config(1), 0), 1));
  Chain mu_path = chain_of(degenerate_at(constant_cube(mu_config(1), 0), 1));
  Chain zero = chain_zero(1, 1, Color::Open);

  // zero factors absorb
  CHECK(delta_compose(alpha_path, {{o(), zero}}).is_zero());
  CHECK(delta_compose(zero, {{o(), mu_path}}).is_zero());

  // x(y) with both factors constant in the shared parameter is degenerate
  Chain constant_pair = delta_compose(alpha_path, {{o(), mu_path}});
  CHECK(chain_equal(constant_pair, chain_zero(1, 1, Color::Open)).equal);

  // associativity of nesting, on factors over disjoint axis sets
  Chain x = chain_of(beta_S_cube(2, {1}, SignString::over({1}, {+1})));
  Chain y = chain_of(beta_S_cube(2, {2}, SignString::over({2}, {-1})));
  Chain z = chain_of(degenerate_at(constant_cube(alpha_config(2), 0), 1));
  Label slot_x = open_on({1}, {+1});
  Label slot_y = open_on({2}, {+1});
  Label slot_xy = open_on({1, 2}, {+1, +1});
  Chain inner_first = delta_compose(x, {{slot_x, delta_compose(y, {{slot_y, z}})}});
  Chain outer_first = delta_compose(delta_compose(x, {{slot_x, y}}), {{slot_xy, z}});
  CHECK(chain_equal(inner_first, outer_first).equal);
}

TEST_CASE("boundary commutes with the closed-label swap") {
  Chain two = chain_add(chain_of(ell_plus_cube(1)), chain_of(beta1(+1), q(0)));
  Chain lhs = boundary(swap_closed_chain(chain_of(ell_plus_cube(1))));
  Chain rhs = swap_closed_chain(boundary(chain_of(ell_plus_cube(1))));
  CHECK(chain_equal(lhs, rhs).equal);
  CHECK(two.terms.size() == 1);  // zero-coefficient terms are dropped
}
