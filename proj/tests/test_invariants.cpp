#include <doctest.h>

#include "test_helpers.hpp"

using namespace scv;
using namespace scv::testing;

TEST_CASE("projection embedding commutes with faces outside the axis set") {
  // a cube over axes {1,3} inside a 3-parameter cube is blind to axis 2
  ParamCube small = beta_cube(2, signs_full(2, {+1, -1}));
  ParamCube embedded = projection_embed(small, {1, 3}, 3);
  CHECK(embedded.arity == 3);
  for (int sign : {-1, +1}) {
    // restricting the unused axis gives the same embedded cube over axes {1,2}
    ParamCube restricted = face(embedded, 2, sign);
    CHECK(cube_equal(restricted, projection_embed(small, {1, 2}, 2)).equal);
  }
  // restricting a used axis matches the face of the original
  ParamCube used = face(embedded, 1, +1);
  CHECK(cube_equal(used, projection_embed(face(small, 1, +1), {2}, 2)).equal);
}

TEST_CASE("shared-parameter composition with genuinely moving blocks") {
  // outer block of one parameter, inner of one parameter, one shared
  Chain x = chain_of(psi_reparam(beta_S_cube(2, {1}, SignString::over({1}, {+1}))));
  Chain y = chain_of(psi_reparam(beta_S_cube(2, {2}, SignString::over({2}, {-1}))));
  Chain z = chain_of(degenerate_at(constant_cube(alpha_config(2), 0), 1));
  Label slot_x = open_on({1}, {+1});
  Label slot_y = open_on({2}, {+1});
  Label slot_xy = open_on({1, 2}, {+1, +1});
  Chain inner_first = delta_compose(x, {{slot_x, delta_compose(y, {{slot_y, z}})}});
  Chain outer_first = delta_compose(delta_compose(x, {{slot_x, y}}), {{slot_xy, z}});
  CHECK(inner_first.arity == 3);
  CHECK(chain_equal(inner_first, outer_first).equal);
  // pointwise coherence: the composite at a point is the composite of values
  for (const auto& t : sample_grid(3, 2)) {
    Configuration direct = instantiate(inner_first.terms[0].cube, t);
    ParamPoint tx = {t[0], t[2]};
    ParamPoint ty = {t[1], t[2]};
    Configuration expected =
        compose(compose(instantiate(x.terms[0].cube, tx), slot_x, instantiate(y.terms[0].cube, ty)),
                slot_xy, instantiate(z.terms[0].cube, {t[2]}));
    CHECK(direct == expected);
  }
}

TEST_CASE("the boundary squares to zero on the homotopy chains") {
  ParamCube glued1 = glued_eta_plus_cube(1);
  Chain gamma1 = gamma_chain(1, gamma_plus_cube(1, glued1));
  CHECK(boundary(boundary(gamma1)).is_zero());
  CHECK(boundary(boundary(eta_chain(2))).is_zero());
  ParamCube glued2 = glued_eta_plus_cube(2);
  Chain gamma2_plus = chain_of(gamma_plus_cube(2, glued2));
  CHECK(boundary(boundary(gamma2_plus)).is_zero());
}

TEST_CASE("groupoid concatenation of the four paths gives the cycle") {
  // the four sides of the half loop, oriented head to tail
  ParamCube alpha1 = constant_cube(alpha_config(1), 1);
  ParamCube beta_p = beta_cube(1, signs_full(1, {+1}));
  ParamCube beta_m = beta_cube(1, signs_full(1, {-1}));
  ParamCube down_left = antipode(pointwise_compose(beta_p, {{open_full(1, {-1}), alpha1}}));
  ParamCube across_low = antipode(pointwise_compose(alpha1, {{o(), beta_m}}));
  ParamCube across_high = pointwise_compose(alpha1, {{o(), beta_p}});
  ParamCube up_right = pointwise_compose(beta_m, {{open_full(1, {+1}), alpha1}});

  Chain walk = groupoid_add(down_left.arity ? down_left : down_left, across_low, 1);
  // extend the walk one path at a time; faces must chain up exactly
  auto extend = [](const Chain& prefix, const ParamCube& next) {
    Chain result = prefix;
    const ParamCube& last = result.terms.back().cube;
    Chain glue = groupoid_add(last, next, 1);
    // replace the trailing cube with the glued triple
    result.terms.pop_back();
    for (const auto& term : glue.terms) result.terms.push_back(term);
    return result;
  };
  walk = extend(walk, across_high);
  walk = extend(walk, up_right);

  // boundary: from the start of the walk to its end
  Chain d = boundary(walk);
  Chain expected_d = boundary(merge_terms(drop_degenerate(eta_plus_chain(1))));
  CHECK(chain_equal(d, expected_d).equal);
  // and the walk itself is the straightened cycle up to orientation of the
  // reversed segments
  Chain residue = merge_terms_mod_reflection(
      drop_degenerate(chain_sub(walk, merge_terms(drop_degenerate(eta_plus_chain(1))))));
  CHECK(residue.is_zero());
}

TEST_CASE("antipode is an involution and projections commute with it") {
  ParamCube b = beta_cube(2, signs_full(2, {-1, +1}));
  CHECK(cube_equal(antipode(antipode(b)), b).equal);
  CHECK(cube_equal(antipode(antipode(b, {1}), {1}), b).equal);
}

TEST_CASE("degeneracy detection flags the constant piece keys") {
  // pieces whose outer set covers everything are constant in every direction
  for (int s : {-1, +1}) {
    ParamCube piece = eta_piece({1, SignString::over({1}, {s}), {}, {1}});
    CHECK(chain_term_degenerate(piece));
    CHECK(is_degenerate(piece));
  }
}
