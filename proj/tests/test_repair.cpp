#include <doctest.h>

#include "scv/repair.hpp"
#include "test_helpers.hpp"

using namespace scv;
using namespace scv::testing;

TEST_CASE("zero perturbations change nothing") {
  for (int n = 1; n <= 2; ++n) {
    CAPTURE(n);
    RepairKit kit(n, {});
    for (const auto& star : all_sign_strings(axis_range(n))) {
      Chain tilde = kit.beta_tilde(axis_range(n), star);
      CHECK(chain_equal(tilde, chain_of(beta_cube(n, star))).equal);
    }
    // proper subsets too
    if (n == 2) {
      SignString one_plus = SignString::over({2}, {+1});
      CHECK(chain_equal(kit.beta_tilde({2}, one_plus),
                        chain_of(beta_S_cube(2, {2}, one_plus)))
                .equal);
    }
    ParamCube glued = glued_eta_plus_cube(n);
    Chain gamma = gamma_chain(n, gamma_plus_cube(n, glued));
    CHECK(chain_equal(kit.gamma_tilde(glued), gamma).equal);
    // the repaired eta collapses to the plain one
    CHECK(chain_equal(kit.eta_tilde(), eta_chain(n)).equal);
  }
}

TEST_CASE("zero perturbations satisfy the boundary push identity") {
  for (int n = 1; n <= 2; ++n) {
    RepairKit kit(n, {});
    for (const auto& star : all_sign_strings(axis_range(n))) {
      CAPTURE(n);
      CAPTURE(star.to_string());
      Chain lhs = boundary(kit.beta_tilde(axis_range(n), star));
      Chain rhs = kit.push_rhs(axis_range(n), star);
      CHECK(chain_equal(lhs, rhs).equal);
    }
  }
}

TEST_CASE("the synthetic perturbation moves the action's boundary") {
  Chain path = synthetic_alpha_path(1);
  // every instantiation is valid
  for (const auto& t : sample_grid(1, 12)) {
    CHECK(validate(instantiate(path.terms[0].cube, t)).ok());
  }
  Chain d = boundary(path);
  REQUIRE(d.terms.size() == 2);
  RepairKit kit(1, {{}, path, {}});
  Chain star = kit.alpha_star();
  REQUIRE(star.terms.size() == 1);
  CHECK(instantiate(star.terms[0].cube, {}).boxes.at(c(1)) ==
        box({{q(1, 2), q(3, 4)}, {q(-1), q(1)}}));
}

TEST_CASE("boundary push identity with the synthetic perturbation") {
  RepairKit kit(1, {{}, synthetic_alpha_path(1), {}});
  for (int sign : {-1, +1}) {
    CAPTURE(sign);
    SignString star = SignString::over({1}, {sign});
    Chain tilde = kit.beta_tilde({1}, star);
    Chain lhs = boundary(tilde);
    Chain rhs = kit.push_rhs({1}, star);
    auto eq = chain_equal(lhs, rhs);
    CHECK(eq.equal);
  }
}

TEST_CASE("gamma shift identity with the synthetic perturbation") {
  int n = 1;
  RepairKit kit(n, {{}, synthetic_alpha_path(n), {}});
  ParamCube glued = glued_eta_plus_cube(n);
  Chain gamma = gamma_chain(n, gamma_plus_cube(n, glued));
  Chain gamma_tilde = kit.gamma_tilde(glued);
  Chain lhs = chain_sub(boundary(gamma_tilde), boundary(gamma));
  Chain rhs = chain_sub(chain_sub(kit.eta_tilde(), eta_chain(n)),
                        chain_sub(kit.alpha_ell_mu_star(), alpha_ell_mu_chain(n)));
  auto eq = chain_equal(lhs, rhs);
  CHECK(eq.equal);
  if (!eq.equal) MESSAGE(eq.detail);
}
