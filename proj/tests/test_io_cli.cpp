#include <doctest.h>

#include "scv/json_io.hpp"
#include "scv/svg.hpp"
#include "test_helpers.hpp"

using namespace scv;
using namespace scv::testing;

TEST_CASE("configuration serialization follows the documented schema") {
  Configuration cfg = instantiate(ell_plus_cube(1), pt({q(0)}));
  ordered_json j = config_to_json(cfg);
  CHECK(j["dim"] == 1);
  CHECK(j["output"] == "closed");
  CHECK(j["boxes"][0]["label"]["kind"] == "closed");
  CHECK(j["boxes"][0]["label"]["name"] == "c1");
  CHECK(j["boxes"][0]["intervals"][0][0] == "1/4");
  CHECK(j["boxes"][0]["intervals"][0][1] == "3/4");

  Configuration mu = mu_config(2);
  ordered_json jm = config_to_json(mu);
  CHECK(jm["boxes"][0]["label"]["kind"] == "open");
  CHECK(jm["boxes"][0]["label"]["signs"]["1"] == "-");
  CHECK(label_from_json(json::parse(jm["boxes"][0]["label"].dump())) ==
        Label::open(signs_full(2, {-1, -1})));

  // open labels over sparse axis sets keep their axis names
  Label sparse = Label::open(SignString::over({2, 5}, {+1, -1}));
  CHECK(label_from_json(json::parse(label_to_json(sparse).dump())) == sparse);
  CHECK(label_from_json(json::parse(label_to_json(Label::closed(12)).dump())) ==
        Label::closed(12));
}

TEST_CASE("chains round-trip through JSON") {
  for (const char* id : {"beta:n=1:star=+", "ell:n=2", "eta_plus:n=1", "gamma:n=1"}) {
    CAPTURE(id);
    Chain chain = resolve_chain(id);
    ordered_json j = chain_to_json(chain);
    Chain back = chain_from_json(json::parse(j.dump()));
    REQUIRE(back.terms.size() == chain.terms.size());
    for (size_t i = 0; i < chain.terms.size(); ++i) {
      CHECK(back.terms[i].coeff == chain.terms[i].coeff);
      CHECK(cube_equal(back.terms[i].cube, chain.terms[i].cube).equal);
    }
  }
}

TEST_CASE("expression trees with products and selections survive the round trip") {
  ExprPtr guard = ex_var(0);
  ExprPtr e = ex_cond(guard, ex_mul(ex_max({ex_var(1), ex_const(0)}), ex_neg(ex_var(0))),
                      ex_mul(ex_max({ex_var(1), ex_const(0)}), ex_var(0)));
  ExprPtr back = expr_from_json(json::parse(expr_to_json(e).dump()));
  CHECK(pl_equal_auto(e, back, 2).equal);
}

TEST_CASE("chain ids parse and resolve") {
  CHECK(resolve_chain("mu:n=2").terms.size() == 1);
  CHECK(resolve_chain("eta_plus:n=1").terms.size() == 6);
  CHECK(resolve_chain("ell:n=1").terms.size() == 2);
  Chain piece = resolve_chain("eta_piece:n=2:star=+-:S=1:T=2");
  CHECK(piece.arity == 2);
  CHECK_THROWS_AS(resolve_chain("nosuch:n=1"), UnknownChain);
  CHECK_THROWS_AS(resolve_chain("beta:n=2"), UnknownChain);        // star missing
  CHECK_THROWS_AS(resolve_chain("beta:n=2:star=+"), UnknownChain); // star too short
  // export example sizes: the three-fold product has eight open boxes
  CHECK(resolve_chain("mu:n=3").terms[0].cube.boxes.size() == 8);
}

TEST_CASE("SVG rendering uses six-decimal half-even geometry") {
  Configuration cfg = instantiate(ell_plus_cube(1), pt({q(1, 3)}));
  std::string svg = render_svg(cfg, 0, 1);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("url(#hatch)") == std::string::npos);  // closed output: no hatching
  Configuration alpha = alpha_config(1);
  std::string svg_open = render_svg(alpha, 0, 1);
  CHECK(svg_open.find("url(#hatch)") != std::string::npos);
  // coordinate of the box corner at x = 1/3: 20 + 400*(1/3+1)/2 = 286.666667
  Configuration shifted;
  shifted.dim = 1;
  shifted.output = Color::Closed;
  shifted.boxes.emplace(Label::closed(1), Box{{q(1, 3), q(1)}, {q(-1), q(1)}});
  std::string svg3 = render_svg(shifted, 0, 1);
  CHECK(svg3.find("286.666667") != std::string::npos);
  // frames tile one panel per term
  std::string frame = render_frame({{"a", cfg}, {"b", cfg}}, 0, 1, "two panels");
  CHECK(frame.find("translate(440,0)") != std::string::npos);
}

TEST_CASE("suite reports serialize deterministically") {
  CheckSpec spec;
  spec.seed = 7;
  auto reports = run_all(1, spec, {"beta-corners", "mu-closed-form"});
  std::string first = suite_to_json(reports, spec, 1, false).dump(2);
  auto reports2 = run_all(1, spec, {"beta-corners", "mu-closed-form"});
  std::string second = suite_to_json(reports2, spec, 1, false).dump(2);
  CHECK(first == second);
  CHECK(first.find("\"ms\"") == std::string::npos);
}
