// Acceptance suite: runs every agreed criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <vector>

#include "scv/json_io.hpp"

using namespace scv;

namespace {

struct Outcome {
  int id;
  std::string description;
  bool pass = true;
  double seconds = 0;
  std::string detail;
};

std::vector<Outcome> outcomes;

template <typename Fn>
void criterion(int id, const std::string& description, double budget_seconds, Fn&& fn) {
  Outcome out;
  out.id = id;
  out.description = description;
  auto start = std::chrono::steady_clock::now();
  try {
    fn(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && out.seconds > budget_seconds) {
    out.pass = false;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("runtime ") +
                  std::to_string(out.seconds) + "s exceeds " + std::to_string(budget_seconds) +
                  "s";
  }
  std::printf("criterion %d: %s (%.2fs) - %s%s%s\n", id, out.pass ? "PASS" : "FAIL", out.seconds,
              description.c_str(), out.detail.empty() ? "" : " | ", out.detail.c_str());
  std::fflush(stdout);
  outcomes.push_back(std::move(out));
}

void require(Outcome& out, bool condition, const std::string& what) {
  if (!condition) {
    out.pass = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += what;
  }
}

CheckReport run_one(const std::string& name, int n, int random_count = 200,
                    bool long_running = false, const Corpus& corpus = Corpus()) {
  CheckSpec spec;
  spec.name = name;
  spec.n = n;
  spec.random_count = random_count;
  spec.long_running = long_running;
  return run_check(spec, corpus);
}

void expect_pass(Outcome& out, const CheckReport& report, bool must_be_exact = false) {
  std::string tag = report.name + "@n=" + std::to_string(report.n);
  require(out, report.passed(),
          tag + " " + report.status +
              (report.witnesses.empty() ? "" : " [" + report.witnesses.front() + "]"));
  if (must_be_exact) require(out, report.exact, tag + " was not decided exactly");
}

}  // namespace

int main() {
  criterion(1, "full dimension-1 suite, exact where subdivision applies", 5.0, [](Outcome& out) {
    expect_pass(out, run_one("beta-corners", 1), true);
    expect_pass(out, run_one("eta-closed", 1), true);
    expect_pass(out, run_one("gamma-faces", 1), true);
    expect_pass(out, run_one("gamma-separation", 1));
    expect_pass(out, run_one("ell-cycle", 1), true);
    expect_pass(out, run_one("validity-all", 1));
  });

  criterion(2, "dimension-2 suite with exact facet cancellation", 60.0, [](Outcome& out) {
    expect_pass(out, run_one("beta-facets", 2), true);
    CheckReport matching = run_one("eta-facet-matching", 2);
    expect_pass(out, matching);
    require(out, eta_piece_keys(2).size() == 36, "key enumeration is not 36");
    expect_pass(out, run_one("eta-closed", 2), true);
    expect_pass(out, run_one("eta-glued-continuity", 2));
    expect_pass(out, run_one("gamma-faces", 2));
    expect_pass(out, run_one("gamma-separation", 2));
  });

  criterion(3, "dimension-3 long suite: closedness and facet matching", 900.0, [](Outcome& out) {
    require(out, eta_piece_keys(3).size() == 216, "key enumeration is not 216");
    expect_pass(out, run_one("eta-closed", 3, 200, true));
    expect_pass(out, run_one("eta-facet-matching", 3, 200, true));
  });

  criterion(4, "inductive product equals the orthant formula through n=4", 30.0,
            [](Outcome& out) {
              for (int n = 1; n <= 4; ++n) {
                expect_pass(out, run_one("mu-closed-form", n, 0, true), true);
              }
            });

  criterion(5, "operad axioms on 1000 seeded triples and the widening morphisms", 120.0,
            [](Outcome& out) {
              for (int n = 1; n <= 3; ++n) {
                expect_pass(out, run_one("operad-axioms", n, 1000, true), true);
                expect_pass(out, run_one("iota-morphism", n, 200, true), true);
              }
            });

  criterion(6, "repair chains: zero perturbations exact, synthetic identities on grids", 120.0,
            [](Outcome& out) {
              expect_pass(out, run_one("repair-n1", 1));
              expect_pass(out, run_one("repair-n1", 2));
            });

  criterion(7, "ten documented endpoint mutations each trip a check with a witness", 120.0,
            [](Outcome& out) {
              std::vector<Mutation> mutations = {
                  {"beta:n=1:star=+", "c1", 1, true, Rational(1, 4), false},
                  {"beta:n=1:star=-", "+", 0, true, Rational(2), true},
                  {"ell_plus:n=1", "c1", 0, false, Rational(1, 8), false},
                  {"ell_plus:n=2", "c2", 1, true, Rational(1, 16), false},
                  {"eta_piece:n=1:star=+:S=:T=", "c1", 0, false, Rational(1, 8), false},
                  {"eta_piece:n=2:star=+-:S=1:T=", "c2", 2, true, Rational(1, 8), false},
                  {"beta:n=2:star=++", "c1", 2, false, Rational(1, 16), false},
                  {"eta_glued:n=1", "c1", 1, true, Rational(-1, 4), false},
                  {"eta_piece:n=2:star=--:S=1,2:T=", "c1", 0, true, Rational(1, 16), false},
                  {"gamma_plus:n=1", "+", 0, true, Rational(1, 8), false},
              };
              for (const auto& mutation : mutations) {
                int n = parse_chain_id(mutation.chain_id).n;
                Corpus corrupted = Corpus::with_mutation(mutation);
                CheckSpec defaults;
                int failed = 0;
                bool witnessed = true;
                std::string caught;
                for (const auto& report : run_all(n, defaults, {}, corrupted)) {
                  if (report.n != n || report.status != "fail") continue;
                  ++failed;
                  witnessed = witnessed && !report.witnesses.empty();
                  if (caught.empty()) caught = report.name;
                }
                require(out, failed >= 1, "undetected mutation: " + mutation.to_string());
                require(out, witnessed,
                        "failure without witness for mutation: " + mutation.to_string());
              }
            });

  criterion(8, "verification reports are byte-identical across reruns", 120.0, [](Outcome& out) {
    CheckSpec spec;
    spec.seed = 7;
    auto once = run_all(2, spec);
    auto twice = run_all(2, spec);
    std::string first = suite_to_json(once, spec, 2, false).dump(2);
    std::string second = suite_to_json(twice, spec, 2, false).dump(2);
    require(out, first == second, "reports differ between runs");
    bool all_pass = true;
    for (const auto& report : once) all_pass = all_pass && report.status != "fail";
    require(out, all_pass, "the seed-7 dimension-2 suite does not pass");
  });

  int failures = 0;
  for (const auto& out : outcomes) failures += !out.pass;
  std::printf("%d/%zu criteria pass\n", static_cast<int>(outcomes.size()) - failures,
              outcomes.size());
  return failures == 0 ? 0 : 1;
}
