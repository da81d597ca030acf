#pragma once

#include <chrono>

#include "scv/names.hpp"
#include "scv/repair.hpp"

namespace scv {

struct UnknownCheck : ScvError {
  explicit UnknownCheck(const std::string& m) : ScvError(m) {}
};

struct CheckSpec {
  std::string name;
  int n = 1;
  int grid_denominator = 12;
  int random_count = 200;
  uint64_t seed = 0;
  bool long_running = false;
};

struct CheckReport {
  std::string name;
  int n = 1;
  std::string status = "pass";  // pass | fail | skipped
  bool exact = true;            // no sampled verdict was involved
  long points = 0;              // sampled comparisons performed
  std::vector<std::string> witnesses;
  double ms = 0;

  bool passed() const { return status == "pass"; }
};

// A single endpoint corruption, used to confirm that the checks detect
// arbitrary damage to the constructed chains.
struct Mutation {
  std::string chain_id;
  std::string label;
  int coord = 0;
  bool upper = true;
  Rational amount;
  bool scale = false;  // false: add amount; true: multiply by amount

  std::string to_string() const {
    return chain_id + " " + label + " coord " + std::to_string(coord) +
           (upper ? " upper" : " lower") + (scale ? " *= " : " += ") + amount.to_string();
  }
};

inline Chain apply_mutation(const Chain& chain, const Mutation& m) {
  Chain out = chain;
  if (out.terms.empty()) throw ScvError("cannot mutate an empty chain");
  ParamCube& cube = out.terms[0].cube;
  for (auto& [label, box] : cube.boxes) {
    if (label.to_string() != m.label) continue;
    ExprPtr& e = m.upper ? box[static_cast<size_t>(m.coord)].second
                         : box[static_cast<size_t>(m.coord)].first;
    e = m.scale ? ex_scale(m.amount, e) : ex_shift(e, m.amount);
    return out;
  }
  throw ScvError("mutation label " + m.label + " not found in " + m.chain_id);
}

// Named chains with optional overrides, so corrupted copies flow through the
// same verification paths as the genuine constructions.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::map<std::string, Chain> overrides) : overrides_(std::move(overrides)) {}

  static Corpus with_mutation(const Mutation& m) {
    std::map<std::string, Chain> overrides;
    overrides.emplace(m.chain_id, apply_mutation(resolve_chain(m.chain_id), m));
    return Corpus(std::move(overrides));
  }

  Chain get(const std::string& id) const {
    auto it = overrides_.find(id);
    if (it != overrides_.end()) return it->second;
    if (id.rfind("eta_glued:", 0) == 0 || id.rfind("gamma", 0) == 0) {
      // route through the cached glued cube
      ChainId parsed = parse_chain_id(id);
      const ParamCube& glued = glued_cube(parsed.n);
      if (id.rfind("eta_glued:", 0) == 0) return chain_of(glued);
      if (parsed.head == "gamma_plus") return chain_of(gamma_plus_cube(parsed.n, glued));
      return gamma_chain(parsed.n, gamma_plus_cube(parsed.n, glued));
    }
    return resolve_chain(id);
  }

  ParamCube cube(const std::string& id) const {
    Chain c = get(id);
    if (c.terms.size() != 1) throw ScvError(id + " is not a single cube");
    return c.terms[0].cube;
  }

  ParamCube beta(int n, const SignString& star) const {
    return cube("beta:n=" + std::to_string(n) + ":star=" + star.to_string());
  }

  ParamCube piece(const EtaPieceKey& key) const {
    std::string id = "eta_piece:n=" + std::to_string(key.n) + ":star=" + key.star.to_string() +
                     ":S=" + axes_text(key.S) + ":T=" + axes_text(key.T);
    return cube(id);
  }

  const ParamCube& glued_cube(int n) const {
    auto it = glued_cache_.find(n);
    if (it != glued_cache_.end()) return it->second;
    auto ov = overrides_.find("eta_glued:n=" + std::to_string(n));
    ParamCube cube = ov != overrides_.end() && ov->second.terms.size() == 1
                         ? ov->second.terms[0].cube
                         : glued_eta_plus_cube(n);
    return glued_cache_.emplace(n, std::move(cube)).first->second;
  }

  static std::string axes_text(const AxisSet& a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s;
  }

 private:
  std::map<std::string, Chain> overrides_;
  mutable std::map<int, ParamCube> glued_cache_;
};

namespace detail {

// Per-arity grid density: full density through two parameters, coarser above.
inline int grid_density(int base, int arity) {
  if (arity <= 2) return base;
  if (arity == 3) return std::min(base, 6);
  return std::min(base, 3);
}

inline std::vector<ParamPoint> check_points(int arity, const CheckSpec& spec) {
  std::vector<ParamPoint> points = sample_grid(arity, grid_density(spec.grid_denominator, arity));
  SplitMix rng(spec.seed * 7919ULL + static_cast<uint64_t>(arity));
  for (int k = 0; k < spec.random_count; ++k) {
    ParamPoint p(static_cast<size_t>(arity));
    for (int i = 0; i < arity; ++i) p[static_cast<size_t>(i)] = rng.coordinate(97);
    points.push_back(std::move(p));
  }
  return points;
}

struct Runner {
  const CheckSpec& spec;
  CheckReport report;

  explicit Runner(const CheckSpec& s, const std::string& name) : spec(s) {
    report.name = name;
    report.n = s.n;
  }

  Sampled sampled() const {
    return Sampled{spec.grid_denominator, spec.random_count, spec.seed};
  }

  void fail(const std::string& witness) {
    report.status = "fail";
    if (report.witnesses.size() < 8) report.witnesses.push_back(witness);
  }

  void count(long k = 1) { report.points += k; }

  void note_mode(bool exact) { report.exact = report.exact && exact; }

  bool check_cubes(const ParamCube& a, const ParamCube& b, const std::string& what) {
    CubeEqReport eq = cube_equal(a, b, sampled());
    note_mode(eq.exact);
    if (!eq.equal) {
      std::string w = what + ": " + eq.detail;
      if (eq.witness) {
        w += " at (";
        for (size_t i = 0; i < eq.witness->size(); ++i) {
          w += (i ? "," : "") + (*eq.witness)[i].to_string();
        }
        w += ")";
      }
      fail(w);
      return false;
    }
    return true;
  }
};

inline std::string point_text(const ParamPoint& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i].to_string();
  return s + ")";
}

}  // namespace detail

// --- individual checks ---------------------------------------------------------

// Every constructed chain instantiates to valid configurations on the grid
// and at seeded random points.
inline CheckReport check_validity_all(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "validity-all");
  for (const std::string& id : validity_corpus(spec.n)) {
    Chain chain = corpus.get(id);
    for (const auto& term : chain.terms) {
      for (const auto& t : detail::check_points(term.cube.arity, spec)) {
        r.count();
        try {
          ValidityReport v = validate(instantiate(term.cube, t));
          if (!v.ok()) {
            r.fail(id + " at " + detail::point_text(t) + ": " + v.summary());
            break;
          }
        } catch (const SeamMismatch& e) {
          r.fail(id + " at " + detail::point_text(t) + ": " + e.what());
          break;
        }
      }
      if (!r.report.passed()) break;
    }
    if (!r.report.passed()) break;
  }
  r.report.exact = false;  // grid verification is sampled by nature
  return r.report;
}

// The push cubes restrict at the two diagonal corners to the operadic
// composites of the action and the product.
inline CheckReport check_beta_corners(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "beta-corners");
  const int n = spec.n;
  Configuration alpha_mu = compose(alpha_config(n), Label::open(SignString::empty()), mu_config(n));
  for (const auto& star : all_sign_strings(axis_range(n))) {
    ParamCube b = corpus.beta(n, star);
    ParamPoint low(static_cast<size_t>(n), Rational(-1));
    ParamPoint high(static_cast<size_t>(n), Rational(1));
    r.count(2);
    if (!(instantiate(b, low) == alpha_mu)) {
      r.fail("beta " + star.to_string() + " at the lower corner");
    }
    Configuration mu_alpha = compose(mu_config(n), Label::open(star), alpha_config(n));
    if (!(instantiate(b, high) == mu_alpha)) {
      r.fail("beta " + star.to_string() + " at the upper corner");
    }
  }
  return r.report;
}

namespace detail {

inline ParamCube push_facet_low(int n, const SignString& star, int axis) {
  AxisSet rest = axis_minus(axis_range(n), axis);
  ParamCube outer = beta_S_cube(n, rest, star.restricted(rest));
  ParamCube mu_i = constant_cube(mu_S_config(n, {axis}), n - 1);
  std::vector<std::pair<Label, ParamCube>> slots;
  for (const auto& prime : all_sign_strings(rest)) slots.emplace_back(Label::open(prime), mu_i);
  return pointwise_compose(outer, slots);
}

inline ParamCube push_facet_high(int n, const SignString& star, int axis) {
  ParamCube outer = constant_cube(mu_S_config(n, {axis}), n - 1);
  AxisSet rest = axis_minus(axis_range(n), axis);
  ParamCube mu_rest = constant_cube(mu_S_config(n, rest), n - 1);
  ParamCube beta_rest = beta_S_cube(n, rest, star.restricted(rest));
  SignString at_axis = SignString::over({axis}, {star.sign_at(axis)});
  return pointwise_compose(outer, {{Label::open(at_axis.negated()), mu_rest},
                                   {Label::open(at_axis), beta_rest}});
}

}  // namespace detail

// Facets of the push cubes match the composites of smaller pushes and
// products.
inline CheckReport check_beta_facets(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "beta-facets");
  const int n = spec.n;
  for (const auto& star : all_sign_strings(axis_range(n))) {
    ParamCube b = corpus.beta(n, star);
    for (int axis = 1; axis <= n; ++axis) {
      r.count(2);
      r.check_cubes(face(b, axis, -1), detail::push_facet_low(n, star, axis),
                    "d^-_" + std::to_string(axis) + " beta " + star.to_string());
      r.check_cubes(face(b, axis, +1), detail::push_facet_high(n, star, axis),
                    "d^+_" + std::to_string(axis) + " beta " + star.to_string());
    }
  }
  return r.report;
}

namespace detail {

inline SignString flip_at(const SignString& star, int axis) {
  SignString out = star;
  for (auto& [a, s] : out.entries) {
    if (a == axis) s = -s;
  }
  return out;
}

}  // namespace detail

// The facet-matching equations that make the symmetrized cycle closed.
inline CheckReport check_eta_facet_matching(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "eta-facet-matching");
  const int n = spec.n;
  for (const auto& key : eta_piece_keys(n)) {
    ParamCube piece = corpus.piece(key);
    for (int axis : key.S) {
      EtaPieceKey flipped{n, detail::flip_at(key.star, axis), key.S, key.T};
      r.count(2);
      r.check_cubes(face(piece, axis, -1), face(corpus.piece(flipped), axis, -1),
                    key.to_string() + " lower facet flip at axis " + std::to_string(axis));
      EtaPieceKey shrunk{n, key.star, axis_minus(key.S, axis), key.T};
      r.check_cubes(face(piece, axis, +1), face(corpus.piece(shrunk), axis, -1),
                    key.to_string() + " upper facet shift at axis " + std::to_string(axis));
    }
    for (int axis : key.T) {
      EtaPieceKey shrunk{n, key.star, key.S, axis_minus(key.T, axis)};
      r.count(2);
      r.check_cubes(face(piece, axis, -1), face(corpus.piece(shrunk), axis, +1),
                    key.to_string() + " lower facet against the smaller outer set at axis " +
                        std::to_string(axis));
      EtaPieceKey mirrored{n, key.star.negated(), key.S, key.T};
      r.check_cubes(face(piece, axis, +1),
                    face(swap_closed_cube(corpus.piece(mirrored)), axis, +1),
                    key.to_string() + " upper facet against the mirrored key at axis " +
                        std::to_string(axis));
    }
  }
  return r.report;
}

// d(eta) = 0 by cancellation of facets in normalized chains.
inline CheckReport check_eta_closed(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "eta-closed");
  const int n = spec.n;
  Chain plus = chain_zero(n, n, Color::Open);
  for (const auto& key : eta_piece_keys(n)) {
    plus = chain_add(plus, chain_of(corpus.piece(key), Rational(key.star.sgn())));
  }
  Chain eta = eta_symmetrize(n, plus);
  bool exact = true;
  Chain d = boundary(eta, r.sampled(), &exact);
  r.note_mode(exact);
  r.count(static_cast<long>(eta.terms.size()) * 2 * n);
  if (!d.is_zero()) {
    r.fail("boundary has " + std::to_string(d.terms.size()) + " surviving terms");
  }
  return r.report;
}

namespace detail {

// All admissible (piece key, rescaled point) readings of the glued cycle at
// one parameter point; more than one exactly on the seams.
struct GluedReading {
  EtaPieceKey key;
  ParamPoint rescaled;
};

inline std::vector<GluedReading> glued_readings(int n, const ParamPoint& t) {
  struct Option {
    int sign;
    int region;
    Rational rescaled;
  };
  std::vector<std::vector<Option>> per_axis(static_cast<size_t>(n));
  const Rational third(1, 3), two_thirds(2, 3), six(6);
  for (int i = 0; i < n; ++i) {
    const Rational& x = t[static_cast<size_t>(i)];
    Rational a = x.abs();
    auto add = [&](int sign, int region, const Rational& shift) {
      Rational rescaled = six * (sign > 0 ? x : -x) + shift;
      per_axis[static_cast<size_t>(i)].push_back({sign, region, rescaled});
    };
    for (int sign : {-1, +1}) {
      if ((sign > 0 && x.sign() < 0) || (sign < 0 && x.sign() > 0)) continue;
      if (a <= third) add(sign, 2, Rational(-1));
      if (third <= a && a <= two_thirds) add(sign, 1, Rational(-3));
      if (two_thirds <= a) add(sign, 0, Rational(-5));
    }
  }
  std::vector<GluedReading> readings;
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  while (true) {
    GluedReading reading;
    reading.key.n = n;
    std::vector<int> signs;
    reading.rescaled.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Option& o = per_axis[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
      signs.push_back(o.sign);
      reading.rescaled[static_cast<size_t>(i)] = o.rescaled;
      if (o.region == 2) reading.key.S.push_back(i + 1);
      if (o.region == 0) reading.key.T.push_back(i + 1);
    }
    reading.key.star = SignString::over(axis_range(n), signs);
    readings.push_back(std::move(reading));
    int carry = n - 1;
    while (carry >= 0 && ++idx[static_cast<size_t>(carry)] ==
                             per_axis[static_cast<size_t>(carry)].size()) {
      idx[static_cast<size_t>(carry)] = 0;
      --carry;
    }
    if (carry < 0) break;
  }
  return readings;
}

}  // namespace detail

// Every admissible reading of the glued cycle agrees at every grid point;
// on the seams this is the double-evaluation well-definedness claim.
inline CheckReport check_eta_glued_continuity(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "eta-glued-continuity");
  const int n = spec.n;
  long seam_points = 0;
  for (const auto& t : sample_grid(n, detail::grid_density(spec.grid_denominator, n))) {
    auto readings = detail::glued_readings(n, t);
    r.count();
    if (readings.size() > 1) ++seam_points;
    Configuration first = instantiate(corpus.piece(readings[0].key), readings[0].rescaled);
    for (size_t k = 1; k < readings.size(); ++k) {
      Configuration other = instantiate(corpus.piece(readings[k].key), readings[k].rescaled);
      if (!(other == first)) {
        r.fail("readings " + readings[0].key.to_string() + " and " + readings[k].key.to_string() +
               " disagree at " + detail::point_text(t));
        break;
      }
    }
    if (!r.report.passed()) break;
  }
  if (seam_points == 0) r.fail("no seam points were exercised");
  r.report.exact = false;
  return r.report;
}

// The glued cycle satisfies eta+(t) = (eta+ . (c1 c2))(-t) on the boundary.
inline CheckReport check_eta_antipodal(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "eta-antipodal");
  const int n = spec.n;
  const ParamCube& glued = corpus.glued_cube(n);
  for (const auto& face_pt : sample_grid(n - 1, detail::grid_density(spec.grid_denominator,
                                                                     std::max(n - 1, 1)))) {
    for (int axis = 0; axis < n; ++axis) {
      for (int sign : {-1, +1}) {
        ParamPoint t(static_cast<size_t>(n));
        size_t j = 0;
        for (int i = 0; i < n; ++i) {
          t[static_cast<size_t>(i)] = i == axis ? Rational(sign) : face_pt[j++];
        }
        ParamPoint opposite(t);
        for (auto& x : opposite) x = -x;
        r.count();
        Configuration lhs = instantiate(glued, t);
        Configuration rhs = swap_closed(instantiate(glued, opposite));
        if (!(lhs == rhs)) {
          r.fail("boundary antipodal relation fails at " + detail::point_text(t));
          break;
        }
      }
      if (!r.report.passed()) break;
    }
    if (!r.report.passed()) break;
  }
  r.report.exact = false;
  return r.report;
}

// Faces of the homotopy cube, its side symmetry, and the boundary identity.
inline CheckReport check_gamma_faces(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "gamma-faces");
  const int n = spec.n;
  const ParamCube& glued = corpus.glued_cube(n);
  ParamCube gamma = corpus.cube("gamma_plus:n=" + std::to_string(n));
  r.count(2);
  r.check_cubes(face(gamma, n + 1, -1), glued, "lower homotopy face");
  r.check_cubes(face(gamma, n + 1, +1), alpha_ell_mu_cube(n), "upper homotopy face");
  for (int axis = 1; axis <= n; ++axis) {
    std::vector<int> flips;
    for (int p = 1; p < n; ++p) flips.push_back(p);
    ParamCube mirrored = swap_closed_cube(flips.empty() ? face(gamma, axis, -1)
                                                        : antipode(face(gamma, axis, -1), flips));
    r.count();
    r.check_cubes(face(gamma, axis, +1), mirrored,
                  "side symmetry at axis " + std::to_string(axis));
  }
  Chain gamma_full = gamma_chain(n, gamma);
  Chain almu = alpha_ell_mu_chain(n);
  Chain eta_glued = eta_glued_chain(n, glued);
  Rational sign(n % 2 == 0 ? 1 : -1);
  Chain rhs = chain_scale(sign, chain_sub(almu, eta_glued));
  bool exact = true;
  Chain d = boundary(gamma_full, r.sampled(), &exact);
  r.note_mode(exact);
  Chain residue = n == 1 ? merge_terms(chain_sub(d, rhs), r.sampled())
                         : merge_terms_mod_reflection(chain_sub(d, rhs), r.sampled());
  if (!residue.is_zero()) {
    r.fail("boundary identity residue has " + std::to_string(residue.terms.size()) + " terms");
  }
  return r.report;
}

// The four disjointness conditions for the homotopy cube.
inline CheckReport check_gamma_separation(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "gamma-separation");
  const int n = spec.n;
  const ParamCube& glued = corpus.glued_cube(n);
  ParamCube gamma = corpus.cube("gamma_plus:n=" + std::to_string(n));
  ParamCube almu = alpha_ell_mu_cube(n);
  const Rational half(1, 2), quarter(1, 4), three_quarters(3, 4), zero(0);
  auto separated_at = [](const Box& left, const Box& right, size_t coord, const Rational& c) {
    return (left[coord].second <= c && c <= right[coord].first) ||
           (right[coord].second <= c && c <= left[coord].first);
  };
  for (const auto& tu : detail::check_points(n + 1, spec)) {
    r.count();
    ParamPoint t(tu.begin(), tu.end() - 1);
    const Rational& u = tu.back();
    Configuration gamma_cfg = instantiate(gamma, tu);
    Configuration eta_cfg = instantiate(glued, t);
    Configuration almu_cfg = instantiate(almu, t);
    // 1: in the first half the closed boxes stay put and at the midpoint the
    // open boxes have retreated behind the 1/4 hyperplane
    if (u.sign() <= 0) {
      for (const auto& [label, box] : gamma_cfg.boxes) {
        if (label.color == Color::Closed && !(box == eta_cfg.boxes.at(label))) {
          r.fail("closed box moved in the first half at " + detail::point_text(tu));
          break;
        }
      }
    }
    if (u.is_zero()) {
      for (const auto& [label, box] : gamma_cfg.boxes) {
        bool ok = label.color == Color::Open ? box[0].second <= quarter : quarter <= box[0].first;
        if (!ok) {
          r.fail("quarter-plane separation fails at " + detail::point_text(tu));
          break;
        }
      }
    }
    // 2 and 3: in the middle region the two closed boxes are separated by a
    // fixed hyperplane, in the glued cycle and in alpha(ell+, mu)
    bool middle = true;
    for (const auto& x : t) middle = middle && x.abs() <= half;
    if (middle) {
      if (!separated_at(eta_cfg.boxes.at(Label::closed(1)), eta_cfg.boxes.at(Label::closed(2)), 0,
                        half)) {
        r.fail("closed boxes of the cycle not separated by 1/2 at " + detail::point_text(tu));
      }
      if (!separated_at(almu_cfg.boxes.at(Label::closed(1)), almu_cfg.boxes.at(Label::closed(2)),
                        0, three_quarters)) {
        r.fail("closed boxes of alpha(ell+,mu) not separated by 3/4 at " + detail::point_text(tu));
      }
    }
    // 4: outside the middle region in some axis, the first closed boxes lie on
    // a common side of that coordinate hyperplane and the second ones opposite
    for (int axis = 1; axis <= n; ++axis) {
      if (t[static_cast<size_t>(axis - 1)].abs() < half) continue;
      auto box_sign = [&](const Configuration& cfg, int closed_index) {
        const Box& b = cfg.boxes.at(Label::closed(closed_index));
        if (zero <= b[static_cast<size_t>(axis)].first) return +1;
        if (b[static_cast<size_t>(axis)].second <= zero) return -1;
        return 0;
      };
      int e1 = box_sign(eta_cfg, 1), a1 = box_sign(almu_cfg, 1);
      int e2 = box_sign(eta_cfg, 2), a2 = box_sign(almu_cfg, 2);
      if (e1 == 0 || a1 == 0 || e2 == 0 || a2 == 0 || e1 != a1 || e2 != a2 || e1 == e2) {
        r.fail("side condition fails at axis " + std::to_string(axis) + ", " +
               detail::point_text(tu));
      }
    }
    if (!r.report.passed()) break;
  }
  r.report.exact = false;
  return r.report;
}

// The loop cycle: boundary antipodal relation, exact facet pairing, and
// cancellation (literal in dimension one, orientation-quotient beyond).
inline CheckReport check_ell_cycle(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "ell-cycle");
  const int n = spec.n;
  ParamCube lp = corpus.cube("ell_plus:n=" + std::to_string(n));
  for (const auto& face_pt : sample_grid(std::max(n - 1, 0),
                                         detail::grid_density(spec.grid_denominator,
                                                              std::max(n - 1, 1)))) {
    for (int axis = 0; axis < n; ++axis) {
      for (int sign : {-1, +1}) {
        ParamPoint t(static_cast<size_t>(n));
        size_t j = 0;
        for (int i = 0; i < n; ++i) {
          t[static_cast<size_t>(i)] = i == axis ? Rational(sign) : face_pt[j++];
        }
        ParamPoint opposite(t);
        for (auto& x : opposite) x = -x;
        r.count();
        if (!(instantiate(lp, t) == swap_closed(instantiate(lp, opposite)))) {
          r.fail("loop antipodal relation fails at " + detail::point_text(t));
        }
      }
    }
  }
  for (int axis = 1; axis <= n && r.report.passed(); ++axis) {
    ParamCube neg = face(lp, axis, -1);
    r.count();
    r.check_cubes(face(lp, axis, +1), swap_closed_cube(antipode(neg)),
                  "facet pairing at axis " + std::to_string(axis));
  }
  if (r.report.passed()) {
    Rational sign(n % 2 == 0 ? -1 : 1);
    Chain ell = chain_add(chain_of(lp), chain_scale(sign, swap_closed_chain(chain_of(lp))));
    bool exact = true;
    Chain d = boundary(ell, r.sampled(), &exact);
    r.note_mode(exact);
    Chain residue = n == 1 ? d : merge_terms_mod_reflection(d, r.sampled());
    if (!residue.is_zero()) {
      r.fail("facet cancellation leaves " + std::to_string(residue.terms.size()) + " terms");
    }
  }
  return r.report;
}

namespace detail {

// Random valid configurations: boxes confined to parallel slabs of a chosen
// axis, so interiors are disjoint by construction.
inline Configuration random_config(SplitMix& rng, int n, int closed_count, int open_count,
                                   Color output, const std::vector<SignString>& open_labels) {
  Configuration out;
  out.dim = n;
  out.output = output;
  int k = closed_count + open_count;
  int slab_axis = output == Color::Open || n >= 1
                      ? 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::max(n, 1))))
                      : 0;
  auto sub_interval = [&](const Rational& lo, const Rational& hi) {
    Rational width = hi - lo;
    long long a = static_cast<long long>(rng.below(3));
    long long b = static_cast<long long>(rng.below(3));
    Rational nlo = lo + width * Rational(a, 8);
    Rational nhi = hi - width * Rational(b, 8);
    return std::pair<Rational, Rational>{nlo, nhi};
  };
  auto random_interval = [&]() {
    long long a = static_cast<long long>(rng.below(15)) - 8;  // in [-8, 6]
    long long w = 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(8 - a)));
    return std::pair<Rational, Rational>{Rational(a, 8), Rational(a + w, 8)};
  };
  int slab = 0;
  auto make_box = [&](bool open_box) {
    Box box(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      if (i == slab_axis) {
        Rational lo = Rational(-1) + Rational(2 * slab, k);
        Rational hi = Rational(-1) + Rational(2 * (slab + 1), k);
        box[static_cast<size_t>(i)] = sub_interval(lo, hi);
      } else if (i == 0 && output == Color::Open) {
        if (open_box) {
          box[0] = {Rational(0), Rational(1 + static_cast<long long>(rng.below(8)), 8)};
        } else {
          long long lo = static_cast<long long>(rng.below(6));
          long long hi = lo + 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(8 - lo)));
          box[0] = {Rational(lo, 8), Rational(hi, 8)};
        }
      } else {
        box[static_cast<size_t>(i)] = random_interval();
      }
    }
    ++slab;
    return box;
  };
  for (int c = 1; c <= closed_count; ++c) out.boxes.emplace(Label::closed(c), make_box(false));
  for (int o = 0; o < open_count; ++o) {
    out.boxes.emplace(Label::open(open_labels[static_cast<size_t>(o)]), make_box(true));
  }
  return out;
}

}  // namespace detail

// Unit, associativity, parallel-commutation and equivariance laws on seeded
// random configurations, all compared exactly.
inline CheckReport check_operad_axioms(const CheckSpec& spec, const Corpus&) {
  detail::Runner r(spec, "operad-axioms");
  const int n = spec.n;
  detail::SplitMix rng(spec.seed * 104729ULL + static_cast<uint64_t>(n));
  int axis = std::min(1, n);
  SignString minus = SignString::over({axis}, {-1});
  SignString plus = SignString::over({axis}, {+1});
  for (int iter = 0; iter < spec.random_count; ++iter) {
    r.count();
    int kx = 1 + static_cast<int>(rng.below(2));
    Configuration x = detail::random_config(rng, n, kx, 2, Color::Open, {minus, plus});
    Configuration y = detail::random_config(rng, n, 1 + static_cast<int>(rng.below(2)), 1,
                                            Color::Open, {SignString::empty()});
    Configuration y2 = detail::random_config(rng, n, 1, 1, Color::Open, {SignString::empty()});
    Configuration z = detail::random_config(rng, n, 2, 0, Color::Closed, {});
    Configuration z2 = detail::random_config(rng, n, 1, 0, Color::Closed, {});
    if (!validate(x).ok() || !validate(y).ok() || !validate(y2).ok() || !validate(z).ok() ||
        !validate(z2).ok()) {
      r.fail("random generator produced an invalid configuration at iteration " +
             std::to_string(iter));
      break;
    }
    Label slot_minus = Label::open(minus);
    Label slot_plus = Label::open(plus);
    Label slot_o = Label::open(SignString::empty());
    // units
    if (!(compose(x, slot_plus, identity_config(Color::Open, n)) == x) ||
        !(compose(x, Label::closed(1), identity_config(Color::Closed, n)) == x) ||
        !(compose(identity_config(Color::Open, n), slot_o, y) == y)) {
      r.fail("unit law fails at iteration " + std::to_string(iter));
      break;
    }
    // nested associativity through an open slot: the inserted operation's
    // open input keeps the composite label
    Configuration left = compose(compose(x, slot_plus, y), slot_plus, y2);
    Configuration right = compose(x, slot_plus, compose(y, slot_o, y2));
    if (!(left == right)) {
      r.fail("open-slot associativity fails at iteration " + std::to_string(iter));
      break;
    }
    // nested associativity through closed slots: in-place splicing keeps the
    // inner labels addressable at the same indices
    Configuration cl = compose(compose(x, Label::closed(1), z), Label::closed(1), z2);
    Configuration cr = compose(x, Label::closed(1), compose(z, Label::closed(1), z2));
    if (!(cl == cr)) {
      r.fail("closed-slot associativity fails at iteration " + std::to_string(iter));
      break;
    }
    // parallel slots commute up to the induced renumbering of closed labels
    Configuration pl = compose(compose(x, slot_minus, y), slot_plus, y2);
    Configuration pr = compose(compose(x, slot_plus, y2), slot_minus, y);
    int ky = 0, ky2 = 0;
    for (const auto& [label, box] : y.boxes) ky += label.color == Color::Closed;
    for (const auto& [label, box] : y2.boxes) ky2 += label.color == Color::Closed;
    std::map<Label, Label> induced;
    for (int j = 1; j <= ky; ++j) {
      induced[Label::closed(kx + ky2 + j)] = Label::closed(kx + j);
    }
    for (int j = 1; j <= ky2; ++j) {
      induced[Label::closed(kx + j)] = Label::closed(kx + ky + j);
    }
    if (!(act_perm(pr, induced) == pl)) {
      r.fail("parallel-slot commutation fails at iteration " + std::to_string(iter));
      break;
    }
    // equivariance under a closed transposition of the outer labels
    if (kx >= 2) {
      Configuration both = compose(swap_closed(x), slot_plus, y);
      if (!(both == swap_closed(compose(x, slot_plus, y)))) {
        r.fail("equivariance fails at iteration " + std::to_string(iter));
        break;
      }
    }
    // composites of valid configurations stay valid
    if (!validate(left).ok() || !validate(cl).ok() || !validate(pl).ok()) {
      r.fail("composite of valid configurations is invalid at iteration " + std::to_string(iter));
      break;
    }
  }
  return r.report;
}

// The widening inclusions are operad morphisms.
inline CheckReport check_iota_morphism(const CheckSpec& spec, const Corpus&) {
  detail::Runner r(spec, "iota-morphism");
  const int n = spec.n;
  for (size_t bits = 1; bits < (1ULL << n); ++bits) {
    AxisSet widened;
    for (int i = 0; i < n; ++i) {
      if (bits & (1ULL << i)) widened.push_back(i + 1);
    }
    int m = n - static_cast<int>(widened.size());
    detail::SplitMix rng(spec.seed * 19937ULL + bits);
    int samples = std::max(1, spec.random_count);
    for (int iter = 0; iter < samples; ++iter) {
      r.count();
      SignString empty = SignString::empty();
      Configuration x = detail::random_config(rng, m, 1, 1, Color::Open, {empty});
      Configuration y = detail::random_config(rng, m, 1, 1, Color::Open, {empty});
      Configuration z = detail::random_config(rng, m, 1, 0, Color::Closed, {});
      Label open_slot = Label::open(empty);
      Label closed_slot = Label::closed(1);
      Configuration open_composed = iota(widened, n, compose(x, open_slot, y));
      Configuration open_widened =
          compose(iota(widened, n, x), open_slot, iota(widened, n, y));
      if (!(open_composed == open_widened)) {
        r.fail("open-slot morphism property fails for the widened axes " +
               Corpus::axes_text(widened));
        break;
      }
      Configuration closed_composed = iota(widened, n, compose(x, closed_slot, z));
      Configuration closed_widened =
          compose(iota(widened, n, x), closed_slot, iota(widened, n, z));
      if (!(closed_composed == closed_widened)) {
        r.fail("closed-slot morphism property fails for the widened axes " +
               Corpus::axes_text(widened));
        break;
      }
    }
    if (!r.report.passed()) break;
  }
  return r.report;
}

// The inductive product agrees with its orthant description.
inline CheckReport check_mu_closed_form(const CheckSpec& spec, const Corpus&) {
  detail::Runner r(spec, "mu-closed-form");
  r.count();
  if (!(mu_config(spec.n) == mu_closed_form(spec.n))) {
    r.fail("inductive product differs from the orthant formula at n=" + std::to_string(spec.n));
  }
  return r.report;
}

// Repaired chains: with no perturbation everything collapses to the base
// chains; in dimension one a synthetic perturbation of the action must
// satisfy the boundary identities on the nose.
inline CheckReport check_repair(const CheckSpec& spec, const Corpus& corpus) {
  detail::Runner r(spec, "repair-n1");
  const int n = spec.n;
  {
    RepairKit kit(n, {});
    for (size_t bits = 1; bits < (1ULL << n); ++bits) {
      AxisSet S;
      for (int i = 0; i < n; ++i) {
        if (bits & (1ULL << i)) S.push_back(i + 1);
      }
      for (const auto& star : all_sign_strings(S)) {
        r.count(2);
        Chain tilde = kit.beta_tilde(S, star);
        ChainEqReport eq = chain_equal(tilde, chain_of(beta_S_cube(n, S, star)), r.sampled());
        r.note_mode(eq.exact);
        if (!eq.equal) {
          r.fail("unperturbed repaired push differs from the push over axes " +
                 Corpus::axes_text(S));
        }
        ChainEqReport push =
            chain_equal(boundary(kit.beta_tilde(S, star), r.sampled()), kit.push_rhs(S, star),
                        r.sampled());
        r.note_mode(push.exact);
        if (!push.equal) {
          r.fail("unperturbed boundary push identity fails over axes " + Corpus::axes_text(S));
        }
      }
    }
    const ParamCube& glued = corpus.glued_cube(n);
    ChainEqReport gamma_eq =
        chain_equal(kit.gamma_tilde(glued), gamma_chain(n, gamma_plus_cube(n, glued)), r.sampled());
    r.note_mode(gamma_eq.exact);
    r.count();
    if (!gamma_eq.equal) r.fail("unperturbed repaired gamma differs from gamma");
  }
  if ((n == 2 && spec.long_running) && r.report.passed()) {
    // beyond the standard claims: the boundary push identity also holds for a
    // genuinely perturbed action in dimension two, for every axis subset
    RepairKit kit(n, PerturbationData{{}, synthetic_alpha_path(n), {}});
    for (size_t bits = 1; bits < (1ULL << n); ++bits) {
      AxisSet S;
      for (int i = 0; i < n; ++i) {
        if (bits & (1ULL << i)) S.push_back(i + 1);
      }
      for (const auto& star : all_sign_strings(S)) {
        r.count();
        ChainEqReport push = chain_equal(boundary(kit.beta_tilde(S, star), r.sampled()),
                                         kit.push_rhs(S, star), r.sampled());
        r.note_mode(push.exact);
        if (!push.equal) {
          r.fail("synthetic boundary push identity fails over axes " + Corpus::axes_text(S));
        }
      }
    }
  }
  if (n == 1 && r.report.passed()) {
    RepairKit kit(n, PerturbationData{{}, synthetic_alpha_path(n), {}});
    for (int sign : {-1, +1}) {
      SignString star = SignString::over({1}, {sign});
      r.count();
      ChainEqReport push = chain_equal(boundary(kit.beta_tilde({1}, star), r.sampled()),
                                       kit.push_rhs({1}, star), r.sampled());
      r.note_mode(push.exact);
      if (!push.equal) {
        r.fail(std::string("synthetic boundary push identity fails for star=") +
               (sign > 0 ? "+" : "-") + ": " + push.detail);
      }
    }
    const ParamCube& glued = corpus.glued_cube(n);
    Chain gamma = gamma_chain(n, gamma_plus_cube(n, glued));
    Chain lhs = chain_sub(boundary(kit.gamma_tilde(glued), r.sampled()),
                          boundary(gamma, r.sampled()));
    Rational sign(n % 2 == 0 ? 1 : -1);
    Chain rhs = chain_scale(
        sign, chain_sub(chain_sub(kit.alpha_ell_mu_star(), alpha_ell_mu_chain(n)),
                        chain_sub(kit.eta_tilde(), eta_chain(n))));
    r.count();
    ChainEqReport shift = chain_equal(lhs, rhs, r.sampled());
    r.note_mode(shift.exact);
    if (!shift.equal) r.fail("synthetic gamma boundary identity fails: " + shift.detail);
  }
  return r.report;
}

// --- registry -------------------------------------------------------------------

using CheckFn = CheckReport (*)(const CheckSpec&, const Corpus&);

inline const std::vector<std::pair<std::string, CheckFn>>& check_registry() {
  static const std::vector<std::pair<std::string, CheckFn>> registry = {
      {"validity-all", &check_validity_all},
      {"beta-corners", &check_beta_corners},
      {"beta-facets", &check_beta_facets},
      {"eta-facet-matching", &check_eta_facet_matching},
      {"eta-closed", &check_eta_closed},
      {"eta-glued-continuity", &check_eta_glued_continuity},
      {"eta-antipodal", &check_eta_antipodal},
      {"gamma-faces", &check_gamma_faces},
      {"gamma-separation", &check_gamma_separation},
      {"ell-cycle", &check_ell_cycle},
      {"operad-axioms", &check_operad_axioms},
      {"iota-morphism", &check_iota_morphism},
      {"repair-n1", &check_repair},
      {"mu-closed-form", &check_mu_closed_form},
  };
  return registry;
}

inline std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : check_registry()) names.push_back(name);
  return names;
}

// Checks that are skipped for a dimension unless the long-running flag is
// set; gamma and repair are only constructed through dimension two.
inline bool check_supported(const std::string& name, int n, bool long_running) {
  if (n <= 2) return true;
  if (!long_running) return false;
  if (n >= 4) return false;
  static const std::vector<std::string> heavy_supported = {
      "validity-all", "beta-corners", "beta-facets", "eta-facet-matching",
      "eta-closed", "eta-glued-continuity", "eta-antipodal", "ell-cycle",
      "operad-axioms", "iota-morphism", "mu-closed-form"};
  return std::find(heavy_supported.begin(), heavy_supported.end(), name) !=
         heavy_supported.end();
}

inline CheckReport run_check(const CheckSpec& spec, const Corpus& corpus = Corpus()) {
  for (const auto& [name, fn] : check_registry()) {
    if (name == spec.name) {
      auto start = std::chrono::steady_clock::now();
      CheckReport report = fn(spec, corpus);
      report.ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
      return report;
    }
  }
  throw UnknownCheck("no check named '" + spec.name + "'");
}

// Runs the selected checks for every dimension 1..n_max; entries outside the
// supported range are reported as skipped.
inline std::vector<CheckReport> run_all(int n_max, CheckSpec defaults,
                                        const std::vector<std::string>& only = {},
                                        const Corpus& corpus = Corpus()) {
  std::vector<CheckReport> reports;
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& [name, fn] : check_registry()) {
      if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
      CheckSpec spec = defaults;
      spec.name = name;
      spec.n = n;
      if (!check_supported(name, n, defaults.long_running)) {
        CheckReport skipped;
        skipped.name = name;
        skipped.n = n;
        skipped.status = "skipped";
        skipped.exact = false;
        reports.push_back(std::move(skipped));
        continue;
      }
      reports.push_back(run_check(spec, corpus));
    }
  }
  return reports;
}

}  // namespace scv
