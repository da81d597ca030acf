#pragma once

#include "scv/operad.hpp"
#include "scv/pl_equal.hpp"
#include "scv/plexpr.hpp"

namespace scv {

using ExprBox = std::vector<std::pair<ExprPtr, ExprPtr>>;

// A k-parameter singular cube valued in configurations: every box endpoint is
// a scalar expression in the parameters t_1..t_k.
struct ParamCube {
  int arity = 0;
  int dim = 0;
  Color output = Color::Closed;
  std::map<Label, ExprBox> boxes;

  uint64_t support() const {
    uint64_t s = 0;
    for (const auto& [label, box] : boxes) {
      for (const auto& [lo, hi] : box) s |= lo->support | hi->support;
    }
    return s;
  }
};

inline ParamCube constant_cube(const Configuration& config, int arity = 0) {
  ParamCube cube;
  cube.arity = arity;
  cube.dim = config.dim;
  cube.output = config.output;
  for (const auto& [label, box] : config.boxes) {
    ExprBox eb;
    eb.reserve(box.size());
    for (const auto& [lo, hi] : box) eb.emplace_back(ex_const(lo), ex_const(hi));
    cube.boxes.emplace(label, std::move(eb));
  }
  return cube;
}

inline Configuration instantiate(const ParamCube& cube, const ParamPoint& point) {
  if (static_cast<int>(point.size()) != cube.arity) {
    throw IndexOutOfRange("instantiating an arity-" + std::to_string(cube.arity) +
                          " cube at a point of arity " + std::to_string(point.size()));
  }
  Configuration config;
  config.dim = cube.dim;
  config.output = cube.output;
  EvalContext eval(point);
  for (const auto& [label, box] : cube.boxes) {
    Box b;
    b.reserve(box.size());
    for (const auto& [lo, hi] : box) b.emplace_back(eval(lo), eval(hi));
    config.boxes.emplace(label, std::move(b));
  }
  return config;
}

// Substitution-based reparametrization: result(t) = cube(assignment(t)).
inline ParamCube reparam(const ParamCube& cube, const std::vector<ExprPtr>& assignment,
                         int new_arity) {
  ParamCube out;
  out.arity = new_arity;
  out.dim = cube.dim;
  out.output = cube.output;
  detail::SubstMemo memo;
  for (const auto& [label, box] : cube.boxes) {
    ExprBox eb;
    eb.reserve(box.size());
    for (const auto& [lo, hi] : box) {
      eb.emplace_back(detail::subst_rec(lo, assignment, memo),
                      detail::subst_rec(hi, assignment, memo));
    }
    out.boxes.emplace(label, std::move(eb));
  }
  return out;
}

// Face: substitutes t_i = sign and renumbers the later parameters down.
inline ParamCube face(const ParamCube& cube, int i, int sign) {
  if (i < 1 || i > cube.arity) throw IndexOutOfRange("face index out of range");
  std::vector<ExprPtr> assignment(static_cast<size_t>(cube.arity));
  for (int v = 0; v < cube.arity; ++v) {
    if (v + 1 < i) assignment[static_cast<size_t>(v)] = ex_var(v);
    else if (v + 1 == i) assignment[static_cast<size_t>(v)] = ex_const(sign > 0 ? 1 : -1);
    else assignment[static_cast<size_t>(v)] = ex_var(v - 1);
  }
  return reparam(cube, assignment, cube.arity - 1);
}

// Degeneracy: inserts an unused parameter at position j.
inline ParamCube degenerate_at(const ParamCube& cube, int j) {
  if (j < 1 || j > cube.arity + 1) throw IndexOutOfRange("degeneracy position out of range");
  std::vector<ExprPtr> assignment(static_cast<size_t>(cube.arity));
  for (int v = 0; v < cube.arity; ++v) {
    assignment[static_cast<size_t>(v)] = ex_var(v + 1 < j ? v : v + 1);
  }
  return reparam(cube, assignment, cube.arity + 1);
}

// Connection: substitutes max(t_j, t_{j+1}) for the j-th parameter.
inline ParamCube connection_at(const ParamCube& cube, int j) {
  if (j < 1 || j > cube.arity) throw IndexOutOfRange("connection position out of range");
  std::vector<ExprPtr> assignment(static_cast<size_t>(cube.arity));
  for (int v = 0; v < cube.arity; ++v) {
    if (v + 1 < j) assignment[static_cast<size_t>(v)] = ex_var(v);
    else if (v + 1 == j) assignment[static_cast<size_t>(v)] = ex_max({ex_var(j - 1), ex_var(j)});
    else assignment[static_cast<size_t>(v)] = ex_var(v + 1);
  }
  return reparam(cube, assignment, cube.arity + 1);
}

// Reindexes a cube whose parameters carry the axis names in `axes` to a cube
// over the full parameter cube of the given arity, ignoring the other axes.
inline ParamCube projection_embed(const ParamCube& cube, const AxisSet& axes, int target_arity) {
  if (static_cast<int>(axes.size()) != cube.arity) {
    throw IndexOutOfRange("projection axis count does not match the cube arity");
  }
  std::vector<ExprPtr> assignment;
  assignment.reserve(axes.size());
  for (int axis : axes) {
    if (axis < 1 || axis > target_arity) throw IndexOutOfRange("projection axis out of range");
    assignment.push_back(ex_var(axis - 1));
  }
  return reparam(cube, assignment, target_arity);
}

struct OverlappingSets : ScvError {
  explicit OverlappingSets(const std::string& m) : ScvError(m) {}
};

// The min/max reparametrization indexed by two disjoint axis sets: a cube
// over the axes outside `t_axes` becomes a cube over all n axes, with
// min(t_j, -max{t_i : i in t_axes}) at axes in `s_axes` and max(...) at the
// remaining ones.
inline ParamCube phi_reparam(const ParamCube& cube, const AxisSet& s_axes, const AxisSet& t_axes,
                             int n) {
  if (!axis_disjoint(s_axes, t_axes)) throw OverlappingSets("axis sets must be disjoint");
  if (t_axes.empty()) throw ScvError("phi requires a nonempty second axis set");
  AxisSet kept = axis_complement(t_axes, n);
  if (static_cast<int>(kept.size()) != cube.arity) {
    throw IndexOutOfRange("phi expects a cube over the axes outside the second set");
  }
  std::vector<ExprPtr> t_vars;
  for (int axis : t_axes) t_vars.push_back(ex_var(axis - 1));
  ExprPtr threshold = ex_neg(ex_max(t_vars));
  std::vector<ExprPtr> assignment;
  assignment.reserve(kept.size());
  for (int axis : kept) {
    ExprPtr v = ex_var(axis - 1);
    assignment.push_back(axis_contains(s_axes, axis) ? ex_min({v, threshold})
                                                     : ex_max({v, threshold}));
  }
  return reparam(cube, assignment, n);
}

// min(t_k, t_{k+1}) in the last slot: turns a k-cube into a (k+1)-cube which
// restricts to the original at t_{k+1} = 1 and is constant at t_{k+1} = -1.
inline ParamCube psi_reparam(const ParamCube& cube) {
  int k = cube.arity;
  if (k < 1) throw IndexOutOfRange("psi needs at least one parameter");
  std::vector<ExprPtr> assignment(static_cast<size_t>(k));
  for (int v = 0; v + 1 < k; ++v) assignment[static_cast<size_t>(v)] = ex_var(v);
  assignment[static_cast<size_t>(k - 1)] = ex_min({ex_var(k - 1), ex_var(k)});
  return reparam(cube, assignment, k + 1);
}

// t -> -t on the listed parameter positions (1-based); all positions if empty.
inline ParamCube antipode(const ParamCube& cube, const std::vector<int>& positions = {}) {
  std::vector<ExprPtr> assignment(static_cast<size_t>(cube.arity));
  for (int v = 0; v < cube.arity; ++v) {
    bool flip = positions.empty() ||
                std::find(positions.begin(), positions.end(), v + 1) != positions.end();
    assignment[static_cast<size_t>(v)] = flip ? ex_neg(ex_var(v)) : ex_var(v);
  }
  return reparam(cube, assignment, cube.arity);
}

// Widening inclusion at the expression level; mirrors iota on configurations.
inline ParamCube cube_iota(const AxisSet& widened, int n, const ParamCube& cube) {
  for (int axis : widened) {
    if (axis < 1 || axis > n) throw ZeroInS("widened axes must lie in 1..n");
  }
  if (cube.dim != n - static_cast<int>(widened.size())) {
    throw DimMismatch("widening expects a cube of dimension " +
                      std::to_string(n - static_cast<int>(widened.size())));
  }
  std::map<int, int> axis_map = iota_axis_map(widened, n);
  ParamCube out;
  out.arity = cube.arity;
  out.dim = n;
  out.output = cube.output;
  for (const auto& [label, box] : cube.boxes) {
    ExprBox wide(static_cast<size_t>(n) + 1, {ex_const(-1), ex_const(1)});
    wide[0] = box[0];
    for (const auto& [old_axis, new_axis] : axis_map) {
      wide[static_cast<size_t>(new_axis)] = box[static_cast<size_t>(old_axis)];
    }
    Label l = label;
    if (label.color == Color::Open) l = Label::open(label.signs.reindexed(axis_map));
    out.boxes.emplace(l, std::move(wide));
  }
  return out;
}

inline ParamCube act_perm_cube(const ParamCube& cube, const std::map<Label, Label>& perm) {
  ParamCube out;
  out.arity = cube.arity;
  out.dim = cube.dim;
  out.output = cube.output;
  for (const auto& [label, box] : cube.boxes) {
    auto it = perm.find(label);
    Label target = it == perm.end() ? label : it->second;
    if (target.color != label.color) {
      throw ColorMismatch("permutation does not preserve the color of " + label.to_string());
    }
    if (!out.boxes.emplace(target, box).second) {
      throw LabelCollision("permutation is not injective at " + target.to_string());
    }
  }
  return out;
}

inline ParamCube swap_closed_cube(const ParamCube& cube, int i = 1, int j = 2) {
  return act_perm_cube(cube, closed_transposition(i, j));
}

struct CubeEqReport {
  bool equal = false;
  bool exact = true;
  std::string detail;
  std::optional<ParamPoint> witness;
};

// Endpointwise equality of two cubes, exact where the axis-aligned strategy
// applies and sampled otherwise; the report records which mode decided.
inline CubeEqReport cube_equal(const ParamCube& a, const ParamCube& b,
                               const Sampled& fallback = {}) {
  CubeEqReport report;
  if (a.arity != b.arity || a.dim != b.dim || a.output != b.output) {
    report.detail = "shape mismatch";
    return report;
  }
  if (a.boxes.size() != b.boxes.size()) {
    report.detail = "label sets differ";
    return report;
  }
  auto bt = b.boxes.begin();
  for (auto at = a.boxes.begin(); at != a.boxes.end(); ++at, ++bt) {
    if (!(at->first == bt->first)) {
      report.detail = "label sets differ at " + at->first.to_string();
      return report;
    }
    for (size_t coord = 0; coord < at->second.size(); ++coord) {
      for (int side = 0; side < 2; ++side) {
        const ExprPtr& ea = side ? at->second[coord].second : at->second[coord].first;
        const ExprPtr& eb = side ? bt->second[coord].second : bt->second[coord].first;
        EqReport eq = pl_equal_auto(ea, eb, a.arity, fallback);
        report.exact = report.exact && eq.exact;
        if (!eq.equal) {
          report.equal = false;
          report.detail = "label " + at->first.to_string() + " coordinate " +
                          std::to_string(coord) + (side ? " upper" : " lower");
          report.witness = eq.witness;
          return report;
        }
      }
    }
  }
  report.equal = true;
  return report;
}

// Degenerate iff some parameter is absent from every endpoint (syntactic
// criterion), or the cube equals a degeneracy of one of its faces.
inline bool is_degenerate(const ParamCube& cube, const Sampled& fallback = {}) {
  if (cube.arity == 0) return false;
  uint64_t full = cube.arity >= 64 ? ~0ULL : (1ULL << cube.arity) - 1;
  if ((cube.support() & full) != full) return true;
  for (int j = 1; j <= cube.arity; ++j) {
    ParamCube thin = degenerate_at(face(cube, j, -1), j);
    if (cube_equal(cube, thin, fallback).equal) return true;
  }
  return false;
}

// Pointwise operadic composition over a shared parameter cube: at every t the
// result is compose(outer(t), slot, inner(t)). Endpoints are affine
// combinations of outer endpoints with inner endpoints.
inline ParamCube pointwise_compose_one(const ParamCube& outer, const Label& slot,
                                       const ParamCube& inner) {
  auto slot_it = outer.boxes.find(slot);
  if (slot_it == outer.boxes.end()) {
    throw SlotMissing("slot " + slot.to_string() + " not present");
  }
  if (outer.dim != inner.dim) throw DimMismatch("pointwise composition dimension mismatch");
  if (outer.arity != inner.arity) {
    throw IndexOutOfRange("pointwise composition needs a shared parameter arity");
  }
  if ((slot.color == Color::Closed) != (inner.output == Color::Closed)) {
    throw ColorMismatch("slot " + slot.to_string() + " does not match the inner output color");
  }
  const ExprBox& slot_box = slot_it->second;
  const Rational half(1, 2);
  auto embed = [&](const ExprBox& box) {
    ExprBox out(box.size());
    for (size_t i = 0; i < box.size(); ++i) {
      const ExprPtr& lo = slot_box[i].first;
      const ExprPtr& hi = slot_box[i].second;
      if (i == 0 && slot.color == Color::Open) {
        ExprPtr width = ex_sub(hi, lo);
        out[i] = {ex_add(lo, ex_mul(width, box[i].first)),
                  ex_add(lo, ex_mul(width, box[i].second))};
      } else {
        ExprPtr half_width = ex_scale(half, ex_sub(hi, lo));
        out[i] = {ex_add(lo, ex_mul(half_width, ex_shift(box[i].first, Rational(1)))),
                  ex_add(lo, ex_mul(half_width, ex_shift(box[i].second, Rational(1))))};
      }
    }
    return out;
  };
  std::vector<std::pair<Label, ExprBox>> order;
  auto push_inner = [&] {
    for (const auto& [label, box] : inner.boxes) {
      Label merged = label;
      if (label.color == Color::Open) merged = Label::open(slot.signs.merged(label.signs));
      order.emplace_back(merged, embed(box));
    }
  };
  for (const auto& [label, box] : outer.boxes) {
    if (label == slot) {
      if (slot.color == Color::Closed) push_inner();
      continue;
    }
    order.emplace_back(label, box);
  }
  if (slot.color == Color::Open) push_inner();
  ParamCube result;
  result.arity = outer.arity;
  result.dim = outer.dim;
  result.output = outer.output;
  result.boxes = detail::renumber_closed(order);
  return result;
}

// Sequential multi-slot pointwise composition; closed labels of each inserted
// cube are appended in insertion order.
inline ParamCube pointwise_compose(ParamCube outer,
                                   const std::vector<std::pair<Label, ParamCube>>& slots) {
  for (const auto& [slot, inner] : slots) outer = pointwise_compose_one(outer, slot, inner);
  return outer;
}

}  // namespace scv
