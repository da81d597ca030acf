#pragma once

#include "scv/cube.hpp"

namespace scv {

struct FaceMismatch : ScvError {
  explicit FaceMismatch(const std::string& m) : ScvError(m) {}
};

struct ChainTerm {
  Rational coeff;
  ParamCube cube;
};

// Formal rational-coefficient sum of parameter cubes of equal arity,
// dimension and output color.
struct Chain {
  int arity = 0;
  int dim = 0;
  Color output = Color::Closed;
  std::vector<ChainTerm> terms;

  bool is_zero() const { return terms.empty(); }
};

inline Chain chain_zero(int arity, int dim, Color output) {
  Chain c;
  c.arity = arity;
  c.dim = dim;
  c.output = output;
  return c;
}

inline Chain chain_of(const ParamCube& cube, Rational coeff = Rational(1)) {
  Chain c = chain_zero(cube.arity, cube.dim, cube.output);
  if (!coeff.is_zero()) c.terms.push_back({std::move(coeff), cube});
  return c;
}

inline Chain chain_scale(const Rational& s, const Chain& c) {
  Chain out = chain_zero(c.arity, c.dim, c.output);
  if (s.is_zero()) return out;
  for (const auto& t : c.terms) out.terms.push_back({s * t.coeff, t.cube});
  return out;
}

inline Chain chain_add(const Chain& a, const Chain& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.arity != b.arity || a.dim != b.dim || a.output != b.output) {
    throw ScvError("adding chains of different shapes");
  }
  Chain out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

inline Chain chain_sub(const Chain& a, const Chain& b) {
  return chain_add(a, chain_scale(Rational(-1), b));
}

namespace detail {

// Deterministic off-breakpoint probe points used to bucket cubes before the
// semantic merge; denominator 1009 avoids every guard zero in the corpus.
inline const std::vector<ParamPoint>& fingerprint_points(int arity) {
  static std::map<int, std::vector<ParamPoint>> cache;
  auto it = cache.find(arity);
  if (it != cache.end()) return it->second;
  SplitMix rng(0x5ca1ab1eULL + static_cast<uint64_t>(arity) * 7919ULL);
  std::vector<ParamPoint> points;
  for (int k = 0; k < 3; ++k) {
    ParamPoint p(static_cast<size_t>(arity));
    for (int i = 0; i < arity; ++i) {
      long long num = static_cast<long long>(rng.below(2017)) - 1008;
      if (num == 0) num = 1;
      p[static_cast<size_t>(i)] = Rational(num, 1009);
    }
    points.push_back(std::move(p));
  }
  return cache.emplace(arity, std::move(points)).first->second;
}

inline size_t cube_fingerprint(const ParamCube& cube) {
  size_t h = 1469598103934665603ULL;
  auto mix = [&](size_t v) { h = hash_mix(h, v); };
  mix(static_cast<size_t>(cube.arity));
  mix(static_cast<size_t>(cube.dim));
  mix(cube.output == Color::Closed ? 2 : 3);
  for (const auto& point : fingerprint_points(cube.arity)) {
    EvalContext eval(point);
    for (const auto& [label, box] : cube.boxes) {
      mix(std::hash<std::string>{}(label.to_string()));
      for (const auto& [lo, hi] : box) {
        try {
          mix(eval(lo).hash());
          mix(eval(hi).hash());
        } catch (const SeamMismatch&) {
          mix(lo->hash);
          mix(hi->hash);
        }
      }
    }
  }
  return h;
}

// Cheap necessary test for constancy in direction j before the semantic one.
inline bool probably_constant_in(const ParamCube& cube, int j) {
  const auto& base_points = fingerprint_points(cube.arity);
  for (const auto& base : base_points) {
    ParamPoint shifted = base;
    shifted[static_cast<size_t>(j - 1)] = base[static_cast<size_t>(j - 1)] * Rational(-3, 7);
    EvalContext e1(base), e2(shifted);
    for (const auto& [label, box] : cube.boxes) {
      for (const auto& [lo, hi] : box) {
        try {
          if (!(e1(lo) == e2(lo)) || !(e1(hi) == e2(hi))) return false;
        } catch (const SeamMismatch&) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

// Degeneracy test with a probe-based fast path in front of the semantic one.
inline bool chain_term_degenerate(const ParamCube& cube, const Sampled& fallback = {}) {
  if (cube.arity == 0) return false;
  uint64_t full = cube.arity >= 64 ? ~0ULL : (1ULL << cube.arity) - 1;
  if ((cube.support() & full) != full) return true;
  for (int j = 1; j <= cube.arity; ++j) {
    if (!detail::probably_constant_in(cube, j)) continue;
    ParamCube thin = degenerate_at(face(cube, j, -1), j);
    if (cube_equal(cube, thin, fallback).equal) return true;
  }
  return false;
}

// Merges semantically equal cubes with exact coefficient arithmetic, drops
// zero terms, and orders the result deterministically.
inline Chain merge_terms(const Chain& chain, const Sampled& fallback = {},
                         bool* all_exact = nullptr) {
  struct Merged {
    Rational coeff;
    ParamCube cube;
    size_t fingerprint;
  };
  std::vector<Merged> merged;
  std::map<size_t, std::vector<size_t>> buckets;
  for (const auto& term : chain.terms) {
    if (term.coeff.is_zero()) continue;
    size_t fp = detail::cube_fingerprint(term.cube);
    auto& bucket = buckets[fp];
    bool found = false;
    for (size_t idx : bucket) {
      CubeEqReport eq = cube_equal(merged[idx].cube, term.cube, fallback);
      if (all_exact && !eq.exact) *all_exact = false;
      if (eq.equal) {
        merged[idx].coeff += term.coeff;
        found = true;
        break;
      }
    }
    if (!found) {
      merged.push_back({term.coeff, term.cube, fp});
      bucket.push_back(merged.size() - 1);
    }
  }
  std::vector<size_t> order(merged.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return merged[a].fingerprint < merged[b].fingerprint;
  });
  Chain out = chain_zero(chain.arity, chain.dim, chain.output);
  for (size_t i : order) {
    if (!merged[i].coeff.is_zero()) out.terms.push_back({merged[i].coeff, merged[i].cube});
  }
  return out;
}

inline Chain drop_degenerate(const Chain& chain, const Sampled& fallback = {}) {
  Chain out = chain_zero(chain.arity, chain.dim, chain.output);
  for (const auto& term : chain.terms) {
    if (!chain_term_degenerate(term.cube, fallback)) out.terms.push_back(term);
  }
  return out;
}

// Normalized-chain boundary: the signed sum of faces with degenerate cubes
// dropped and equal cubes merged.
inline Chain boundary(const Chain& chain, const Sampled& fallback = {},
                      bool* all_exact = nullptr) {
  if (chain.arity < 1) throw IndexOutOfRange("boundary of an arity-0 chain");
  Chain faces = chain_zero(chain.arity - 1, chain.dim, chain.output);
  for (const auto& term : chain.terms) {
    for (int i = 1; i <= chain.arity; ++i) {
      Rational sign((i % 2 == 0) ? 1 : -1);
      faces.terms.push_back({term.coeff * sign, face(term.cube, i, -1)});
      faces.terms.push_back({term.coeff * -sign, face(term.cube, i, +1)});
    }
  }
  return merge_terms(drop_degenerate(faces, fallback), fallback, all_exact);
}

inline Chain chain_perm(const Chain& chain, const std::map<Label, Label>& perm) {
  Chain out = chain_zero(chain.arity, chain.dim, chain.output);
  for (const auto& term : chain.terms) {
    out.terms.push_back({term.coeff, act_perm_cube(term.cube, perm)});
  }
  return out;
}

inline Chain swap_closed_chain(const Chain& chain, int i = 1, int j = 2) {
  return chain_perm(chain, closed_transposition(i, j));
}

// Multilinear pointwise composition of chains in the listed slots.
inline Chain compose_chains(const Chain& outer,
                            const std::vector<std::pair<Label, Chain>>& slots) {
  for (const auto& [slot, inner] : slots) {
    if (inner.is_zero()) return chain_zero(outer.arity, outer.dim, outer.output);
  }
  if (outer.is_zero()) return outer;
  std::vector<ChainTerm> current;
  for (const auto& t : outer.terms) current.push_back(t);
  for (const auto& [slot, inner] : slots) {
    std::vector<ChainTerm> next;
    for (const auto& t : current) {
      for (const auto& it : inner.terms) {
        next.push_back({t.coeff * it.coeff, pointwise_compose_one(t.cube, slot, it.cube)});
      }
    }
    current = std::move(next);
  }
  Chain out = chain_zero(outer.arity, outer.dim, outer.output);
  out.terms = std::move(current);
  return out;
}

// One factor of a shared-last-parameter composite: a chain whose parameters
// are its own block followed by the shared final parameter.
struct DeltaFactor {
  Label slot;
  Chain chain;  // arity = own parameter count + 1
};

inline Chain chain_reparam(const Chain& chain, const std::vector<ExprPtr>& assignment,
                           int new_arity) {
  Chain out = chain_zero(new_arity, chain.dim, chain.output);
  for (const auto& term : chain.terms) {
    out.terms.push_back({term.coeff, reparam(term.cube, assignment, new_arity)});
  }
  return out;
}

// Embeds an (own + 1)-ary chain into a composite of total arity `total`: own
// parameters go to positions offset..offset+own-1 and the last parameter to
// the shared final position.
inline Chain delta_embed(const Chain& chain, int offset, int total) {
  int own = chain.arity - 1;
  if (own < 0) throw IndexOutOfRange("delta factor needs the shared final parameter");
  std::vector<ExprPtr> assignment(static_cast<size_t>(chain.arity));
  for (int v = 0; v < own; ++v) assignment[static_cast<size_t>(v)] = ex_var(offset + v);
  assignment[static_cast<size_t>(own)] = ex_var(total - 1);
  return chain_reparam(chain, assignment, total);
}

// Shared-last-parameter composition: the result's parameters are the outer
// factor's own block, then each inserted factor's own block in order, then
// one final parameter fed to every factor. Bilinear; a zero factor gives the
// zero chain. Slots not listed pass through untouched.
inline Chain delta_compose(const Chain& x, const std::vector<DeltaFactor>& factors) {
  int total = x.arity - 1;
  if (total < 0) throw IndexOutOfRange("delta outer factor needs the shared final parameter");
  for (const auto& f : factors) total += f.chain.arity - 1;
  total += 1;
  Chain outer = delta_embed(x, 0, total);
  std::vector<std::pair<Label, Chain>> slots;
  int offset = x.arity - 1;
  for (const auto& f : factors) {
    slots.emplace_back(f.slot, delta_embed(f.chain, offset, total));
    offset += f.chain.arity - 1;
  }
  return compose_chains(outer, slots);
}

// Linear-groupoid composition in direction i: a - s_i(x) + b where x is the
// shared face d_i^+ a = d_i^- b.
inline Chain groupoid_add(const ParamCube& a, const ParamCube& b, int i,
                          const Sampled& fallback = {}) {
  ParamCube shared = face(a, i, +1);
  CubeEqReport eq = cube_equal(shared, face(b, i, -1), fallback);
  if (!eq.equal) {
    throw FaceMismatch("groupoid composition requires d_i^+ a = d_i^- b (" + eq.detail + ")");
  }
  Chain out = chain_of(a);
  out = chain_add(out, chain_of(degenerate_at(shared, i), Rational(-1)));
  out = chain_add(out, chain_of(b));
  return out;
}

namespace detail {

inline std::vector<std::vector<int>> reflection_subsets(int arity) {
  std::vector<std::vector<int>> subsets;
  for (size_t bits = 0; bits < (1ULL << arity); ++bits) {
    std::vector<int> r;
    for (int i = 0; i < arity; ++i) {
      if (bits & (1ULL << i)) r.push_back(i + 1);
    }
    subsets.push_back(std::move(r));
  }
  return subsets;
}

// Fingerprint invariant under parameter reflections: the sorted value hashes
// over the reflection orbit of the probe points.
inline size_t cube_fingerprint_mod_reflection(const ParamCube& cube) {
  std::vector<size_t> hashes;
  for (const auto& base : fingerprint_points(cube.arity)) {
    for (size_t bits = 0; bits < (1ULL << cube.arity); ++bits) {
      ParamPoint p = base;
      for (int i = 0; i < cube.arity; ++i) {
        if (bits & (1ULL << i)) p[static_cast<size_t>(i)] = -p[static_cast<size_t>(i)];
      }
      size_t h = 1469598103934665603ULL;
      EvalContext eval(p);
      for (const auto& [label, box] : cube.boxes) {
        h = hash_mix(h, std::hash<std::string>{}(label.to_string()));
        for (const auto& [lo, hi] : box) {
          try {
            h = hash_mix(h, eval(lo).hash());
            h = hash_mix(h, eval(hi).hash());
          } catch (const SeamMismatch&) {
            h = hash_mix(h, lo->hash);
          }
        }
      }
      hashes.push_back(h);
    }
  }
  std::sort(hashes.begin(), hashes.end());
  size_t h = static_cast<size_t>(cube.arity) * 1099511628211ULL;
  for (size_t v : hashes) h = hash_mix(h, v);
  return h;
}

}  // namespace detail

// Merges terms in the quotient by the orientation action of parameter
// reflections: a cube reparametrized by flipping a set of parameters is
// identified with (-1)^{#flips} times itself. Cancellation in this quotient
// is what the boundary-antipodal matching of the symmetrized cycles
// establishes; plain merging is the special case of the empty flip set.
inline Chain merge_terms_mod_reflection(const Chain& chain, const Sampled& fallback = {}) {
  struct Merged {
    Rational coeff;
    ParamCube cube;
    size_t fingerprint;
  };
  std::vector<Merged> merged;
  std::map<size_t, std::vector<size_t>> buckets;
  auto subsets = detail::reflection_subsets(chain.arity);
  for (const auto& term : chain.terms) {
    if (term.coeff.is_zero()) continue;
    size_t fp = detail::cube_fingerprint_mod_reflection(term.cube);
    auto& bucket = buckets[fp];
    bool found = false;
    for (size_t idx : bucket) {
      for (const auto& flips : subsets) {
        ParamCube image = flips.empty() ? merged[idx].cube : antipode(merged[idx].cube, flips);
        if (cube_equal(term.cube, image, fallback).equal) {
          Rational orientation(flips.size() % 2 == 0 ? 1 : -1);
          merged[idx].coeff += term.coeff * orientation;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      merged.push_back({term.coeff, term.cube, fp});
      bucket.push_back(merged.size() - 1);
    }
  }
  std::vector<size_t> order(merged.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return merged[a].fingerprint < merged[b].fingerprint;
  });
  Chain out = chain_zero(chain.arity, chain.dim, chain.output);
  for (size_t i : order) {
    if (!merged[i].coeff.is_zero()) out.terms.push_back({merged[i].coeff, merged[i].cube});
  }
  return out;
}

struct ChainEqReport {
  bool equal = false;
  bool exact = true;
  std::string detail;
};

// Equality of normalized chains: the difference merges to zero after
// degenerate terms are dropped.
inline ChainEqReport chain_equal(const Chain& a, const Chain& b, const Sampled& fallback = {}) {
  ChainEqReport report;
  Chain diff = chain_sub(a, b);
  bool exact = true;
  Chain residue = merge_terms(drop_degenerate(diff, fallback), fallback, &exact);
  report.exact = exact;
  if (residue.is_zero()) {
    report.equal = true;
    return report;
  }
  report.equal = false;
  const auto& term = residue.terms.front();
  report.detail = "residue of " + std::to_string(residue.terms.size()) +
                  " terms; first has coefficient " + term.coeff.to_string();
  try {
    ParamPoint zero(static_cast<size_t>(residue.arity), Rational(0));
    report.detail += " and value " + instantiate(term.cube, zero).to_string();
  } catch (const ScvError&) {
  }
  return report;
}

}  // namespace scv
