#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scv/rational.hpp"

namespace scv {

struct SlotMissing : ScvError {
  explicit SlotMissing(const std::string& m) : ScvError(m) {}
};
struct ColorMismatch : ScvError {
  explicit ColorMismatch(const std::string& m) : ScvError(m) {}
};
struct DimMismatch : ScvError {
  explicit DimMismatch(const std::string& m) : ScvError(m) {}
};
struct LabelCollision : ScvError {
  explicit LabelCollision(const std::string& m) : ScvError(m) {}
};
struct ZeroInS : ScvError {
  explicit ZeroInS(const std::string& m) : ScvError(m) {}
};

enum class Color { Open, Closed };

// Sorted subset of coordinate axes {1..n}; axis 0 is the distinguished one
// and never appears here.
using AxisSet = std::vector<int>;

inline AxisSet axis_range(int n) {
  AxisSet s;
  for (int i = 1; i <= n; ++i) s.push_back(i);
  return s;
}

inline bool axis_contains(const AxisSet& s, int axis) {
  return std::find(s.begin(), s.end(), axis) != s.end();
}

inline AxisSet axis_complement(const AxisSet& s, int n) {
  AxisSet out;
  for (int i = 1; i <= n; ++i) {
    if (!axis_contains(s, i)) out.push_back(i);
  }
  return out;
}

inline AxisSet axis_union(const AxisSet& a, const AxisSet& b) {
  AxisSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline AxisSet axis_minus(const AxisSet& a, int axis) {
  AxisSet out;
  for (int i : a) {
    if (i != axis) out.push_back(i);
  }
  return out;
}

inline bool axis_disjoint(const AxisSet& a, const AxisSet& b) {
  for (int i : a) {
    if (axis_contains(b, i)) return false;
  }
  return true;
}

// Open-input label: a string of signs indexed by a sorted set of axes. The
// empty string is the single open color "o". Signs are stored as +1 / -1.
struct SignString {
  std::vector<std::pair<int, int>> entries;  // (axis, sign), sorted by axis

  static SignString empty() { return {}; }

  static SignString over(const AxisSet& axes, const std::vector<int>& signs) {
    if (axes.size() != signs.size()) throw ScvError("sign string length mismatch");
    SignString s;
    for (size_t i = 0; i < axes.size(); ++i) s.entries.emplace_back(axes[i], signs[i]);
    return s;
  }

  size_t size() const { return entries.size(); }

  AxisSet axes() const {
    AxisSet a;
    for (const auto& [axis, sign] : entries) a.push_back(axis);
    return a;
  }

  int sign_at(int axis) const {
    for (const auto& [ax, sign] : entries) {
      if (ax == axis) return sign;
    }
    throw ScvError("axis not present in sign string");
  }

  // Product of the entries; +1 for the empty string.
  int sgn() const {
    int p = 1;
    for (const auto& [axis, sign] : entries) p *= sign;
    return p;
  }

  SignString negated() const {
    SignString s = *this;
    for (auto& [axis, sign] : s.entries) sign = -sign;
    return s;
  }

  SignString restricted(const AxisSet& axes) const {
    SignString s;
    for (const auto& [axis, sign] : entries) {
      if (axis_contains(axes, axis)) s.entries.emplace_back(axis, sign);
    }
    return s;
  }

  // Concatenation over disjoint axis sets, reordered to natural axis order.
  SignString merged(const SignString& other) const {
    SignString s;
    size_t i = 0, j = 0;
    while (i < entries.size() || j < other.entries.size()) {
      if (j == other.entries.size() ||
          (i < entries.size() && entries[i].first < other.entries[j].first)) {
        s.entries.push_back(entries[i++]);
      } else if (i == entries.size() || other.entries[j].first < entries[i].first) {
        s.entries.push_back(other.entries[j++]);
      } else {
        throw LabelCollision("sign strings overlap on axis " +
                             std::to_string(entries[i].first));
      }
    }
    return s;
  }

  SignString reindexed(const std::map<int, int>& axis_map) const {
    SignString s;
    for (const auto& [axis, sign] : entries) {
      auto it = axis_map.find(axis);
      if (it == axis_map.end()) throw ScvError("axis missing from reindex map");
      s.entries.emplace_back(it->second, sign);
    }
    std::sort(s.entries.begin(), s.entries.end());
    return s;
  }

  // "o" for the empty string; "+-" when the axes are 1..k; "1:+,4:-" otherwise.
  std::string to_string() const {
    if (entries.empty()) return "o";
    bool consecutive = true;
    for (size_t i = 0; i < entries.size(); ++i) {
      consecutive = consecutive && entries[i].first == static_cast<int>(i) + 1;
    }
    std::string out;
    if (consecutive) {
      for (const auto& [axis, sign] : entries) out += sign > 0 ? '+' : '-';
      return out;
    }
    for (const auto& [axis, sign] : entries) {
      if (!out.empty()) out += ',';
      out += std::to_string(axis);
      out += ':';
      out += sign > 0 ? '+' : '-';
    }
    return out;
  }

  friend auto operator<=>(const SignString&, const SignString&) = default;
  friend bool operator==(const SignString&, const SignString&) = default;
};

// Enumerates all sign strings over the given axes, in lexicographic order
// with '-' before '+'.
inline std::vector<SignString> all_sign_strings(const AxisSet& axes) {
  std::vector<SignString> out;
  size_t count = 1ULL << axes.size();
  for (size_t bits = 0; bits < count; ++bits) {
    std::vector<int> signs(axes.size());
    for (size_t i = 0; i < axes.size(); ++i) {
      signs[i] = (bits >> (axes.size() - 1 - i)) & 1 ? 1 : -1;
    }
    out.push_back(SignString::over(axes, signs));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Label {
  Color color = Color::Closed;
  int closed_index = 0;   // c_1, c_2, ... for closed labels
  SignString signs;       // for open labels

  static Label closed(int index) {
    Label l;
    l.color = Color::Closed;
    l.closed_index = index;
    return l;
  }

  static Label open(SignString s) {
    Label l;
    l.color = Color::Open;
    l.signs = std::move(s);
    return l;
  }

  std::string to_string() const {
    if (color == Color::Closed) return "c" + std::to_string(closed_index);
    return signs.to_string();
  }

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
};

using Box = std::vector<std::pair<Rational, Rational>>;

// A labeled family of rectilinear boxes in [-1,1]^{n+1}: an element of the
// little-cubes operad (closed output) or of the Swiss-Cheese operad's
// open-output component.
struct Configuration {
  int dim = 0;  // ambient dimension is dim + 1
  Color output = Color::Closed;
  std::map<Label, Box> boxes;

  friend bool operator==(const Configuration&, const Configuration&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << (output == Color::Closed ? "closed" : "open") << " n=" << dim << " {";
    bool first = true;
    for (const auto& [label, box] : boxes) {
      if (!first) os << "; ";
      first = false;
      os << label.to_string() << ": ";
      for (size_t i = 0; i < box.size(); ++i) {
        if (i) os << "x";
        os << "[" << box[i].first.to_string() << "," << box[i].second.to_string() << "]";
      }
    }
    os << "}";
    return os.str();
  }
};

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v.kind + ": " + v.detail;
    }
    return s.empty() ? "ok" : s;
  }
};

inline bool boxes_interior_disjoint(const Box& a, const Box& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].first < b[i].second && b[i].first < a[i].second)) return true;
  }
  return false;
}

// Checks every structural invariant; violations are reported, not thrown.
// require_open_input enforces that open-output configurations have at least
// one open input; disabling it models the larger Swiss-Cheese operad.
inline ValidityReport validate(const Configuration& config, bool require_open_input = true) {
  ValidityReport report;
  auto bad = [&](const std::string& kind, const std::string& detail) {
    report.violations.push_back({kind, detail});
  };
  const Rational one(1), minus_one(-1), zero(0);
  for (const auto& [label, box] : config.boxes) {
    if (static_cast<int>(box.size()) != config.dim + 1) {
      bad("coordinate-count", label.to_string());
      continue;
    }
    for (size_t i = 0; i < box.size(); ++i) {
      if (!(box[i].first < box[i].second)) {
        bad("empty-interval", label.to_string() + " coordinate " + std::to_string(i));
      }
      if (box[i].first < minus_one || one < box[i].second) {
        bad("outside-ambient", label.to_string() + " coordinate " + std::to_string(i));
      }
    }
    if (config.output == Color::Closed && label.color == Color::Open) {
      bad("open-input-in-closed-output", label.to_string());
    }
    if (config.output == Color::Open) {
      if (box[0].first < zero) {
        bad("lower-corner-left-of-face", label.to_string());
      }
      if (label.color == Color::Open && !(box[0].first == zero)) {
        bad("open-box-off-face", label.to_string());
      }
    }
  }
  if (config.output == Color::Open && require_open_input) {
    bool has_open = false;
    for (const auto& [label, box] : config.boxes) has_open |= label.color == Color::Open;
    if (!has_open) bad("no-open-input", "open-output configuration with closed inputs only");
  }
  for (auto it = config.boxes.begin(); it != config.boxes.end(); ++it) {
    for (auto jt = std::next(it); jt != config.boxes.end(); ++jt) {
      if (it->second.size() != jt->second.size()) continue;
      if (!boxes_interior_disjoint(it->second, jt->second)) {
        bad("overlapping-interiors", it->first.to_string() + " and " + jt->first.to_string());
      }
    }
  }
  return report;
}

namespace detail {

// Renumbers closed labels to consecutive c_1..c_k. `order` lists the labels
// in the order their boxes were assembled: the outer operation's remaining
// closed inputs first, then each inserted operation's, in insertion order.
template <typename BoxT>
std::map<Label, BoxT> renumber_closed(const std::vector<std::pair<Label, BoxT>>& order) {
  std::map<Label, BoxT> out;
  int next_closed = 1;
  for (const auto& [label, box] : order) {
    Label l = label;
    if (l.color == Color::Closed) l.closed_index = next_closed++;
    if (!out.emplace(l, box).second) {
      throw LabelCollision("duplicate label " + l.to_string() + " after composition");
    }
  }
  return out;
}

}  // namespace detail

// Operadic composition: the slot box determines an affine embedding of the
// inner operation's ambient cube. A closed slot embeds [-1,1]^{n+1}; an open
// slot embeds [0,1] x [-1,1]^n, so its first coordinate scales from [0,1].
// Closed labels: a closed slot is replaced in place by the inner's closed
// labels (so identities are strict units); through an open slot the inner's
// closed labels are appended after the outer's. Open labels of the inner are
// concatenated with the slot's sign string, indices in natural order.
inline Configuration compose(const Configuration& outer, const Label& slot,
                             const Configuration& inner) {
  auto slot_it = outer.boxes.find(slot);
  if (slot_it == outer.boxes.end()) {
    throw SlotMissing("slot " + slot.to_string() + " not present");
  }
  if (outer.dim != inner.dim) {
    throw DimMismatch("composing configurations of dimensions " + std::to_string(outer.dim) +
                      " and " + std::to_string(inner.dim));
  }
  if ((slot.color == Color::Closed) != (inner.output == Color::Closed)) {
    throw ColorMismatch("slot " + slot.to_string() + " does not match the inner output color");
  }
  const Box& slot_box = slot_it->second;
  auto embed = [&](const Box& box) {
    Box out(box.size());
    for (size_t i = 0; i < box.size(); ++i) {
      const Rational& lo = slot_box[i].first;
      const Rational& hi = slot_box[i].second;
      if (i == 0 && slot.color == Color::Open) {
        // Inner ambient coordinate 0 ranges over [0,1].
        Rational width = hi - lo;
        out[i] = {lo + width * box[i].first, lo + width * box[i].second};
      } else {
        Rational half = (hi - lo) / Rational(2);
        out[i] = {lo + half * (box[i].first + Rational(1)),
                  lo + half * (box[i].second + Rational(1))};
      }
    }
    return out;
  };
  std::vector<std::pair<Label, Box>> order;
  auto push_inner = [&] {
    for (const auto& [label, box] : inner.boxes) {
      Label merged = label;
      if (label.color == Color::Open) {
        merged = Label::open(slot.signs.merged(label.signs));
      }
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
  Configuration result;
  result.dim = outer.dim;
  result.output = outer.output;
  result.boxes = detail::renumber_closed(order);
  return result;
}

// Sequential composition in several slots; the slot labels refer to the
// configuration state at the time each insertion is applied, and each
// insertion appends the inner closed labels in order.
inline Configuration compose_many(Configuration outer,
                                  const std::vector<std::pair<Label, Configuration>>& slots) {
  for (const auto& [slot, inner] : slots) outer = compose(outer, slot, inner);
  return outer;
}

// Relabels boxes along a color-preserving bijection; geometry is unchanged.
inline Configuration act_perm(const Configuration& config, const std::map<Label, Label>& perm) {
  Configuration out;
  out.dim = config.dim;
  out.output = config.output;
  for (const auto& [label, box] : config.boxes) {
    auto it = perm.find(label);
    Label target = it == perm.end() ? label : it->second;
    if (target.color != label.color) {
      throw ColorMismatch("permutation does not preserve the color of " + label.to_string());
    }
    if (!out.boxes.emplace(target, box).second) {
      throw LabelCollision("permutation is not injective at " + target.to_string());
    }
  }
  if (out.boxes.size() != config.boxes.size()) {
    throw LabelCollision("permutation is not a bijection of the label set");
  }
  return out;
}

inline std::map<Label, Label> closed_transposition(int i, int j) {
  return {{Label::closed(i), Label::closed(j)}, {Label::closed(j), Label::closed(i)}};
}

inline Configuration swap_closed(const Configuration& config, int i = 1, int j = 2) {
  return act_perm(config, closed_transposition(i, j));
}

// Axis map used by the widening inclusions: coordinate j of the smaller
// ambient goes to the j-th axis not being widened.
inline std::map<int, int> iota_axis_map(const AxisSet& widened, int n) {
  AxisSet kept = axis_complement(widened, n);
  std::map<int, int> axis_map;
  for (size_t j = 0; j < kept.size(); ++j) axis_map[static_cast<int>(j) + 1] = kept[j];
  return axis_map;
}

// Widening inclusion: coordinate 0 is kept, axes in `widened` become [-1,1],
// and the remaining axes receive the old coordinates in order. Open labels
// are reindexed along the same axis map.
inline Configuration iota(const AxisSet& widened, int n, const Configuration& config) {
  for (int axis : widened) {
    if (axis < 1 || axis > n) throw ZeroInS("widened axes must lie in 1..n");
  }
  if (config.dim != n - static_cast<int>(widened.size())) {
    throw DimMismatch("widening expects a configuration of dimension " +
                      std::to_string(n - static_cast<int>(widened.size())));
  }
  std::map<int, int> axis_map = iota_axis_map(widened, n);
  Configuration out;
  out.dim = n;
  out.output = config.output;
  for (const auto& [label, box] : config.boxes) {
    Box wide(static_cast<size_t>(n) + 1, {Rational(-1), Rational(1)});
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

// Closed identity: one closed box filling [-1,1]^{n+1}. Open identity: one
// open box filling the half ambient [0,1] x [-1,1]^n.
inline Configuration identity_config(Color color, int n) {
  Configuration out;
  out.dim = n;
  out.output = color;
  Box box(static_cast<size_t>(n) + 1, {Rational(-1), Rational(1)});
  if (color == Color::Closed) {
    out.boxes.emplace(Label::closed(1), std::move(box));
  } else {
    box[0] = {Rational(0), Rational(1)};
    out.boxes.emplace(Label::open(SignString::empty()), std::move(box));
  }
  return out;
}

}  // namespace scv
