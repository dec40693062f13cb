#pragma once

// Fixed point data of a semi-free Hamiltonian circle action on a closed
// 6-manifold, plus structural validation that does not need a walk.

#include "dhwalk/errors.hpp"
#include "dhwalk/lattice.hpp"
#include "dhwalk/rational.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace dhwalk {

enum class ComponentKind { point, surface, fourfold };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::point:
      return "point";
    case ComponentKind::surface:
      return "surface";
    case ComponentKind::fourfold:
      break;
  }
  return "fourfold";
}

/// Complex codimension of a fixed component in a 6-manifold.
inline int complex_codimension(ComponentKind k) {
  switch (k) {
    case ComponentKind::point:
      return 3;
    case ComponentKind::surface:
      return 2;
    case ComponentKind::fourfold:
      break;
  }
  return 1;
}

/// Ranks of the negative and positive normal subbundles (complex ranks).
struct NormalSplit {
  int negative = 0;
  int positive = 0;
  friend auto operator<=>(const NormalSplit&, const NormalSplit&) = default;
};

/// Basis in which a level's class coordinates (Euler class, surface
/// classes) are written.
enum class LevelBasis { blowup, product };

inline IntersectionLattice lattice_for(LevelBasis basis, std::size_t rank) {
  if (basis == LevelBasis::product) {
    if (rank != 2) throw DimensionError("product basis has rank 2");
    return IntersectionLattice::product();
  }
  if (rank == 0) throw DimensionError("class of rank 0");
  return IntersectionLattice::blowup_plane(static_cast<int>(rank) - 1);
}

struct FixedComponent {
  ComponentKind kind = ComponentKind::point;
  int index = 0;  ///< Morse index of H, = 2 * normal_split.negative
  std::optional<int> genus;
  std::optional<LatticeClass> reduced_class;  ///< class of the image in the reduced space at its level
  NormalSplit normal_split;
  std::optional<int> normal_euler;
  // Four-dimensional extrema only.
  std::optional<IntMatrix> gram;
  std::optional<RationalClass> symplectic_class;
  std::optional<LatticeClass> normal_euler_class;

  int coindex() const { return 2 * normal_split.positive; }

  static FixedComponent point(int index) {
    FixedComponent c;
    c.kind = ComponentKind::point;
    c.index = index;
    c.normal_split = {index / 2, 3 - index / 2};
    return c;
  }

  static FixedComponent surface(int index, int genus, LatticeClass reduced_class) {
    FixedComponent c;
    c.kind = ComponentKind::surface;
    c.index = index;
    c.genus = genus;
    c.reduced_class = std::move(reduced_class);
    c.normal_split = {index / 2, 2 - index / 2};
    return c;
  }

  friend bool operator==(const FixedComponent&, const FixedComponent&) = default;
};

struct CriticalDatum {
  Rational value;
  std::vector<FixedComponent> components;
  std::optional<LatticeClass> euler_minus;  ///< e(P-) arriving at this level (full mode)
  LevelBasis basis = LevelBasis::blowup;
  std::optional<bool> declared_simple;

  /// All components share one index.
  bool simple() const {
    return std::all_of(components.begin(), components.end(),
                       [&](const FixedComponent& c) { return c.index == components.front().index; });
  }

  bool has_index(int index) const {
    return std::any_of(components.begin(), components.end(), [&](const FixedComponent& c) { return c.index == index; });
  }

  friend bool operator==(const CriticalDatum&, const CriticalDatum&) = default;
};

enum class DataMode { full, small };

inline const char* to_string(DataMode m) { return m == DataMode::full ? "full" : "small"; }

class FixedPointData {
 public:
  FixedPointData() = default;
  FixedPointData(std::string name, DataMode mode, int dim = 6) : name_(std::move(name)), mode_(mode), dim_(dim) {}

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  DataMode mode() const noexcept { return mode_; }
  int dim() const noexcept { return dim_; }
  const std::vector<CriticalDatum>& levels() const noexcept { return levels_; }

  /// Adds a component, merging into an existing level with the same value.
  void add_component(const Rational& value, FixedComponent component) {
    level_at(value).components.push_back(std::move(component));
  }

  /// Appends a level verbatim (no merging or sorting); used by tests and
  /// by parsers that want validation to see the raw order.
  void append_level(CriticalDatum level) {
    if (mode_ == DataMode::small && level.euler_minus)
      throw ModeError("small fixed point data cannot carry Euler classes");
    levels_.push_back(std::move(level));
  }

  /// Adds a level, merging with an existing level of the same value.
  void merge_level(CriticalDatum level) {
    if (mode_ == DataMode::small && level.euler_minus)
      throw ModeError("small fixed point data cannot carry Euler classes");
    auto& target = level_at(level.value);
    for (auto& c : level.components) target.components.push_back(std::move(c));
    if (level.euler_minus) {
      if (target.euler_minus && *target.euler_minus != *level.euler_minus)
        throw InconsistentData("conflicting Euler classes at level " + to_string(level.value));
      target.euler_minus = std::move(level.euler_minus);
      target.basis = level.basis;
    } else if (target.components.size() == level.components.size()) {
      target.basis = level.basis;
    }
    if (level.declared_simple) target.declared_simple = level.declared_simple;
  }

  void set_euler_minus(const Rational& value, LatticeClass e, LevelBasis basis = LevelBasis::blowup) {
    if (mode_ == DataMode::small) throw ModeError("small fixed point data cannot carry Euler classes");
    auto& level = level_at(value);
    level.euler_minus = std::move(e);
    level.basis = basis;
  }

  /// Copy in full mode (Euler entries may then be filled in).
  FixedPointData as_full() const {
    FixedPointData d = *this;
    d.mode_ = DataMode::full;
    return d;
  }

  /// Copy in small mode with every Euler entry dropped.
  FixedPointData as_small() const {
    FixedPointData d = *this;
    d.mode_ = DataMode::small;
    for (auto& l : d.levels_) l.euler_minus.reset();
    return d;
  }

  const CriticalDatum* find_level(const Rational& value) const {
    for (const auto& l : levels_)
      if (l.value == value) return &l;
    return nullptr;
  }

  bool all_points() const {
    for (const auto& l : levels_)
      for (const auto& c : l.components)
        if (c.kind != ComponentKind::point) return false;
    return true;
  }

  bool all_levels_simple() const {
    return std::all_of(levels_.begin(), levels_.end(), [](const CriticalDatum& l) { return l.simple(); });
  }

  friend bool operator==(const FixedPointData&, const FixedPointData&) = default;

 private:
  CriticalDatum& level_at(const Rational& value) {
    auto it = std::find_if(levels_.begin(), levels_.end(), [&](const CriticalDatum& l) { return l.value == value; });
    if (it != levels_.end()) return *it;
    auto pos = std::find_if(levels_.begin(), levels_.end(), [&](const CriticalDatum& l) { return value < l.value; });
    CriticalDatum fresh;
    fresh.value = value;
    return *levels_.insert(pos, std::move(fresh));
  }

  std::string name_;
  DataMode mode_ = DataMode::full;
  int dim_ = 6;
  std::vector<CriticalDatum> levels_;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
  std::string code;
  std::string message;
  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  void add(std::string code, std::string message) { issues.push_back({std::move(code), std::move(message)}); }
  bool has(const std::string& code) const {
    return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.code == code; });
  }
  void append(const ValidationReport& other) { issues.insert(issues.end(), other.issues.begin(), other.issues.end()); }
};

namespace detail {

inline std::string at_level(const Rational& v) { return "level " + to_string(v); }

inline void validate_component(const FixedComponent& c, const Rational& value, bool extremal, ValidationReport& report) {
  const std::string where = at_level(value) + ", " + to_string(c.kind);
  if (c.index % 2 != 0 || c.index < 0 || c.index > 6) {
    report.add("index-range", where + ": index " + std::to_string(c.index) + " must be even in {0,2,4,6}");
    return;
  }
  const int codim = complex_codimension(c.kind);
  if (c.normal_split.negative < 0 || c.normal_split.positive < 0 ||
      c.normal_split.negative + c.normal_split.positive != codim)
    report.add("normal-split", where + ": normal ranks must be nonnegative and sum to " + std::to_string(codim));
  if (c.index != 2 * c.normal_split.negative)
    report.add("semi-free", where + ": index " + std::to_string(c.index) + " disagrees with negative normal rank " +
                                std::to_string(c.normal_split.negative));
  if (!extremal) {
    if (c.normal_split.negative == 0) report.add("local-minimum", where + ": non-extremal component with index 0");
    if (c.normal_split.positive == 0) report.add("local-maximum", where + ": non-extremal component with coindex 0");
    if (c.index != 2 && c.index != 4)
      report.add("index-range", where + ": non-extremal components must have index 2 or 4");
    if (c.kind == ComponentKind::fourfold) report.add("kind", where + ": 4-dimensional components must be extremal");
    if (c.kind == ComponentKind::surface && !c.reduced_class)
      report.add("reduced-class", where + ": surface needs its reduced class");
  }
  if (c.kind == ComponentKind::point && (c.genus || c.reduced_class))
    report.add("kind", where + ": points carry no genus or reduced class");
  if (c.genus && *c.genus < 0) report.add("genus", where + ": genus must be nonnegative");
  if (c.kind == ComponentKind::fourfold && extremal) {
    if (!c.gram) report.add("fourfold", where + ": 4-dimensional extremum needs a gram matrix");
    if (!c.symplectic_class) report.add("fourfold", where + ": 4-dimensional extremum needs its symplectic class");
    if (c.gram && c.symplectic_class && c.symplectic_class->size() != c.gram->size())
      report.add("fourfold", where + ": symplectic class rank differs from gram rank");
  }
}

}  // namespace detail

/// Structural checks that do not need a walk. All problems are report
/// entries; nothing throws.
inline ValidationReport validate_structure(const FixedPointData& data) {
  ValidationReport report;
  if (data.dim() != 6) report.add("dimension", "ambient dimension must be 6, got " + std::to_string(data.dim()));
  const auto& levels = data.levels();
  if (levels.size() < 2) {
    report.add("extrema", "need at least a minimum and a maximum level");
    return report;
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].value == levels[i - 1].value)
      report.add("duplicate-value", "critical value " + to_string(levels[i].value) + " listed twice");
    else if (levels[i].value < levels[i - 1].value)
      report.add("order", "critical values are not increasing at " + to_string(levels[i].value));
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& level = levels[i];
    const bool first = i == 0, last = i + 1 == levels.size();
    if (level.components.empty()) {
      report.add("empty-level", detail::at_level(level.value) + " has no components");
      continue;
    }
    if (first) {
      if (level.components.size() != 1) report.add("extrema", "minimum must be a single connected component");
      if (level.components.front().normal_split.negative != 0 || level.components.front().index != 0)
        report.add("extrema", "minimum must have index 0");
    }
    if (last) {
      if (level.components.size() != 1) report.add("extrema", "maximum must be a single connected component");
      if (level.components.front().normal_split.positive != 0)
        report.add("extrema", "maximum must have coindex 0");
    }
    for (const auto& c : level.components) detail::validate_component(c, level.value, first || last, report);
    if (level.declared_simple && *level.declared_simple && !level.simple())
      report.add("simple", detail::at_level(level.value) + " is marked simple but mixes index 2 and coindex 2");
    if (data.mode() == DataMode::small && level.euler_minus)
      report.add("mode", detail::at_level(level.value) + ": small data cannot carry Euler classes");
    if ((first || last) && level.euler_minus)
      report.add("euler", detail::at_level(level.value) + ": extremal levels carry no incoming Euler class");
  }
  return report;
}

enum class CheckStatus { pass, fail, not_applicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::not_applicable:
      break;
  }
  return "not-applicable";
}

struct IsolatedValueCheck {
  CheckStatus status = CheckStatus::not_applicable;
  std::optional<std::array<Rational, 3>> lambdas;  ///< sorted index-2 values
  ValidationReport report;
};

/// For isolated fixed points: the (value, index) multiset must be
/// {(0,0), (li,2), (li+lj,4), (l1+l2+l3,6)} for the three index-2 values.
inline IsolatedValueCheck isolated_value_lattice_check(const FixedPointData& data) {
  IsolatedValueCheck out;
  if (data.dim() != 6 || !data.all_points() || data.levels().empty()) {
    out.report.add("not-applicable", "isolated value check needs 6-dimensional data with isolated fixed points");
    return out;
  }
  std::vector<std::pair<Rational, int>> declared;
  std::vector<Rational> index2;
  for (const auto& level : data.levels())
    for (const auto& c : level.components) {
      declared.emplace_back(level.value, c.index);
      if (c.index == 2) index2.push_back(level.value);
    }
  std::sort(declared.begin(), declared.end());
  out.status = CheckStatus::fail;
  if (declared.size() != 8) {
    out.report.add("fixed-point-count", "isolated fixed points must number 8, got " + std::to_string(declared.size()));
    return out;
  }
  if (index2.size() != 3) {
    out.report.add("index-pattern", "need exactly three index-2 points, got " + std::to_string(index2.size()));
    return out;
  }
  std::sort(index2.begin(), index2.end());
  const Rational base = declared.front().first;
  std::array<Rational, 3> l{index2[0] - base, index2[1] - base, index2[2] - base};
  std::vector<std::pair<Rational, int>> expected{{base, 0},
                                                 {base + l[0], 2},
                                                 {base + l[1], 2},
                                                 {base + l[2], 2},
                                                 {base + l[0] + l[1], 4},
                                                 {base + l[0] + l[2], 4},
                                                 {base + l[1] + l[2], 4},
                                                 {base + l[0] + l[1] + l[2], 6}};
  std::sort(expected.begin(), expected.end());
  if (l[0] <= 0) out.report.add("value-lattice", "index-2 values must lie strictly above the minimum");
  for (std::size_t i = 0; i < 8; ++i) {
    if (declared[i] != expected[i]) {
      out.report.add("value-lattice", "critical values do not match {0, li, li+lj, l1+l2+l3} for (l1,l2,l3) = (" +
                                          to_string(l[0]) + "," + to_string(l[1]) + "," + to_string(l[2]) +
                                          "): expected value " + to_string(expected[i].first) + " with index " +
                                          std::to_string(expected[i].second) + ", found " +
                                          to_string(declared[i].first) + " with index " +
                                          std::to_string(declared[i].second));
      break;
    }
  }
  if (out.report.ok()) {
    out.status = CheckStatus::pass;
    out.lambdas = l;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison up to relabeling and lattice isometry

struct ComponentFingerprint {
  ComponentKind kind;
  int index;
  std::optional<int> genus;
  std::optional<ClassFingerprint> reduced_class;
  NormalSplit normal_split;
  std::optional<int> normal_euler;

  friend bool operator==(const ComponentFingerprint&, const ComponentFingerprint&) = default;
  friend bool operator<(const ComponentFingerprint& a, const ComponentFingerprint& b) { return a.key() < b.key(); }

  std::string key() const {
    std::string s = std::string(to_string(kind)) + "/" + std::to_string(index) + "/" +
                    (genus ? std::to_string(*genus) : "-") + "/" + (reduced_class ? reduced_class->to_string() : "-") +
                    "/" + std::to_string(normal_split.negative) + std::to_string(normal_split.positive) + "/" +
                    (normal_euler ? std::to_string(*normal_euler) : "-");
    return s;
  }
};

struct LevelFingerprint {
  Rational value;
  std::vector<ComponentFingerprint> components;  ///< sorted
  std::optional<ClassFingerprint> euler;

  friend bool operator==(const LevelFingerprint&, const LevelFingerprint&) = default;
};

inline LevelFingerprint level_fingerprint(const CriticalDatum& level) {
  LevelFingerprint f;
  f.value = level.value;
  for (const auto& c : level.components) {
    ComponentFingerprint cf{c.kind, c.index, c.genus, std::nullopt, c.normal_split, c.normal_euler};
    if (c.reduced_class) cf.reduced_class = class_fingerprint(lattice_for(level.basis, c.reduced_class->size()), *c.reduced_class);
    f.components.push_back(std::move(cf));
  }
  std::sort(f.components.begin(), f.components.end());
  if (level.euler_minus) f.euler = class_fingerprint(lattice_for(level.basis, level.euler_minus->size()), *level.euler_minus);
  return f;
}

struct DataComparison {
  bool same = false;
  std::string witness;  ///< first difference found; empty when same
};

/// Same data up to component relabeling and isometry of reduced lattices.
/// Euler classes are compared only when both sides are full mode.
inline DataComparison compare_fixed_point_data(const FixedPointData& a, const FixedPointData& b) {
  for (const auto* d : {&a, &b}) {
    const auto report = validate_structure(*d);
    if (!report.ok()) throw PreconditionError("cannot compare invalid data: " + report.issues.front().message);
  }
  auto values = [](const FixedPointData& d) {
    std::vector<Rational> v;
    for (const auto& l : d.levels())
      for (std::size_t i = 0; i < l.components.size(); ++i) v.push_back(l.value);
    return v;
  };
  if (values(a) != values(b)) return {false, "value multiset"};
  const bool compare_euler = a.mode() == DataMode::full && b.mode() == DataMode::full;
  for (std::size_t i = 0; i < a.levels().size(); ++i) {
    auto fa = level_fingerprint(a.levels()[i]);
    auto fb = level_fingerprint(b.levels()[i]);
    const std::string where = " at " + to_string(fa.value);
    if (fa.components.size() != fb.components.size()) return {false, "component count" + where};
    for (std::size_t j = 0; j < fa.components.size(); ++j) {
      const auto &ca = fa.components[j], &cb = fb.components[j];
      if (ca.index != cb.index) return {false, "index multiset" + where};
      if (ca.kind != cb.kind || ca.genus != cb.genus) return {false, "component kinds/genera" + where};
      if (ca.reduced_class != cb.reduced_class) return {false, "reduced class fingerprint" + where};
      if (!(ca == cb)) return {false, "normal data" + where};
    }
    if (compare_euler && fa.euler != fb.euler)
      return {false, "Euler fingerprint" + where + " (" + (fa.euler ? fa.euler->to_string() : "absent") + " vs " +
                         (fb.euler ? fb.euler->to_string() : "absent") + ")"};
  }
  return {true, {}};
}

/// Data of the same manifold with H replaced by (min + max) - H: indices
/// become coindices and Euler entries (which describe the other side) are
/// dropped.
inline FixedPointData reverse_time(const FixedPointData& data) {
  FixedPointData out(data.name().empty() ? std::string() : data.name() + "-reversed", data.mode(), data.dim());
  if (data.levels().empty()) return out;
  const Rational top = data.levels().back().value + data.levels().front().value;
  for (auto it = data.levels().rbegin(); it != data.levels().rend(); ++it) {
    CriticalDatum level;
    level.value = top - it->value;
    level.basis = it->basis;
    for (auto c : it->components) {
      std::swap(c.normal_split.negative, c.normal_split.positive);
      c.index = 2 * c.normal_split.negative;
      level.components.push_back(std::move(c));
    }
    out.append_level(std::move(level));
  }
  return out;
}

}  // namespace dhwalk
