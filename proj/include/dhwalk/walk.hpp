#pragma once

// The walk engine: carries (lattice, reduced class family, Euler class)
// up the moment interval, crossing each critical level by blow-up,
// blow-down or Euler shift, and logs a replayable trace.

#include "dhwalk/dh_family.hpp"
#include "dhwalk/errors.hpp"
#include "dhwalk/lattice.hpp"
#include "dhwalk/rigidity.hpp"
#include "dhwalk/scenario.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dhwalk {

// ---------------------------------------------------------------------------
// Fingerprints

/// Basis-independent summary of a reduced space with its class family and
/// Euler class. Areas are kept as affine functions so the fingerprint does
/// not depend on where in the interval it is taken.
struct StateFingerprint {
  std::string lattice;
  std::vector<AffineFunction> exceptional_areas;  ///< sorted; ruling areas on S2xS2
  std::optional<AffineFunction> anticanonical_area;
  QuadraticPolynomial volume;
  ClassFingerprint euler;

  friend bool operator==(const StateFingerprint&, const StateFingerprint&) = default;

  /// The same data read with time running backwards from `center`.
  StateFingerprint reflected(const Rational& center) const {
    StateFingerprint f = *this;
    for (auto& a : f.exceptional_areas) a = a.reflected(center);
    std::sort(f.exceptional_areas.begin(), f.exceptional_areas.end());
    if (f.anticanonical_area) f.anticanonical_area = f.anticanonical_area->reflected(center);
    f.volume = f.volume.reflected(center);
    f.euler = f.euler.negated();
    return f;
  }

  std::string to_string() const {
    std::string s = lattice + " areas{";
    for (std::size_t i = 0; i < exceptional_areas.size(); ++i) s += (i ? "," : "") + exceptional_areas[i].to_string();
    s += "}";
    if (anticanonical_area) s += " -K=" + anticanonical_area->to_string();
    return s + " vol=" + volume.to_string() + " e=" + euler.to_string();
  }
};

inline StateFingerprint fingerprint(const AffineClassFamily& family, const EulerClass& euler) {
  const auto& lat = family.lattice();
  StateFingerprint f;
  f.lattice = lat.name();
  auto targets = lat.kind() == LatticeKind::product ? ruling_classes(lat) : exceptional_classes(lat).classes;
  for (const auto& c : targets) f.exceptional_areas.push_back(family.area_function(c));
  std::sort(f.exceptional_areas.begin(), f.exceptional_areas.end());
  if (auto k = lat.canonical()) f.anticanonical_area = family.area_function(-*k);
  f.volume = volume_poly(family);
  f.euler = class_fingerprint(lat, euler.cls);
  return f;
}

// ---------------------------------------------------------------------------
// State and trace types

struct WalkState {
  AffineClassFamily family;
  EulerClass euler;
  /// Set when the walk started from declared (unverified) extremal data.
  bool declared_extremum = false;

  const IntersectionLattice& lattice() const { return family.lattice(); }
  int k() const { return lattice().blowups(); }

  static WalkState make(IntersectionLattice lattice, RationalClass base, EulerClass euler, Interval interval,
                        bool declared = false) {
    auto slope = slope_from_euler(euler, lattice);
    return WalkState{AffineClassFamily(std::move(lattice), std::move(base), std::move(slope), std::move(interval)),
                     std::move(euler), declared};
  }

  WalkState with_interval(Interval interval) const {
    return WalkState{family.with_interval(std::move(interval)), euler, declared_extremum};
  }
};

enum class ActionKind { blow_up, blow_down, euler_shift };

inline const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::blow_up:
      return "blow_up";
    case ActionKind::blow_down:
      return "blow_down";
    case ActionKind::euler_shift:
      break;
  }
  return "euler_shift";
}

struct CrossingAction {
  std::size_t component = 0;  ///< position in the level's component list
  ActionKind kind = ActionKind::blow_up;
  /// Blow-up: the new exceptional class (new coordinates). Blow-down: the
  /// vanishing class (old coordinates). Shift: the surface class.
  LatticeClass cls;
  int sign = 1;  ///< Euler shift direction
  std::int64_t euler_pairing = 0;  ///< e- . C for blow-downs
  LatticeClass euler_before;       ///< e- in the lattice before this action
  std::string lattice_before;
  std::string lattice_after;
  std::string class_label;
  std::optional<BlowUp> blow_up;
  std::optional<BlowDownMap> blow_down;

  std::string describe() const {
    switch (kind) {
      case ActionKind::blow_up:
        return "blow_up -> " + class_label;
      case ActionKind::blow_down:
        return "blow_down(" + class_label + ")";
      case ActionKind::euler_shift:
        break;
    }
    return std::string("euler_shift(") + (sign > 0 ? "+" : "-") + class_label + ")";
  }
};

struct CrossingEvent {
  Rational value;
  std::vector<CrossingAction> actions;
  StateFingerprint before;
  StateFingerprint after;
};

struct IntervalRecord {
  Rational lo;
  Rational hi;
  bool lo_is_seam = false;
  bool hi_is_seam = false;
  WalkState state;
  QuadraticPolynomial volume;
  ConeCheck cone;  ///< at the midpoint
  RigidityFinding rigidity;
  StateFingerprint fp;

  int k() const { return state.k(); }
  Rational midpoint() const { return (lo + hi) / 2; }
};

struct FinalReport {
  bool pass = false;
  Rational value;
  std::vector<std::string> failures;
};

struct WalkTrace {
  std::string scenario;
  std::vector<IntervalRecord> intervals;
  std::vector<CrossingEvent> events;
  std::optional<FinalReport> final_report;  ///< present when the trace reaches the maximum
  bool declared_extremum = false;

  const WalkState& initial_state() const { return intervals.front().state; }
  const WalkState& final_state() const { return intervals.back().state; }

  std::vector<int> k_sequence() const {
    std::vector<int> ks;
    for (const auto& iv : intervals) ks.push_back(iv.k());
    return ks;
  }

  std::vector<Rational> walls() const {
    std::vector<Rational> w;
    for (const auto& e : events) w.push_back(e.value);
    return w;
  }

  Rational start() const { return intervals.front().lo; }
  Rational end() const { return intervals.back().hi; }

  /// The interval containing t (closed on the left wall, open on the right;
  /// the last interval also takes its right end).
  const IntervalRecord& interval_at(const Rational& t) const {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      const auto& iv = intervals[i];
      if (iv.lo <= t && (t < iv.hi || (i + 1 == intervals.size() && t == iv.hi))) return iv;
    }
    throw DomainError("t = " + to_string(t) + " outside the walked range");
  }
};

// ---------------------------------------------------------------------------
// Helpers

namespace detail {

inline void check_right_endpoint(const WalkState& s, const Rational& lambda) {
  const auto& iv = s.family.interval();
  if ((iv.hi && *iv.hi != lambda) || (iv.lo && lambda < *iv.lo))
    throw PreconditionError("crossing value " + to_string(lambda) + " is not the right endpoint of " + iv.to_string());
}

inline Interval right_of(const Rational& lambda) { return Interval{lambda, std::nullopt, false, false}; }
inline Interval at_wall(const Rational& lambda) { return Interval{lambda, lambda, true, true}; }

inline void check_euler_convention(const WalkState& s) {
  ensure_invariant(s.family.slope() == slope_from_euler(s.euler, s.lattice()),
                   "family slope differs from -e on " + s.lattice().name());
}

inline void require_cone_right_of(const WalkState& s, const Rational& lambda) {
  const auto check = cone_check_right_of(s.family, lambda);
  if (check.status == ConeStatus::violated) throw InconsistentData("reduced class leaves the symplectic cone: " + check.reason);
}

/// Exceptional classes whose area vanishes at lambda with negative slope.
inline std::vector<LatticeClass> vanishing_classes(const WalkState& s, const Rational& lambda) {
  std::vector<LatticeClass> out;
  for (const auto& c : exceptional_classes(s.lattice()).classes) {
    const auto f = s.family.area_function(c);
    if (f(lambda) == 0 && f.slope < 0) out.push_back(c);
  }
  return out;  // already descending-lex
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Initialization

/// State just above the minimum. Isolated minimum: CP2 with area(L) = t - min
/// and the Hopf Euler class -L. A 4-dimensional minimum takes its declared
/// lattice, symplectic class and normal Euler class at face value.
inline WalkState init_from_minimum(const FixedPointData& data) {
  if (data.levels().empty() || data.levels().front().components.size() != 1)
    throw PreconditionError("minimum must be a single component");
  const auto& level = data.levels().front();
  const auto& m = level.components.front();
  const Rational v0 = level.value;
  const Interval iv = detail::right_of(v0);
  switch (m.kind) {
    case ComponentKind::point: {
      if (m.index != 0) throw PreconditionError("minimum must have index 0");
      auto lat = IntersectionLattice::blowup_plane(0);
      return WalkState::make(lat, RationalClass{Rational(-v0)}, EulerClass{LatticeClass{-1}}, iv);
    }
    case ComponentKind::surface:
      throw UnsupportedExtremum("codimension-4 extremal surfaces (sphere-bundle reduced spaces) are not supported");
    case ComponentKind::fourfold:
      break;
  }
  if (!m.gram || !m.symplectic_class || !m.normal_euler_class)
    throw PreconditionError("4-dimensional minimum needs gram, symplectic_class and normal_euler_class");
  IntersectionLattice lat = IntersectionLattice::general(*m.gram);
  if (lat.gram() == IntersectionLattice::product().gram()) lat = IntersectionLattice::product();
  else if (lat.gram() == IntersectionLattice::blowup_plane(static_cast<int>(lat.rank()) - 1).gram())
    lat = IntersectionLattice::blowup_plane(static_cast<int>(lat.rank()) - 1);
  if (m.normal_euler_class->size() != lat.rank() || m.symplectic_class->size() != lat.rank())
    throw DimensionError("declared minimum classes do not match the declared lattice rank");
  EulerClass e{*m.normal_euler_class};
  const auto slope = to_rational(slope_from_euler(e, lat));
  RationalClass base = *m.symplectic_class - v0 * slope;
  return WalkState::make(lat, std::move(base), std::move(e), iv, true);
}

// ---------------------------------------------------------------------------
// Atomic crossings

/// Index-2 isolated point: blow up; e+ = e- + E_new; the new class has area
/// t - lambda and every old class keeps its area at lambda.
inline WalkState cross_index2_point(const WalkState& s, const Rational& lambda, CrossingAction* log = nullptr,
                                    bool check_cone = true) {
  detail::check_right_endpoint(s, lambda);
  BlowUp up = blow_up_lattice(s.lattice());
  EulerClass e{up.include(s.euler.cls) + up.exceptional};
  const auto slope = to_rational(slope_from_euler(e, up.lattice));
  RationalClass base = up.include(s.family.at_unchecked(lambda)) - lambda * slope;
  WalkState out = WalkState::make(up.lattice, std::move(base), std::move(e),
                                  check_cone ? detail::right_of(lambda) : detail::at_wall(lambda), s.declared_extremum);
  detail::check_euler_convention(out);
  if (log) {
    log->euler_before = s.euler.cls;
    log->kind = ActionKind::blow_up;
    log->cls = up.exceptional;
    log->lattice_before = s.lattice().name();
    log->lattice_after = up.lattice.name();
    log->class_label = format_class(up.lattice, up.exceptional);
    log->blow_up = up;
  }
  if (check_cone) detail::require_cone_right_of(out, lambda);
  return out;
}

/// Coindex-2 isolated point: the unique exceptional class vanishing at
/// lambda blows down. Requires e- . C = 1; e+ = push(e- + C).
/// `declared_points` is how many coindex-2 points this level still has; the
/// number of vanishing classes must match it.
inline WalkState cross_coindex2_point(const WalkState& s, const Rational& lambda, CrossingAction* log = nullptr,
                                      bool check_cone = true, std::size_t declared_points = 1) {
  detail::check_right_endpoint(s, lambda);
  const auto vanishing = detail::vanishing_classes(s, lambda);
  if (vanishing.empty()) {
    std::string where;
    for (const auto& c : exceptional_classes(s.lattice()).classes) {
      const auto f = s.family.area_function(c);
      if (auto r = f.root(); r && f.slope < 0 && *r > lambda)
        where += (where.empty() ? "" : ", ") + format_class(s.lattice(), c) + " at t=" + to_string(*r);
    }
    throw WallMismatch("no exceptional class of " + s.lattice().name() + " has vanishing area at t=" + to_string(lambda) +
                       (where.empty() ? std::string() : " (next vanishing: " + where + ")"));
  }
  if (vanishing.size() > declared_points)
    throw NonSimpleRequired(std::to_string(vanishing.size()) + " exceptional classes vanish at t=" + to_string(lambda) +
                            " but " + std::to_string(declared_points) + " coindex-2 point(s) are declared");
  if (vanishing.size() < declared_points)
    throw WallMismatch("only " + std::to_string(vanishing.size()) + " exceptional class(es) vanish at t=" +
                       to_string(lambda) + " for " + std::to_string(declared_points) + " declared coindex-2 points");
  const LatticeClass& c = vanishing.front();
  const auto pairing = pair(s.lattice(), s.euler.cls, c);
  if (pairing != 1)
    throw EulerInconsistency("blow-down of " + format_class(s.lattice(), c) + " needs e-.C = 1, got " +
                             std::to_string(pairing));
  const std::int64_t bound = std::max<std::int64_t>(3, static_cast<std::int64_t>(s.lattice().rank()));
  BlowDownMap map = blow_down_data(s.lattice(), c, bound);
  EulerClass e{map.pushforward(s.euler.cls + c)};
  ensure_invariant(map.pullback(e.cls) == s.euler.cls + c, "e- + C is not a pullback");
  RationalClass base = map.pushforward(s.family.base());
  WalkState out = WalkState::make(map.downstairs, std::move(base), std::move(e),
                                  check_cone ? detail::right_of(lambda) : detail::at_wall(lambda), s.declared_extremum);
  ensure_invariant(out.family.slope() == map.pushforward(s.family.slope()), "pushed slope differs from -e+");
  detail::check_euler_convention(out);
  if (log) {
    log->euler_before = s.euler.cls;
    log->kind = ActionKind::blow_down;
    log->cls = c;
    log->euler_pairing = pairing;
    log->lattice_before = s.lattice().name();
    log->lattice_after = map.downstairs.name();
    log->class_label = format_class(s.lattice(), c);
    log->blow_down = map;
  }
  if (check_cone) detail::require_cone_right_of(out, lambda);
  return out;
}

enum class SurfaceOrientation {
  ascending,      ///< e+ = e- + [F]
  time_reversed,  ///< e+ = e- - [F], the inverse move
};

/// Codimension-4 surface: the reduced space is unchanged and the Euler class
/// shifts by the surface class.
inline WalkState cross_surface(const WalkState& s, const Rational& lambda, const FixedComponent& f,
                               SurfaceOrientation orientation = SurfaceOrientation::ascending,
                               CrossingAction* log = nullptr, bool check_cone = true) {
  detail::check_right_endpoint(s, lambda);
  if (f.kind != ComponentKind::surface) throw PreconditionError("cross_surface needs a surface component");
  if (!f.reduced_class) throw PreconditionError("surface has no reduced class");
  if (f.reduced_class->size() != s.lattice().rank())
    throw DimensionError("surface class of rank " + std::to_string(f.reduced_class->size()) + " in a rank-" +
                         std::to_string(s.lattice().rank()) + " lattice");
  const int sign = orientation == SurfaceOrientation::ascending ? 1 : -1;
  EulerClass e{sign > 0 ? s.euler.cls + *f.reduced_class : s.euler.cls - *f.reduced_class};
  const auto slope = to_rational(slope_from_euler(e, s.lattice()));
  RationalClass base = s.family.at_unchecked(lambda) - lambda * slope;
  WalkState out = WalkState::make(s.lattice(), std::move(base), std::move(e),
                                  check_cone ? detail::right_of(lambda) : detail::at_wall(lambda), s.declared_extremum);
  detail::check_euler_convention(out);
  if (log) {
    log->euler_before = s.euler.cls;
    log->kind = ActionKind::euler_shift;
    log->cls = *f.reduced_class;
    log->sign = sign;
    log->lattice_before = log->lattice_after = s.lattice().name();
    log->class_label = format_class(s.lattice(), *f.reduced_class);
  }
  if (check_cone) detail::require_cone_right_of(out, lambda);
  return out;
}

// ---------------------------------------------------------------------------
// Whole levels

enum class CrossingOrder {
  canonical,               ///< blow-downs, point blow-ups, then surface shifts
  shifts_before_blowups,   ///< blow-downs, surface shifts, then point blow-ups
};

/// Crosses a whole critical level (simple or not). Surface classes are read
/// in the lattice of the critical reduced space, i.e. after the blow-downs,
/// and carried through later blow-up inclusions.
inline WalkState cross_level(const WalkState& s, const CriticalDatum& level, CrossingEvent* event = nullptr,
                             CrossingOrder order = CrossingOrder::canonical) {
  const Rational& lambda = level.value;
  detail::check_right_endpoint(s, lambda);
  std::vector<std::size_t> ups, downs, surfaces;
  for (std::size_t i = 0; i < level.components.size(); ++i) {
    const auto& c = level.components[i];
    if (c.kind == ComponentKind::point && c.index == 2) ups.push_back(i);
    else if (c.kind == ComponentKind::point && c.index == 4) downs.push_back(i);
    else if (c.kind == ComponentKind::surface && (c.index == 2 || c.index == 4)) surfaces.push_back(i);
    else
      throw PreconditionError("component " + std::to_string(i) + " at level " + to_string(lambda) +
                              " cannot be crossed (" + to_string(c.kind) + ", index " + std::to_string(c.index) + ")");
  }
  std::vector<CrossingAction> actions;
  WalkState cur = s;
  // Blow-downs: each picks the first vanishing class in descending-lex order.
  for (std::size_t j = 0; j < downs.size(); ++j) {
    CrossingAction a;
    a.component = downs[j];
    cur = cross_coindex2_point(cur, lambda, &a, false, downs.size() - j);
    actions.push_back(std::move(a));
  }
  // Surfaces in lexicographic class order, expressed in the current lattice.
  if (!surfaces.empty() && cur.lattice().kind() != LatticeKind::general &&
      (cur.lattice().kind() == LatticeKind::product) != (level.basis == LevelBasis::product))
    throw DimensionError("surface classes at level " + to_string(lambda) + " are written in the " +
                         (level.basis == LevelBasis::product ? "product" : "blow-up") + " basis but the reduced space is " +
                         cur.lattice().name());
  std::vector<FixedComponent> pending;
  std::vector<std::size_t> pending_index = surfaces;
  std::sort(pending_index.begin(), pending_index.end(), [&](std::size_t a, std::size_t b) {
    return DescendingLex{}(*level.components[a].reduced_class, *level.components[b].reduced_class);
  });
  for (auto i : pending_index) pending.push_back(level.components[i]);
  auto do_shifts = [&] {
    for (std::size_t j = 0; j < pending.size(); ++j) {
      CrossingAction a;
      a.component = pending_index[j];
      const auto orient = pending[j].index == 2 ? SurfaceOrientation::ascending : SurfaceOrientation::time_reversed;
      cur = cross_surface(cur, lambda, pending[j], orient, &a, false);
      actions.push_back(std::move(a));
    }
    pending.clear();
  };
  if (order == CrossingOrder::shifts_before_blowups) do_shifts();
  for (auto i : ups) {
    CrossingAction a;
    a.component = i;
    cur = cross_index2_point(cur, lambda, &a, false);
    for (auto& f : pending) f.reduced_class = a.blow_up->include(*f.reduced_class);
    actions.push_back(std::move(a));
  }
  do_shifts();
  cur = cur.with_interval(detail::right_of(lambda));
  detail::check_euler_convention(cur);
  detail::require_cone_right_of(cur, lambda);
  if (event) {
    event->value = lambda;
    event->actions = std::move(actions);
    event->before = fingerprint(s.family, s.euler);
    event->after = fingerprint(cur.family, cur.euler);
  }
  return cur;
}

/// A level carrying both index-2 and coindex-2 components: blow-downs
/// first, then blow-ups and Euler shifts.
inline WalkState cross_non_simple(const WalkState& s, const Rational& lambda, const CriticalDatum& level,
                                  CrossingEvent* event = nullptr) {
  if (level.value != lambda) throw PreconditionError("level value differs from crossing value");
  return cross_level(s, level, event);
}

// ---------------------------------------------------------------------------
// Maximum

namespace detail {

/// (positive, negative) inertia of a symmetric integer matrix.
inline std::pair<int, int> inertia(const IntMatrix& gram) {
  const std::size_t n = gram.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = gram[i][j];
  int pos = 0, neg = 0;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n && p == n; ++i)
      if (!done[i] && m[i][i] != 0) p = i;
    if (p == n) {
      // All remaining diagonal entries vanish; make one nonzero by congruence.
      std::size_t a = n, b = n;
      for (std::size_t i = 0; i < n && a == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && m[i][j] != 0) {
            a = i;
            b = j;
            break;
          }
      if (a == n) break;
      for (std::size_t j = 0; j < n; ++j) m[a][j] += m[b][j];
      for (std::size_t j = 0; j < n; ++j) m[j][a] += m[j][b];
      p = a;
    }
    const Rational piv = m[p][p];
    (piv > 0 ? pos : neg)++;
    done[p] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || m[i][p] == 0) continue;
      const Rational f = m[i][p] / piv;
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[p][j];
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!done[j]) m[p][j] = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i]) m[i][p] = 0;
  }
  return {pos, neg};
}

}  // namespace detail

/// Checks that the arriving state collapses onto the declared maximum.
inline FinalReport finalize_at_maximum(const WalkState& s, const Rational& lambda_max, const CriticalDatum& level) {
  FinalReport r;
  r.value = lambda_max;
  if (level.components.size() != 1) {
    r.failures.push_back("maximum must be a single component");
    return r;
  }
  const auto& m = level.components.front();
  const auto& lat = s.lattice();
  if (m.kind == ComponentKind::point) {
    if (!lat.is_default() || lat.blowups() != 0) {
      r.failures.push_back("reduced space must collapse: arriving at an isolated maximum with " + lat.name());
      return r;
    }
    const Rational a = s.family.area_function(lat.basis(0))(lambda_max);
    if (a != 0) r.failures.push_back("area(L)(" + to_string(lambda_max) + ") = " + to_string(a) + " != 0");
    if (s.euler.cls != LatticeClass{1})
      r.failures.push_back("Euler class at the maximum must be +L, got " + format_class(lat, s.euler.cls));
  } else if (m.kind == ComponentKind::fourfold) {
    if (!m.gram || !m.symplectic_class) {
      r.failures.push_back("4-dimensional maximum needs gram and symplectic_class");
      return r;
    }
    const auto declared = IntersectionLattice::general(*m.gram);
    const bool same_form = declared.rank() == lat.rank() && declared.is_even() == lat.is_even() &&
                           detail::inertia(declared.gram()) == detail::inertia(lat.gram());
    if (!same_form) {
      r.failures.push_back("reduced lattice " + lat.name() + " does not match the declared maximum's lattice");
    } else {
      const RationalClass w = s.family.at_unchecked(lambda_max);
      if (pair(lat, w, w) != pair(declared, *m.symplectic_class, *m.symplectic_class))
        r.failures.push_back("reduced volume at the maximum differs from the declared symplectic class");
      else if (declared.gram() == lat.gram() && w != *m.symplectic_class)
        r.failures.push_back("reduced class at the maximum differs from the declared symplectic class");
    }
  } else {
    r.failures.push_back("unsupported extremum: codimension-4 maximal surface");
  }
  r.pass = r.failures.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Whole walks

namespace detail {

/// Positivity of every required area on the open interval (lo, hi). A
/// vanishing exceptional class inside the interval is an undeclared wall.
inline void check_interval(const WalkState& s, const Rational& lo, const Rational& hi) {
  const auto& lat = s.lattice();
  const auto classes = positivity_classes(lat);
  if (!classes) return;
  for (const auto& c : *classes) {
    const auto f = s.family.area_function(c);
    const Rational a = f(lo), b = f(hi);
    if (a >= 0 && b >= 0 && !(a == 0 && b == 0)) continue;
    const auto r = f.root();
    if (r && lo < *r && *r < hi && is_exceptional(lat, c))
      throw WallMismatch("area of " + format_class(lat, c) + " vanishes at t=" + to_string(*r) +
                         " where no coindex-2 wall is declared");
    throw InconsistentData("area of " + format_class(lat, c) + " (" + f.to_string() + ") is not positive on (" +
                           to_string(lo) + ", " + to_string(hi) + ")");
  }
  const auto v = volume_poly(s.family);
  bool ok = v(lo) >= 0 && v(hi) >= 0 && v((lo + hi) / 2) > 0;
  if (ok && v.c2 > 0) {
    const Rational vertex = -v.c1 / (2 * v.c2);
    if (lo < vertex && vertex < hi) ok = v(vertex) > 0;
  }
  if (!ok) throw InconsistentData("reduced volume " + v.to_string() + " is not positive on (" + to_string(lo) + ", " +
                                  to_string(hi) + ")");
}

inline IntervalRecord make_record(const WalkState& s, const Rational& lo, const Rational& hi) {
  WalkState st = s.with_interval(Interval{lo, hi, false, false});
  auto cone = symplectic_cone_check(st.family, (lo + hi) / 2);
  auto rigidity = lookup(st.family);
  return IntervalRecord{lo, hi, false, false, std::move(st), volume_poly(s.family), std::move(cone),
                        std::move(rigidity), fingerprint(s.family, s.euler)};
}

inline void check_declared_euler(const WalkState& s, const CriticalDatum& level) {
  if (!level.euler_minus) return;
  const auto declared_lattice = lattice_for(level.basis, level.euler_minus->size());
  const auto declared = class_fingerprint(declared_lattice, *level.euler_minus);
  const auto arriving = class_fingerprint(s.lattice(), s.euler.cls);
  if (!(declared == arriving))
    throw EulerInconsistency("declared e(P-) has fingerprint " + declared.to_string() + " but the walk arrives with " +
                             arriving.to_string());
}

template <class Fn>
auto at_wall_context(const Rational& wall, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const WalkError&) {
    throw;
  } catch (const InvariantBreach&) {
    throw;
  } catch (const Error& e) {
    throw WalkError(e, to_string(wall));
  }
}

/// Walks from `s` (whose interval starts at `lo`) across every level with
/// index in [first, last) whose value is below `stop`, recording intervals.
inline WalkState walk_levels(const FixedPointData& data, WalkState s, Rational lo, bool lo_is_seam, std::size_t first,
                             std::size_t last, WalkTrace& trace) {
  const auto& levels = data.levels();
  for (std::size_t i = first; i < last; ++i) {
    const auto& level = levels[i];
    at_wall_context(level.value, [&] {
      check_interval(s, lo, level.value);
      check_declared_euler(s, level);
      return 0;
    });
    auto rec = make_record(s, lo, level.value);
    rec.lo_is_seam = lo_is_seam;
    trace.intervals.push_back(std::move(rec));
    CrossingEvent ev;
    s = at_wall_context(level.value, [&] { return cross_level(s.with_interval({lo, level.value}), level, &ev); });
    trace.events.push_back(std::move(ev));
    lo = level.value;
    lo_is_seam = false;
  }
  return s;
}

inline void require_valid(const FixedPointData& data) {
  const auto report = validate_structure(data);
  if (!report.ok()) throw InconsistentData("invalid fixed point data: " + report.issues.front().message);
}

inline void finish_at_maximum(const FixedPointData& data, const WalkState& s, const Rational& lo, bool lo_is_seam,
                              WalkTrace& trace) {
  const auto& top = data.levels().back();
  at_wall_context(top.value, [&] {
    if (lo < top.value) check_interval(s, lo, top.value);
    return 0;
  });
  auto rec = make_record(s, lo, top.value);
  rec.lo_is_seam = lo_is_seam;
  trace.intervals.push_back(std::move(rec));
  trace.final_report = finalize_at_maximum(trace.intervals.back().state, top.value, top);
}

inline std::size_t first_level_above(const FixedPointData& data, const Rational& t) {
  std::size_t i = 0;
  while (i < data.levels().size() && data.levels()[i].value <= t) ++i;
  return i;
}

inline void require_regular_seam(const FixedPointData& data, const Rational& t) {
  const auto& levels = data.levels();
  if (!(levels.front().value < t && t < levels.back().value))
    throw PreconditionError("seam " + to_string(t) + " lies outside the open moment interval");
  for (const auto& l : levels)
    if (l.value == t) throw PreconditionError("seam " + to_string(t) + " is a critical value; seams must be regular");
}

}  // namespace detail

/// Full walk from the minimum to the maximum. Throws WalkError naming the
/// failing wall; a failed final check is reported in `final_report`.
inline WalkTrace run_walk(const FixedPointData& data) {
  detail::require_valid(data);
  WalkTrace trace;
  trace.scenario = data.name();
  const auto& levels = data.levels();
  WalkState s = detail::at_wall_context(levels.front().value, [&] { return init_from_minimum(data); });
  trace.declared_extremum = s.declared_extremum;
  s = detail::walk_levels(data, std::move(s), levels.front().value, false, 1, levels.size() - 1, trace);
  detail::finish_at_maximum(data, s, levels[levels.size() - 2].value, false, trace);
  return trace;
}

/// Walk from the minimum up to the regular value `seam`.
inline WalkTrace run_walk_until(const FixedPointData& data, const Rational& seam) {
  detail::require_valid(data);
  detail::require_regular_seam(data, seam);
  WalkTrace trace;
  trace.scenario = data.name();
  const auto& levels = data.levels();
  WalkState s = init_from_minimum(data);
  trace.declared_extremum = s.declared_extremum;
  const std::size_t stop = detail::first_level_above(data, seam);
  s = detail::walk_levels(data, std::move(s), levels.front().value, false, 1, stop, trace);
  const Rational lo = levels[stop - 1].value;
  detail::at_wall_context(seam, [&] {
    detail::check_interval(s, lo, seam);
    return 0;
  });
  auto rec = detail::make_record(s, lo, seam);
  rec.hi_is_seam = true;
  trace.intervals.push_back(std::move(rec));
  return trace;
}

/// Walk from a seam state at the regular value `seam` up to the maximum.
inline WalkTrace run_walk_from(const FixedPointData& data, const WalkState& seam_state, const Rational& seam) {
  detail::require_valid(data);
  detail::require_regular_seam(data, seam);
  WalkTrace trace;
  trace.scenario = data.name();
  trace.declared_extremum = seam_state.declared_extremum;
  const std::size_t first = detail::first_level_above(data, seam);
  WalkState s = detail::walk_levels(data, seam_state, seam, true, first, data.levels().size() - 1, trace);
  const Rational lo = first < data.levels().size() - 1 ? data.levels()[data.levels().size() - 2].value : seam;
  detail::finish_at_maximum(data, s, lo, first == data.levels().size() - 1, trace);
  return trace;
}

/// The same state read with time reversed about `center`: w'(s) = w(center - s), e' = -e.
inline WalkState reflect_state(const WalkState& s, const Rational& center) {
  const auto& f = s.family;
  RationalClass base = f.base() + center * to_rational(f.slope());
  const auto& iv = f.interval();
  Interval reflected{iv.hi ? std::optional<Rational>(center - *iv.hi) : std::nullopt,
                     iv.lo ? std::optional<Rational>(center - *iv.lo) : std::nullopt, iv.hi_closed, iv.lo_closed};
  return WalkState::make(f.lattice(), std::move(base), EulerClass{-s.euler.cls}, reflected, s.declared_extremum);
}

// ---------------------------------------------------------------------------
// Splitting and gluing

/// Cuts a trace at a regular value t inside one of its intervals.
inline std::pair<WalkTrace, WalkTrace> split_trace(const WalkTrace& trace, const Rational& t) {
  for (std::size_t i = 0; i < trace.intervals.size(); ++i) {
    const auto& iv = trace.intervals[i];
    if (t == iv.lo || t == iv.hi)
      throw PreconditionError("cannot split at " + to_string(t) + ": seams must be regular values");
    if (!(iv.lo < t && t < iv.hi)) continue;
    WalkTrace left, right;
    left.scenario = right.scenario = trace.scenario;
    left.declared_extremum = right.declared_extremum = trace.declared_extremum;
    left.intervals.assign(trace.intervals.begin(), trace.intervals.begin() + static_cast<std::ptrdiff_t>(i));
    right.intervals.assign(trace.intervals.begin() + static_cast<std::ptrdiff_t>(i) + 1, trace.intervals.end());
    IntervalRecord a = iv, b = iv;
    a.hi = t;
    a.hi_is_seam = true;
    a.state = iv.state.with_interval({iv.lo, t});
    b.lo = t;
    b.lo_is_seam = true;
    b.state = iv.state.with_interval({t, iv.hi});
    left.intervals.push_back(std::move(a));
    right.intervals.insert(right.intervals.begin(), std::move(b));
    for (const auto& e : trace.events) (e.value < t ? left : right).events.push_back(e);
    right.final_report = trace.final_report;
    return {std::move(left), std::move(right)};
  }
  throw PreconditionError("split point " + to_string(t) + " is outside the trace");
}

/// Glues two traces along a common regular seam. The seam states must have
/// equal fingerprints.
inline WalkTrace compose_traces(const WalkTrace& left, const WalkTrace& right) {
  if (left.intervals.empty() || right.intervals.empty()) throw PreconditionError("cannot compose empty traces");
  const auto& a = left.intervals.back();
  const auto& b = right.intervals.front();
  if (left.final_report || !a.hi_is_seam) throw PreconditionError("left trace does not end at a regular seam");
  if (!b.lo_is_seam) throw PreconditionError("right trace does not start at a regular seam");
  if (a.hi != b.lo)
    throw PreconditionError("seams differ: left ends at " + to_string(a.hi) + ", right starts at " + to_string(b.lo));
  if (a.fp.lattice != b.fp.lattice) throw GluingError("lattice fingerprint differs at the seam: " + a.fp.lattice + " vs " + b.fp.lattice);
  if (a.fp.exceptional_areas != b.fp.exceptional_areas || a.fp.anticanonical_area != b.fp.anticanonical_area)
    throw GluingError("area fingerprint differs at the seam");
  if (!(a.fp.euler == b.fp.euler))
    throw GluingError("Euler fingerprint differs at the seam: " + a.fp.euler.to_string() + " vs " + b.fp.euler.to_string());
  if (!(a.fp.volume == b.fp.volume)) throw GluingError("volume fingerprint differs at the seam");
  WalkTrace out;
  out.scenario = left.scenario;
  out.declared_extremum = left.declared_extremum || right.declared_extremum;
  out.intervals.assign(left.intervals.begin(), left.intervals.end() - 1);
  IntervalRecord merged = a;
  merged.hi = right.intervals.front().hi;
  merged.hi_is_seam = right.intervals.front().hi_is_seam;
  merged.state = a.state.with_interval({merged.lo, merged.hi});
  merged.cone = symplectic_cone_check(merged.state.family, merged.midpoint());
  out.intervals.push_back(std::move(merged));
  out.intervals.insert(out.intervals.end(), right.intervals.begin() + 1, right.intervals.end());
  out.events = left.events;
  out.events.insert(out.events.end(), right.events.begin(), right.events.end());
  out.final_report = right.final_report;
  return out;
}

/// Per-interval fingerprints with their interval ends, for trace equality.
struct TraceFingerprint {
  std::vector<std::pair<Rational, Rational>> intervals;
  std::vector<StateFingerprint> states;
  std::vector<Rational> walls;

  friend bool operator==(const TraceFingerprint&, const TraceFingerprint&) = default;
};

inline TraceFingerprint trace_fingerprint(const WalkTrace& trace) {
  TraceFingerprint f;
  for (const auto& iv : trace.intervals) {
    f.intervals.emplace_back(iv.lo, iv.hi);
    f.states.push_back(iv.fp);
  }
  f.walls = trace.walls();
  return f;
}

// ---------------------------------------------------------------------------
// Certification

enum class CertificationLevel { certified, uncertified };

inline const char* to_string(CertificationLevel c) {
  return c == CertificationLevel::certified ? "certified" : "uncertified";
}

struct Certification {
  CertificationLevel level = CertificationLevel::uncertified;
  RigidityStatus weakest = RigidityStatus::unknown;
  std::vector<std::string> fact_ids;  ///< in order of first use
  std::string reason;
};

/// Weakest rigidity status over all regular intervals; certified only when
/// every interval is rigid and the walk did not start from declared data.
inline Certification certify(const WalkTrace& trace) {
  Certification c;
  c.weakest = RigidityStatus::rigid;
  for (const auto& iv : trace.intervals) {
    if (iv.rigidity.status < c.weakest) {
      c.weakest = iv.rigidity.status;
      if (!counts_as_rigid(iv.rigidity.status) && c.reason.empty())
        c.reason = "interval (" + to_string(iv.lo) + ", " + to_string(iv.hi) + ") on " + iv.state.lattice().name() +
                   " is " + to_string(iv.rigidity.status);
    }
    if (!iv.rigidity.fact_id.empty() &&
        std::find(c.fact_ids.begin(), c.fact_ids.end(), iv.rigidity.fact_id) == c.fact_ids.end())
      c.fact_ids.push_back(iv.rigidity.fact_id);
  }
  if (trace.declared_extremum && c.reason.empty()) c.reason = "walk starts from declared extremal data";
  c.level = counts_as_rigid(c.weakest) && !trace.declared_extremum ? CertificationLevel::certified
                                                                   : CertificationLevel::uncertified;
  return c;
}

}  // namespace dhwalk
