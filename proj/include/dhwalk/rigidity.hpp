#pragma once

// Rigidity knowledge base. Rigidity of (reduced space, form family) pairs
// is not computed: it is looked up in a table of cited results.

#include "dhwalk/dh_family.hpp"
#include "dhwalk/lattice.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace dhwalk {

/// Ordered weakest to strongest, so std::min gives the combined status.
enum class RigidityStatus { not_rigid = 0, unknown = 1, rigid_via_H_restricted_symp = 2, rigid = 3 };

inline const char* to_string(RigidityStatus s) {
  switch (s) {
    case RigidityStatus::not_rigid:
      return "not_rigid";
    case RigidityStatus::unknown:
      return "unknown";
    case RigidityStatus::rigid_via_H_restricted_symp:
      return "rigid_via_H_restricted_symp";
    case RigidityStatus::rigid:
      break;
  }
  return "rigid";
}

inline bool counts_as_rigid(RigidityStatus s) {
  return s == RigidityStatus::rigid || s == RigidityStatus::rigid_via_H_restricted_symp;
}

struct RigidityFact {
  std::string id;
  std::string space;
  std::string pattern;
  RigidityStatus status;
  std::string citation;
  /// Whether cohomologous forms are known to be symplectomorphic. Recorded
  /// separately: rigidity is not known to imply it. Not used by certify.
  bool uniqueness_known;
};

inline const std::vector<RigidityFact>& rigidity_facts() {
  static const std::vector<RigidityFact> facts{
      {"cp2-small", "CP2, CP2#1", "any family", RigidityStatus::rigid,
       "McDuff (deformation implies isotopy on rational surfaces); Gromov, Abreu-McDuff, Lalonde-Pinsonnault "
       "(Symp connected)",
       true},
      {"blowup-distinct", "CP2#2, CP2#3", "pairwise distinct exceptional areas", RigidityStatus::rigid_via_H_restricted_symp,
       "McDuff (deformation implies isotopy); Lalonde-Pinsonnault, Pinsonnault, Evans (homologically trivial "
       "symplectomorphisms form a path connected group for k <= 3)",
       true},
      {"blowup-equal-diff0", "CP2#2, CP2#3", "some equal exceptional areas", RigidityStatus::rigid,
       "Pinsonnault, Evans (Symp meets Diff0 in a connected group; permutations of equal-size exceptional classes lie "
       "outside Diff0)",
       true},
      {"s2xs2", "S2xS2", "any family", RigidityStatus::rigid,
       "McDuff (deformation implies isotopy on ruled surfaces); Gromov, Abreu-McDuff (Symp(S2xS2) connectivity up to "
       "the factor swap, which is outside Diff0)",
       true},
      {"monotone-cp2-5", "CP2#5", "monotone (form proportional to -K)", RigidityStatus::not_rigid,
       "Seidel (squared Dehn twists along Lagrangian spheres: Symp meets Diff0 in a disconnected group)", false},
  };
  return facts;
}

inline const RigidityFact& rigidity_fact(const std::string& id) {
  for (const auto& f : rigidity_facts())
    if (f.id == id) return f;
  throw InvariantBreach("unknown rigidity fact " + id);
}

struct RigidityFinding {
  RigidityStatus status = RigidityStatus::unknown;
  std::string fact_id;  ///< empty when no fact applies
  std::string note;
};

namespace detail {

inline bool has_equal_exceptional_areas(const AffineClassFamily& family) {
  std::vector<AffineFunction> areas;
  for (const auto& c : exceptional_classes(family.lattice()).classes) areas.push_back(family.area_function(c));
  std::sort(areas.begin(), areas.end());
  return std::adjacent_find(areas.begin(), areas.end()) != areas.end();
}

/// Whether [w_t] is a positive multiple of -K for some t in the open interval.
inline bool passes_through_monotone(const AffineClassFamily& family) {
  const auto k = family.lattice().canonical();
  if (!k) return false;
  const auto& a = family.base();
  const auto b = to_rational(family.slope());
  const auto kk = to_rational(*k);
  const std::size_t r = a.size();
  // All 2x2 minors of [A + tB, K] vanish; each minor is affine in t.
  std::optional<Rational> t_forced;
  bool any_t = true;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const Rational c0 = a[i] * kk[j] - a[j] * kk[i];
      const Rational c1 = b[i] * kk[j] - b[j] * kk[i];
      if (c1 == 0) {
        if (c0 != 0) return false;
        continue;
      }
      const Rational t = -c0 / c1;
      if (t_forced && *t_forced != t) return false;
      t_forced = t;
      any_t = false;
    }
  auto positive_multiple_at = [&](const Rational& t) {
    const RationalClass w = family.at_unchecked(t);
    // w is parallel to K here; with K^2 > 0, w = c(-K) has c > 0 iff w.K < 0.
    return pair(family.lattice(), w, *k) < 0;
  };
  const auto& iv = family.interval();
  if (!any_t) return iv.contains_open(*t_forced) && positive_multiple_at(*t_forced);
  if (auto mid = iv.midpoint()) return positive_multiple_at(*mid);
  return positive_multiple_at(Rational(0));
}

}  // namespace detail

/// Cited rigidity status of the pair (reduced space, family).
inline RigidityFinding lookup(const AffineClassFamily& family) {
  const auto& lattice = family.lattice();
  auto found = [](const char* id, std::string note = {}) {
    const auto& f = rigidity_fact(id);
    return RigidityFinding{f.status, f.id, std::move(note)};
  };
  if (lattice.kind() == LatticeKind::product) return found("s2xs2");
  if (lattice.kind() == LatticeKind::general) return {RigidityStatus::unknown, {}, "no fact for a general lattice"};
  const int k = lattice.blowups();
  if (k <= 1) return found("cp2-small");
  if (k <= 3) {
    if (detail::has_equal_exceptional_areas(family)) return found("blowup-equal-diff0");
    return found("blowup-distinct");
  }
  if (k == 5 && detail::passes_through_monotone(family)) return found("monotone-cp2-5");
  return {RigidityStatus::unknown, {}, "no fact for " + lattice.name()};
}

inline RigidityFinding lookup(const IntersectionLattice& lattice, const AffineClassFamily& family) {
  if (!(lattice == family.lattice())) throw DimensionError("family lives on a different lattice");
  return lookup(family);
}

}  // namespace dhwalk
