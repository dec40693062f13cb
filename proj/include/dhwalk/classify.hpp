#pragma once

// Certificates for the classification results: isolated fixed points force
// Y3(l1,l2,l3); rigid walks make the manifold a function of its fixed point
// data; small data recovers the Euler classes level by level.
//
// A certificate says which theorem applies to the data and why. It never
// builds a symplectomorphism.

#include "dhwalk/errors.hpp"
#include "dhwalk/rigidity.hpp"
#include "dhwalk/scenario.hpp"
#include "dhwalk/walk.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dhwalk {

/// Fixed point data of S2xS2xS2 with the diagonal circle action and sphere
/// areas (l1, l2, l3), minimum at `base`. The order of the areas is irrelevant.
inline FixedPointData y3_fixed_point_data(const Rational& l1, const Rational& l2, const Rational& l3,
                                          DataMode mode = DataMode::small, const Rational& base = 0);

enum class CertificateKind {
  isomorphic_to_y3,       ///< isolated fixed points
  determined_by_data,     ///< rigid walk over full fixed point data
  determined_by_small_data,
};

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::isomorphic_to_y3:
      return "isomorphic to Y3";
    case CertificateKind::determined_by_data:
      return "determined by its fixed point data";
    case CertificateKind::determined_by_small_data:
      break;
  }
  return "determined by its small fixed point data";
}

struct Certificate {
  CertificateKind kind = CertificateKind::isomorphic_to_y3;
  std::string scenario;
  std::optional<std::array<Rational, 3>> lambdas;
  WalkTrace trace;
  Certification certification;
  std::vector<std::string> citations;  ///< one per rigidity fact used

  std::string statement() const {
    if (kind == CertificateKind::isomorphic_to_y3 && lambdas)
      return "isomorphic to Y3(" + to_string((*lambdas)[0]) + "," + to_string((*lambdas)[1]) + "," +
             to_string((*lambdas)[2]) + ")";
    return to_string(kind);
  }
};

struct Refusal {
  std::string check;  ///< name of the first failing check
  std::string reason;
  std::optional<std::string> wall;
};

struct ClassificationResult {
  std::optional<Certificate> certificate;
  std::optional<Refusal> refusal;

  bool ok() const { return certificate.has_value(); }

  static ClassificationResult refuse(std::string check, std::string reason, std::optional<std::string> wall = {}) {
    return {std::nullopt, Refusal{std::move(check), std::move(reason), std::move(wall)}};
  }
};

namespace detail {

inline std::vector<std::string> citations_for(const Certification& c) {
  std::vector<std::string> out;
  for (const auto& id : c.fact_ids) out.push_back(id + ": " + rigidity_fact(id).citation);
  return out;
}

/// Walk, final check and certification shared by every certificate path.
inline std::optional<ClassificationResult> walk_and_certify(const FixedPointData& data, WalkTrace& trace,
                                                            Certification& cert) {
  try {
    trace = run_walk(data);
  } catch (const WalkError& e) {
    return ClassificationResult::refuse("run_walk", e.what(), e.wall());
  } catch (const InvariantBreach&) {
    throw;
  } catch (const Error& e) {
    return ClassificationResult::refuse("run_walk", e.what());
  }
  if (!trace.final_report->pass)
    return ClassificationResult::refuse("finalize_at_maximum", trace.final_report->failures.front(),
                                        to_string(trace.final_report->value));
  cert = certify(trace);
  if (cert.level != CertificationLevel::certified)
    return ClassificationResult::refuse("certify", "walk is uncertified: " + cert.reason);
  return std::nullopt;
}

}  // namespace detail

/// Isolated fixed points in dimension 6: value lattice check, walk, final
/// check, certification. The first failing check becomes a refusal.
inline ClassificationResult classify_isolated(const FixedPointData& data) {
  if (data.dim() != 6 || !data.all_points())
    return ClassificationResult::refuse("precondition", "classify_isolated needs 6-dimensional data with isolated fixed points");
  const auto report = validate_structure(data);
  if (!report.ok()) return ClassificationResult::refuse("validate_structure", report.issues.front().message);
  const auto values = isolated_value_lattice_check(data);
  if (values.status != CheckStatus::pass)
    return ClassificationResult::refuse("isolated_value_lattice_check", values.report.issues.front().message);
  Certificate c;
  c.kind = CertificateKind::isomorphic_to_y3;
  c.scenario = data.name();
  c.lambdas = values.lambdas;
  if (auto refusal = detail::walk_and_certify(data, c.trace, c.certification)) return *refusal;
  c.citations = detail::citations_for(c.certification);
  return {std::move(c), std::nullopt};
}

/// Replays the walk and fills in each level's incoming Euler class from the
/// state arriving from below. Declared classes on full-mode input are kept
/// (the walk has already checked them). Throws WalkError at a failing level.
inline FixedPointData small_data_bootstrap(const FixedPointData& data) {
  for (const auto& level : data.levels())
    for (const auto& c : level.components)
      if (c.kind == ComponentKind::fourfold && &level != &data.levels().front() && &level != &data.levels().back())
        throw PreconditionError("bootstrap needs points or surfaces away from the extrema");
  const WalkTrace trace = run_walk(data);
  if (!trace.final_report->pass)
    throw WalkError(InconsistentData(trace.final_report->failures.front()), to_string(trace.final_report->value));
  FixedPointData out = data.as_full();
  FixedPointData rebuilt(out.name(), DataMode::full, out.dim());
  const auto& levels = out.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CriticalDatum level = levels[i];
    if (i > 0 && i + 1 < levels.size() && !level.euler_minus) {
      const auto& arriving = trace.intervals[i - 1].state;
      switch (arriving.lattice().kind()) {
        case LatticeKind::blowup_plane:
          level.basis = LevelBasis::blowup;
          break;
        case LatticeKind::product:
          level.basis = LevelBasis::product;
          break;
        case LatticeKind::general:
          throw PreconditionError("cannot record an Euler class on a general lattice at level " + to_string(level.value));
      }
      level.euler_minus = arriving.euler.cls;
    }
    rebuilt.append_level(std::move(level));
  }
  return rebuilt;
}

enum class WeakVerdict { isomorphic_certified, inconclusive, distinct_data, not_applicable };

inline const char* to_string(WeakVerdict v) {
  switch (v) {
    case WeakVerdict::isomorphic_certified:
      return "isomorphic (certified)";
    case WeakVerdict::inconclusive:
      return "inconclusive";
    case WeakVerdict::distinct_data:
      return "distinct data";
    case WeakVerdict::not_applicable:
      break;
  }
  return "not applicable";
}

struct WeakClassification {
  WeakVerdict verdict = WeakVerdict::not_applicable;
  std::string reason;
};

/// Same data plus rigidity gives an isomorphism. Data are compared first, so
/// corrupted data reads as distinct even when its own walk would fail, and
/// differing data with a non-simple level is still distinct.
inline WeakClassification weak_classification_check(const FixedPointData& d1, const FixedPointData& d2) {
  for (const auto* d : {&d1, &d2}) {
    if (d->mode() != DataMode::full) return {WeakVerdict::not_applicable, "both data sets must be full mode"};
    const auto report = validate_structure(*d);
    if (!report.ok()) return {WeakVerdict::not_applicable, "invalid data: " + report.issues.front().message};
  }
  const auto cmp = compare_fixed_point_data(d1, d2);
  if (!cmp.same) return {WeakVerdict::distinct_data, "first difference: " + cmp.witness};
  // Simplicity only matters once the data agree and the theorem is invoked.
  if (!d1.all_levels_simple()) return {WeakVerdict::not_applicable, "all levels must be simple"};
  for (const auto* d : {&d1, &d2}) {
    WalkTrace trace;
    try {
      trace = run_walk(*d);
    } catch (const InvariantBreach&) {
      throw;
    } catch (const Error& e) {
      return {WeakVerdict::not_applicable, std::string("walk failed: ") + e.what()};
    }
    if (!trace.final_report->pass) return {WeakVerdict::not_applicable, trace.final_report->failures.front()};
    const auto cert = certify(trace);
    if (cert.level != CertificationLevel::certified)
      return {WeakVerdict::inconclusive, "data match but the walk is uncertified: " + cert.reason};
  }
  return {WeakVerdict::isomorphic_certified, {}};
}

/// Isolated data goes through classify_isolated; anything else must walk
/// rigidly (small data is bootstrapped first).
inline ClassificationResult classify(const FixedPointData& data) {
  if (data.all_points()) return classify_isolated(data);
  const auto report = validate_structure(data);
  if (!report.ok()) return ClassificationResult::refuse("validate_structure", report.issues.front().message);
  Certificate c;
  c.kind = data.mode() == DataMode::small ? CertificateKind::determined_by_small_data : CertificateKind::determined_by_data;
  c.scenario = data.name();
  if (auto refusal = detail::walk_and_certify(data, c.trace, c.certification)) return *refusal;
  c.citations = detail::citations_for(c.certification);
  return {std::move(c), std::nullopt};
}

inline FixedPointData y3_fixed_point_data(const Rational& l1, const Rational& l2, const Rational& l3, DataMode mode,
                                          const Rational& base) {
  if (l1 <= 0 || l2 <= 0 || l3 <= 0) throw PreconditionError("Y3 sphere areas must be positive");
  FixedPointData d("Y3(" + to_string(l1) + "," + to_string(l2) + "," + to_string(l3) + ")", DataMode::small);
  const std::array<Rational, 3> l{l1, l2, l3};
  d.add_component(base, FixedComponent::point(0));
  for (const auto& x : l) d.add_component(base + x, FixedComponent::point(2));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) d.add_component(base + l[i] + l[j], FixedComponent::point(4));
  d.add_component(base + l1 + l2 + l3, FixedComponent::point(6));
  return mode == DataMode::small ? d : small_data_bootstrap(d);
}

}  // namespace dhwalk
