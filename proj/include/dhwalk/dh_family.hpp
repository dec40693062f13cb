#pragma once

// Reduced symplectic classes that vary affinely with the moment value t,
// their areas, the quadratic volume 1/2 [w_t]^2, and positivity checks.
//
// Euler convention: the area slope of a class C is -(e . C), i.e. the slope
// class is B = -e. With the Hopf bundle e = -L this gives area(L) = t.

#include "dhwalk/errors.hpp"
#include "dhwalk/lattice.hpp"
#include "dhwalk/rational.hpp"

#include <optional>
#include <string>
#include <utility>

namespace dhwalk {

/// a + b t.
struct AffineFunction {
  Rational intercept;
  Rational slope;

  Rational operator()(const Rational& t) const { return intercept + slope * t; }

  /// Root, when the function is not constant.
  std::optional<Rational> root() const {
    if (slope == 0) return std::nullopt;
    return -intercept / slope;
  }

  /// g(s) = f(center - s): the same function seen from the time-reversed side.
  AffineFunction reflected(const Rational& center) const { return {intercept + slope * center, -slope}; }

  friend bool operator==(const AffineFunction&, const AffineFunction&) = default;
  friend bool operator<(const AffineFunction& a, const AffineFunction& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept < b.intercept;
  }

  std::string to_string() const {
    if (slope == 0) return dhwalk::to_string(intercept);
    const Rational mag = slope < 0 ? Rational(-slope) : slope;
    std::string term = mag == 1 ? "t" : (is_integer(mag) ? dhwalk::to_string(mag) : "(" + dhwalk::to_string(mag) + ")") + "t";
    if (slope > 0) {
      if (intercept == 0) return term;
      return term + (intercept > 0 ? "+" : "-") + dhwalk::to_string(intercept > 0 ? intercept : Rational(-intercept));
    }
    if (intercept == 0) return "-" + term;
    return dhwalk::to_string(intercept) + "-" + term;
  }
};

/// c0 + c1 t + c2 t^2.
struct QuadraticPolynomial {
  Rational c0, c1, c2;

  Rational operator()(const Rational& t) const { return c0 + t * (c1 + t * c2); }
  Rational derivative(const Rational& t) const { return c1 + 2 * c2 * t; }
  int degree() const { return c2 != 0 ? 2 : (c1 != 0 ? 1 : 0); }

  /// Exact integral over [a, b] via the antiderivative.
  Rational integrate(const Rational& a, const Rational& b) const {
    auto F = [&](const Rational& t) -> Rational { return t * (c0 + t * (c1 / 2 + t * c2 / 3)); };
    return F(b) - F(a);
  }

  QuadraticPolynomial reflected(const Rational& center) const {
    // p(center - s) = c0 + c1 (center - s) + c2 (center - s)^2
    return {c0 + c1 * center + c2 * center * center, -c1 - 2 * c2 * center, c2};
  }

  friend bool operator==(const QuadraticPolynomial&, const QuadraticPolynomial&) = default;

  std::string to_string() const {
    std::string out;
    auto term = [&](const Rational& c, const std::string& mono) {
      if (c == 0) return;
      const Rational mag = c < 0 ? Rational(-c) : c;
      std::string coeff = (mag == 1 && !mono.empty()) ? "" : dhwalk::to_string(mag);
      if (!mono.empty() && !coeff.empty()) coeff += "*";
      out += (c < 0 ? "-" : (out.empty() ? "" : "+")) + coeff + mono;
    };
    term(c2, "t^2");
    term(c1, "t");
    term(c0, "");
    return out.empty() ? "0" : out;
  }
};

/// Parameter interval; nullopt ends are unbounded.
struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_closed = false;
  bool hi_closed = false;

  /// Membership; endpoints are accepted regardless of the closure flags
  /// (one-sided limits at walls are evaluated on the closure).
  bool contains(const Rational& t) const { return (!lo || *lo <= t) && (!hi || t <= *hi); }
  bool contains_open(const Rational& t) const { return (!lo || *lo < t) && (!hi || t < *hi); }

  std::optional<Rational> midpoint() const {
    if (lo && hi) return (*lo + *hi) / 2;
    return std::nullopt;
  }

  std::string to_string() const {
    return std::string(lo_closed ? "[" : "(") + (lo ? dhwalk::to_string(*lo) : "-inf") + ", " +
           (hi ? dhwalk::to_string(*hi) : "inf") + (hi_closed ? "]" : ")");
  }
};

/// Integral Euler class of a reduction bundle.
struct EulerClass {
  LatticeClass cls;
  friend bool operator==(const EulerClass&, const EulerClass&) = default;
};

/// The class B with B.C = -(e.C) for every C, i.e. B = -e.
inline LatticeClass slope_from_euler(const EulerClass& e, const IntersectionLattice& lattice) {
  if (e.cls.size() != lattice.rank()) throw DimensionError("Euler class rank does not match lattice");
  return -e.cls;
}

/// [w_t] = base + t * slope for t in the interval.
class AffineClassFamily {
 public:
  AffineClassFamily(IntersectionLattice lattice, RationalClass base, LatticeClass slope, Interval interval = {})
      : lattice_(std::move(lattice)), base_(std::move(base)), slope_(std::move(slope)), interval_(std::move(interval)) {
    if (base_.size() != lattice_.rank() || slope_.size() != lattice_.rank())
      throw DimensionError("family classes must have the lattice rank " + std::to_string(lattice_.rank()));
  }

  const IntersectionLattice& lattice() const noexcept { return lattice_; }
  const RationalClass& base() const noexcept { return base_; }
  const LatticeClass& slope() const noexcept { return slope_; }
  const Interval& interval() const noexcept { return interval_; }

  AffineClassFamily with_interval(Interval interval) const {
    AffineClassFamily f = *this;
    f.interval_ = std::move(interval);
    return f;
  }

  /// The class at t, without a domain check.
  RationalClass at_unchecked(const Rational& t) const { return base_ + t * to_rational(slope_); }

  RationalClass at(const Rational& t) const {
    check_domain(t);
    return at_unchecked(t);
  }

  void check_domain(const Rational& t) const {
    if (!interval_.contains(t)) throw DomainError("t = " + to_string(t) + " outside " + interval_.to_string());
  }

  /// Area of C as an affine function of t.
  AffineFunction area_function(const LatticeClass& c) const {
    return {pair(lattice_, base_, c), Rational(pair(lattice_, slope_, c))};
  }

  friend bool operator==(const AffineClassFamily& a, const AffineClassFamily& b) {
    return a.lattice_ == b.lattice_ && a.base_ == b.base_ && a.slope_ == b.slope_;
  }

 private:
  IntersectionLattice lattice_;
  RationalClass base_;
  LatticeClass slope_;
  Interval interval_;
};

/// Symplectic area of C at t: (A + tB) . C.
inline Rational area(const AffineClassFamily& family, const LatticeClass& c, const Rational& t) {
  family.check_domain(t);
  return family.area_function(c)(t);
}

/// 1/2 (A + tB)^2 expanded in t.
inline QuadraticPolynomial volume_poly(const AffineClassFamily& family) {
  const auto& lat = family.lattice();
  const auto b = to_rational(family.slope());
  return {pair(lat, family.base(), family.base()) / 2, pair(lat, family.base(), b), pair(lat, b, b) / 2};
}

enum class ConeStatus { positive, violated, unknown };

inline const char* to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::positive:
      return "positive";
    case ConeStatus::violated:
      return "violated";
    case ConeStatus::unknown:
      break;
  }
  return "unknown";
}

struct ConeCheck {
  ConeStatus status = ConeStatus::unknown;
  std::optional<LatticeClass> witness;  ///< violating class; empty when the volume is the culprit
  std::optional<Rational> witness_value;
  std::string reason;

  bool ok() const { return status == ConeStatus::positive; }
};

namespace detail {

/// Classes whose areas must be positive, in reporting order.
inline std::optional<std::vector<LatticeClass>> positivity_classes(const IntersectionLattice& lattice) {
  if (lattice.kind() == LatticeKind::product) return ruling_classes(lattice);
  if (lattice.kind() == LatticeKind::blowup_plane && lattice.blowups() <= 3) {
    std::vector<LatticeClass> out{lattice.basis(0)};
    for (auto& c : exceptional_classes(lattice).classes) out.push_back(std::move(c));
    return out;
  }
  return std::nullopt;
}

}  // namespace detail

/// Positivity of [w_t] on L, every exceptional class and the volume. Only
/// decided for CP2#k with k <= 3 and for S2xS2; otherwise `unknown`.
inline ConeCheck symplectic_cone_check(const AffineClassFamily& family, const Rational& t) {
  family.check_domain(t);
  const auto classes = detail::positivity_classes(family.lattice());
  if (!classes) return {ConeStatus::unknown, std::nullopt, std::nullopt, "cone not decided for " + family.lattice().name()};
  for (const auto& c : *classes) {
    const Rational a = family.area_function(c)(t);
    if (a <= 0)
      return {ConeStatus::violated, c, a, "area of " + format_class(family.lattice(), c) + " is " + to_string(a)};
  }
  const Rational v = volume_poly(family)(t);
  if (v <= 0) return {ConeStatus::violated, std::nullopt, v, "volume is " + to_string(v)};
  return {ConeStatus::positive, std::nullopt, std::nullopt, {}};
}

/// Positivity on (lambda, lambda + eps) for small eps, decided exactly from
/// values and derivatives at lambda.
inline ConeCheck cone_check_right_of(const AffineClassFamily& family, const Rational& lambda) {
  const auto classes = detail::positivity_classes(family.lattice());
  if (!classes) return {ConeStatus::unknown, std::nullopt, std::nullopt, "cone not decided for " + family.lattice().name()};
  for (const auto& c : *classes) {
    const auto f = family.area_function(c);
    const Rational a = f(lambda);
    if (a < 0 || (a == 0 && f.slope <= 0))
      return {ConeStatus::violated, c, a,
              "area of " + format_class(family.lattice(), c) + " is " + f.to_string() + ", not positive just after " +
                  to_string(lambda)};
  }
  const auto vol = volume_poly(family);
  const Rational v = vol(lambda), dv = vol.derivative(lambda);
  if (v < 0 || (v == 0 && (dv < 0 || (dv == 0 && vol.c2 <= 0))))
    return {ConeStatus::violated, std::nullopt, v, "volume not positive just after " + to_string(lambda)};
  return {ConeStatus::positive, std::nullopt, std::nullopt, {}};
}

}  // namespace dhwalk
