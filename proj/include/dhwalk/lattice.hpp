#pragma once

// Integer lattice algebra for the second cohomology of blow-ups of the
// projective plane (and of S2xS2): intersection pairing, canonical class,
// exceptional classes, Cremona moves, blow-up and blow-down.
//
// Convention: in the default basis (L, E1, ..., Ek) the pairing is
// diag(+1, -1, ..., -1). Class coordinates are always with respect to the
// lattice basis; an isometry matrix acts on coordinate columns.

#include "dhwalk/errors.hpp"
#include "dhwalk/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dhwalk {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Coordinates of a cohomology class in a lattice basis.
template <class T>
class ClassVector {
 public:
  using value_type = T;

  ClassVector() = default;
  explicit ClassVector(std::size_t rank) : c_(rank, T(0)) {}
  ClassVector(std::initializer_list<T> init) : c_(init) {}
  explicit ClassVector(std::vector<T> coeffs) : c_(std::move(coeffs)) {}

  static ClassVector unit(std::size_t rank, std::size_t i) {
    ClassVector v(rank);
    v.c_.at(i) = T(1);
    return v;
  }

  std::size_t size() const noexcept { return c_.size(); }
  const T& operator[](std::size_t i) const { return c_[i]; }
  T& operator[](std::size_t i) { return c_[i]; }
  const std::vector<T>& coeffs() const noexcept { return c_; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& x) { return x == T(0); });
  }

  ClassVector& operator+=(const ClassVector& o) {
    check_same_rank(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  ClassVector& operator-=(const ClassVector& o) {
    check_same_rank(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend ClassVector operator+(ClassVector a, const ClassVector& b) { return a += b; }
  friend ClassVector operator-(ClassVector a, const ClassVector& b) { return a -= b; }
  friend ClassVector operator-(ClassVector a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend ClassVector operator*(const T& s, ClassVector a) {
    for (auto& x : a.c_) x *= s;
    return a;
  }
  friend bool operator==(const ClassVector& a, const ClassVector& b) { return a.c_ == b.c_; }
  friend bool operator!=(const ClassVector& a, const ClassVector& b) { return !(a == b); }
  friend bool operator<(const ClassVector& a, const ClassVector& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }
  friend bool operator>(const ClassVector& a, const ClassVector& b) { return b < a; }

 private:
  void check_same_rank(const ClassVector& o) const {
    if (o.size() != size())
      throw DimensionError("class rank mismatch: " + std::to_string(size()) + " vs " + std::to_string(o.size()));
  }

  std::vector<T> c_;
};

using LatticeClass = ClassVector<std::int64_t>;
using RationalClass = ClassVector<Rational>;

inline RationalClass to_rational(const LatticeClass& x) {
  std::vector<Rational> v;
  v.reserve(x.size());
  for (auto c : x) v.emplace_back(c);
  return RationalClass(std::move(v));
}

/// Descending lexicographic order; the deterministic tie-break used for
/// every basis choice (puts E1 before E2).
struct DescendingLex {
  template <class T>
  bool operator()(const ClassVector<T>& a, const ClassVector<T>& b) const {
    return b < a;
  }
};

enum class LatticeKind {
  blowup_plane,  ///< CP2 # k(-CP2), basis (L, E1, ..., Ek)
  product,       ///< S2 x S2, basis of the two rulings (A, B)
  general,       ///< arbitrary unimodular symmetric gram
};

namespace detail {

inline BigInt determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  // Fraction-free Bareiss elimination.
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Inverse of a unimodular integer matrix (exact Gauss-Jordan).
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) throw InvalidLattice("gram matrix is singular");
    std::swap(a[col], a[p]);
    const Rational pivot = a[col][col];
    for (auto& x : a[col]) x /= pivot;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  IntMatrix inv(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_integer(a[i][n + j])) throw InvalidLattice("gram matrix is not unimodular");
      inv[i][j] = numerator_of(a[i][n + j]).convert_to<std::int64_t>();
    }
  return inv;
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

template <class T>
ClassVector<T> apply_matrix(const IntMatrix& m, const ClassVector<T>& x) {
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  if (x.size() != cols)
    throw DimensionError("matrix expects rank " + std::to_string(cols) + ", got " + std::to_string(x.size()));
  ClassVector<T> y(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    T acc(0);
    for (std::size_t j = 0; j < cols; ++j)
      if (m[i][j] != 0) acc += T(m[i][j]) * x[j];
    y[i] = acc;
  }
  return y;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b.front().size();
  IntMatrix c(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline IntMatrix transpose(const IntMatrix& a) {
  if (a.empty()) return {};
  IntMatrix t(a.front().size(), std::vector<std::int64_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

/// Calls fn on every integer vector of length `rank` with entries in [-bound, bound].
inline void for_each_in_box(std::size_t rank, std::int64_t bound, const std::function<void(const LatticeClass&)>& fn) {
  LatticeClass v(std::vector<std::int64_t>(rank, -bound));
  if (rank == 0) {
    fn(v);
    return;
  }
  while (true) {
    fn(v);
    std::size_t i = 0;
    while (i < rank && v[i] == bound) v[i++] = -bound;
    if (i == rank) return;
    ++v[i];
  }
}

}  // namespace detail

/// H^2 of a reduced space with its intersection pairing.
class IntersectionLattice {
 public:
  static IntersectionLattice blowup_plane(int k) {
    if (k < 0) throw DomainError("blow-up count must be nonnegative");
    const std::size_t r = static_cast<std::size_t>(k) + 1;
    IntMatrix g = detail::identity_matrix(r);
    std::vector<std::string> labels{"L"};
    for (std::size_t i = 1; i < r; ++i) {
      g[i][i] = -1;
      labels.push_back("E" + std::to_string(i));
    }
    return IntersectionLattice(LatticeKind::blowup_plane, std::move(g), std::move(labels));
  }

  static IntersectionLattice product() {
    return IntersectionLattice(LatticeKind::product, IntMatrix{{0, 1}, {1, 0}}, {"A", "B"});
  }

  static IntersectionLattice general(IntMatrix gram, std::vector<std::string> labels = {}) {
    const std::size_t r = gram.size();
    if (r == 0) throw InvalidLattice("lattice rank must be positive");
    for (const auto& row : gram)
      if (row.size() != r) throw InvalidLattice("gram matrix must be square");
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (gram[i][j] != gram[j][i]) throw InvalidLattice("gram matrix must be symmetric");
    const BigInt det = detail::determinant(gram);
    if (det != 1 && det != -1) throw InvalidLattice("gram matrix must be unimodular (det = " + det.str() + ")");
    if (labels.empty())
      for (std::size_t i = 0; i < r; ++i) labels.push_back("X" + std::to_string(i + 1));
    if (labels.size() != r) throw InvalidLattice("label count must equal rank");
    if (std::set<std::string>(labels.begin(), labels.end()).size() != r)
      throw InvalidLattice("labels must be distinct");
    return IntersectionLattice(LatticeKind::general, std::move(gram), std::move(labels));
  }

  std::size_t rank() const noexcept { return gram_.size(); }
  LatticeKind kind() const noexcept { return kind_; }
  bool is_default() const noexcept { return kind_ == LatticeKind::blowup_plane; }
  const IntMatrix& gram() const noexcept { return gram_; }
  const IntMatrix& gram_inverse() const noexcept { return inverse_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Number of blow-ups in the default basis; rank - 1 for every kind (so
  /// S2xS2 reports 1, matching b2 - 1).
  int blowups() const noexcept { return static_cast<int>(rank()) - 1; }

  std::string name() const {
    switch (kind_) {
      case LatticeKind::blowup_plane:
        return blowups() == 0 ? "CP2" : "CP2#" + std::to_string(blowups());
      case LatticeKind::product:
        return "S2xS2";
      case LatticeKind::general:
        break;
    }
    return "general(rank " + std::to_string(rank()) + ")";
  }

  bool is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (gram_[i][i] % 2 != 0) return false;
    return true;
  }

  /// Canonical class, known for the default and product bases.
  std::optional<LatticeClass> canonical() const {
    if (kind_ == LatticeKind::blowup_plane) {
      LatticeClass k(std::vector<std::int64_t>(rank(), 1));
      k[0] = -3;
      return k;
    }
    if (kind_ == LatticeKind::product) return LatticeClass{-2, -2};
    return std::nullopt;
  }

  LatticeClass basis(std::size_t i) const { return LatticeClass::unit(rank(), i); }

  friend bool operator==(const IntersectionLattice& a, const IntersectionLattice& b) {
    return a.kind_ == b.kind_ && a.gram_ == b.gram_;
  }

 private:
  IntersectionLattice(LatticeKind kind, IntMatrix gram, std::vector<std::string> labels)
      : kind_(kind), gram_(std::move(gram)), labels_(std::move(labels)), inverse_(detail::unimodular_inverse(gram_)) {}

  LatticeKind kind_;
  IntMatrix gram_;
  std::vector<std::string> labels_;
  IntMatrix inverse_;
};

namespace detail {
template <class A, class B>
using pair_result_t = std::conditional_t<std::is_same_v<A, std::int64_t> && std::is_same_v<B, std::int64_t>,
                                         std::int64_t, Rational>;
}

/// Intersection pairing x^T * gram * y.
template <class A, class B>
detail::pair_result_t<A, B> pair(const IntersectionLattice& lattice, const ClassVector<A>& x, const ClassVector<B>& y) {
  using R = detail::pair_result_t<A, B>;
  const std::size_t r = lattice.rank();
  if (x.size() != r || y.size() != r)
    throw DimensionError("pairing on rank-" + std::to_string(r) + " lattice got classes of rank " +
                         std::to_string(x.size()) + " and " + std::to_string(y.size()));
  const auto& g = lattice.gram();
  R acc(0);
  for (std::size_t i = 0; i < r; ++i) {
    if (x[i] == A(0)) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (g[i][j] == 0 || y[j] == B(0)) continue;
      acc += R(x[i]) * R(g[i][j]) * R(y[j]);
    }
  }
  return acc;
}

/// K = -3L + E1 + ... + Ek.
inline LatticeClass canonical_class(int k) { return *IntersectionLattice::blowup_plane(k).canonical(); }

/// Human-readable class in the lattice's labels, e.g. "L-E1-E2", "2L-E1-E2-E3".
template <class T>
std::string format_class(const IntersectionLattice& lattice, const ClassVector<T>& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == T(0)) continue;
    std::string coeff;
    if constexpr (std::is_same_v<T, Rational>) {
      coeff = to_string(x[i] < 0 ? Rational(-x[i]) : x[i]);
    } else {
      coeff = std::to_string(x[i] < 0 ? -x[i] : x[i]);
    }
    const bool negative = x[i] < T(0);
    if (coeff == "1") coeff.clear();
    else if (coeff.find('/') != std::string::npos) coeff = "(" + coeff + ")";
    if (negative) out += "-";
    else if (!out.empty()) out += "+";
    out += coeff + (i < lattice.labels().size() ? lattice.labels()[i] : "?");
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Exceptional classes

struct ExceptionalSet {
  std::vector<LatticeClass> classes;  ///< sorted descending-lex
  bool certified = true;              ///< false outside the k <= 3 regime
};

namespace detail {

// Del Pezzo orbit types (degree; multiplicities) for k <= 8.
struct OrbitType {
  std::int64_t degree;
  std::vector<std::int64_t> multiplicities;  // nonincreasing
};

inline const std::vector<OrbitType>& exceptional_orbit_types() {
  static const std::vector<OrbitType> types{
      {0, {-1}},
      {1, {1, 1}},
      {2, {1, 1, 1, 1, 1}},
      {3, {2, 1, 1, 1, 1, 1, 1}},
      {4, {2, 2, 2, 1, 1, 1, 1, 1}},
      {5, {2, 2, 2, 2, 2, 2, 1, 1}},
      {6, {3, 2, 2, 2, 2, 2, 2, 2}},
  };
  return types;
}

}  // namespace detail

/// All classes C with C.C = -1 and C.K = -1 on CP2 # k(-CP2), for k <= 8.
/// Certified for k <= 3; larger k is marked uncertified.
inline ExceptionalSet exceptional_classes(int k) {
  if (k < 0) throw DomainError("blow-up count must be nonnegative");
  if (k > 8) throw UnsupportedMove("exceptional classes are infinite for k > 8");
  std::set<LatticeClass, DescendingLex> found;
  for (const auto& type : detail::exceptional_orbit_types()) {
    const auto& mult = type.multiplicities;
    if (type.degree == 0) {
      for (int i = 1; i <= k; ++i) found.insert(LatticeClass::unit(static_cast<std::size_t>(k) + 1, static_cast<std::size_t>(i)));
      continue;
    }
    if (static_cast<int>(mult.size()) > k) continue;
    // Distinct placements of the multiset `mult` (padded with zeros) onto E1..Ek.
    std::vector<std::int64_t> pattern(mult);
    pattern.resize(static_cast<std::size_t>(k), 0);
    std::sort(pattern.begin(), pattern.end());
    do {
      LatticeClass c(static_cast<std::size_t>(k) + 1);
      c[0] = type.degree;
      for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i) + 1] = -pattern[static_cast<std::size_t>(i)];
      found.insert(c);
    } while (std::next_permutation(pattern.begin(), pattern.end()));
  }
  return ExceptionalSet{{found.begin(), found.end()}, k <= 3};
}

/// Exceptional classes of any supported lattice: S2xS2 has none; a general
/// basis yields an empty, uncertified set.
inline ExceptionalSet exceptional_classes(const IntersectionLattice& lattice) {
  switch (lattice.kind()) {
    case LatticeKind::blowup_plane:
      return exceptional_classes(lattice.blowups());
    case LatticeKind::product:
      return ExceptionalSet{{}, true};
    case LatticeKind::general:
      break;
  }
  return ExceptionalSet{{}, false};
}

inline bool is_exceptional(const IntersectionLattice& lattice, const LatticeClass& c) {
  const auto k = lattice.canonical();
  return k && pair(lattice, c, c) == -1 && pair(lattice, c, *k) == -1;
}

/// Square-zero classes with K-pairing -2 that generate S2xS2's rulings.
inline std::vector<LatticeClass> ruling_classes(const IntersectionLattice& lattice) {
  if (lattice.kind() != LatticeKind::product) return {};
  return {LatticeClass{1, 0}, LatticeClass{0, 1}};
}

// ---------------------------------------------------------------------------
// Isometries

struct LatticeIsometry {
  IntMatrix matrix;  ///< column j = image of basis vector j
  bool preserves_canonical = false;

  template <class T>
  ClassVector<T> apply(const ClassVector<T>& x) const {
    return detail::apply_matrix(matrix, x);
  }
};

inline bool preserves_pairing(const IntersectionLattice& lattice, const IntMatrix& m) {
  return detail::multiply(detail::multiply(detail::transpose(m), lattice.gram()), m) == lattice.gram();
}

inline bool fixes_canonical(const IntersectionLattice& lattice, const IntMatrix& m) {
  const auto k = lattice.canonical();
  return k && detail::apply_matrix(m, *k) == *k;
}

/// Standard quadratic Cremona involution on blow-up indices i, j, m (1-based):
/// L -> 2L - Ei - Ej - Em, Ei -> L - Ej - Em (cyclically).
inline LatticeIsometry cremona_standard(const IntersectionLattice& lattice, int i, int j, int m) {
  if (!lattice.is_default() || lattice.blowups() < 3)
    throw UnsupportedMove("Cremona move needs a default-basis lattice with at least 3 blow-ups");
  const int k = lattice.blowups();
  for (int idx : {i, j, m})
    if (idx < 1 || idx > k) throw UnsupportedMove("Cremona index " + std::to_string(idx) + " out of range");
  if (i == j || j == m || i == m) throw UnsupportedMove("Cremona indices must be distinct");
  IntMatrix mat = detail::identity_matrix(lattice.rank());
  const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j), c = static_cast<std::size_t>(m);
  auto set_column = [&](std::size_t col, const LatticeClass& image) {
    for (std::size_t row = 0; row < lattice.rank(); ++row) mat[row][col] = image[row];
  };
  LatticeClass line = 2 * lattice.basis(0);
  line -= lattice.basis(a);
  line -= lattice.basis(b);
  line -= lattice.basis(c);
  set_column(0, line);
  set_column(a, lattice.basis(0) - lattice.basis(b) - lattice.basis(c));
  set_column(b, lattice.basis(0) - lattice.basis(a) - lattice.basis(c));
  set_column(c, lattice.basis(0) - lattice.basis(a) - lattice.basis(b));
  ensure_invariant(preserves_pairing(lattice, mat), "Cremona matrix does not preserve the pairing");
  const bool keeps_k = fixes_canonical(lattice, mat);
  return LatticeIsometry{std::move(mat), keeps_k};
}

// ---------------------------------------------------------------------------
// Blow-up

/// Result of blowing up a point: the new lattice, the inclusion of the old
/// coordinates, and the new exceptional class.
struct BlowUp {
  IntersectionLattice lattice;
  IntMatrix inclusion;  ///< (r+1) x r
  LatticeClass exceptional;

  template <class T>
  ClassVector<T> include(const ClassVector<T>& x) const {
    return detail::apply_matrix(inclusion, x);
  }
};

/// Default basis: append a -1 diagonal entry. S2xS2 blown up is re-expressed
/// in the default CP2#2 basis (A = L-E2, B = L-E1, new class L-E1-E2).
inline BlowUp blow_up_lattice(const IntersectionLattice& lattice) {
  const std::size_t r = lattice.rank();
  switch (lattice.kind()) {
    case LatticeKind::blowup_plane: {
      IntMatrix inc(r + 1, std::vector<std::int64_t>(r, 0));
      for (std::size_t i = 0; i < r; ++i) inc[i][i] = 1;
      auto up = IntersectionLattice::blowup_plane(lattice.blowups() + 1);
      auto e = up.basis(r);
      return BlowUp{std::move(up), std::move(inc), std::move(e)};
    }
    case LatticeKind::product: {
      IntMatrix inc{{1, 1}, {0, -1}, {-1, 0}};
      return BlowUp{IntersectionLattice::blowup_plane(2), std::move(inc), LatticeClass{1, -1, -1}};
    }
    case LatticeKind::general:
      break;
  }
  IntMatrix g = lattice.gram();
  for (auto& row : g) row.push_back(0);
  g.emplace_back(r + 1, 0);
  g[r][r] = -1;
  auto labels = lattice.labels();
  labels.push_back("E" + std::to_string(r));
  IntMatrix inc(r + 1, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i) inc[i][i] = 1;
  auto up = IntersectionLattice::general(std::move(g), std::move(labels));
  auto e = up.basis(r);
  return BlowUp{std::move(up), std::move(inc), std::move(e)};
}

// ---------------------------------------------------------------------------
// Blow-down

/// Identification of the blow-down of an exceptional class C.
struct BlowDownMap {
  IntersectionLattice upstairs;
  IntersectionLattice downstairs;
  LatticeClass blown_down;
  std::vector<LatticeClass> pullback_basis;  ///< images of the downstairs basis, upstairs coordinates
  std::int64_t search_bound = 0;

  template <class T>
  ClassVector<T> pullback(const ClassVector<T>& x) const {
    if (x.size() != downstairs.rank()) throw DimensionError("pullback expects a downstairs class");
    ClassVector<T> y(upstairs.rank());
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != T(0))
        for (std::size_t j = 0; j < y.size(); ++j) y[j] += x[i] * T(pullback_basis[i][j]);
    return y;
  }

  /// x -> x + (x.C) C, expressed in the downstairs basis.
  template <class T>
  ClassVector<T> pushforward(const ClassVector<T>& x) const {
    if (x.size() != upstairs.rank()) throw DimensionError("pushforward expects an upstairs class");
    const auto xc = pair(upstairs, x, blown_down);
    ClassVector<T> y = x;
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += T(xc) * T(blown_down[j]);
    ClassVector<T> v(downstairs.rank());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = T(pair(upstairs, y, pullback_basis[i]));
    return detail::apply_matrix(downstairs.gram_inverse(), v);
  }
};

namespace detail {

inline std::vector<LatticeClass> box_candidates(const IntersectionLattice& lattice, std::int64_t bound,
                                                const std::function<bool(const LatticeClass&)>& keep) {
  std::vector<LatticeClass> out;
  for_each_in_box(lattice.rank(), bound, [&](const LatticeClass& v) {
    if (keep(v)) out.push_back(v);
  });
  std::sort(out.begin(), out.end(), DescendingLex{});
  return out;
}

inline std::string box_description(const IntersectionLattice& lattice, std::int64_t bound) {
  return "|coefficient| <= " + std::to_string(bound) + " in rank " + std::to_string(lattice.rank());
}

}  // namespace detail

/// Blow-down data for an exceptional class C of a default-basis lattice.
/// The downstairs basis is found by bounded search with descending-lex
/// tie-breaking. When C is characteristic the complement is even and the
/// result is S2xS2 in its ruling basis.
inline BlowDownMap blow_down_data(const IntersectionLattice& lattice, const LatticeClass& c, std::int64_t bound = 3) {
  if (!lattice.is_default()) throw InvalidBlowDown("blow-down needs a default-basis lattice, got " + lattice.name());
  if (c.size() != lattice.rank()) throw DimensionError("blow-down class has wrong rank");
  if (!is_exceptional(lattice, c))
    throw InvalidBlowDown("class " + format_class(lattice, c) + " is not exceptional");
  const LatticeClass k_down = *lattice.canonical() - c;  // pullback of the downstairs canonical class
  const auto orth = [&](const LatticeClass& v) { return pair(lattice, v, c) == 0; };

  const bool characteristic = std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x % 2 != 0; });
  if (characteristic) {
    ensure_invariant(lattice.rank() == 3, "characteristic exceptional class outside CP2#2");
    auto rulings = detail::box_candidates(lattice, bound, [&](const LatticeClass& v) {
      return orth(v) && pair(lattice, v, v) == 0 && pair(lattice, v, k_down) == -2;
    });
    for (std::size_t i = 0; i < rulings.size(); ++i)
      for (std::size_t j = i + 1; j < rulings.size(); ++j)
        if (pair(lattice, rulings[i], rulings[j]) == 1) {
          BlowDownMap map{lattice, IntersectionLattice::product(), c, {rulings[i], rulings[j]}, bound};
          ensure_invariant(map.pullback(*map.downstairs.canonical()) == k_down, "ruling basis misses K");
          return map;
        }
    throw SearchExhausted("no ruling pair found in box " + detail::box_description(lattice, bound));
  }

  const std::size_t r_down = lattice.rank() - 1;
  auto lines = detail::box_candidates(lattice, bound, [&](const LatticeClass& v) {
    return orth(v) && pair(lattice, v, v) == 1 && pair(lattice, v, k_down) == -3;
  });
  auto exceptional = detail::box_candidates(lattice, bound, [&](const LatticeClass& v) {
    return orth(v) && pair(lattice, v, v) == -1 && pair(lattice, v, k_down) == -1;
  });
  for (const auto& line : lines) {
    std::vector<LatticeClass> basis{line};
    for (const auto& e : exceptional) {
      if (basis.size() == r_down) break;
      if (pair(lattice, e, line) != 0) continue;
      bool ok = true;
      for (std::size_t i = 1; i < basis.size() && ok; ++i) ok = pair(lattice, e, basis[i]) == 0;
      if (ok) basis.push_back(e);
    }
    if (basis.size() != r_down) continue;
    BlowDownMap map{lattice, IntersectionLattice::blowup_plane(static_cast<int>(r_down) - 1), c, std::move(basis), bound};
    ensure_invariant(map.pullback(*map.downstairs.canonical()) == k_down, "downstairs basis misses K");
    return map;
  }
  throw SearchExhausted("no downstairs basis found in box " + detail::box_description(lattice, bound));
}

// ---------------------------------------------------------------------------
// Basis-independent fingerprints

/// Invariants of an integral class under canonical-class-preserving isometries.
struct ClassFingerprint {
  std::string lattice;
  std::int64_t square = 0;
  std::optional<std::int64_t> canonical_pairing;
  std::vector<std::int64_t> exceptional_pairings;  ///< sorted multiset {x.C}; rulings on S2xS2

  friend bool operator==(const ClassFingerprint&, const ClassFingerprint&) = default;

  ClassFingerprint negated() const {
    ClassFingerprint f = *this;
    if (f.canonical_pairing) f.canonical_pairing = -*f.canonical_pairing;
    for (auto& p : f.exceptional_pairings) p = -p;
    std::sort(f.exceptional_pairings.begin(), f.exceptional_pairings.end());
    return f;
  }

  std::string to_string() const {
    std::string s = lattice + ":sq=" + std::to_string(square);
    if (canonical_pairing) s += ",K=" + std::to_string(*canonical_pairing);
    s += ",exc={";
    for (std::size_t i = 0; i < exceptional_pairings.size(); ++i)
      s += (i ? "," : "") + std::to_string(exceptional_pairings[i]);
    return s + "}";
  }
};

inline ClassFingerprint class_fingerprint(const IntersectionLattice& lattice, const LatticeClass& x) {
  ClassFingerprint f;
  f.lattice = lattice.name();
  f.square = pair(lattice, x, x);
  if (auto k = lattice.canonical()) f.canonical_pairing = pair(lattice, x, *k);
  auto targets = lattice.kind() == LatticeKind::product ? ruling_classes(lattice) : exceptional_classes(lattice).classes;
  for (const auto& c : targets) f.exceptional_pairings.push_back(pair(lattice, x, c));
  std::sort(f.exceptional_pairings.begin(), f.exceptional_pairings.end());
  return f;
}

}  // namespace dhwalk
