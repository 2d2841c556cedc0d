#pragma once

// Dense symmetric eigenvalues of base-graph matrices, exact values for the
// graph families whose spectra are rational, and tolerance-aware multiset
// comparison used by every oracle check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lexspectra/graph.hpp"
#include "lexspectra/numeric.hpp"

namespace lexspectra {

enum class MatrixKind { adjacency, laplacian, signless_laplacian };

inline std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::adjacency: return "adjacency";
    case MatrixKind::laplacian: return "laplacian";
    case MatrixKind::signless_laplacian: return "signless-laplacian";
  }
  return "?";
}

inline MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "adjacency") return MatrixKind::adjacency;
  if (text == "laplacian") return MatrixKind::laplacian;
  if (text == "signless-laplacian") return MatrixKind::signless_laplacian;
  throw ParseError("unknown matrix kind '" + std::string(text) + "'");
}

inline std::vector<long long> integer_matrix(const Graph& g, MatrixKind kind) {
  const std::size_t n = g.order();
  std::vector<long long> a(n * n, 0);
  const long long off = kind == MatrixKind::laplacian ? -1 : 1;
  for (std::size_t u = 0; u < n; ++u) {
    if (kind != MatrixKind::adjacency) a[u * n + u] = static_cast<long long>(g.degree(u));
    for (Vertex v : g.neighbors(u)) a[u * n + v] = off;
  }
  return a;
}

inline Eigen::MatrixXd graph_matrix(const Graph& g, MatrixKind kind) {
  const auto n = static_cast<Eigen::Index>(g.order());
  auto ints = integer_matrix(g, kind);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<double>(ints[i * n + j]);
  }
  return m;
}

// Eigenvalues of a dense symmetric matrix in decreasing order.
inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw NumericError("eigensolver input is not square");
  if (m.rows() == 0) return {};
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 0.0) throw NumericError("eigensolver input is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

template <class Real>
struct JacobiResult {
  std::vector<Real> values;  // decreasing
  Real error_bound;          // |lambda_i - values[i]| <= error_bound for all i
};

// Cyclic Jacobi rotations on a row-major symmetric matrix. By Weyl's
// inequality the sorted diagonal is within the Frobenius norm of the
// remaining off-diagonal part of the sorted true eigenvalues.
template <class Real>
JacobiResult<Real> jacobi_eigenvalues(std::vector<Real> a, std::size_t n, const Real& tolerance,
                                      std::size_t max_sweeps = 100) {
  using std::abs;
  using std::sqrt;
  using boost::multiprecision::abs;
  using boost::multiprecision::sqrt;
  if (a.size() != n * n) throw NumericError("jacobi: matrix shape mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> Real& { return a[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (at(i, j) != at(j, i)) throw NumericError("jacobi: matrix is not symmetric");
    }
  }
  Real scale = 0;
  for (const Real& x : a) scale += x * x;
  scale = sqrt(scale);
  auto off_norm = [&] {
    Real s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2 * at(i, j) * at(i, j);
    }
    return sqrt(s);
  };
  std::size_t sweep = 0;
  Real off = off_norm();
  for (; sweep < max_sweeps && off > tolerance; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Real apq = at(p, q);
        if (apq == 0) continue;
        Real theta = (at(q, q) - at(p, p)) / (2 * apq);
        Real t = 1 / (abs(theta) + sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        Real c = 1 / sqrt(t * t + 1);
        Real s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          Real akp = at(k, p);
          Real akq = at(k, q);
          at(k, p) = at(p, k) = c * akp - s * akq;
          at(k, q) = at(q, k) = s * akp + c * akq;
        }
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0;
      }
    }
    off = off_norm();
  }
  if (off > tolerance) throw NumericError("jacobi eigensolver did not converge");
  JacobiResult<Real> result;
  for (std::size_t i = 0; i < n; ++i) result.values.push_back(at(i, i));
  std::sort(result.values.begin(), result.values.end(), std::greater<>());
  // Rounding in the accumulated rotations, a few ulps of the norm per sweep.
  Real ulp = std::numeric_limits<Real>::epsilon();
  result.error_bound = off + Real(8 * (sweep + 1) * n) * ulp * (scale + 1);
  return result;
}

// ---------------------------------------------------------------------------

// A real number that is either an exact rational or an approximation with
// an absolute error bound.
class ExactReal {
 public:
  ExactReal() : repr_(Rational(0)) {}

  static ExactReal exact(Rational value) { return ExactReal(Repr(std::move(value))); }

  static ExactReal approx(HighFloat value, HighFloat error) {
    if (!(error > 0)) throw NumericError("approximate value needs a positive error bound");
    return ExactReal(Repr(Approx{std::move(value), std::move(error)}));
  }

  bool is_exact() const { return std::holds_alternative<Rational>(repr_); }

  const Rational& rational() const {
    if (!is_exact()) throw UnsupportedError("value is not exact");
    return std::get<Rational>(repr_);
  }

  HighFloat value() const {
    return is_exact() ? to_high(std::get<Rational>(repr_)) : std::get<Approx>(repr_).value;
  }

  HighFloat error_bound() const { return is_exact() ? HighFloat(0) : std::get<Approx>(repr_).error; }

  double to_double() const { return static_cast<double>(value()); }

  // scale * this + offset
  ExactReal affine(const Rational& scale, const Rational& offset) const {
    if (is_exact()) return exact(rational() * scale + offset);
    const auto& a = std::get<Approx>(repr_);
    HighFloat s = to_high(scale);
    HighFloat v = a.value * s + to_high(offset);
    HighFloat err = a.error * boost::multiprecision::abs(s) + rounding_slack(v, a.value * s);
    return approx(v, err);
  }

  friend ExactReal operator+(const ExactReal& a, const ExactReal& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.rational() + b.rational());
    HighFloat v = a.value() + b.value();
    return approx(v, a.error_bound() + b.error_bound() + rounding_slack(v, a.value()));
  }

  friend ExactReal operator-(const ExactReal& a) { return a.affine(Rational(-1), Rational(0)); }
  friend ExactReal operator-(const ExactReal& a, const ExactReal& b) { return a + (-b); }

  // True when the two values are provably equal (exact) or their error
  // intervals overlap (approximate).
  bool compatible_with(const ExactReal& other) const {
    if (is_exact() && other.is_exact()) return rational() == other.rational();
    return boost::multiprecision::abs(value() - other.value()) <= error_bound() + other.error_bound();
  }

  // "3", "-2", "1/2", or the 50-digit approximation.
  std::string to_string() const {
    if (is_exact()) return lexspectra::to_string(rational());
    return std::get<Approx>(repr_).value.str(std::numeric_limits<HighFloat>::max_digits10 - 1,
                                             std::ios_base::scientific);
  }

  std::string error_string() const {
    return is_exact() ? std::string("0") : std::get<Approx>(repr_).error.str(6, std::ios_base::scientific);
  }

 private:
  struct Approx {
    HighFloat value;
    HighFloat error;
  };
  using Repr = std::variant<Rational, Approx>;
  explicit ExactReal(Repr r) : repr_(std::move(r)) {}

  static HighFloat rounding_slack(const HighFloat& a, const HighFloat& b) {
    HighFloat mag = boost::multiprecision::abs(a) + boost::multiprecision::abs(b);
    return 4 * std::numeric_limits<HighFloat>::epsilon() * mag +
           std::numeric_limits<HighFloat>::min();
  }

  Repr repr_;
};

struct SpectrumValue {
  ExactReal value;
  std::size_t multiplicity = 0;
};

// Distinct eigenvalues of one matrix of one graph, strictly decreasing.
struct BaseSpectrum {
  MatrixKind kind = MatrixKind::adjacency;
  std::size_t order = 0;
  std::vector<SpectrumValue> entries;

  bool is_exact() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const SpectrumValue& e) { return e.value.is_exact(); });
  }

  std::size_t total_multiplicity() const {
    std::size_t s = 0;
    for (const auto& e : entries) s += e.multiplicity;
    return s;
  }

  // Index of the entry holding `value`, if any.
  std::optional<std::size_t> find(const Rational& value) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].value.compatible_with(ExactReal::exact(value))) return i;
    }
    return std::nullopt;
  }
};

using NumericMultiset = std::vector<std::pair<double, std::uint64_t>>;

inline NumericMultiset to_multiset(const BaseSpectrum& s) {
  NumericMultiset out;
  for (const auto& e : s.entries) out.emplace_back(e.value.to_double(), e.multiplicity);
  return out;
}

// Checks the trace identities of a base spectrum against its graph:
// adjacency sum 0 and sum of squares 2|E|; (signless) Laplacian sum 2|E|;
// Laplacian least value 0.
inline bool consistent_with(const BaseSpectrum& s, const Graph& g, double tolerance = 1e-6) {
  if (s.order != g.order() || s.total_multiplicity() != g.order()) return false;
  for (std::size_t i = 1; i < s.entries.size(); ++i) {
    if (!(s.entries[i - 1].value.value() > s.entries[i].value.value())) return false;
  }
  ExactReal sum, squares;
  double sq = 0;
  for (const auto& e : s.entries) {
    sum = sum + e.value.affine(Rational(e.multiplicity), Rational(0));
    sq += e.value.to_double() * e.value.to_double() * static_cast<double>(e.multiplicity);
  }
  const double tol = tolerance * static_cast<double>(g.order());
  const Rational two_e(2 * g.edge_count());
  auto near = [&](const ExactReal& v, const Rational& target) {
    if (v.is_exact()) return v.rational() == target;
    return std::abs(v.to_double() - static_cast<double>(target)) <= tol;
  };
  if (s.kind == MatrixKind::adjacency) {
    return near(sum, Rational(0)) && std::abs(sq - static_cast<double>(two_e)) <= tol;
  }
  if (!near(sum, two_e)) return false;
  if (s.kind == MatrixKind::laplacian) {
    const ExactReal& least = s.entries.back().value;
    return least.is_exact() ? least.rational() == 0 : std::abs(least.to_double()) <= tol;
  }
  return true;
}

struct SpectrumOptions {
  double grouping_tolerance = 1e-7;
  std::size_t dense_cap = 2048;
};

namespace detail {

template <class Real>
std::vector<std::pair<std::vector<Real>, std::size_t>> group_sorted(const std::vector<Real>& values,
                                                                     const Real& tolerance) {
  // single linkage over a decreasing list
  std::vector<std::pair<std::vector<Real>, std::size_t>> groups;
  for (const Real& v : values) {
    if (!groups.empty() && groups.back().first.back() - v <= tolerance) {
      groups.back().first.push_back(v);
    } else {
      groups.push_back({{v}, 0});
    }
  }
  for (auto& g : groups) g.second = g.first.size();
  return groups;
}

// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t exact_rank(std::vector<BigInt> a, std::size_t rows, std::size_t cols) {
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    }
    const BigInt p = a[rank * cols + c];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const BigInt f = a[i * cols + c];
      for (std::size_t j = c; j < cols; ++j) {
        a[i * cols + j] = (p * a[i * cols + j] - f * a[rank * cols + j]) / prev;
      }
    }
    prev = p;
    ++rank;
  }
  return rank;
}

// Nullity of (M - c I) for an integer matrix M and integer c.
inline std::size_t integer_nullity(const std::vector<long long>& m, std::size_t n, long long c) {
  std::vector<BigInt> a(m.begin(), m.end());
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= c;
  return n - exact_rank(std::move(a), n, n);
}

inline BaseSpectrum make_exact(MatrixKind kind, std::size_t order,
                               std::vector<std::pair<Rational, std::size_t>> values) {
  std::map<Rational, std::size_t, std::greater<>> merged;
  for (auto& [v, m] : values) {
    if (m > 0) merged[v] += m;
  }
  BaseSpectrum s{kind, order, {}};
  for (auto& [v, m] : merged) s.entries.push_back({ExactReal::exact(v), m});
  return s;
}

}  // namespace detail

// Floating-point spectrum via a dense symmetric solve; eigenvalues within
// the grouping tolerance are merged.
inline BaseSpectrum eigen_spectrum(const Graph& g, MatrixKind kind, const SpectrumOptions& options = {}) {
  if (g.order() > options.dense_cap) {
    throw SizeError("dense eigensolve of " + std::to_string(g.order()) + " vertices exceeds cap " +
                    std::to_string(options.dense_cap));
  }
  auto values = symmetric_eigenvalues(graph_matrix(g, kind));
  BaseSpectrum s{kind, g.order(), {}};
  for (auto& [members, count] : detail::group_sorted(values, options.grouping_tolerance)) {
    double mean = 0;
    for (double v : members) mean += v;
    mean /= static_cast<double>(members.size());
    double spread = members.front() - members.back();
    s.entries.push_back({ExactReal::approx(HighFloat(mean), HighFloat(std::max(1e-10, spread))), count});
  }
  return s;
}

// Closed-form rational spectra for named graph families.
inline BaseSpectrum exact_spectrum(const GraphSpec& spec, MatrixKind kind) {
  using F = GraphSpec::Family;
  using Values = std::vector<std::pair<Rational, std::size_t>>;
  const std::size_t n = spec.parameter;
  auto unsupported = [&] {
    return UnsupportedError("no exact " + std::string(to_string(kind)) + " spectrum registered for " +
                            spec.name());
  };
  // Adjacency spectrum of an r-regular graph determines the other two.
  auto regular = [&](std::size_t order, long long r, const Values& adjacency) {
    Values out;
    for (const auto& [v, m] : adjacency) {
      if (kind == MatrixKind::adjacency) out.emplace_back(v, m);
      if (kind == MatrixKind::laplacian) out.emplace_back(Rational(r) - v, m);
      if (kind == MatrixKind::signless_laplacian) out.emplace_back(Rational(r) + v, m);
    }
    return detail::make_exact(kind, order, std::move(out));
  };
  switch (spec.family) {
    case F::complete:
      if (n == 1) return regular(1, 0, {{0, 1}});
      return regular(n, static_cast<long long>(n - 1), {{Rational(n - 1), 1}, {Rational(-1), n - 1}});
    case F::empty:
      return regular(n, 0, {{0, n}});
    case F::petersen:
      return regular(10, 3, {{3, 1}, {1, 5}, {-2, 4}});
    case F::cycle:
      if (n == 3) return regular(3, 2, {{2, 1}, {-1, 2}});
      if (n == 4) return regular(4, 2, {{2, 1}, {0, 2}, {-2, 1}});
      if (n == 6) return regular(6, 2, {{2, 1}, {1, 2}, {-1, 2}, {-2, 1}});
      throw unsupported();
    case F::path:
      if (n == 1) return regular(1, 0, {{0, 1}});
      if (n == 2) return regular(2, 1, {{1, 1}, {-1, 1}});
      // P3 is bipartite, so its signless Laplacian is similar to its Laplacian.
      if (n == 3 && kind != MatrixKind::adjacency) return detail::make_exact(kind, 3, {{3, 1}, {1, 1}, {0, 1}});
      throw unsupported();
    case F::star: {
      if (n == 1) return regular(1, 0, {{0, 1}});
      if (n == 2) return regular(2, 1, {{1, 1}, {-1, 1}});
      if (kind != MatrixKind::adjacency) {
        return detail::make_exact(kind, n, {{Rational(n), 1}, {1, n - 2}, {0, 1}});
      }
      // +-sqrt(n-1), rational only for perfect squares
      auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n - 1))));
      if (root * root != n - 1) throw unsupported();
      return detail::make_exact(kind, n, {{Rational(root), 1}, {0, n - 2}, {-Rational(root), 1}});
    }
    case F::paw:
    case F::explicit_edges:
      break;
  }
  throw unsupported();
}

struct RefineOptions {
  std::size_t high_precision_cap = 64;  // Jacobi in 50-digit arithmetic up to this order
  std::size_t certify_cap = 128;        // exact integer certification up to this order
  std::size_t dense_cap = 2048;
};

// Spectrum for use as a symbolic base: high-precision values with rigorous
// error bounds, and every eigenvalue that is an integer certified exactly
// (nullity of M - cI equals the observed multiplicity).
inline BaseSpectrum refined_spectrum(const Graph& g, MatrixKind kind, const RefineOptions& options = {}) {
  const std::size_t n = g.order();
  if (n > options.dense_cap) throw SizeError("refined spectrum exceeds the dense cap");
  const auto ints = integer_matrix(g, kind);
  std::vector<HighFloat> values;
  HighFloat bound;
  HighFloat grouping;
  if (n <= options.high_precision_cap) {
    std::vector<HighFloat> a(ints.begin(), ints.end());
    auto result = jacobi_eigenvalues<HighFloat>(std::move(a), n, HighFloat("1e-46"));
    values = std::move(result.values);
    bound = result.error_bound;
    grouping = HighFloat("1e-30");
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(graph_matrix(g, kind));
    if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
    const Eigen::MatrixXd m = graph_matrix(g, kind);
    double worst = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      auto v = solver.eigenvectors().col(i);
      worst = std::max(worst, (m * v - solver.eigenvalues()(i) * v).norm() / v.norm());
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) values.emplace_back(solver.eigenvalues()(i));
    std::sort(values.begin(), values.end(), std::greater<>());
    bound = HighFloat(worst + 1e-13 * (m.norm() + 1));
    grouping = HighFloat(1e-7);
  }
  std::vector<std::pair<Rational, std::size_t>> exact;
  BaseSpectrum s{kind, n, {}};
  for (auto& [members, count] : detail::group_sorted(values, grouping)) {
    HighFloat mean = 0;
    for (const auto& v : members) mean += v;
    mean /= members.size();
    HighFloat err = bound + (members.front() - members.back());
    HighFloat nearest = boost::multiprecision::round(mean);
    if (n <= options.certify_cap && boost::multiprecision::abs(mean - nearest) <= err &&
        boost::multiprecision::abs(mean - nearest) < HighFloat(1e-6)) {
      auto c = static_cast<long long>(nearest);
      if (detail::integer_nullity(ints, n, c) == count) {
        s.entries.push_back({ExactReal::exact(Rational(c)), count});
        continue;
      }
    }
    s.entries.push_back({ExactReal::approx(mean, err), count});
  }
  return s;
}

// Registry first, then the refined numeric route. With `exact_only` a
// spectrum that is not fully rational is rejected.
inline BaseSpectrum resolve_spectrum(const GraphSpec& spec, const Graph& g, MatrixKind kind,
                                     bool exact_only = false) {
  try {
    return exact_spectrum(spec, kind);
  } catch (const UnsupportedError&) {
  }
  BaseSpectrum s = refined_spectrum(g, kind);
  if (exact_only && !s.is_exact()) {
    throw UnsupportedError("exact mode: the " + std::string(to_string(kind)) + " spectrum of " + spec.name() +
                           " is not rational");
  }
  return s;
}

// ---------------------------------------------------------------------------

struct MultisetComparison {
  bool equal = false;
  std::vector<double> unmatched_left;
  std::vector<double> unmatched_right;
  std::string report;
  explicit operator bool() const { return equal; }
};

namespace detail {

inline std::vector<double> expand_sorted(const NumericMultiset& set, std::size_t cap) {
  std::uint64_t total = 0;
  for (const auto& [v, c] : set) total += c;
  if (total > cap) throw CapacityError("multiset of size " + std::to_string(total) + " exceeds cap", total);
  std::vector<double> out;
  out.reserve(total);
  for (const auto& [v, c] : set) out.insert(out.end(), c, v);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline void describe(std::ostringstream& os, const std::vector<double>& values, std::string_view side) {
  std::map<double, std::size_t, std::greater<>> counts;
  for (double v : values) ++counts[v];
  for (const auto& [v, c] : counts) {
    if (os.tellp() > 0) os << "; ";
    os << v << " unmatched on " << side << " (x" << c << ")";
  }
}

}  // namespace detail

// Sorted two-pointer matching of two expanded multisets.
inline MultisetComparison multiset_equal(const NumericMultiset& a, const NumericMultiset& b, double tol,
                                         std::size_t cap = 10'000'000) {
  auto left = detail::expand_sorted(a, cap);
  auto right = detail::expand_sorted(b, cap);
  MultisetComparison result;
  std::size_t i = 0, j = 0;
  while (i < left.size() || j < right.size()) {
    if (i == left.size()) {
      result.unmatched_right.push_back(right[j++]);
    } else if (j == right.size()) {
      result.unmatched_left.push_back(left[i++]);
    } else if (std::abs(left[i] - right[j]) <= tol) {
      ++i;
      ++j;
    } else if (left[i] > right[j]) {
      result.unmatched_left.push_back(left[i++]);
    } else {
      result.unmatched_right.push_back(right[j++]);
    }
  }
  result.equal = result.unmatched_left.empty() && result.unmatched_right.empty();
  std::ostringstream os;
  os.precision(12);
  detail::describe(os, result.unmatched_left, "left");
  detail::describe(os, result.unmatched_right, "right");
  result.report = result.equal ? "multisets match" : os.str();
  return result;
}

}  // namespace lexspectra
