#pragma once

// Closed-form invariants of lexicographic powers H^k, from degrees and the
// base spectra of H only.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "lexspectra/eigensolver.hpp"
#include "lexspectra/graph.hpp"
#include "lexspectra/lexpower.hpp"
#include "lexspectra/numeric.hpp"
#include "lexspectra/spectral_model.hpp"

namespace lexspectra {

namespace detail {

inline void require_power(const Graph& h, std::size_t k, std::string_view who) {
  if (k == 0) throw HypothesisError(std::string(who) + " requires k >= 1");
  if (h.order() < 2) throw HypothesisError(std::string(who) + " requires H of order at least 2");
}

// (n^k - 1)/(n - 1)
inline BigInt degree_factor(const Graph& h, std::size_t k) { return geometric_sum(BigInt(h.order()), k); }

inline void require_connected_noncomplete(const Graph& h, std::string_view who) {
  if (!is_connected(h)) throw HypothesisError(std::string(who) + " requires H connected");
  if (is_complete(h)) throw HypothesisError(std::string(who) + " requires H not complete");
}

// 1 - a / (b x + c) with an error bound when x is approximate.
inline ExactReal one_minus_ratio(const Rational& a, const Rational& b, const Rational& c, const ExactReal& x,
                                 std::string_view who) {
  if (x.is_exact()) {
    Rational den = b * x.rational() + c;
    if (den == 0) throw HypothesisError(std::string(who) + ": zero denominator");
    return ExactReal::exact(Rational(1) - a / den);
  }
  const HighFloat den = to_high(b) * x.value() + to_high(c);
  const HighFloat slack = boost::multiprecision::abs(to_high(b)) * x.error_bound();
  if (boost::multiprecision::abs(den) <= slack) throw HypothesisError(std::string(who) + ": denominator may vanish");
  const HighFloat lo = 1 - to_high(a) / (den - slack);
  const HighFloat hi = 1 - to_high(a) / (den + slack);
  const HighFloat mid = (lo + hi) / 2;
  HighFloat err = boost::multiprecision::abs(hi - lo) / 2;
  err += boost::multiprecision::abs(mid) * std::numeric_limits<HighFloat>::epsilon() * 16;
  return ExactReal::approx(mid, err);
}

// Ceiling when it is determined by the value and its error bound.
inline std::optional<BigInt> certain_ceiling(const ExactReal& v) {
  if (v.is_exact()) return ceil_of(v.rational());
  const HighFloat lo = v.value() - v.error_bound();
  const HighFloat hi = v.value() + v.error_bound();
  const BigInt a = static_cast<BigInt>(boost::multiprecision::ceil(lo));
  const BigInt b = static_cast<BigInt>(boost::multiprecision::ceil(hi));
  if (a != b || boost::multiprecision::ceil(hi) == hi) return std::nullopt;
  return a;
}

}  // namespace detail

// delta(H^k) = delta(H) (n^k - 1)/(n - 1), likewise for the maximum degree.
inline std::pair<BigInt, BigInt> power_degrees(const Graph& h, std::size_t k) {
  detail::require_power(h, k, "degrees of a power");
  const BigInt s = detail::degree_factor(h, k);
  return {s * h.min_degree(), s * h.max_degree()};
}

struct StabilityResult {
  BigInt value;           // alpha(H)^k
  ExactReal bound;        // n^k (mu_1(H^k) - delta(H^k)) / Delta(H^k)
  ExactReal bound_base;   // same bound written with mu_1(H), delta(H), Delta(H)
};

// alpha(H^k) = alpha(H)^k, with the Laplacian-index upper bound in the two
// displayed forms; they agree once delta(H^k) and mu_1(H^k) = n^(k-1) mu_1(H)
// are substituted, which is checked.
inline StabilityResult power_stability(const Graph& h, const SpectrumHandle& h_laplacian, std::size_t k,
                                       std::size_t cap = kDefaultSearchCap) {
  constexpr std::string_view kWho = "stability bound of a power";
  detail::require_power(h, k, kWho);
  detail::require_kind(h_laplacian, MatrixKind::laplacian, kWho);
  if (h.max_degree() == 0) throw HypothesisError(std::string(kWho) + " requires H to have at least one edge");
  const BigInt value = ipow(BigInt(independence_number(h, cap)), k);

  const BigInt n(h.order());
  const BigInt nk = ipow(n, k);
  const BigInt nk1 = ipow(n, k - 1);
  const BigInt s = detail::degree_factor(h, k);
  const Rational delta(h.min_degree());
  const Rational big_delta(h.max_degree());
  const ExactReal& mu1 = h_laplacian->spectrum.entries.front().value;

  const ExactReal tight = mu1.affine(Rational(nk * nk1) / (big_delta * s), -Rational(nk) * delta / big_delta);
  const ExactReal base = mu1.affine(Rational(nk * (n - 1) * nk1) / (Rational(nk - 1) * big_delta),
                                    -Rational(nk) * delta / big_delta);
  if (!tight.compatible_with(base)) throw InternalError("stability bound forms disagree");
  if (tight.value() + tight.error_bound() < HighFloat(value)) throw InternalError("stability bound below alpha");
  return {value, tight, base};
}

// omega(H^k) = omega(H)^k.
inline BigInt power_clique(const Graph& h, std::size_t k, std::size_t cap = kDefaultSearchCap) {
  if (k == 0) return 1;
  return ipow(BigInt(clique_number(h, cap)), k);
}

struct ConnectivityResult {
  BigInt value;       // n^(k-1) upsilon(H)
  ExactReal lower;    // n^(k-1) mu_(n-1)(H)
  BigInt upper;       // delta(H) (n^k - 1)/(n - 1)
};

inline ConnectivityResult power_vertex_connectivity(const Graph& h, const SpectrumHandle& h_laplacian, std::size_t k,
                                                    std::size_t cap = kDefaultSearchCap) {
  constexpr std::string_view kWho = "vertex connectivity of a power";
  detail::require_power(h, k, kWho);
  detail::require_connected_noncomplete(h, kWho);
  const BigInt nk1 = ipow(BigInt(h.order()), k - 1);
  ConnectivityResult r{nk1 * vertex_connectivity(h, cap),
                       power_algebraic_connectivity(h, h_laplacian, k).value(),
                       detail::degree_factor(h, k) * h.min_degree()};
  if (r.lower.value() - r.lower.error_bound() > HighFloat(r.value) || r.value > r.upper) {
    throw InternalError("vertex connectivity of a power escapes its bounds");
  }
  return r;
}

struct ChromaticBound {
  ExactReal value;
  std::optional<BigInt> ceiling;
};

// Hoffman bound of H^k for connected q-regular H, from the least eigenvalue
// of the power:
//   1 - r_k / lambda_min(H^k)
//     = 1 - q (n^k - 1) / ((n - 1)(n^(k-1) lambda_n(H) + q (n^(k-1) - 1)/(n - 1)))
//     = 1 - (n^k - 1) / (n^(k-1) ((n - 1) lambda_n(H) / q + 1) - 1).
inline ChromaticBound power_chromatic_lower_bound(const Graph& h, const SpectrumHandle& h_adjacency, std::size_t k) {
  constexpr std::string_view kWho = "chromatic lower bound of a power";
  detail::require_power(h, k, kWho);
  const ExactReal lambda_n = power_least_eigenvalue(h, h_adjacency, 1).value();
  if (lambda_n.compatible_with(ExactReal::exact(Rational(0)))) {
    throw HypothesisError(std::string(kWho) + " requires a nonzero least eigenvalue of H");
  }
  const BigInt n(h.order());
  const Rational q(*regularity(h));
  const BigInt nk = ipow(n, k);
  const BigInt nk1 = ipow(n, k - 1);
  const BigInt s1 = geometric_sum(n, k - 1);  // (n^(k-1) - 1)/(n - 1)

  const ExactReal first = detail::one_minus_ratio(q * Rational(nk - 1), Rational((n - 1) * nk1),
                                                  Rational((n - 1) * s1) * q, lambda_n, kWho);
  const ExactReal second = detail::one_minus_ratio(Rational(nk - 1), Rational(nk1 * (n - 1)) / q,
                                                   Rational(nk1 - 1), lambda_n, kWho);
  if (!first.compatible_with(second)) throw InternalError("chromatic bound forms disagree");
  return {first, detail::certain_ceiling(first)};
}

struct SignlessBounds {
  BigInt q1_lower;   // 2 delta(H^k)
  BigInt q1_upper;   // 2 Delta(H^k)
  BigInt qn_upper;   // strict: q_n(H^k) < delta(H^k)
};

inline SignlessBounds power_signless_laplacian_bounds(const Graph& h, std::size_t k) {
  auto [lo, hi] = power_degrees(h, k);
  return {2 * lo, 2 * hi, lo};
}

// diam(H^k[G]) = diam(H) for connected non-complete H.
inline std::size_t power_diameter(const Graph& h, const std::optional<Graph>& g, std::size_t k) {
  constexpr std::string_view kWho = "diameter of a power";
  (void)g;
  if (k == 0) throw HypothesisError(std::string(kWho) + " requires k >= 1");
  detail::require_connected_noncomplete(h, kWho);
  return *diameter(h);
}

// ---------------------------------------------------------------------------

struct PowerInvariants {
  BigInt order;
  BigInt min_degree;
  BigInt max_degree;
  std::optional<BigInt> diameter;  // nullopt: infinite
  BigInt independence_number;
  BigInt clique_number;
  BigInt vertex_connectivity;
  std::optional<ExactReal> connectivity_lower;
  SignlessBounds signless;
  std::optional<ChromaticBound> hoffman;  // regular connected H only
  std::optional<ExactReal> stability_bound;
};

// All invariants of H^k. Complete and disconnected H are handled directly:
// a power of K_n is K_(n^k), a power of a disconnected graph is
// disconnected.
inline PowerInvariants power_invariants(const Graph& h, const SpectrumHandle& h_adjacency,
                                        const SpectrumHandle& h_laplacian, std::size_t k,
                                        std::size_t cap = kDefaultSearchCap) {
  detail::require_power(h, k, "invariants of a power");
  PowerInvariants r;
  const BigInt n(h.order());
  r.order = ipow(n, k);
  std::tie(r.min_degree, r.max_degree) = power_degrees(h, k);
  r.signless = power_signless_laplacian_bounds(h, k);
  r.independence_number = ipow(BigInt(independence_number(h, cap)), k);
  r.clique_number = power_clique(h, k, cap);

  if (!is_connected(h)) {
    r.diameter = std::nullopt;
    r.vertex_connectivity = 0;
  } else if (is_complete(h)) {
    r.diameter = BigInt(1);
    r.vertex_connectivity = r.order - 1;
  } else {
    r.diameter = BigInt(power_diameter(h, std::nullopt, k));
    auto c = power_vertex_connectivity(h, h_laplacian, k, cap);
    r.vertex_connectivity = c.value;
    r.connectivity_lower = c.lower;
  }
  if (h.max_degree() > 0) r.stability_bound = power_stability(h, h_laplacian, k, cap).bound;
  if (regularity(h) && is_connected(h)) {
    if (is_complete(h)) {
      r.hoffman = ChromaticBound{ExactReal::exact(Rational(r.order)), r.order};
    } else {
      r.hoffman = power_chromatic_lower_bound(h, h_adjacency, k);
    }
  }
  return r;
}

}  // namespace lexspectra
