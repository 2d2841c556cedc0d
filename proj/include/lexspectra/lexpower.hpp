#pragma once

// Closed-form spectra of H-joins, lexicographic products H[G] and iterated
// lexicographic powers H^k[G], built as symbolic descriptors without ever
// constructing the product graph.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexspectra/eigensolver.hpp"
#include "lexspectra/graph.hpp"
#include "lexspectra/spectral_model.hpp"

namespace lexspectra {

// ---------------------------------------------------------------------------
// H-joins (generalized compositions), numeric

struct HJoinPart {
  BaseSpectrum spectrum;
  std::size_t order = 0;
  std::size_t regularity = 0;  // adjacency only

  static HJoinPart from_graph(const Graph& g, MatrixKind kind) {
    return {eigen_spectrum(g, kind), g.order(), lexspectra::regularity(g).value_or(0)};
  }
};

namespace detail {

inline constexpr double kPartTolerance = 1e-6;

// Removes one copy of `value` from a float spectrum.
inline NumericMultiset remove_one(const BaseSpectrum& s, double value, std::string_view what) {
  NumericMultiset out;
  bool removed = false;
  for (const auto& e : s.entries) {
    double v = e.value.to_double();
    std::uint64_t count = e.multiplicity;
    if (!removed && std::abs(v - value) <= kPartTolerance) {
      --count;
      removed = true;
    }
    if (count > 0) out.emplace_back(v, count);
  }
  if (!removed) throw HypothesisError(std::string(what));
  return out;
}

inline void check_parts(const Graph& h, std::span<const HJoinPart> parts) {
  if (parts.size() != h.order()) {
    throw HypothesisError("H-join needs exactly one part per vertex of H (" + std::to_string(h.order()) +
                          "), got " + std::to_string(parts.size()));
  }
  for (const auto& p : parts) {
    if (p.order == 0 || p.spectrum.total_multiplicity() != p.order) {
      throw HypothesisError("H-join part spectrum does not match its order");
    }
  }
}

}  // namespace detail

// Union of each part's spectrum minus its regularity, plus the spectrum of
// the quotient matrix with diagonal p_j and sqrt(m_i m_j) on edges of H.
inline NumericMultiset hjoin_adjacency_spectrum(const Graph& h, std::span<const HJoinPart> parts) {
  detail::check_parts(h, parts);
  const std::size_t n = h.order();
  NumericMultiset out;
  Eigen::MatrixXd quotient = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const HJoinPart& part = parts[j];
    if (part.spectrum.kind != MatrixKind::adjacency) throw HypothesisError("H-join adjacency needs adjacency spectra");
    // A graph is p-regular iff its largest eigenvalue is p and the sum of
    // squared eigenvalues (= 2|E|) is p*m.
    const double p = static_cast<double>(part.regularity);
    double squares = 0;
    for (const auto& e : part.spectrum.entries) {
      squares += e.value.to_double() * e.value.to_double() * static_cast<double>(e.multiplicity);
    }
    if (std::abs(part.spectrum.entries.front().value.to_double() - p) > detail::kPartTolerance ||
        std::abs(squares - p * static_cast<double>(part.order)) > detail::kPartTolerance * static_cast<double>(part.order)) {
      throw HypothesisError("H-join adjacency spectrum requires every part regular (part " + std::to_string(j) +
                            " is not " + std::to_string(part.regularity) + "-regular)");
    }
    auto rest = detail::remove_one(part.spectrum, p, "H-join part does not contain its regularity");
    out.insert(out.end(), rest.begin(), rest.end());
    const auto jj = static_cast<Eigen::Index>(j);
    quotient(jj, jj) = p;
    for (Vertex i : h.neighbors(j)) {
      quotient(jj, static_cast<Eigen::Index>(i)) =
          std::sqrt(static_cast<double>(parts[i].order) * static_cast<double>(part.order));
    }
  }
  for (double v : symmetric_eigenvalues(quotient)) out.emplace_back(v, 1);
  return out;
}

// Union of (s_j + part Laplacian spectrum minus one zero), s_j the number
// of vertices in the parts adjacent to j, plus the spectrum of the
// Laplacian quotient matrix.
inline NumericMultiset hjoin_laplacian_spectrum(const Graph& h, std::span<const HJoinPart> parts) {
  detail::check_parts(h, parts);
  const std::size_t n = h.order();
  NumericMultiset out;
  Eigen::MatrixXd quotient = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const HJoinPart& part = parts[j];
    if (part.spectrum.kind != MatrixKind::laplacian) throw HypothesisError("H-join Laplacian needs Laplacian spectra");
    std::size_t s = 0;
    for (Vertex i : h.neighbors(j)) s += parts[i].order;
    for (auto [v, c] : detail::remove_one(part.spectrum, 0.0, "H-join part Laplacian spectrum lacks 0")) {
      out.emplace_back(v + static_cast<double>(s), c);
    }
    const auto jj = static_cast<Eigen::Index>(j);
    quotient(jj, jj) = static_cast<double>(s);
    for (Vertex i : h.neighbors(j)) {
      quotient(jj, static_cast<Eigen::Index>(i)) =
          -std::sqrt(static_cast<double>(parts[i].order) * static_cast<double>(part.order));
    }
  }
  for (double v : symmetric_eigenvalues(quotient)) out.emplace_back(v, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Power parameters

struct PowerParams {
  Graph h;
  SpectrumHandle h_spectrum;
  std::optional<Graph> g;       // none: H^k itself
  SpectrumHandle g_spectrum;    // null when g is none
  std::size_t k = 0;
};

inline PowerParams make_power_params(const GraphSpec& h, const std::optional<GraphSpec>& g, std::size_t k,
                                     MatrixKind kind, bool exact_only = false) {
  Graph hg = parse_graph(h);
  PowerParams p{hg, make_handle("H", h.name(), resolve_spectrum(h, hg, kind, exact_only)), std::nullopt, nullptr, k};
  if (g) {
    Graph gg = parse_graph(*g);
    p.g_spectrum = make_handle("G", g->name(), resolve_spectrum(*g, gg, kind, exact_only));
    p.g = std::move(gg);
  }
  return p;
}

// Base spectra from the refined numeric route; for graphs without a spec.
inline PowerParams make_power_params(const Graph& h, const std::optional<Graph>& g, std::size_t k, MatrixKind kind) {
  PowerParams p{h, make_handle("H", "edges:" + std::to_string(h.order()), refined_spectrum(h, kind)), g, nullptr, k};
  if (g) p.g_spectrum = make_handle("G", "edges:" + std::to_string(g->order()), refined_spectrum(*g, kind));
  return p;
}

namespace detail {

inline void require_kind(const SpectrumHandle& s, MatrixKind kind, std::string_view who) {
  if (!s || s->spectrum.kind != kind) {
    throw HypothesisError(std::string(who) + " needs a " + std::string(to_string(kind)) + " base spectrum");
  }
}

inline void require_top(const SpectrumHandle& s, std::size_t degree, std::string_view who) {
  const auto& top = s->spectrum.entries.front();
  if (!top.value.compatible_with(ExactReal::exact(Rational(degree))) || top.multiplicity != 1) {
    throw HypothesisError(std::string(who) + ": largest eigenvalue of " + s->name +
                          " is not a simple eigenvalue equal to its degree");
  }
}

// Regularity degree of a regular connected graph, or a hypothesis error.
inline std::size_t require_regular_connected(const Graph& g, std::string_view role, std::string_view who) {
  auto q = regularity(g);
  if (!q) throw HypothesisError(std::string(who) + " requires " + std::string(role) + " regular");
  if (!is_connected(g)) throw HypothesisError(std::string(who) + " requires " + std::string(role) + " connected");
  return *q;
}

inline std::size_t zero_index(const SpectrumHandle& s) {
  const auto& last = s->spectrum.entries.back();
  if (!last.value.compatible_with(ExactReal::exact(Rational(0)))) {
    throw InternalError("Laplacian spectrum of " + s->name + " does not end with 0");
  }
  return s->spectrum.entries.size() - 1;
}

// Entries of a spectrum with one copy of the eigenvalue at `skip` removed.
inline std::vector<std::pair<std::size_t, BigInt>> minus_one_copy(const SpectrumHandle& s, std::size_t skip) {
  std::vector<std::pair<std::size_t, BigInt>> out;
  for (std::size_t i = 0; i < s->spectrum.entries.size(); ++i) {
    BigInt m = s->spectrum.entries[i].multiplicity;
    if (i == skip) m -= 1;
    if (m > 0) out.emplace_back(i, m);
  }
  return out;
}

inline SpectrumHandle k1_spectrum(MatrixKind kind) {
  return make_handle("G", "complete:1", exact_spectrum(GraphSpec::named(GraphSpec::Family::complete, 1), kind));
}

inline SpectrumDescriptor whole_spectrum(const SpectrumHandle& s, std::string layer) {
  SpectrumDescriptor d(s->spectrum.kind, BigInt(s->spectrum.order));
  for (std::size_t i = 0; i < s->spectrum.entries.size(); ++i) {
    d.add(AffineEigenvalue::affine(1, s, i, 0), BigInt(s->spectrum.entries[i].multiplicity), layer);
  }
  d.check();
  return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Adjacency

// Spectrum of H[G] for arbitrary H and p-regular G of order m:
// G eigenvalues at n times their multiplicity (one copy of p fewer per
// vertex) plus m*lambda(H) + p for every eigenvalue of H.
inline SpectrumDescriptor lex_adjacency_spectrum_step(const Graph& h, const SpectrumHandle& h_spectrum,
                                                      const SpectrumHandle& g_spectrum, std::size_t p) {
  detail::require_kind(h_spectrum, MatrixKind::adjacency, "adjacency product spectrum");
  detail::require_kind(g_spectrum, MatrixKind::adjacency, "adjacency product spectrum");
  const BaseSpectrum& gs = g_spectrum->spectrum;
  const std::size_t m = gs.order;
  {
    double squares = 0;
    for (const auto& e : gs.entries) squares += e.value.to_double() * e.value.to_double() * static_cast<double>(e.multiplicity);
    if (!gs.entries.front().value.compatible_with(ExactReal::exact(Rational(p))) &&
        std::abs(gs.entries.front().value.to_double() - static_cast<double>(p)) > 1e-9) {
      throw HypothesisError("adjacency product spectrum requires G regular");
    }
    if (std::abs(squares - static_cast<double>(p * m)) > 1e-6 * static_cast<double>(m)) {
      throw HypothesisError("adjacency product spectrum requires G regular");
    }
  }
  const BigInt n(h.order());
  SpectrumDescriptor d(MatrixKind::adjacency, n * m);
  for (const auto& [i, mult] : detail::minus_one_copy(g_spectrum, 0)) {
    d.add(AffineEigenvalue::affine(1, g_spectrum, i, 0), n * mult, "G");
  }
  for (std::size_t i = 0; i < h_spectrum->spectrum.entries.size(); ++i) {
    d.add(AffineEigenvalue::affine(BigInt(m), h_spectrum, i, BigInt(p)),
          BigInt(h_spectrum->spectrum.entries[i].multiplicity), "lambda:0");
  }
  d.check();
  return d;
}

// Adjacency spectrum of H^k[G] for connected regular H (degree q, order n)
// and G (degree p, order m):
//   non-Perron G eigenvalues with multiplicity n^k * g,
//   the regularity r_k = m q (1 + n + ... + n^(k-1)) + p once,
//   for each layer i < k and non-Perron H eigenvalue gamma of multiplicity h:
//   m n^i gamma + r_i with multiplicity n^(k-1-i) h.
inline SpectrumDescriptor power_adjacency_spectrum(const PowerParams& params) {
  constexpr std::string_view kWho = "adjacency power spectrum";
  detail::require_kind(params.h_spectrum, MatrixKind::adjacency, kWho);
  const std::size_t q = detail::require_regular_connected(params.h, "H", kWho);
  detail::require_top(params.h_spectrum, q, kWho);
  std::size_t p = 0;
  SpectrumHandle g_spectrum = detail::k1_spectrum(MatrixKind::adjacency);
  if (params.g) {
    detail::require_kind(params.g_spectrum, MatrixKind::adjacency, kWho);
    p = detail::require_regular_connected(*params.g, "G", kWho);
    detail::require_top(params.g_spectrum, p, kWho);
    g_spectrum = params.g_spectrum;
  }
  const std::size_t k = params.k;
  if (k == 0) return detail::whole_spectrum(g_spectrum, "G");

  const BigInt n(params.h.order());
  const BigInt m(g_spectrum->spectrum.order);
  auto r = [&](std::size_t i) { return BigInt(m * q * geometric_sum(n, i) + p); };

  SpectrumDescriptor d(MatrixKind::adjacency, m * ipow(n, k));
  const BigInt n_k = ipow(n, k);
  for (std::size_t l = 1; l < g_spectrum->spectrum.entries.size(); ++l) {
    d.add(AffineEigenvalue::affine(1, g_spectrum, l, 0), n_k * g_spectrum->spectrum.entries[l].multiplicity, "G");
  }
  d.add(AffineEigenvalue::constant(r(k)), 1, "perron");
  BigInt scale = m;                       // m n^i
  BigInt repeat = ipow(n, k - 1);         // n^(k-1-i)
  for (std::size_t i = 0; i < k; ++i) {
    const BigInt offset = r(i);
    for (std::size_t l = 1; l < params.h_spectrum->spectrum.entries.size(); ++l) {
      d.add(AffineEigenvalue::affine(scale, params.h_spectrum, l, offset),
            repeat * params.h_spectrum->spectrum.entries[l].multiplicity, "lambda:" + std::to_string(i));
    }
    scale *= n;
    if (i + 1 < k) repeat /= n;
  }
  d.check();
  return d;
}

// Least adjacency eigenvalue of H^k for connected q-regular H with an edge:
// n^(k-1) lambda_n(H) + q (1 + n + ... + n^(k-2)).
inline AffineEigenvalue power_least_eigenvalue(const Graph& h, const SpectrumHandle& h_spectrum, std::size_t k) {
  constexpr std::string_view kWho = "least eigenvalue of a power";
  detail::require_kind(h_spectrum, MatrixKind::adjacency, kWho);
  const std::size_t q = detail::require_regular_connected(h, "H", kWho);
  if (h.edge_count() == 0) throw HypothesisError(std::string(kWho) + " requires H to have at least one edge");
  if (k == 0) throw HypothesisError(std::string(kWho) + " requires k >= 1");
  const BigInt n(h.order());
  return AffineEigenvalue::affine(ipow(n, k - 1), h_spectrum, h_spectrum->spectrum.entries.size() - 1,
                                  BigInt(q * geometric_sum(n, k - 1)));
}

// ---------------------------------------------------------------------------
// Laplacian

// Laplacian spectrum of H[G], both arbitrary: m d_H(j) + mu_i(G) for every
// vertex j and every G eigenvalue but one zero, plus m mu(H).
inline SpectrumDescriptor lex_laplacian_spectrum_step(const Graph& h, const SpectrumHandle& h_spectrum,
                                                      const SpectrumHandle& g_spectrum) {
  detail::require_kind(h_spectrum, MatrixKind::laplacian, "Laplacian product spectrum");
  detail::require_kind(g_spectrum, MatrixKind::laplacian, "Laplacian product spectrum");
  const BigInt m(g_spectrum->spectrum.order);
  SpectrumDescriptor d(MatrixKind::laplacian, m * h.order());
  const auto g_rest = detail::minus_one_copy(g_spectrum, detail::zero_index(g_spectrum));
  for (const auto& [degree, count] : degree_histogram(h)) {
    for (const auto& [l, mult] : g_rest) {
      d.add(AffineEigenvalue::affine(1, g_spectrum, l, m * degree), mult * count, "omega");
    }
  }
  for (std::size_t j = 0; j < h_spectrum->spectrum.entries.size(); ++j) {
    d.add(AffineEigenvalue::affine(m, h_spectrum, j, 0), BigInt(h_spectrum->spectrum.entries[j].multiplicity), "top");
  }
  d.check();
  return d;
}

namespace detail {

// Adds scale * base[l] + o for every (l, mult) in `bases` and every offset
// o of the weighted degree-sum distribution, or a summary when the
// distribution exceeds the cap.
inline void add_distribution_layer(SpectrumDescriptor& d, const DegreeHistogram& hist,
                                   const std::vector<BigInt>& weights, const BigInt& scale,
                                   const SpectrumHandle& spectrum,
                                   const std::vector<std::pair<std::size_t, BigInt>>& bases,
                                   const std::string& layer, std::size_t cap) {
  if (bases.empty()) return;
  try {
    OffsetDistribution dist = offset_distribution(hist, weights, cap);
    for (const auto& [l, mult] : bases) {
      for (const auto& [offset, count] : dist.counts) {
        d.add(AffineEigenvalue::affine(scale, spectrum, l, offset), mult * count, layer);
      }
    }
  } catch (const CapacityError&) {
    d.add_summary({layer, scale, spectrum, bases, distribution_summary(hist, weights), weights.size()});
  }
}

}  // namespace detail

// Laplacian spectrum of H^k[G] for arbitrary H (order n) and G (order m):
//   omega:   mu_l(G) + sum_{i=1..k} m n^(i-1) d_H(j_i), over all tuples,
//            l ranging over all G eigenvalues but one zero;
//   gamma:i: m n^(i-2) mu_l(H) + sum_{r=i..k} m n^(r-1) d_H(j_r), i = 2..k,
//            l over all H eigenvalues but one zero;
//   top:     m n^(k-1) mu_j(H) for every eigenvalue of H.
// Without G the power H^k is computed as H^(k-1)[H]. Layers whose offset
// distribution exceeds `cap` distinct values are kept as summaries.
inline SpectrumDescriptor power_laplacian_spectrum(const PowerParams& params, std::size_t cap = 1'000'000) {
  constexpr std::string_view kWho = "Laplacian power spectrum";
  detail::require_kind(params.h_spectrum, MatrixKind::laplacian, kWho);
  SpectrumHandle g_spectrum = params.g_spectrum;
  std::size_t k = params.k;
  if (!params.g) {
    if (k == 0) return detail::whole_spectrum(detail::k1_spectrum(MatrixKind::laplacian), "G");
    g_spectrum = make_handle("G", params.h_spectrum->graph, params.h_spectrum->spectrum);
    k -= 1;
  }
  detail::require_kind(g_spectrum, MatrixKind::laplacian, kWho);
  if (k == 0) return detail::whole_spectrum(g_spectrum, "G");

  const BigInt n(params.h.order());
  const BigInt m(g_spectrum->spectrum.order);
  const DegreeHistogram hist = degree_histogram(params.h);
  SpectrumDescriptor d(MatrixKind::laplacian, m * ipow(n, k));

  std::vector<BigInt> weights;  // m n^(i-1), i = 1..k
  for (std::size_t i = 0; i < k; ++i) weights.push_back(m * ipow(n, i));

  detail::add_distribution_layer(d, hist, weights, 1, g_spectrum,
                                 detail::minus_one_copy(g_spectrum, detail::zero_index(g_spectrum)), "omega", cap);
  const auto h_rest = detail::minus_one_copy(params.h_spectrum, detail::zero_index(params.h_spectrum));
  for (std::size_t i = 2; i <= k; ++i) {
    std::vector<BigInt> suffix(weights.begin() + static_cast<std::ptrdiff_t>(i - 1), weights.end());
    detail::add_distribution_layer(d, hist, suffix, m * ipow(n, i - 2), params.h_spectrum, h_rest,
                                   "gamma:" + std::to_string(i), cap);
  }
  const BigInt top_scale = m * ipow(n, k - 1);
  for (std::size_t j = 0; j < params.h_spectrum->spectrum.entries.size(); ++j) {
    d.add(AffineEigenvalue::affine(top_scale, params.h_spectrum, j, 0),
          BigInt(params.h_spectrum->spectrum.entries[j].multiplicity), "top");
  }
  d.check();
  return d;
}

namespace detail {

inline void require_connected_laplacian(const Graph& h, const SpectrumHandle& s, std::size_t k, std::string_view who) {
  require_kind(s, MatrixKind::laplacian, who);
  if (!is_connected(h)) throw HypothesisError(std::string(who) + " requires H connected");
  if (h.order() < 2) throw HypothesisError(std::string(who) + " requires H of order at least 2");
  if (k == 0) throw HypothesisError(std::string(who) + " requires k >= 1");
}

}  // namespace detail

// Algebraic connectivity of H^k: n^(k-1) mu_(n-1)(H).
inline AffineEigenvalue power_algebraic_connectivity(const Graph& h, const SpectrumHandle& h_spectrum, std::size_t k) {
  detail::require_connected_laplacian(h, h_spectrum, k, "algebraic connectivity of a power");
  const std::size_t zero = detail::zero_index(h_spectrum);
  return AffineEigenvalue::affine(ipow(BigInt(h.order()), k - 1), h_spectrum, zero - 1, 0);
}

// Laplacian index of H^k: n^(k-1) mu_1(H).
inline AffineEigenvalue power_laplacian_index(const Graph& h, const SpectrumHandle& h_spectrum, std::size_t k) {
  detail::require_connected_laplacian(h, h_spectrum, k, "Laplacian index of a power");
  return AffineEigenvalue::affine(ipow(BigInt(h.order()), k - 1), h_spectrum, 0, 0);
}

}  // namespace lexspectra
