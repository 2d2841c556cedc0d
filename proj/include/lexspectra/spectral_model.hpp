#pragma once

// Symbolic spectra of graphs far too large to build: every eigenvalue is
// scale * (base eigenvalue) + offset with big-integer scale, offset and
// multiplicity. Offset distributions compress the weighted degree sums that
// appear in the Laplacian spectra of powers over irregular factors.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lexspectra/eigensolver.hpp"
#include "lexspectra/numeric.hpp"

namespace lexspectra {

struct NamedSpectrum {
  std::string name;   // role of the factor, e.g. "H" or "G"
  std::string graph;  // generator name of the factor
  BaseSpectrum spectrum;
};

using SpectrumHandle = std::shared_ptr<const NamedSpectrum>;

inline SpectrumHandle make_handle(std::string name, std::string graph, BaseSpectrum spectrum) {
  return std::make_shared<const NamedSpectrum>(NamedSpectrum{std::move(name), std::move(graph), std::move(spectrum)});
}

struct BaseRef {
  SpectrumHandle spectrum;
  std::size_t index = 0;

  const ExactReal& value() const { return spectrum->spectrum.entries.at(index).value; }
};

class AffineEigenvalue {
 public:
  static AffineEigenvalue constant(BigInt offset) {
    AffineEigenvalue e;
    e.offset_ = std::move(offset);
    return e;
  }

  static AffineEigenvalue affine(BigInt scale, SpectrumHandle spectrum, std::size_t index, BigInt offset) {
    if (scale < 0) throw InternalError("affine eigenvalue scale must be nonnegative");
    if (scale == 0) return constant(std::move(offset));
    if (!spectrum || index >= spectrum->spectrum.entries.size()) {
      throw InternalError("affine eigenvalue refers to a missing base entry");
    }
    AffineEigenvalue e;
    e.scale_ = std::move(scale);
    e.base_ = BaseRef{std::move(spectrum), index};
    e.offset_ = std::move(offset);
    return e;
  }

  const BigInt& scale() const { return scale_; }
  const std::optional<BaseRef>& base() const { return base_; }
  const BigInt& offset() const { return offset_; }

  ExactReal value() const {
    if (!base_) return ExactReal::exact(Rational(offset_));
    return base_->value().affine(Rational(scale_), Rational(offset_));
  }

  // (scale, base name, base index, offset); base-less values use index npos.
  using Key = std::tuple<BigInt, std::string, std::size_t, BigInt>;
  Key key() const {
    if (!base_) return {scale_, std::string(), std::string::npos, offset_};
    return {scale_, base_->spectrum->name, base_->index, offset_};
  }

  // Human-readable form, e.g. "10*lambda_2(H) + 3".
  std::string expression() const {
    if (!base_) return to_string(offset_);
    const bool adjacency = base_->spectrum->spectrum.kind == MatrixKind::adjacency;
    std::string out;
    if (scale_ != 1) out += to_string(scale_) + "*";
    out += (adjacency ? "lambda_" : "mu_") + std::to_string(base_->index + 1) + "(" + base_->spectrum->name + ")";
    if (offset_ > 0) out += " + " + to_string(offset_);
    if (offset_ < 0) out += " - " + to_string(BigInt(-offset_));
    return out;
  }

 private:
  BigInt scale_ = 0;
  std::optional<BaseRef> base_;
  BigInt offset_ = 0;
};

struct SpectrumEntry {
  AffineEigenvalue value;
  BigInt multiplicity;
  std::string layer;
};

// ---------------------------------------------------------------------------
// Offset distributions

using DegreeHistogram = std::map<std::size_t, std::size_t>;

struct OffsetDistribution {
  std::map<BigInt, BigInt> counts;
  std::vector<BigInt> weights;
  BigInt total = 1;

  std::size_t positions() const { return weights.size(); }
};

struct DistributionSummary {
  BigInt count = 1;
  BigInt sum = 0;
  BigInt min = 0;
  BigInt max = 0;
  friend bool operator==(const DistributionSummary&, const DistributionSummary&) = default;
};

// Distribution of sum_i weights[i] * d_i with each d_i drawn independently
// from the histogram, by repeated convolution.
inline OffsetDistribution offset_distribution(const DegreeHistogram& histogram, std::span<const BigInt> weights,
                                              std::size_t cap = 1'000'000) {
  std::size_t n = 0;
  for (const auto& [d, c] : histogram) n += c;
  if (n == 0) throw InternalError("offset distribution needs a nonempty histogram");
  OffsetDistribution dist;
  dist.weights.assign(weights.begin(), weights.end());
  dist.counts[BigInt(0)] = 1;
  for (const BigInt& w : weights) {
    std::map<BigInt, BigInt> next;
    for (const auto& [offset, count] : dist.counts) {
      for (const auto& [d, c] : histogram) {
        next[offset + w * d] += count * c;
        if (next.size() > cap) {
          throw CapacityError("offset distribution exceeds " + std::to_string(cap) + " distinct offsets",
                              next.size());
        }
      }
    }
    dist.counts = std::move(next);
    dist.total *= n;
  }
  return dist;
}

inline DistributionSummary distribution_summary(const OffsetDistribution& dist) {
  DistributionSummary s{0, 0, 0, 0};
  bool first = true;
  for (const auto& [offset, count] : dist.counts) {
    s.count += count;
    s.sum += offset * count;
    if (first || offset < s.min) s.min = offset;
    if (first || offset > s.max) s.max = offset;
    first = false;
  }
  return s;
}

// Closed-form summary; never expands, so it works past any cap.
// sum = (sum of weights) * (sum of degrees) * n^(k-1).
inline DistributionSummary distribution_summary(const DegreeHistogram& histogram, std::span<const BigInt> weights) {
  std::size_t n = 0;
  BigInt degree_sum = 0;
  for (const auto& [d, c] : histogram) {
    n += c;
    degree_sum += BigInt(d) * c;
  }
  if (n == 0) throw InternalError("offset summary needs a nonempty histogram");
  const BigInt lo(histogram.begin()->first);
  const BigInt hi(histogram.rbegin()->first);
  DistributionSummary s;
  s.count = ipow(BigInt(n), weights.size());
  BigInt weight_sum = 0;
  for (const BigInt& w : weights) weight_sum += w;
  s.sum = weights.empty() ? BigInt(0) : BigInt(weight_sum * degree_sum * ipow(BigInt(n), weights.size() - 1));
  s.min = weight_sum * lo;
  s.max = weight_sum * hi;
  return s;
}

// A layer whose offsets were too many to list: the values are
// scale * base[l] + o for every listed base entry l and every offset o of
// the distribution, with multiplicity (base multiplicity) * count(o).
struct LayerSummary {
  std::string layer;
  BigInt scale;
  SpectrumHandle spectrum;
  std::vector<std::pair<std::size_t, BigInt>> bases;  // (base index, multiplicity)
  DistributionSummary offsets;
  std::size_t positions = 0;

  BigInt multiplicity() const {
    BigInt m = 0;
    for (const auto& [i, c] : bases) m += c;
    return m * offsets.count;
  }

  ExactReal value_sum() const {
    ExactReal s = ExactReal::exact(Rational(0));
    for (const auto& [i, c] : bases) {
      const ExactReal& v = spectrum->spectrum.entries.at(i).value;
      s = s + v.affine(Rational(scale * c * offsets.count), Rational(c * offsets.sum));
    }
    return s;
  }

  ExactReal min_value() const { return spectrum->spectrum.entries.at(bases.back().first).value.affine(Rational(scale), Rational(offsets.min)); }
  ExactReal max_value() const { return spectrum->spectrum.entries.at(bases.front().first).value.affine(Rational(scale), Rational(offsets.max)); }
};

// ---------------------------------------------------------------------------

class SpectrumDescriptor {
 public:
  SpectrumDescriptor(MatrixKind kind, BigInt order) : kind_(kind), order_(std::move(order)) {}

  MatrixKind kind() const { return kind_; }
  const BigInt& order() const { return order_; }
  const std::vector<SpectrumEntry>& entries() const { return entries_; }
  const std::vector<LayerSummary>& summarized() const { return summaries_; }
  bool has_summaries() const { return !summaries_.empty(); }

  // Entries with the same (scale, base, offset) are merged.
  void add(AffineEigenvalue value, BigInt multiplicity, std::string layer) {
    if (multiplicity < 0) throw InternalError("negative multiplicity");
    if (multiplicity == 0) return;
    if (value.base()) note_base(value.base()->spectrum);
    auto key = value.key();
    auto it = index_.find(key);
    if (it != index_.end()) {
      SpectrumEntry& e = entries_[it->second];
      e.multiplicity += multiplicity;
      if (e.layer != layer && e.layer.find(layer) == std::string::npos) e.layer += "+" + layer;
      return;
    }
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back({std::move(value), std::move(multiplicity), std::move(layer)});
  }

  void add_summary(LayerSummary summary) {
    if (summary.bases.empty() || summary.offsets.count == 0) return;
    note_base(summary.spectrum);
    summaries_.push_back(std::move(summary));
  }

  BigInt total_multiplicity() const {
    BigInt s = 0;
    for (const auto& e : entries_) s += e.multiplicity;
    for (const auto& l : summaries_) s += l.multiplicity();
    return s;
  }

  void check() const {
    BigInt total = total_multiplicity();
    if (total != order_) {
      throw InternalError("multiplicities sum to " + to_string(total) + " but the order is " + to_string(order_));
    }
  }

  // Sum of multiplicity * value over all entries and summarized layers.
  ExactReal trace() const {
    ExactReal s = ExactReal::exact(Rational(0));
    for (const auto& e : entries_) s = s + e.value.value().affine(Rational(e.multiplicity), Rational(0));
    for (const auto& l : summaries_) s = s + l.value_sum();
    return s;
  }

  // Total multiplicity of entries whose layer label starts with `prefix`.
  BigInt layer_multiplicity(std::string_view prefix) const {
    BigInt s = 0;
    for (const auto& e : entries_) {
      if (std::string_view(e.layer).substr(0, prefix.size()) == prefix) s += e.multiplicity;
    }
    for (const auto& l : summaries_) {
      if (std::string_view(l.layer).substr(0, prefix.size()) == prefix) s += l.multiplicity();
    }
    return s;
  }

  // Distinct base spectra referenced, in first-use order.
  std::vector<SpectrumHandle> bases() const {
    std::vector<SpectrumHandle> out;
    auto note = [&](const SpectrumHandle& h) {
      if (std::none_of(out.begin(), out.end(), [&](const SpectrumHandle& o) { return o->name == h->name; })) {
        out.push_back(h);
      }
    };
    for (const auto& e : entries_) {
      if (e.value.base()) note(e.value.base()->spectrum);
    }
    for (const auto& l : summaries_) note(l.spectrum);
    return out;
  }

 private:
  // Keys identify bases by name, so one name must mean one spectrum.
  void note_base(const SpectrumHandle& h) {
    auto [it, inserted] = base_names_.emplace(h->name, h.get());
    if (!inserted && it->second != h.get()) {
      throw InternalError("two different base spectra are both named '" + h->name + "'");
    }
  }

  MatrixKind kind_;
  BigInt order_;
  std::map<std::string, const NamedSpectrum*> base_names_;
  std::vector<SpectrumEntry> entries_;
  std::vector<LayerSummary> summaries_;
  std::map<AffineEigenvalue::Key, std::size_t> index_;
};

namespace detail {

inline bool greater_value(const SpectrumEntry& a, const SpectrumEntry& b) {
  ExactReal va = a.value.value();
  ExactReal vb = b.value.value();
  if (va.is_exact() && vb.is_exact()) {
    if (va.rational() != vb.rational()) return va.rational() > vb.rational();
  } else if (va.value() != vb.value()) {
    return va.value() > vb.value();
  }
  return a.layer < b.layer;
}

}  // namespace detail

// Value-level view: entries whose values are provably equal (exact
// rationals) are merged into one constant; entries with a unique value keep
// their symbolic form. Output is sorted by decreasing value.
inline SpectrumDescriptor normalize(const SpectrumDescriptor& raw) {
  std::map<Rational, std::vector<const SpectrumEntry*>> by_value;
  std::vector<const SpectrumEntry*> inexact;
  for (const auto& e : raw.entries()) {
    ExactReal v = e.value.value();
    if (v.is_exact()) {
      by_value[v.rational()].push_back(&e);
    } else {
      inexact.push_back(&e);
    }
  }
  std::vector<SpectrumEntry> merged;
  for (const auto& [value, group] : by_value) {
    if (group.size() == 1) {
      merged.push_back(*group.front());
      continue;
    }
    BigInt mult = 0;
    std::vector<std::string> layers;
    for (const SpectrumEntry* e : group) {
      mult += e->multiplicity;
      if (std::find(layers.begin(), layers.end(), e->layer) == layers.end()) layers.push_back(e->layer);
    }
    std::string label;
    for (const auto& l : layers) label += (label.empty() ? "" : "+") + l;
    if (!is_integer(value)) {
      // A rational non-integer value never arises from graph spectra.
      throw InternalError("non-integral rational eigenvalue " + to_string(value));
    }
    merged.push_back({AffineEigenvalue::constant(boost::multiprecision::numerator(value)), mult, label});
  }
  for (const SpectrumEntry* e : inexact) merged.push_back(*e);
  std::stable_sort(merged.begin(), merged.end(), detail::greater_value);
  SpectrumDescriptor out(raw.kind(), raw.order());
  for (auto& e : merged) out.add(std::move(e.value), std::move(e.multiplicity), std::move(e.layer));
  for (const auto& l : raw.summarized()) out.add_summary(l);
  out.check();
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::size_t achievable_digits(const HighFloat& value, const HighFloat& error) {
  using boost::multiprecision::abs;
  using boost::multiprecision::floor;
  using boost::multiprecision::log10;
  if (value == 0 || abs(value) <= error) return 0;
  HighFloat e10 = floor(log10(abs(value)));
  HighFloat digits = floor(e10 + 1 - log10(2 * error));
  if (digits <= 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(digits), std::numeric_limits<HighFloat>::digits10 - 2);
}

}  // namespace detail

// Exact values render in full (integers as plain digit strings, other
// rationals as p/q). Approximate values render with `digits` significant
// digits, which must be supported by the error bound.
inline std::string evaluate(const ExactReal& value, std::size_t digits) {
  if (digits == 0) throw PrecisionError("precision must be at least one digit", 0);
  if (value.is_exact()) return to_string(value.rational());
  HighFloat v = value.value();
  HighFloat err = value.error_bound() + std::numeric_limits<HighFloat>::epsilon() * boost::multiprecision::abs(v);
  std::size_t achievable = detail::achievable_digits(v, err);
  if (digits > achievable) {
    throw PrecisionError("requested " + std::to_string(digits) + " digits but the error bound " +
                             err.str(3, std::ios_base::scientific) + " supports only " + std::to_string(achievable),
                         achievable);
  }
  auto e10 = static_cast<long>(boost::multiprecision::floor(boost::multiprecision::log10(boost::multiprecision::abs(v))));
  auto fraction = static_cast<long>(digits) - 1 - e10;
  if (e10 >= -5 && e10 <= 20 && fraction >= 0) {
    return v.str(static_cast<std::streamsize>(fraction), std::ios_base::fixed);
  }
  return v.str(static_cast<std::streamsize>(digits - 1), std::ios_base::scientific);
}

inline std::string evaluate(const AffineEigenvalue& e, std::size_t digits) { return evaluate(e.value(), digits); }

// Fully expanded float multiset; the descriptor must be small and carry no
// summarized layers.
inline NumericMultiset expand_numeric(const SpectrumDescriptor& s, std::size_t cap) {
  if (s.has_summaries()) {
    throw CapacityError("descriptor has summarized layers and cannot be expanded", 0);
  }
  if (s.order() > cap) {
    throw CapacityError("descriptor order " + to_string(s.order()) + " exceeds expansion cap " + std::to_string(cap),
                        cap);
  }
  NumericMultiset out;
  for (const auto& e : s.entries()) {
    out.emplace_back(e.value.value().to_double(), static_cast<std::uint64_t>(e.multiplicity));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON. Big integers are always decimal strings.

namespace detail {

inline nlohmann::json value_json(const ExactReal& v) {
  nlohmann::json j = {{"value", v.to_string()}};
  if (!v.is_exact()) j["error"] = v.error_bound().str(std::numeric_limits<HighFloat>::max_digits10 - 1, std::ios_base::scientific);
  return j;
}

inline ExactReal value_from_json(const nlohmann::json& j) {
  const std::string text = j.at("value").get<std::string>();
  if (!j.contains("error")) return ExactReal::exact(parse_rational(text));
  try {
    return ExactReal::approx(HighFloat(text), HighFloat(j.at("error").get<std::string>()));
  } catch (const std::runtime_error& e) {
    throw ParseError(std::string("bad approximate value: ") + e.what());
  }
}

inline nlohmann::json base_json(const NamedSpectrum& s) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& e : s.spectrum.entries) {
    auto v = value_json(e.value);
    v["multiplicity"] = std::to_string(e.multiplicity);
    values.push_back(std::move(v));
  }
  return {{"name", s.name},
          {"graph", s.graph},
          {"kind", std::string(to_string(s.spectrum.kind))},
          {"order", s.spectrum.order},
          {"values", std::move(values)}};
}

}  // namespace detail

inline nlohmann::json to_json(const SpectrumDescriptor& s, std::size_t digits = 12) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& b : s.bases()) bases.push_back(detail::base_json(*b));
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : s.entries()) {
    const auto& base = e.value.base();
    entries.push_back({
        {"scale", to_string(e.value.scale())},
        {"baseGraph", base ? nlohmann::json(base->spectrum->name) : nlohmann::json(nullptr)},
        {"baseIndex", base ? nlohmann::json(base->index) : nlohmann::json(nullptr)},
        {"baseValue", base ? nlohmann::json(base->value().to_string()) : nlohmann::json(nullptr)},
        {"offset", to_string(e.value.offset())},
        {"multiplicity", to_string(e.multiplicity)},
        {"layer", e.layer},
        {"value", evaluate(e.value, digits)},
    });
  }
  nlohmann::json summarized = nlohmann::json::array();
  for (const auto& l : s.summarized()) {
    nlohmann::json lb = nlohmann::json::array();
    for (const auto& [i, c] : l.bases) {
      lb.push_back({{"baseIndex", i}, {"multiplicity", to_string(c)}});
    }
    summarized.push_back({
        {"layer", l.layer},
        {"scale", to_string(l.scale)},
        {"baseGraph", l.spectrum->name},
        {"bases", std::move(lb)},
        {"positions", l.positions},
        {"offsets",
         {{"count", to_string(l.offsets.count)},
          {"sum", to_string(l.offsets.sum)},
          {"min", to_string(l.offsets.min)},
          {"max", to_string(l.offsets.max)}}},
        {"multiplicity", to_string(l.multiplicity())},
    });
  }
  return {{"kind", std::string(to_string(s.kind()))},
          {"order", to_string(s.order())},
          {"precision", digits},
          {"bases", std::move(bases)},
          {"entries", std::move(entries)},
          {"summarized", std::move(summarized)}};
}

inline SpectrumDescriptor descriptor_from_json(const nlohmann::json& doc) {
  try {
    std::map<std::string, SpectrumHandle> bases;
    for (const auto& b : doc.at("bases")) {
      BaseSpectrum spectrum{parse_matrix_kind(b.at("kind").get<std::string>()), b.at("order").get<std::size_t>(), {}};
      for (const auto& v : b.at("values")) {
        spectrum.entries.push_back(
            {detail::value_from_json(v), static_cast<std::size_t>(std::stoull(v.at("multiplicity").get<std::string>()))});
      }
      auto name = b.at("name").get<std::string>();
      bases[name] = make_handle(name, b.at("graph").get<std::string>(), std::move(spectrum));
    }
    auto lookup = [&](const std::string& name) {
      auto it = bases.find(name);
      if (it == bases.end()) throw ParseError("descriptor JSON: unknown base graph '" + name + "'");
      return it->second;
    };
    SpectrumDescriptor s(parse_matrix_kind(doc.at("kind").get<std::string>()),
                         parse_bigint(doc.at("order").get<std::string>()));
    for (const auto& e : doc.at("entries")) {
      BigInt scale = parse_bigint(e.at("scale").get<std::string>());
      BigInt offset = parse_bigint(e.at("offset").get<std::string>());
      AffineEigenvalue value = e.at("baseGraph").is_null()
                                   ? AffineEigenvalue::constant(offset)
                                   : AffineEigenvalue::affine(scale, lookup(e.at("baseGraph").get<std::string>()),
                                                              e.at("baseIndex").get<std::size_t>(), offset);
      s.add(std::move(value), parse_bigint(e.at("multiplicity").get<std::string>()), e.at("layer").get<std::string>());
    }
    for (const auto& l : doc.at("summarized")) {
      LayerSummary summary;
      summary.layer = l.at("layer").get<std::string>();
      summary.scale = parse_bigint(l.at("scale").get<std::string>());
      summary.spectrum = lookup(l.at("baseGraph").get<std::string>());
      summary.positions = l.at("positions").get<std::size_t>();
      for (const auto& b : l.at("bases")) {
        summary.bases.emplace_back(b.at("baseIndex").get<std::size_t>(),
                                   parse_bigint(b.at("multiplicity").get<std::string>()));
      }
      const auto& o = l.at("offsets");
      summary.offsets = {parse_bigint(o.at("count").get<std::string>()), parse_bigint(o.at("sum").get<std::string>()),
                         parse_bigint(o.at("min").get<std::string>()), parse_bigint(o.at("max").get<std::string>())};
      s.add_summary(std::move(summary));
    }
    s.check();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("descriptor JSON: ") + e.what());
  }
}

}  // namespace lexspectra
