#pragma once

// Command-line front end: argument parsing, dispatch and rendering. Kept in
// a header so tests can drive it with string streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lexspectra/eigensolver.hpp"
#include "lexspectra/graph.hpp"
#include "lexspectra/invariants.hpp"
#include "lexspectra/lexpower.hpp"
#include "lexspectra/spectral_model.hpp"

namespace lexspectra::cli {

enum class Subcommand { spectrum, laplacian, invariants, verify, hjoin };
enum class Format { table, json };

inline constexpr std::size_t kDefaultOracleCap = 2048;
inline constexpr std::size_t kDefaultExpansionCap = 1'000'000;

enum ExitCode : int { kSuccess = 0, kFail = 1, kUsage = 2, kHypothesis = 3, kComputation = 4 };

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Command {
  Subcommand sub = Subcommand::spectrum;
  std::string h;
  std::optional<std::string> g;
  std::size_t k = 1;
  Format format = Format::table;
  std::size_t precision = 12;
  std::size_t expansion_cap = kDefaultExpansionCap;
  std::size_t oracle_cap = kDefaultOracleCap;
  bool exact = false;
  std::vector<std::string> parts;  // hjoin, and verify of an H-join
  MatrixKind matrix = MatrixKind::adjacency;
};

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline void print_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

inline std::string power_name(const Command& c) {
  std::string s = "H^" + std::to_string(c.k);
  if (c.g) s += "[G]";
  return s;
}

inline std::string describe_factors(const Command& c) {
  std::string s = "H = " + c.h;
  if (c.g) s += ", G = " + *c.g;
  return s + ", k = " + std::to_string(c.k);
}

inline std::string format_double(double v, std::size_t precision) {
  constexpr std::size_t kDoubleDigits = std::numeric_limits<double>::digits10;
  if (precision > kDoubleDigits) {
    throw PrecisionError("H-join eigenvalues are double precision; at most " + std::to_string(kDoubleDigits) +
                             " digits available",
                         kDoubleDigits);
  }
  if (std::abs(v) < 1e-12) v = 0;
  std::ostringstream os;
  os << std::setprecision(static_cast<int>(precision)) << v;
  return os.str();
}

}  // namespace detail

inline void render_spectrum_table(const SpectrumDescriptor& d, const Command& c, std::ostream& out) {
  out << to_string(d.kind()) << " spectrum of " << detail::power_name(c) << " (" << detail::describe_factors(c)
      << "), order " << to_string(d.order()) << '\n';
  std::vector<std::vector<std::string>> rows{{"value", "multiplicity", "expression", "layer"}};
  for (const auto& e : d.entries()) {
    rows.push_back({evaluate(e.value, c.precision), to_string(e.multiplicity), e.value.expression(), e.layer});
  }
  detail::print_rows(out, rows);
  for (const auto& l : d.summarized()) {
    out << "summarized layer " << l.layer << ": " << to_string(l.offsets.count) << " distinct offsets in ["
        << to_string(l.offsets.min) << ", " << to_string(l.offsets.max) << "] over " << l.bases.size()
        << " base eigenvalues, multiplicity " << to_string(l.multiplicity()) << ", values in ["
        << evaluate(l.min_value(), c.precision) << ", " << evaluate(l.max_value(), c.precision) << "]\n";
  }
}

inline nlohmann::json invariants_json(const PowerInvariants& r, std::size_t precision) {
  auto opt = [&](const std::optional<ExactReal>& v) {
    return v ? nlohmann::json(evaluate(*v, precision)) : nlohmann::json(nullptr);
  };
  nlohmann::json hoffman = nullptr;
  if (r.hoffman) {
    hoffman = {{"value", evaluate(r.hoffman->value, precision)},
               {"ceiling", r.hoffman->ceiling ? nlohmann::json(to_string(*r.hoffman->ceiling)) : nlohmann::json(nullptr)}};
  }
  return {{"order", to_string(r.order)},
          {"minDegree", to_string(r.min_degree)},
          {"maxDegree", to_string(r.max_degree)},
          {"diameter", r.diameter ? nlohmann::json(to_string(*r.diameter)) : nlohmann::json("infinity")},
          {"independenceNumber", to_string(r.independence_number)},
          {"cliqueNumber", to_string(r.clique_number)},
          {"vertexConnectivity", to_string(r.vertex_connectivity)},
          {"vertexConnectivityLowerBound", opt(r.connectivity_lower)},
          {"signlessLaplacianIndexBounds", {to_string(r.signless.q1_lower), to_string(r.signless.q1_upper)}},
          {"signlessLaplacianLeastUpperBound", to_string(r.signless.qn_upper)},
          {"hoffmanChromaticLowerBound", hoffman},
          {"stabilityUpperBound", opt(r.stability_bound)}};
}

inline void render_invariants_table(const PowerInvariants& r, const Command& c, std::ostream& out) {
  out << "invariants of " << detail::power_name(c) << " (" << detail::describe_factors(c) << ")\n";
  const nlohmann::json j = invariants_json(r, c.precision);
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, value] : j.items()) {
    std::string text;
    if (value.is_null()) {
      text = "n/a";
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      text = "[" + value[0].get<std::string>() + ", " + value[1].get<std::string>() + "]";
    } else {
      text = value["value"].get<std::string>();
      if (!value["ceiling"].is_null()) text += " (ceiling " + value["ceiling"].get<std::string>() + ")";
    }
    rows.push_back({key, text});
  }
  detail::print_rows(out, rows);
}

inline void render_multiset(const NumericMultiset& raw, MatrixKind kind, const Command& c, std::ostream& out) {
  // Group by the rendered value; the multiset comes from double solves.
  std::vector<std::pair<double, std::uint64_t>> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<std::string, std::uint64_t>> grouped;
  std::uint64_t order = 0;
  for (const auto& [v, m] : sorted) {
    std::string s = detail::format_double(v, c.precision);
    if (!grouped.empty() && grouped.back().first == s) {
      grouped.back().second += m;
    } else {
      grouped.emplace_back(s, m);
    }
    order += m;
  }
  if (c.format == Format::json) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& [s, m] : grouped) values.push_back({{"value", s}, {"multiplicity", std::to_string(m)}});
    out << nlohmann::json{{"kind", std::string(to_string(kind))},
                          {"order", std::to_string(order)},
                          {"precision", c.precision},
                          {"values", values}}
               .dump(2)
        << '\n';
    return;
  }
  out << to_string(kind) << " spectrum of the H-join of " << c.h << " with " << c.parts.size() << " parts, order "
      << order << '\n';
  std::vector<std::vector<std::string>> rows{{"value", "multiplicity"}};
  for (const auto& [s, m] : grouped) rows.push_back({s, std::to_string(m)});
  detail::print_rows(out, rows);
}

// ---------------------------------------------------------------------------
// Dispatch

namespace detail {

inline PowerParams params_for(const Command& c, MatrixKind kind) {
  std::optional<GraphSpec> g;
  if (c.g) g = parse_graph_spec(*c.g);
  return make_power_params(parse_graph_spec(c.h), g, c.k, kind, c.exact);
}

inline SpectrumDescriptor power_spectrum(const Command& c, MatrixKind kind) {
  PowerParams p = params_for(c, kind);
  if (kind == MatrixKind::adjacency) return normalize(power_adjacency_spectrum(p));
  if (kind == MatrixKind::laplacian) return normalize(power_laplacian_spectrum(p, c.expansion_cap));
  throw UsageError("powers are supported for the adjacency and laplacian matrices only");
}

inline std::vector<HJoinPart> hjoin_parts(const Command& c, const Graph& h, std::vector<Graph>* graphs) {
  if (c.matrix == MatrixKind::signless_laplacian) throw UsageError("hjoin supports --matrix adjacency|laplacian");
  std::vector<HJoinPart> parts;
  for (const auto& spec : c.parts) {
    Graph g = parse_graph(spec);
    parts.push_back(HJoinPart::from_graph(g, c.matrix));
    if (graphs) graphs->push_back(std::move(g));
  }
  if (parts.size() != h.order()) {
    throw UsageError("hjoin needs one --part per vertex of H (" + std::to_string(h.order()) + "), got " +
                     std::to_string(parts.size()));
  }
  return parts;
}

inline NumericMultiset hjoin(const Command& c, const Graph& h, const std::vector<HJoinPart>& parts) {
  return c.matrix == MatrixKind::adjacency ? hjoin_adjacency_spectrum(h, parts) : hjoin_laplacian_spectrum(h, parts);
}

inline int report_comparison(const NumericMultiset& closed, const NumericMultiset& observed, const std::string& what,
                             std::size_t order, std::ostream& out) {
  MultisetComparison cmp = multiset_equal(closed, observed, 1e-6);
  if (cmp) {
    out << "PASS: " << what << ", order " << order << ", matches the dense eigensolve\n";
    return kSuccess;
  }
  out << "FAIL: " << what << ", order " << order << "\n" << cmp.report << '\n';
  return kFail;
}

inline int verify(const Command& c, std::ostream& out) {
  NumericMultiset closed;
  Graph built(1);
  std::string what;
  if (!c.parts.empty()) {
    Graph h = parse_graph(c.h);
    std::vector<Graph> graphs;
    auto parts = hjoin_parts(c, h, &graphs);
    std::size_t order = 0;
    for (const auto& g : graphs) order += g.order();
    if (order > c.oracle_cap) {
      throw SizeError("H-join of order " + std::to_string(order) + " exceeds the oracle cap " +
                      std::to_string(c.oracle_cap));
    }
    closed = hjoin(c, h, parts);
    built = generalized_composition(h, graphs);
    what = std::string(to_string(c.matrix)) + " spectrum of the H-join of " + c.h;
  } else {
    SpectrumDescriptor d = power_spectrum(c, c.matrix);
    if (d.order() > c.oracle_cap) {
      throw SizeError("power of order " + to_string(d.order()) + " exceeds the oracle cap " +
                      std::to_string(c.oracle_cap));
    }
    closed = expand_numeric(d, c.oracle_cap);
    std::optional<Graph> g;
    if (c.g) g = parse_graph(*c.g);
    built = power_graph(parse_graph(c.h), c.k, g, c.oracle_cap);
    what = std::string(to_string(c.matrix)) + " spectrum of " + power_name(c) + " (" + describe_factors(c) + ")";
  }
  SpectrumOptions options;
  options.dense_cap = c.oracle_cap;
  return report_comparison(closed, to_multiset(eigen_spectrum(built, c.matrix, options)), what, built.order(), out);
}

}  // namespace detail

namespace detail {

inline int dispatch(const Command& c, std::ostream& out) {
  if (c.precision == 0) throw UsageError("--precision must be at least 1");
  switch (c.sub) {
    case Subcommand::spectrum:
    case Subcommand::laplacian: {
      const MatrixKind kind = c.sub == Subcommand::spectrum ? MatrixKind::adjacency : MatrixKind::laplacian;
      SpectrumDescriptor d = power_spectrum(c, kind);
      if (c.format == Format::json) {
        out << to_json(d, c.precision).dump(2) << '\n';
      } else {
        render_spectrum_table(d, c, out);
      }
      return kSuccess;
    }
    case Subcommand::invariants: {
      if (c.g) throw UsageError("invariants are computed for H^k; --g is not accepted");
      const GraphSpec spec = parse_graph_spec(c.h);
      const Graph h = parse_graph(spec);
      auto adjacency = make_handle("H", spec.name(), resolve_spectrum(spec, h, MatrixKind::adjacency, c.exact));
      auto laplacian = make_handle("H", spec.name(), resolve_spectrum(spec, h, MatrixKind::laplacian, c.exact));
      PowerInvariants r = power_invariants(h, adjacency, laplacian, c.k);
      if (c.format == Format::json) {
        out << invariants_json(r, c.precision).dump(2) << '\n';
      } else {
        render_invariants_table(r, c, out);
      }
      return kSuccess;
    }
    case Subcommand::hjoin: {
      const Graph h = parse_graph(c.h);
      auto parts = hjoin_parts(c, h, nullptr);
      render_multiset(hjoin(c, h, parts), c.matrix, c, out);
      return kSuccess;
    }
    case Subcommand::verify:
      return verify(c, out);
  }
  throw InternalError("unknown subcommand");
}

}  // namespace detail

// Output is buffered so that a failing command prints nothing on `out`.
inline int run(const Command& c, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream buffer;
    const int code = detail::dispatch(c, buffer);
    out << buffer.str();
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kHypothesis;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << " (at most " << e.achievable_digits() << " digits)\n";
    return kComputation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
}

// ---------------------------------------------------------------------------
// Argument parsing

// Parses argv into `cmd`. Returns an exit code when the process should stop
// here (help, or a usage error already reported), nullopt otherwise.
inline std::optional<int> parse_command(int argc, const char* const* argv, Command& cmd, std::ostream& out,
                                        std::ostream& err) {
  CLI::App app{"Exact spectra of iterated lexicographic products H^k[G]", "lexspectra"};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.require_subcommand(1);
  std::string format = "table";
  std::string matrix = "adjacency";
  std::string g;

  const std::vector<std::pair<Subcommand, std::string>> subs{
      {Subcommand::spectrum, "adjacency spectrum of H^k[G]"},
      {Subcommand::laplacian, "Laplacian spectrum of H^k[G]"},
      {Subcommand::invariants, "closed-form invariants of H^k"},
      {Subcommand::verify, "compare a closed form with a dense eigensolve of the built graph"},
      {Subcommand::hjoin, "spectrum of an H-join given one --part per vertex of H"}};
  std::vector<std::pair<Subcommand, CLI::App*>> apps;
  for (const auto& [sub, description] : subs) {
    const char* name = sub == Subcommand::spectrum     ? "spectrum"
                       : sub == Subcommand::laplacian  ? "laplacian"
                       : sub == Subcommand::invariants ? "invariants"
                       : sub == Subcommand::verify     ? "verify"
                                                       : "hjoin";
    CLI::App* s = app.add_subcommand(name, description);
    s->add_option("--h", cmd.h, "graph H: generator (cycle:5, petersen, ...), inline JSON, or @file")->required();
    s->add_option("--k", cmd.k, "power k >= 0")->check(CLI::NonNegativeNumber);
    s->add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json"}));
    s->add_option("--precision", cmd.precision, "decimal digits for non-integer values")->check(CLI::PositiveNumber);
    s->add_flag("--exact", cmd.exact, "use exact base spectra only; fail instead of falling back to floats");
    if (sub != Subcommand::invariants) s->add_option("--g", g, "graph G (default: none)");
    if (sub == Subcommand::laplacian || sub == Subcommand::verify) {
      s->add_option("--expansion-cap", cmd.expansion_cap, "largest offset distribution listed in full");
    }
    if (sub == Subcommand::verify) {
      s->add_option("--oracle-cap", cmd.oracle_cap, "largest graph built and eigensolved")
          ->envname("LEXSPECTRA_ORACLE_CAP");
    }
    if (sub == Subcommand::verify || sub == Subcommand::hjoin) {
      s->add_option("--matrix", matrix, "adjacency or laplacian")->check(CLI::IsMember({"adjacency", "laplacian"}));
      s->add_option("--part", cmd.parts, "H-join part for the next vertex of H (repeatable)");
    }
    apps.emplace_back(sub, s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }
  for (const auto& [sub, s] : apps) {
    if (s->parsed()) cmd.sub = sub;
  }
  if (!g.empty()) cmd.g = g;
  cmd.format = format == "json" ? Format::json : Format::table;
  cmd.matrix = parse_matrix_kind(matrix);
  if (cmd.sub == Subcommand::hjoin && cmd.parts.empty()) {
    err << "error: hjoin needs --part for every vertex of H\n";
    return kUsage;
  }
  return std::nullopt;
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Command cmd;
  if (auto code = parse_command(argc, argv, cmd, out, err)) return *code;
  return run(cmd, out, err);
}

}  // namespace lexspectra::cli
