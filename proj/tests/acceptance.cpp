// Acceptance gate: one PASS/FAIL line per criterion, failed checks listed
// underneath. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "lexspectra/cli.hpp"
#include "lexspectra/lexspectra.hpp"
#include "oracles.hpp"

using namespace lexspectra;

namespace {

class Criterion {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  bool passed() const { return failures_.empty(); }
  std::size_t checks() const { return checks_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
};

using ExactMultiset = std::map<Rational, BigInt, std::greater<>>;

ExactMultiset exact_values(const SpectrumDescriptor& d) {
  ExactMultiset out;
  for (const auto& e : d.entries()) out[e.value.value().rational()] += e.multiplicity;
  return out;
}

std::string show(const ExactMultiset& m) {
  std::string s = "{";
  for (const auto& [v, c] : m) s += " " + to_string(v) + "^" + to_string(c);
  return s + " }";
}

std::vector<double> expand(const SpectrumDescriptor& d) {
  std::vector<double> out;
  for (const auto& [v, c] : expand_numeric(d, 1'000'000)) out.insert(out.end(), c, v);
  return out;
}

std::vector<double> expand(const NumericMultiset& m) {
  std::vector<double> out;
  for (const auto& [v, c] : m) out.insert(out.end(), c, v);
  return out;
}

std::optional<GraphSpec> spec_or_none(const std::string& g) {
  if (g == "none") return std::nullopt;
  return parse_graph_spec(g);
}

// |E(H^k[G])| from e(H[F]) = n e(F) + e(H) |F|^2.
BigInt edge_count(const Graph& h, std::size_t k, const Graph& g) {
  BigInt e = g.edge_count();
  BigInt order = g.order();
  for (std::size_t i = 0; i < k; ++i) {
    e = BigInt(h.order()) * e + BigInt(h.edge_count()) * order * order;
    order *= h.order();
  }
  return e;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli_call(std::vector<std::string> args) {
  args.insert(args.begin(), "lexspectra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string json_string(const nlohmann::json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string label(const std::string& h, const std::string& g, std::size_t k) {
  return h + "^" + std::to_string(k) + "[" + g + "]";
}

// ---------------------------------------------------------------------------

void four_cycle_over_edge(Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  CliResult r = cli_call({"spectrum", "--h", "cycle:4", "--g", "complete:2", "--k", "2", "--exact", "--format", "json"});
  const double elapsed = seconds_since(start);
  c.expect(r.code == 0, "exit code " + std::to_string(r.code) + ": " + r.err);
  if (r.code != 0) return;
  const auto j = nlohmann::json::parse(r.out);
  c.expect(json_string(j.at("order")) == "32", "order " + json_string(j.at("order")));
  ExactMultiset got;
  std::string perron;
  for (const auto& e : j.at("entries")) {
    const std::string v = e.at("value").get<std::string>();
    c.expect(v.find_first_of("./e") == std::string::npos, "non-integer value " + v);
    got[Rational(BigInt(v))] += BigInt(e.at("multiplicity").get<std::string>());
    if (e.at("layer") == "perron") perron = v;
  }
  c.expect(perron == "21", "r_2 = " + perron);
  const ExactMultiset expected{{21, 1}, {5, 2}, {1, 8}, {-1, 16}, {-3, 4}, {-11, 1}};
  c.expect(got == expected, "multiset " + show(got));
  c.expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
}

void petersen_table(Criterion& c) {
  const std::vector<ExactMultiset> rows{
      {{3, 1}, {1, 5}, {-2, 4}},
      {{33, 1}, {13, 5}, {1, 50}, {-2, 40}, {-17, 4}},
      {{333, 1}, {133, 5}, {13, 50}, {1, 500}, {-2, 400}, {-17, 40}, {-167, 4}}};
  for (std::size_t k = 1; k <= 3; ++k) {
    ExactMultiset got = exact_values(
        power_adjacency_spectrum(make_power_params(parse_graph_spec("petersen"), std::nullopt, k, MatrixKind::adjacency,
                                                   true)));
    c.expect(got == rows[k - 1], "k = " + std::to_string(k) + ": " + show(got));
  }

  const auto start = std::chrono::steady_clock::now();
  CliResult r = cli_call({"spectrum", "--h", "petersen", "--k", "100", "--format", "json"});
  const double elapsed = seconds_since(start);
  c.expect(r.code == 0, "k = 100 exit code " + std::to_string(r.code));
  if (r.code != 0) return;
  const auto j = nlohmann::json::parse(r.out);
  const auto& entries = j.at("entries");
  c.expect(entries.front().at("value") == std::string(100, '3'), "k = 100 regularity is not the repunit of 3s");
  const std::string five = "5" + std::string(99, '0');
  const std::string four = "4" + std::string(99, '0');
  bool has_five = false, has_four = false;
  for (const auto& e : entries) {
    if (e.at("value") == "1" && e.at("multiplicity") == five) has_five = true;
    if (e.at("value") == "-2" && e.at("multiplicity") == four) has_four = true;
  }
  c.expect(has_five, "k = 100: no entry 1 with multiplicity 5x10^99");
  c.expect(has_four, "k = 100: no entry -2 with multiplicity 4x10^99");
  c.expect(entries.size() == 199, "k = 100: expected exactly 199 descriptor entries, got " +
                                      std::to_string(entries.size()) +
                                      " (perron 1 + base layer 2 + two per remaining layer 2*99)");
  c.expect(elapsed < 5.0, "k = 100 took " + std::to_string(elapsed) + " s");
}

void adjacency_oracle_grid(Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t cases = 0;
  for (const std::string h : {"cycle:4", "cycle:5", "complete:4", "petersen"}) {
    for (const std::string g : {"complete:1", "complete:2", "complete:3"}) {
      for (std::size_t k : {1, 2}) {
        Graph built = oracle::power(parse_graph(h), k, parse_graph(g));
        if (built.order() > 2048) continue;
        SpectrumDescriptor d =
            power_adjacency_spectrum(make_power_params(parse_graph_spec(h), spec_or_none(g), k, MatrixKind::adjacency));
        c.expect(oracle::same_multiset(expand(d), oracle::eigenvalues(built, oracle::Matrix::adjacency), 1e-6),
                 label(h, g, k) + " differs from the dense eigensolve");
        ++cases;
      }
    }
  }
  c.expect(cases == 24, std::to_string(cases) + " grid cases run");
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 60.0, "grid took " + std::to_string(elapsed) + " s");
}

void laplacian_random(Criterion& c) {
  std::mt19937 rng(4242);
  std::size_t irregular = 0;
  for (int t = 0; t < 20; ++t) {
    Graph h = oracle::random_connected(3 + t % 3, rng, 0.3);
    if (!regularity(h)) ++irregular;
    for (const std::string g : {"complete:1", "complete:2", "path:3"}) {
      for (std::size_t k : {1, 2}) {
        Graph gg = parse_graph(g);
        SpectrumDescriptor d = power_laplacian_spectrum(make_power_params(h, gg, k, MatrixKind::laplacian));
        const std::string name = to_json(h).dump() + " " + g + " k=" + std::to_string(k);
        c.expect(oracle::same_multiset(expand(d),
                                       oracle::eigenvalues(oracle::power(h, k, gg), oracle::Matrix::laplacian), 1e-6),
                 name + " differs from the dense eigensolve");
        const BigInt n(h.order()), m(gg.order());
        c.expect(d.layer_multiplicity("omega") == (m - 1) * ipow(n, k), name + " omega layer count");
        c.expect(d.layer_multiplicity("gamma") + d.layer_multiplicity("top") == ipow(n, k), name + " gamma layer count");
      }
    }
  }
  c.expect(irregular > 0, "no irregular H among the random graphs");
}

void trace_identities(Criterion& c) {
  const std::vector<std::string> hs{"complete:2", "complete:3", "complete:4", "cycle:3", "cycle:4", "cycle:6",
                                    "petersen",   "star:4",     "star:5",     "path:2",  "empty:3"};
  const std::vector<std::string> gs{"none", "complete:1", "complete:3", "cycle:4", "petersen", "star:5", "empty:2"};
  std::size_t runs = 0;
  for (const auto& h : hs) {
    for (const auto& g : gs) {
      for (std::size_t k = 0; k <= 3; ++k) {
        const Graph hg = parse_graph(h);
        const Graph gg = g == "none" ? Graph(1) : parse_graph(g);
        try {
          SpectrumDescriptor d = power_adjacency_spectrum(
              make_power_params(parse_graph_spec(h), spec_or_none(g), k, MatrixKind::adjacency, true));
          ExactReal t = d.trace();
          c.expect(t.is_exact() && t.rational() == 0, "adjacency trace of " + label(h, g, k) + " is " + t.to_string());
          ++runs;
        } catch (const HypothesisError&) {
        } catch (const UnsupportedError&) {
        }
        try {
          SpectrumDescriptor d = power_laplacian_spectrum(
              make_power_params(parse_graph_spec(h), spec_or_none(g), k, MatrixKind::laplacian, true));
          ExactReal t = d.trace();
          const BigInt e = g == "none" && k > 0 ? edge_count(hg, k - 1, hg) : edge_count(hg, k, gg);
          c.expect(t.is_exact() && t.rational() == Rational(2 * e),
                   "laplacian trace of " + label(h, g, k) + " is " + t.to_string() + ", expected " + to_string(BigInt(2 * e)));
          ++runs;
        } catch (const HypothesisError&) {
        } catch (const UnsupportedError&) {
        }
      }
    }
  }
  c.expect(runs > 300, std::to_string(runs) + " exact runs");
}

void connectivity_extremes(Criterion& c) {
  std::mt19937 rng(77);
  std::vector<std::pair<std::string, Graph>> corpus;
  for (const std::string s : {"cycle:4", "cycle:5", "cycle:6", "complete:3", "petersen", "paw", "star:4", "path:3"}) {
    corpus.emplace_back(s, parse_graph(s));
  }
  for (int t = 0; t < 8; ++t) {
    Graph g = oracle::random_connected(3 + t % 3, rng);
    corpus.emplace_back(to_json(g).dump(), g);
  }
  for (const auto& [name, h] : corpus) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const std::string who = name + " k=" + std::to_string(k);
      PowerParams p = make_power_params(h, std::nullopt, k, MatrixKind::laplacian);
      SpectrumDescriptor d = normalize(power_laplacian_spectrum(p));
      const auto& entries = d.entries();
      ExactReal a = power_algebraic_connectivity(h, p.h_spectrum, k).value();
      ExactReal idx = power_laplacian_index(h, p.h_spectrum, k).value();
      c.expect(entries.size() >= 2 && entries.back().multiplicity == 1, who + " zero is not simple");
      c.expect(idx.compatible_with(entries.front().value.value()), who + " index differs from the largest entry");
      c.expect(a.compatible_with(entries[entries.size() - 2].value.value()),
               who + " algebraic connectivity differs from the second smallest entry");
      if (d.order() <= 2048) {
        auto ev = oracle::eigenvalues(oracle::power(h, k), oracle::Matrix::laplacian);
        c.expect(std::abs(a.to_double() - ev[ev.size() - 2]) <= 1e-6, who + " algebraic connectivity vs oracle");
        c.expect(std::abs(idx.to_double() - ev.front()) <= 1e-6, who + " index vs oracle");
      }
    }
  }
}

void least_and_nesting(Criterion& c) {
  for (const std::string h : {"cycle:4", "cycle:5", "cycle:6", "complete:3", "complete:4", "petersen"}) {
    GraphSpec spec = parse_graph_spec(h);
    Graph hg = parse_graph(spec);
    auto hs = make_handle("H", h, resolve_spectrum(spec, hg, MatrixKind::adjacency));
    std::vector<SpectrumDescriptor> powers;
    for (std::size_t k = 0; k <= 4; ++k) {
      powers.push_back(normalize(power_adjacency_spectrum(make_power_params(spec, std::nullopt, k, MatrixKind::adjacency))));
    }
    for (std::size_t k = 1; k <= 4; ++k) {
      c.expect(power_least_eigenvalue(hg, hs, k).value().compatible_with(powers[k].entries().back().value.value()),
               h + " k=" + std::to_string(k) + " least eigenvalue differs from the descriptor minimum");
    }
    for (std::size_t k = 1; k <= 3; ++k) {
      for (std::size_t q = 0; k + q <= 4; ++q) {
        const auto& low = powers[k];
        const auto& high = powers[k + q];
        for (std::size_t i = 1; i < low.entries().size(); ++i) {
          const auto& e = low.entries()[i];
          BigInt available = 0;
          for (const auto& f : high.entries()) {
            if (f.value.value().compatible_with(e.value.value())) available += f.multiplicity;
          }
          c.expect(available >= e.multiplicity, h + " k=" + std::to_string(k) + " q=" + std::to_string(q) + " " +
                                                    e.value.expression() + " missing from the higher power");
        }
      }
    }
  }
}

void invariants(Criterion& c) {
  std::size_t checked = 0;
  for (std::size_t n : {3, 4, 5}) {
    for (const Graph& h : oracle::connected_noncomplete_graphs(n)) {
      auto lap = make_handle("H", "H", refined_spectrum(h, MatrixKind::laplacian));
      for (std::size_t k : {1, 2, 3}) {
        Graph built = oracle::power(h, k);
        if (built.order() > 64) continue;
        const std::string who = to_json(h).dump() + " k=" + std::to_string(k);
        c.expect(power_stability(h, lap, k).value == independence_number(built), who + " independence number");
        c.expect(power_clique(h, k) == clique_number(built), who + " clique number");
        c.expect(power_vertex_connectivity(h, lap, k).value == vertex_connectivity(built), who + " vertex connectivity");
        c.expect(static_cast<long>(power_diameter(h, std::nullopt, k)) == oracle::diameter(built), who + " diameter");
        ++checked;
      }
    }
  }
  c.expect(checked == 26 + 26 + 6, std::to_string(checked) + " built powers checked");

  Graph p = parse_graph("petersen");
  auto p_adj = make_handle("H", "petersen", exact_spectrum(parse_graph_spec("petersen"), MatrixKind::adjacency));
  ExactReal hoffman = power_chromatic_lower_bound(p, p_adj, 2).value;
  c.expect(hoffman.is_exact() && hoffman.rational() == Rational(50, 17), "petersen^2 Hoffman bound " + hoffman.to_string());

  Graph k4 = parse_graph("complete:4");
  auto k4_adj = make_handle("H", "complete:4", exact_spectrum(parse_graph_spec("complete:4"), MatrixKind::adjacency));
  ExactReal k16 = power_chromatic_lower_bound(k4, k4_adj, 2).value;
  c.expect(k16.is_exact() && k16.rational() == 16, "K4^2 Hoffman bound " + k16.to_string());
  c.expect(k16.is_exact() && k16.rational() == Rational(chromatic_number(oracle::power(k4, 2))),
           "K4^2 Hoffman bound differs from the chromatic number of K16");
}

void hjoins(Criterion& c) {
  Graph k2 = parse_graph("complete:2");
  for (MatrixKind kind : {MatrixKind::adjacency, MatrixKind::laplacian}) {
    std::vector<HJoinPart> parts{HJoinPart::from_graph(parse_graph("complete:1"), kind), HJoinPart::from_graph(k2, kind)};
    NumericMultiset got =
        kind == MatrixKind::adjacency ? hjoin_adjacency_spectrum(k2, parts) : hjoin_laplacian_spectrum(k2, parts);
    const auto k3 = oracle::eigenvalues(parse_graph("complete:3"),
                                        kind == MatrixKind::adjacency ? oracle::Matrix::adjacency : oracle::Matrix::laplacian);
    c.expect(oracle::same_multiset(expand(got), k3, 1e-8), std::string(to_string(kind)) + " K2(K1, K2) is not K3");
  }

  std::mt19937 rng(808);
  const std::vector<std::string> regular{"complete:1", "complete:2", "complete:3", "empty:2", "empty:3", "cycle:3"};
  std::uniform_int_distribution<std::size_t> pick(0, regular.size() - 1);
  for (int t = 0; t < 30; ++t) {
    Graph h = oracle::random_connected(1 + t % 4, rng);
    std::vector<Graph> adj_parts, lap_parts;
    for (std::size_t j = 0; j < h.order(); ++j) {
      adj_parts.push_back(parse_graph(regular[pick(rng)]));
      lap_parts.push_back(oracle::random_connected(1 + (t + j) % 3, rng, 0.5));
    }
    std::vector<HJoinPart> a, l;
    for (const auto& g : adj_parts) a.push_back(HJoinPart::from_graph(g, MatrixKind::adjacency));
    for (const auto& g : lap_parts) l.push_back(HJoinPart::from_graph(g, MatrixKind::laplacian));
    const std::string who = "H-join #" + std::to_string(t) + " on " + to_json(h).dump();
    c.expect(oracle::same_multiset(expand(hjoin_adjacency_spectrum(h, a)),
                                   oracle::eigenvalues(oracle::hjoin(h, adj_parts), oracle::Matrix::adjacency), 1e-6),
             who + " adjacency");
    c.expect(oracle::same_multiset(expand(hjoin_laplacian_spectrum(h, l)),
                                   oracle::eigenvalues(oracle::hjoin(h, lap_parts), oracle::Matrix::laplacian), 1e-6),
             who + " laplacian");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"C4^2[K2] exact spectrum via the CLI", four_cycle_over_edge},
      {"Petersen power table k = 1, 2, 3 and k = 100", petersen_table},
      {"adjacency grid against dense eigensolves", adjacency_oracle_grid},
      {"Laplacian of random H against dense eigensolves", laplacian_random},
      {"exact trace identities", trace_identities},
      {"algebraic connectivity and Laplacian index", connectivity_extremes},
      {"least eigenvalue and spectrum nesting", least_and_nesting},
      {"invariants against brute force on built powers", invariants},
      {"H-join spectra", hjoins},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    std::ostringstream line;
    line << (c.passed() ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " ("
         << c.checks() << " checks, " << std::fixed << std::setprecision(2) << elapsed << " s)";
    std::cout << line.str() << '\n';
    for (const auto& f : c.failures()) std::cout << "      failed: " << f << '\n';
    if (!c.passed()) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << '\n';
  return failed == 0 ? 0 : 1;
}
