#include <gtest/gtest.h>

#include "lexspectra/invariants.hpp"
#include "oracles.hpp"

using namespace lexspectra;

namespace {

struct Base {
  Graph graph;
  SpectrumHandle adjacency;
  SpectrumHandle laplacian;
};

Base base(const Graph& g) {
  return {g, make_handle("H", "H", refined_spectrum(g, MatrixKind::adjacency)),
          make_handle("H", "H", refined_spectrum(g, MatrixKind::laplacian))};
}

Base base(const std::string& spec) {
  GraphSpec s = parse_graph_spec(spec);
  Graph g = parse_graph(s);
  return {g, make_handle("H", spec, resolve_spectrum(s, g, MatrixKind::adjacency)),
          make_handle("H", spec, resolve_spectrum(s, g, MatrixKind::laplacian))};
}

}  // namespace

TEST(Degrees, ClosedForms) {
  EXPECT_EQ(power_degrees(parse_graph("petersen"), 2), std::make_pair(BigInt(33), BigInt(33)));
  Graph star_sq = oracle::power(parse_graph("star:4"), 2);
  EXPECT_EQ(power_degrees(parse_graph("star:4"), 2), std::make_pair(BigInt(star_sq.min_degree()), BigInt(star_sq.max_degree())));
  EXPECT_EQ(power_degrees(parse_graph("star:4"), 2), std::make_pair(BigInt(5), BigInt(15)));
  EXPECT_EQ(power_degrees(parse_graph("paw"), 1), std::make_pair(BigInt(1), BigInt(3)));
  EXPECT_THROW(power_degrees(parse_graph("complete:1"), 2), HypothesisError);
  EXPECT_THROW(power_degrees(parse_graph("paw"), 0), HypothesisError);
}

TEST(Stability, ValuesAndBounds) {
  Base c5 = base("cycle:5");
  EXPECT_EQ(power_stability(c5.graph, c5.laplacian, 2).value, oracle::independence(oracle::power(c5.graph, 2)));
  EXPECT_EQ(power_stability(c5.graph, c5.laplacian, 2).value, 4);
  Base k3 = base("complete:3");
  for (std::size_t k : {1, 2, 5}) EXPECT_EQ(power_stability(k3.graph, k3.laplacian, k).value, 1);
  Base p = base("petersen");
  StabilityResult r = power_stability(p.graph, p.laplacian, 2);
  EXPECT_EQ(r.value, 16);
  // 100 * (10 * 5 - 33) / 33
  EXPECT_EQ(r.bound.rational(), Rational(1700, 33));
  EXPECT_EQ(r.bound_base.rational(), r.bound.rational());
  EXPECT_THROW(power_stability(parse_graph("empty:3"), base("empty:3").laplacian, 2), HypothesisError);
}

TEST(Clique, ClosedForms) {
  EXPECT_EQ(power_clique(parse_graph("cycle:5"), 2), oracle::clique(oracle::power(parse_graph("cycle:5"), 2)));
  EXPECT_EQ(power_clique(parse_graph("cycle:5"), 2), 4);
  EXPECT_EQ(power_clique(parse_graph("complete:4"), 2), 16);
  EXPECT_EQ(power_clique(parse_graph("petersen"), 3), 8);
}

TEST(VertexConnectivity, ValuesAndSandwich) {
  Base c4 = base("cycle:4");
  ConnectivityResult r = power_vertex_connectivity(c4.graph, c4.laplacian, 2);
  EXPECT_EQ(r.value, 8);
  EXPECT_EQ(r.value, oracle::vertex_connectivity(oracle::power(c4.graph, 2)));
  EXPECT_EQ(r.lower.rational(), 8);
  EXPECT_EQ(r.upper, 10);
  Base p = base("petersen");
  EXPECT_EQ(power_vertex_connectivity(p.graph, p.laplacian, 2).value, 30);
  Base c5 = base("cycle:5");
  EXPECT_EQ(power_vertex_connectivity(c5.graph, c5.laplacian, 1).value, 2);
  Base k4 = base("complete:4");
  EXPECT_NE(std::string([&] {
              try {
                power_vertex_connectivity(k4.graph, k4.laplacian, 2);
              } catch (const HypothesisError& e) {
                return std::string(e.what());
              }
              return std::string();
            }())
                .find("requires H not complete"),
            std::string::npos);
  Base e = base("empty:3");
  EXPECT_THROW(power_vertex_connectivity(e.graph, e.laplacian, 2), HypothesisError);
}

TEST(Chromatic, HoffmanBound) {
  Base p = base("petersen");
  ChromaticBound one = power_chromatic_lower_bound(p.graph, p.adjacency, 1);
  EXPECT_EQ(one.value.rational(), Rational(5, 2));
  EXPECT_EQ(one.ceiling, 3);
  ChromaticBound two = power_chromatic_lower_bound(p.graph, p.adjacency, 2);
  EXPECT_EQ(two.value.rational(), Rational(50, 17));
  EXPECT_EQ(two.ceiling, 3);
  EXPECT_LE(one.value.rational(), Rational(chromatic_number(p.graph)));
  Base k4 = base("complete:4");
  ChromaticBound k16 = power_chromatic_lower_bound(k4.graph, k4.adjacency, 2);
  EXPECT_EQ(k16.value.rational(), 16);
  EXPECT_EQ(k16.ceiling, chromatic_number(oracle::power(k4.graph, 2)));

  // irrational least eigenvalue: compare with the oracle spectrum of C5^2
  Base c5 = base("cycle:5");
  ChromaticBound c = power_chromatic_lower_bound(c5.graph, c5.adjacency, 2);
  EXPECT_FALSE(c.value.is_exact());
  auto ev = oracle::eigenvalues(oracle::power(c5.graph, 2), oracle::Matrix::adjacency);
  EXPECT_NEAR(c.value.to_double(), 1 - ev.front() / ev.back(), 1e-9);
  ASSERT_TRUE(c.ceiling);
  EXPECT_LE(*c.ceiling, chromatic_number(oracle::power(c5.graph, 2)));

  EXPECT_THROW(power_chromatic_lower_bound(parse_graph("star:4"), base("star:4").adjacency, 2), HypothesisError);
}

TEST(SignlessLaplacian, BoundsContainTheOracle) {
  SignlessBounds c4 = power_signless_laplacian_bounds(parse_graph("cycle:4"), 2);
  EXPECT_EQ(c4.q1_lower, 20);
  EXPECT_EQ(c4.q1_upper, 20);
  EXPECT_EQ(c4.qn_upper, 10);
  SignlessBounds star = power_signless_laplacian_bounds(parse_graph("star:4"), 2);
  EXPECT_EQ(star.q1_lower, 10);
  EXPECT_EQ(star.q1_upper, 30);
  SignlessBounds p = power_signless_laplacian_bounds(parse_graph("petersen"), 2);
  EXPECT_EQ(p.q1_lower, 66);
  EXPECT_EQ(p.q1_upper, 66);
  for (const std::string h : {"cycle:4", "star:4", "paw", "path:3", "cycle:5", "petersen"}) {
    for (std::size_t k : {1, 2}) {
      SignlessBounds b = power_signless_laplacian_bounds(parse_graph(h), k);
      auto q = oracle::eigenvalues(oracle::power(parse_graph(h), k), oracle::Matrix::signless);
      EXPECT_GE(q.front(), static_cast<double>(b.q1_lower) - 1e-9) << h << k;
      EXPECT_LE(q.front(), static_cast<double>(b.q1_upper) + 1e-9) << h << k;
      EXPECT_LT(q.back(), static_cast<double>(b.qn_upper)) << h << k;
    }
  }
}

TEST(Diameter, EqualsDiameterOfH) {
  EXPECT_EQ(power_diameter(parse_graph("cycle:4"), std::nullopt, 5), 2u);
  EXPECT_EQ(power_diameter(parse_graph("petersen"), parse_graph("complete:2"), 3), 2u);
  EXPECT_EQ(power_diameter(parse_graph("cycle:6"), std::nullopt, 2), 3u);
  EXPECT_EQ(oracle::diameter(oracle::power(parse_graph("cycle:6"), 2)), 3);
  EXPECT_THROW(power_diameter(parse_graph("complete:3"), std::nullopt, 2), HypothesisError);
  EXPECT_THROW(power_diameter(parse_graph("empty:3"), std::nullopt, 2), HypothesisError);
}

TEST(SmallGraphs, ClosedFormsEqualBruteForceOnSquares) {
  std::size_t checked = 0;
  for (std::size_t n : {3, 4, 5}) {
    for (const Graph& h : oracle::connected_noncomplete_graphs(n)) {
      SCOPED_TRACE(to_json(h).dump());
      Base b = base(h);
      Graph sq = oracle::power(h, 2);
      ASSERT_LE(sq.order(), 64u);
      EXPECT_EQ(power_stability(h, b.laplacian, 2).value, independence_number(sq));
      EXPECT_EQ(power_clique(h, 2), clique_number(sq));
      ConnectivityResult c = power_vertex_connectivity(h, b.laplacian, 2);
      EXPECT_EQ(c.value, vertex_connectivity(sq));
      EXPECT_LE(c.lower.to_double(), static_cast<double>(c.value) + 1e-6);
      EXPECT_LE(c.value, c.upper);
      EXPECT_EQ(static_cast<long>(power_diameter(h, std::nullopt, 2)), oracle::diameter(sq));
      ++checked;
    }
  }
  // 1 + 5 + 20 connected non-complete graphs on 3, 4, 5 vertices
  EXPECT_EQ(checked, 26u);
}

TEST(SmallGraphs, NaiveOracleAgreesOnSmallOrders) {
  for (std::size_t n : {3, 4}) {
    for (const Graph& h : oracle::connected_noncomplete_graphs(n)) {
      Graph sq = oracle::power(h, 2);
      EXPECT_EQ(power_clique(h, 2), oracle::clique(sq));
      EXPECT_EQ(BigInt(ipow(BigInt(independence_number(h)), 2)), oracle::independence(sq));
      EXPECT_EQ(ipow(BigInt(h.order()), 1) * vertex_connectivity(h), oracle::vertex_connectivity(sq));
    }
  }
}

TEST(Record, ShortCircuitsAndFields) {
  Base k4 = base("complete:4");
  PowerInvariants a = power_invariants(k4.graph, k4.adjacency, k4.laplacian, 2);
  EXPECT_EQ(a.order, 16);
  EXPECT_EQ(a.diameter, BigInt(1));
  EXPECT_EQ(a.vertex_connectivity, 15);
  ASSERT_TRUE(a.hoffman);
  EXPECT_EQ(a.hoffman->value.rational(), 16);

  Base e = base("empty:3");
  PowerInvariants b = power_invariants(e.graph, e.adjacency, e.laplacian, 2);
  EXPECT_FALSE(b.diameter);
  EXPECT_EQ(b.vertex_connectivity, 0);
  EXPECT_EQ(b.independence_number, 9);
  EXPECT_FALSE(b.hoffman);
  EXPECT_FALSE(b.stability_bound);

  Base p = base("petersen");
  PowerInvariants c = power_invariants(p.graph, p.adjacency, p.laplacian, 2);
  EXPECT_EQ(c.min_degree, 33);
  EXPECT_EQ(c.max_degree, 33);
  EXPECT_EQ(c.diameter, BigInt(2));
  EXPECT_EQ(c.independence_number, 16);
  EXPECT_EQ(c.clique_number, 4);
  EXPECT_EQ(c.vertex_connectivity, 30);
  EXPECT_EQ(c.signless.q1_lower, 66);
  EXPECT_EQ(c.hoffman->value.rational(), Rational(50, 17));
  EXPECT_EQ(c.stability_bound->rational(), Rational(1700, 33));
  EXPECT_LE(c.min_degree, c.max_degree);

  Base s = base("star:4");
  PowerInvariants d = power_invariants(s.graph, s.adjacency, s.laplacian, 3);
  EXPECT_FALSE(d.hoffman);
  EXPECT_EQ(d.vertex_connectivity, 16);
  EXPECT_EQ(d.independence_number, 27);
}
