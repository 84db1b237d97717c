#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgraph/classical.hpp"
#include "qgraph/instances.hpp"

using namespace qgraph;

namespace {

std::vector<std::vector<int>> normalised(std::vector<std::vector<int>> cs)
{
    for (auto& c : cs)
        std::sort(c.begin(), c.end());
    std::sort(cs.begin(), cs.end());
    return cs;
}

} // namespace

TEST(Classical, GraphRejectsBadEdges)
{
    Graph g(3);
    g.add_edge(0, 1);
    EXPECT_THROW(g.add_edge(1, 1), Error);
    EXPECT_THROW(g.add_edge(1, 0), Error);
    EXPECT_THROW(g.add_edge(0, 3), Error);
    EXPECT_EQ(g.degree(0), 1);
    EXPECT_EQ(g.complement().edges().size(), 2u);
}

TEST(Classical, GraphOperatorSystemIsSpanOfRelatedUnits)
{
    Graph g = instances::paw();
    QuantumGraph q = graph_operator_system(g);
    auto units = oracle::graph_system_span(g);
    EXPECT_EQ(q.space().dim(), static_cast<Index>(units.size()));
    for (const auto& e : units)
        EXPECT_TRUE(contains(q.space(), e).member);
    EXPECT_LT(subspace_defect(q.algebra(), diagonal_algebra(4)), 1e-12);
}

TEST(Classical, TwinClassesAgainstPairwiseOracle)
{
    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = oracle::random_graph(2 + trial % 8, 0.6, rng);
        EXPECT_EQ(normalised(true_twin_classes(g).classes), normalised(oracle::twin_classes(g)));
    }
}

TEST(Classical, SkeletonIsTwinFreeQuotient)
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracle::random_graph(7, 0.55, rng);
        auto [sk, f] = skeleton_graph(g);
        EXPECT_EQ(sk.n(), static_cast<int>(oracle::twin_classes(g).size()));
        EXPECT_EQ(oracle::twin_classes(sk).size(), static_cast<std::size_t>(sk.n()));
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j)
                EXPECT_EQ(g.related(i, j), sk.related(f.image[i], f.image[j]));
    }
}

TEST(Classical, CliqueBlowupStructure)
{
    Graph b = clique_blowup(path_graph(3), {2, 1, 3});
    EXPECT_EQ(b.n(), 6);
    EXPECT_EQ(oracle::sorted_sizes(oracle::twin_classes(b)), (std::vector<int>{1, 2, 3}));
    EXPECT_TRUE(oracle::isomorphic(b, instances::blowup_p3_213()));
    VertexMap p = blowup_projection(path_graph(3), {2, 1, 3});
    EXPECT_EQ(p.image, (std::vector<int>{0, 0, 1, 2, 2, 2}));
}

TEST(Classical, IsomorphismAgainstPermutationOracle)
{
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 25; ++trial) {
        Graph g = oracle::random_graph(7, 0.4, rng);
        Graph h = oracle::relabel(g, oracle::random_permutation(7, rng));
        auto iso = graph_isomorphism(g, h);
        ASSERT_TRUE(iso.has_value());
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j)
                EXPECT_EQ(g.adjacent(i, j), h.adjacent(iso->image[i], iso->image[j]));
        Graph k = oracle::random_graph(6, 0.5, rng);
        Graph l = oracle::random_graph(6, 0.5, rng);
        EXPECT_EQ(graph_isomorphism(k, l).has_value(), oracle::isomorphic(k, l));
    }
    // Same degree sequence, not isomorphic.
    Graph c6(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    Graph two_triangles(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    EXPECT_FALSE(graph_isomorphism(c6, two_triangles).has_value());
}

TEST(Classical, ParametersAgainstExhaustiveOracles)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = oracle::random_graph(1 + trial % 9, 0.45, rng);
        EXPECT_EQ(independence_number(g), oracle::independence(g));
        EXPECT_EQ(clique_number(g), oracle::clique(g));
        EXPECT_EQ(chromatic_number(g), oracle::chromatic(g));
    }
    EXPECT_EQ(independence_number(complete_graph(4)), 1);
    EXPECT_EQ(clique_number(complete_graph(4)), 4);
    EXPECT_EQ(chromatic_number(complete_graph(4)), 4);
    EXPECT_TRUE(is_connected_graph(complete_graph(4)));
    EXPECT_FALSE(is_connected_graph(instances::two_disjoint_edges()));
}

TEST(Classical, ParametersRefuseLargeGraphs)
{
    try {
        independence_number(Graph(31));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    }
}

TEST(Classical, PullbackMaps)
{
    Graph g = instances::blowup_p3_213();
    VertexMap f = skeleton_graph(g).second;
    auto chk = is_pullback_map(f);
    EXPECT_TRUE(chk.is_pullback);
    EXPECT_TRUE(chk.is_full);
    // Collapsing two non-adjacent vertices of P3 onto one vertex is not a pullback.
    VertexMap bad{path_graph(3), Graph(2), {0, 1, 0}};
    EXPECT_FALSE(is_pullback_map(bad).is_pullback);
    EXPECT_THROW(canonical_pullback_channel(bad), Error);
}

TEST(Classical, CanonicalChannelPullsBackTheGraphSystem)
{
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        Graph base = oracle::random_graph(4, 0.5, rng);
        std::vector<int> sizes;
        for (int i = 0; i < 4; ++i)
            sizes.push_back(1 + static_cast<int>(rng() % 3));
        VertexMap f = blowup_projection(base, sizes);
        KrausMap theta = canonical_pullback_channel(f);
        MatSubspace pb = pullback(graph_operator_system(base).space(), theta);
        MatSubspace want = orthonormalize(oracle::graph_system_span(f.source), f.source.n(), f.source.n());
        EXPECT_LT(subspace_defect(pb, want), 1e-8);
    }
}

TEST(Classical, TroEquivalenceOfGraphs)
{
    auto r = tro_equivalent_graphs(instances::blowup_p3_213(), instances::blowup_p3_122());
    EXPECT_TRUE(r.equivalent);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->quotient_g.target.n(), 3);
    EXPECT_FALSE(tro_equivalent_graphs(instances::two_disjoint_edges(), instances::paw()).equivalent);
    EXPECT_TRUE(tro_equivalent_graphs(complete_graph(2), complete_graph(5)).equivalent);
}

TEST(Classical, PermutationMatrixAndStrongProduct)
{
    CMatrix p = permutation_matrix({2, 0, 1});
    EXPECT_EQ(p(2, 0), cd(1.0));
    EXPECT_EQ(p(0, 1), cd(1.0));
    Graph sp = strong_product(path_graph(2), path_graph(2));
    EXPECT_EQ(sp.n(), 4);
    EXPECT_EQ(sp.edges().size(), 6u);
    // Strong product adjacency: (a,b) ~ (c,d) iff each coordinate is related and the pairs differ.
    Graph g = instances::paw();
    Graph h = path_graph(3);
    Graph s = strong_product(g, h);
    for (int x = 0; x < 12; ++x)
        for (int y = 0; y < 12; ++y)
            if (x != y)
                EXPECT_EQ(s.adjacent(x, y), g.related(x / 3, y / 3) && h.related(x % 3, y % 3));
}
