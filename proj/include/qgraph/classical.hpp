#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qgraph/morita.hpp"

namespace qgraph {

// Finite simple undirected graph on vertices 0..n-1.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    bool adjacent(int i, int j) const { return adj_[i][j] != 0; }
    // x ~ y or x == y
    bool related(int i, int j) const { return i == j || adjacent(i, j); }
    void add_edge(int i, int j);
    std::vector<std::pair<int, int>> edges() const;
    int degree(int i) const;
    Graph complement() const;

    bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

private:
    int n_ = 0;
    std::vector<std::vector<char>> adj_;
};

Graph complete_graph(int n);
Graph path_graph(int n);

struct VertexMap {
    Graph source;
    Graph target;
    std::vector<int> image;
};

struct TwinPartition {
    std::vector<std::vector<int>> classes;
};

QuantumGraph graph_operator_system(const Graph& g, Tolerance tol = {});
TwinPartition true_twin_classes(const Graph& g);
std::pair<Graph, VertexMap> skeleton_graph(const Graph& g);
Graph clique_blowup(const Graph& g, const std::vector<int>& sizes);
// Quotient map of a blow-up onto its base graph.
VertexMap blowup_projection(const Graph& g, const std::vector<int>& sizes);
std::optional<VertexMap> graph_isomorphism(const Graph& g, const Graph& h);

struct PullbackMapCheck {
    bool is_pullback;
    bool is_full;
};
PullbackMapCheck is_pullback_map(const VertexMap& f);
KrausMap canonical_pullback_channel(const VertexMap& f, Tolerance tol = {});

int independence_number(const Graph& g, std::uint64_t node_budget = 50'000'000);
int clique_number(const Graph& g, std::uint64_t node_budget = 50'000'000);
int chromatic_number(const Graph& g, std::uint64_t node_budget = 50'000'000);
bool is_connected_graph(const Graph& g);

struct ClassicalTroWitness {
    VertexMap quotient_g;
    VertexMap quotient_h;
    VertexMap skeleton_isomorphism;
};
struct ClassicalTroResult {
    bool equivalent;
    std::optional<ClassicalTroWitness> witness;
};
ClassicalTroResult tro_equivalent_graphs(const Graph& g, const Graph& h);

// Permutation matrix P with P e_i = e_{image[i]}.
CMatrix permutation_matrix(const std::vector<int>& image);
Graph strong_product(const Graph& g, const Graph& h);

} // namespace qgraph
