#include "qgraph/instances.hpp"

#include <cmath>

namespace qgraph::instances {

Graph blowup_p3_213()
{
    return Graph(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
}

Graph blowup_p3_122() { return Graph(5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}); }

Graph two_disjoint_edges() { return Graph(4, {{0, 1}, {2, 3}}); }

Graph paw() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}, {2, 3}}); }

MatSubspace path_system_m2(Tolerance tol)
{
    return orthonormalize({CMatrix::Identity(2, 2), matrix_unit(2, 2, 0, 1), matrix_unit(2, 2, 1, 0)}, 2, 2, tol);
}

Amplification doubling_amplification(Tolerance tol)
{
    CMatrix v1 = CMatrix::Zero(2, 4);
    CMatrix v2 = CMatrix::Zero(2, 4);
    v1.leftCols(2) = CMatrix::Identity(2, 2);
    v2.rightCols(2) = CMatrix::Identity(2, 2);
    MatSubspace s = path_system_m2(tol);
    std::vector<CMatrix> amp;
    for (const auto& x : full_space(2, 2, tol).basis())
        amp.push_back(kron(CMatrix::Identity(2, 2), x));
    MatSubspace a = orthonormalize(amp, 4, 4, tol);
    KrausMap theta = make_kraus_map({v1, v2}, full_space(2, 2, tol), a);
    std::vector<CMatrix> big;
    for (const auto& e : full_space(2, 2, tol).basis())
        for (const auto& x : s.basis())
            big.push_back(kron(e, x));
    MatSubspace t = orthonormalize(big, 4, 4, tol);
    return {QuantumGraph::trusted(s, full_space(2, 2, tol)), QuantumGraph::trusted(t, a), theta};
}

namespace {

// span{ l (x) r } placed at a block offset of an n x n matrix.
void add_block(std::vector<CMatrix>& out, Index n, Index row, Index col, const std::vector<CMatrix>& left,
               const std::vector<CMatrix>& right)
{
    for (const auto& l : left)
        for (const auto& r : right) {
            CMatrix k = kron(l, r);
            CMatrix e = CMatrix::Zero(n, n);
            e.block(row, col, k.rows(), k.cols()) = k;
            out.push_back(e);
        }
}

std::vector<CMatrix> units(Index p, Index q)
{
    std::vector<CMatrix> out;
    for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < q; ++j)
            out.push_back(matrix_unit(p, q, i, j));
    return out;
}

std::vector<CMatrix> identity(Index p) { return {CMatrix::Identity(p, p)}; }

// Two-block system [[M_a (x) I_n, M_{a,b} (x) M_{n,m}], [M_{b,a} (x) M_{m,n}, M_b (x) I_m]]
// on (C^a (x) C^n) (+) (C^b (x) C^m) with algebra (I_a (x) M_n) (+) (I_b (x) M_m).
QuantumGraph two_block(Index a, Index n, Index b, Index m, Tolerance tol)
{
    const Index d = a * n + b * m;
    std::vector<CMatrix> sys;
    add_block(sys, d, 0, 0, units(a, a), identity(n));
    add_block(sys, d, 0, a * n, units(a, b), units(n, m));
    add_block(sys, d, a * n, 0, units(b, a), units(m, n));
    add_block(sys, d, a * n, a * n, units(b, b), identity(m));
    std::vector<CMatrix> alg;
    add_block(alg, d, 0, 0, identity(a), units(n, n));
    add_block(alg, d, a * n, a * n, identity(b), units(m, m));
    return QuantumGraph::trusted(orthonormalize(sys, d, d, tol), orthonormalize(alg, d, d, tol));
}

} // namespace

MixedBlockPair mixed_block_pair(Tolerance tol)
{
    // S: blocks (alpha, n) = (2,2) and (1,3); T: (3,2) and (2,3).
    return {two_block(2, 2, 1, 3, tol), two_block(3, 2, 2, 3, tol)};
}

KrausMap diagonal_ucp_counterexample(Tolerance tol)
{
    // Rows a, b, c of K; columns 1, 2, 3 of H.
    const double s = 1.0 / std::sqrt(2.0);
    const std::pair<Index, Index> entries[] = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {0, 2}, {2, 2}};
    std::vector<CMatrix> kraus;
    for (auto [r, c] : entries)
        kraus.push_back(s * matrix_unit(3, 3, r, c));
    return make_kraus_map(std::move(kraus), diagonal_algebra(3, tol), diagonal_algebra(3, tol));
}

} // namespace qgraph::instances
