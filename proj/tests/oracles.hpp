#pragma once

// Independent reference computations used by the tests. They avoid the library's
// span machinery: ranks come from full-pivot LU on raw stacked coordinates,
// graph quantities from exhaustive enumeration.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/classical.hpp"

namespace oracle {

using qgraph::CMatrix;
using qgraph::CVector;
using qgraph::Graph;
using qgraph::Index;

inline CVector rowmajor(const CMatrix& x)
{
    CVector v(x.size());
    for (Index r = 0; r < x.rows(); ++r)
        for (Index c = 0; c < x.cols(); ++c)
            v(r * x.cols() + c) = x(r, c);
    return v;
}

inline CMatrix stack(const std::vector<CMatrix>& xs)
{
    if (xs.empty())
        return CMatrix(0, 0);
    CMatrix m(xs[0].size(), static_cast<Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k)
        m.col(static_cast<Index>(k)) = rowmajor(xs[k]);
    return m;
}

inline Index rank(const std::vector<CMatrix>& xs, double eps = 1e-9)
{
    if (xs.empty())
        return 0;
    Eigen::FullPivLU<CMatrix> lu(stack(xs));
    lu.setThreshold(eps);
    return lu.rank();
}

// x lies in span(xs) iff appending it does not raise the rank.
inline bool in_span(const std::vector<CMatrix>& xs, const CMatrix& x, double eps = 1e-9)
{
    auto ys = xs;
    ys.push_back(x);
    return rank(ys, eps) == rank(xs, eps);
}

inline CMatrix unit(Index n, Index i, Index j)
{
    CMatrix e = CMatrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

// span{E_ij : i = j or i ~ j}
inline std::vector<CMatrix> graph_system_span(const Graph& g)
{
    std::vector<CMatrix> out;
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            if (i == j || g.adjacent(i, j))
                out.push_back(unit(g.n(), i, j));
    return out;
}

inline Graph random_graph(int n, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng))
                g.add_edge(i, j);
    return g;
}

// Same closed neighbourhood, compared pairwise.
inline std::vector<std::vector<int>> twin_classes(const Graph& g)
{
    std::vector<int> label(g.n(), -1);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < g.n(); ++i) {
        if (label[i] >= 0)
            continue;
        label[i] = static_cast<int>(out.size());
        out.push_back({i});
        for (int j = i + 1; j < g.n(); ++j) {
            bool twins = label[j] < 0;
            for (int k = 0; k < g.n() && twins; ++k)
                twins = g.related(i, k) == g.related(j, k);
            if (twins) {
                label[j] = label[i];
                out.back().push_back(j);
            }
        }
    }
    return out;
}

inline std::vector<int> sorted_sizes(const std::vector<std::vector<int>>& classes)
{
    std::vector<int> s;
    for (const auto& c : classes)
        s.push_back(static_cast<int>(c.size()));
    std::sort(s.begin(), s.end());
    return s;
}

inline int independence(const Graph& g)
{
    int best = 0;
    for (unsigned mask = 0; mask < (1u << g.n()); ++mask) {
        bool ok = true;
        for (int i = 0; i < g.n() && ok; ++i)
            for (int j = i + 1; j < g.n() && ok; ++j)
                ok = !((mask >> i & 1) && (mask >> j & 1) && g.adjacent(i, j));
        if (ok)
            best = std::max(best, __builtin_popcount(mask));
    }
    return best;
}

inline int clique(const Graph& g) { return independence(g.complement()); }

inline int chromatic(const Graph& g)
{
    const int n = g.n();
    if (n == 0)
        return 0;
    for (int k = 1; k <= n; ++k) {
        std::vector<int> colour(n, 0);
        // Enumerate all k^n colourings in odometer order.
        while (true) {
            bool proper = true;
            for (int i = 0; i < n && proper; ++i)
                for (int j = i + 1; j < n && proper; ++j)
                    proper = !(g.adjacent(i, j) && colour[i] == colour[j]);
            if (proper)
                return k;
            int pos = 0;
            while (pos < n && ++colour[pos] == k)
                colour[pos++] = 0;
            if (pos == n)
                break;
        }
    }
    return n;
}

// All permutations p with i ~ j iff p(i) ~ p(j) between g and h.
inline bool isomorphic(const Graph& g, const Graph& h)
{
    if (g.n() != h.n())
        return false;
    std::vector<int> p(g.n());
    std::iota(p.begin(), p.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < g.n() && ok; ++i)
            for (int j = i + 1; j < g.n() && ok; ++j)
                ok = g.adjacent(i, j) == h.adjacent(p[i], p[j]);
        if (ok)
            return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

inline Graph relabel(const Graph& g, const std::vector<int>& p)
{
    Graph h(g.n());
    for (auto [i, j] : g.edges())
        h.add_edge(p[i], p[j]);
    return h;
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng)
{
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline CMatrix gaussian(Index r, Index c, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CMatrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = {g(rng), g(rng)};
    return m;
}

inline CMatrix haar_unitary(Index n, std::mt19937_64& rng)
{
    Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n, rng));
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i)
        q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
    return q;
}

} // namespace oracle
