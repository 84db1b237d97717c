#pragma once

#include <algorithm>
#include <random>

namespace qgraph {

template <class Eval>
MatSubspace kernel_within(const MatSubspace& v, Index count, Eval eval, Index batch)
{
    CMatrix q = v.coords();
    for (Index start = 0; start < count && q.cols() > 0; start += batch) {
        const Index stop = std::min(count, start + batch);
        const Index d = q.cols();
        std::vector<CVector> cols;
        cols.reserve(d);
        Index len = 0;
        for (Index k = 0; k < d; ++k) {
            CMatrix x = unflatten(q.col(k), v.rows(), v.cols());
            std::vector<CVector> parts;
            Index total = 0;
            for (Index c = start; c < stop; ++c) {
                parts.push_back(eval(x, c));
                total += parts.back().size();
            }
            CVector col(total);
            Index at = 0;
            for (const auto& p : parts) {
                col.segment(at, p.size()) = p;
                at += p.size();
            }
            len = total;
            cols.push_back(std::move(col));
        }
        if (len == 0)
            continue;
        CMatrix f(len, d);
        for (Index k = 0; k < d; ++k)
            f.col(k) = cols[k];
        Eigen::JacobiSVD<CMatrix> svd(f, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double thresh = v.tol().rank_eps * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > thresh)
            ++rank;
        if (rank == 0)
            continue;
        q = q * svd.matrixV().rightCols(d - rank);
    }
    return MatSubspace::from_orthonormal(v.rows(), v.cols(), q, v.tol());
}

template <class Rng>
CMatrix random_element(const MatSubspace& a, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CVector c(a.dim());
    for (Index k = 0; k < a.dim(); ++k) {
        double re = g(rng);
        double im = g(rng);
        c(k) = cd(re, im);
    }
    return unflatten(a.coords() * c, a.rows(), a.cols());
}

template <class Rng>
CMatrix random_selfadjoint_element(const MatSubspace& a, Rng& rng)
{
    CMatrix x = random_element(a, rng);
    return 0.5 * (x + x.adjoint());
}

template <class Rng>
CMatrix random_unitary(Index n, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix z(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            double re = g(rng);
            double im = g(rng);
            z(i, j) = cd(re, im);
        }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        double m = std::abs(r(j, j));
        if (m > 0)
            q.col(j) *= r(j, j) / m;
    }
    return q;
}

} // namespace qgraph
