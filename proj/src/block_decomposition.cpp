#include "qgraph/algebras.hpp"

#include <cmath>
#include <random>
#include <tuple>

namespace qgraph {

namespace {

constexpr int kMaxDraws = 5;
constexpr double kClusterGap = 1e-6;

struct Spectrum {
    Eigen::VectorXd values;
    CMatrix vectors;
    std::vector<std::pair<Index, Index>> clusters; // [begin, end) into sorted eigenpairs
};

Spectrum cluster_spectrum(const CMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    Spectrum sp{es.eigenvalues(), es.eigenvectors(), {}};
    const Index m = sp.values.size();
    double scale = std::max(sp.values.cwiseAbs().maxCoeff(), 1e-300);
    Index begin = 0;
    for (Index i = 1; i <= m; ++i) {
        if (i == m || (sp.values(i) - sp.values(i - 1)) > kClusterGap * scale) {
            sp.clusters.emplace_back(begin, i);
            begin = i;
        }
    }
    return sp;
}

struct RawBlock {
    Block shape;
    CMatrix basis; // n x (alpha * n_i), columns ordered r * n_i + s
    Index lead;
    double eigenvalue;
};

// Matrix units of the compressed algebra on one central summand.
CMatrix factor_basis(const MatSubspace& ai, Index alpha, Index mult, std::mt19937_64& rng)
{
    const Index m = ai.rows();
    if (alpha == 1)
        return CMatrix::Identity(m, m);
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        Spectrum sp = cluster_spectrum(random_selfadjoint_element(ai, rng));
        if (static_cast<Index>(sp.clusters.size()) != alpha)
            continue;
        bool sizes_ok = true;
        for (auto [b, e] : sp.clusters)
            sizes_ok = sizes_ok && (e - b) == mult;
        if (!sizes_ok)
            continue;
        CMatrix x = random_element(ai, rng);
        const double xn = x.norm();
        CMatrix e1 = sp.vectors.middleCols(sp.clusters[0].first, mult);
        CMatrix out(m, alpha * mult);
        out.leftCols(mult) = e1;
        bool ok = true;
        for (Index r = 1; r < alpha && ok; ++r) {
            CMatrix er = sp.vectors.middleCols(sp.clusters[r].first, mult);
            CMatrix c = er.adjoint() * x * e1;
            Eigen::JacobiSVD<CMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            if (sv(mult - 1) < 1e-6 * xn || sv(0) - sv(mult - 1) > 1e-6 * sv(0)) {
                ok = false;
                break;
            }
            out.middleCols(r * mult, mult) = er * (svd.matrixU() * svd.matrixV().adjoint());
        }
        if (ok)
            return out;
    }
    throw Error(ErrorCode::DecompositionFailed, "could not separate matrix units of a simple summand");
}

} // namespace

BlockDecomposition block_decomposition(const MatSubspace& a, std::uint64_t seed)
{
    if (!a.is_square())
        throw Error(ErrorCode::ShapeMismatch, "block_decomposition: ambient space is not square");
    const Index n = a.rows();
    std::mt19937_64 rng(seed);
    MatSubspace z = center(a);
    const Index k = z.dim();
    if (k == 0)
        throw Error(ErrorCode::DecompositionFailed, "algebra has trivial center");

    Spectrum central;
    bool separated = false;
    for (int attempt = 0; attempt < kMaxDraws && !separated; ++attempt) {
        central = cluster_spectrum(random_selfadjoint_element(z, rng));
        separated = static_cast<Index>(central.clusters.size()) == k;
    }
    if (!separated)
        throw Error(ErrorCode::DecompositionFailed, "central element did not separate the minimal projections");

    auto abasis = a.basis();
    std::vector<RawBlock> raw;
    for (auto [b, e] : central.clusters) {
        const Index m = e - b;
        CMatrix v = central.vectors.middleCols(b, m);
        std::vector<CMatrix> compressed;
        for (const auto& x : abasis)
            compressed.push_back(v.adjoint() * x * v);
        MatSubspace ai = orthonormalize(compressed, m, m, a.tol());
        const Index alpha = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(ai.dim()))));
        if (alpha * alpha != ai.dim() || alpha == 0 || m % alpha != 0)
            throw Error(ErrorCode::DecompositionFailed, "central summand is not a full matrix algebra");
        const Index mult = m / alpha;
        CMatrix units = factor_basis(ai, alpha, mult, rng);
        CMatrix proj = v * v.adjoint();
        Index lead = 0;
        while (lead < n && std::abs(proj(lead, lead)) <= 1e-6)
            ++lead;
        double ev = central.values(b);
        raw.push_back({{alpha, mult}, v * units, lead, ev});
    }

    std::stable_sort(raw.begin(), raw.end(), [](const RawBlock& x, const RawBlock& y) {
        return std::make_tuple(x.shape.n, x.shape.alpha, x.lead, x.eigenvalue)
            < std::make_tuple(y.shape.n, y.shape.alpha, y.lead, y.eigenvalue);
    });

    BlockDecomposition bd;
    CMatrix u(n, n);
    Index at = 0;
    for (const auto& rb : raw) {
        u.middleCols(at, rb.basis.cols()) = rb.basis;
        at += rb.basis.cols();
        bd.blocks.push_back(rb.shape);
    }
    bd.w = u.adjoint();

    MatSubspace rotated = transform_space(a, bd.w, u);
    double defect = subspace_defect(rotated, block_algebra(bd.blocks, a.tol()));
    if (defect > a.tol().member_eps)
        throw Error(ErrorCode::DecompositionFailed,
                    "rotated algebra differs from block form (residual " + std::to_string(defect) + ")", defect);
    return bd;
}

} // namespace qgraph
