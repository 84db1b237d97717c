#include "qgraph/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qgraph {

std::vector<Index> SkeletonResult::reduced_offsets() const
{
    std::vector<Index> off;
    Index at = 0;
    for (const auto& b : blocks.blocks) {
        off.push_back(at);
        at += b.n;
    }
    return off;
}

namespace {

MatSubspace corner_span(const MatSubspace& sij, Index ni, Index nj)
{
    SpanBuilder builder(ni, nj, sij.tol());
    for (Index k = 0; k < sij.dim(); ++k)
        builder.add(sij.element(k).topLeftCorner(ni, nj));
    return builder.finish();
}

MatSubspace amplified(const MatSubspace& rij, Index ai, Index aj)
{
    SpanBuilder builder(ai * rij.rows(), aj * rij.cols(), rij.tol());
    auto rb = rij.basis();
    for (Index r = 0; r < ai; ++r)
        for (Index c = 0; c < aj; ++c)
            for (const auto& x : rb)
                builder.add(kron(matrix_unit(ai, aj, r, c), x));
    return builder.finish();
}

} // namespace

SkeletonResult quantum_skeleton(const QuantumGraph& s, std::uint64_t seed)
{
    if (irreducibility_test(s.system()) != Irreducibility::MultiplicityFree)
        throw Error(ErrorCode::NotIrreducible, "quantum skeleton requires a multiplicity-free system");
    const Tolerance tol = s.space().tol();
    SkeletonResult res;
    res.multiplier = multiplier_algebra(s.system());
    res.blocks = block_decomposition(res.multiplier, seed);
    const auto& blocks = res.blocks.blocks;
    const std::size_t k = blocks.size();
    const auto off = res.blocks.offsets();
    const CMatrix& w = res.blocks.w;
    MatSubspace rotated = transform_space(s.space(), w, w.adjoint());
    auto rb = rotated.basis();

    res.system_blocks.assign(k, std::vector<MatSubspace>(k));
    res.slice_blocks.assign(k, std::vector<MatSubspace>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const Index mi = blocks[i].alpha * blocks[i].n;
            const Index mj = blocks[j].alpha * blocks[j].n;
            SpanBuilder builder(mi, mj, tol);
            for (const auto& x : rb)
                builder.add(x.block(off[i], off[j], mi, mj));
            res.system_blocks[i][j] = builder.finish();
            res.slice_blocks[i][j] = corner_span(res.system_blocks[i][j], blocks[i].n, blocks[j].n);
            double d = subspace_defect(res.system_blocks[i][j],
                                       amplified(res.slice_blocks[i][j], blocks[i].alpha, blocks[j].alpha));
            res.factorization_residual = std::max(res.factorization_residual, d);
        }
    if (res.factorization_residual > tol.member_eps)
        throw Error(ErrorCode::FactorizationFailed,
                    "S_ij differs from M_{a_i,a_j} (x) R_ij (residual " + std::to_string(res.factorization_residual)
                        + ")",
                    res.factorization_residual);

    const auto loff = res.reduced_offsets();
    Index dim_l = 0;
    std::vector<Block> reduced_blocks;
    for (const auto& b : blocks) {
        dim_l += b.n;
        reduced_blocks.push_back({b.n, 1});
    }
    SpanBuilder rbuilder(dim_l, dim_l, tol);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (const auto& x : res.slice_blocks[i][j].basis()) {
                CMatrix e = CMatrix::Zero(dim_l, dim_l);
                e.block(loff[i], loff[j], x.rows(), x.cols()) = x;
                rbuilder.add(e);
            }
    res.reduced_system = rbuilder.finish();
    res.reduced_algebra = block_algebra(reduced_blocks, tol);

    const Index n = s.n();
    std::vector<CMatrix> kraus;
    for (std::size_t i = 0; i < k; ++i)
        for (Index r = 0; r < blocks[i].alpha; ++r) {
            CMatrix v = CMatrix::Zero(dim_l, n);
            v.middleRows(loff[i], blocks[i].n) = w.middleRows(off[i] + r * blocks[i].n, blocks[i].n);
            kraus.push_back(std::move(v));
        }
    res.canonical_pullback = make_kraus_map(std::move(kraus), res.reduced_algebra, s.algebra());

    auto verdict = pullback_homomorphism_report(res.canonical_pullback, res.reduced_graph(), s);
    if (verdict.verdict != PullbackVerdict::FullPullback)
        throw Error(ErrorCode::FactorizationFailed,
                    "canonical Kraus family is not a full pullback (residual "
                        + std::to_string(std::max(verdict.pullback_defect, verdict.pushforward_defect)) + ")",
                    std::max(verdict.pullback_defect, verdict.pushforward_defect));
    return res;
}

CheckReport slice_independence_check(const MatSubspace& sij, const MatSubspace& rij, Index alpha_i, Index alpha_j,
                                     int trials, std::uint64_t seed)
{
    const Index ni = rij.rows();
    const Index nj = rij.cols();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    auto unit = [&](Index len) {
        CVector v(len);
        for (Index t = 0; t < len; ++t) {
            double re = g(rng);
            double im = g(rng);
            v(t) = cd(re, im);
        }
        return CVector(v / v.norm());
    };
    CheckReport rep;
    for (int t = 0; t < trials; ++t) {
        CVector xi = unit(alpha_i);
        CVector eta = unit(alpha_j);
        CMatrix left = kron(xi.adjoint(), CMatrix::Identity(ni, ni));
        CMatrix right = kron(eta, CMatrix::Identity(nj, nj));
        SpanBuilder builder(ni, nj, rij.tol());
        for (Index k = 0; k < sij.dim(); ++k)
            builder.add(left * sij.element(k) * right);
        MatSubspace slice = builder.finish();
        rep.add_bound("trial_" + std::to_string(t), subspace_defect(slice, rij), rij.tol().member_eps);
    }
    return rep;
}

CheckReport slice_independence_check(const SkeletonResult& res, std::size_t i, std::size_t j, int trials,
                                     std::uint64_t seed)
{
    const auto& b = res.blocks.blocks;
    return slice_independence_check(res.system_blocks[i][j], res.slice_blocks[i][j], b[i].alpha, b[j].alpha, trials,
                                    seed);
}

BlockSignature block_signature(const SkeletonResult& res, std::size_t i)
{
    const auto& r = res.slice_blocks;
    BlockSignature sig{res.blocks.blocks[i].n, r[i][i].dim(), product_span(r[i][i], r[i][i]).dim(), {}};
    for (std::size_t j = 0; j < res.block_count(); ++j) {
        if (j == i)
            continue;
        sig.links.push_back({res.blocks.blocks[j].n, r[i][j].dim(), product_span(r[i][j], r[j][i]).dim()});
    }
    std::sort(sig.links.begin(), sig.links.end());
    return sig;
}

namespace {

struct Fnv {
    std::uint64_t h = 1469598103934665603ull;
    void add(std::int64_t v)
    {
        for (int b = 0; b < 8; ++b) {
            h ^= static_cast<std::uint64_t>((v >> (8 * b)) & 0xff);
            h *= 1099511628211ull;
        }
    }
};

} // namespace

SkeletonFingerprint skeleton_fingerprint(const SkeletonResult& res)
{
    SkeletonFingerprint fp;
    const std::size_t k = res.block_count();
    fp.block_count = static_cast<Index>(k);
    for (const auto& b : res.blocks.blocks)
        fp.multiplicities.push_back(b.n);
    std::sort(fp.multiplicities.begin(), fp.multiplicities.end());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            fp.dim_profile.push_back(res.slice_blocks[i][j].dim());
    std::sort(fp.dim_profile.begin(), fp.dim_profile.end());
    for (std::size_t i = 0; i < k; ++i)
        fp.signatures.push_back(block_signature(res, i));
    std::sort(fp.signatures.begin(), fp.signatures.end());

    Fnv h;
    h.add(fp.block_count);
    for (auto m : fp.multiplicities)
        h.add(m);
    for (auto d : fp.dim_profile)
        h.add(d);
    for (const auto& s : fp.signatures) {
        h.add(s.n);
        h.add(s.self_dim);
        h.add(s.self_square);
        for (const auto& l : s.links) {
            h.add(l.n);
            h.add(l.dim);
            h.add(l.return_dim);
        }
    }
    fp.hash = h.h;
    return fp;
}

std::string SkeletonFingerprint::difference(const SkeletonFingerprint& o) const
{
    if (block_count != o.block_count)
        return "block_count";
    if (multiplicities != o.multiplicities)
        return "multiplicities";
    if (dim_profile != o.dim_profile)
        return "dim_grid";
    if (signatures != o.signatures)
        return "block_signatures";
    if (hash != o.hash)
        return "hash";
    return {};
}

CMatrix tro_between_amplified_factors(const TroSpace& m)
{
    const MatSubspace& ms = m.space();
    const Tolerance tol = ms.tol();
    const Index h = ms.cols();
    const Index kdim = ms.rows();
    const Index da = m.right().dim();
    const Index db = m.left().dim();
    const Index alpha = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(da))));
    const Index beta = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(db))));
    if (alpha == 0 || beta == 0 || alpha * alpha != da || beta * beta != db || h % alpha != 0
        || kdim % beta != 0 || h / alpha != kdim / beta)
        throw Error(ErrorCode::StructureMismatch, "[M*M] and [MM*] are not amplified matrix algebras");
    const Index n = h / alpha;
    double dr = subspace_defect(m.right(), block_algebra({{alpha, n}}, tol));
    double dl = subspace_defect(m.left(), block_algebra({{beta, n}}, tol));
    if (dr > tol.member_eps || dl > tol.member_eps)
        throw Error(ErrorCode::StructureMismatch, "[M*M] or [MM*] differs from M_k (x) I_n", std::max(dr, dl));

    // Largest n x n block among the basis elements is a multiple of u.
    CMatrix best;
    double best_norm = -1.0;
    for (const auto& x : ms.basis())
        for (Index r = 0; r < beta; ++r)
            for (Index c = 0; c < alpha; ++c) {
                CMatrix blk = x.block(r * n, c * n, n, n);
                double nb = blk.norm();
                if (nb > best_norm) {
                    best_norm = nb;
                    best = blk;
                }
            }
    if (best_norm <= tol.member_eps)
        throw Error(ErrorCode::StructureMismatch, "M has no nonzero block");
    CMatrix u = best * (std::sqrt(static_cast<double>(n)) / best_norm);
    Index lead = 0;
    const double floor = 1e-6;
    while (lead < n && std::abs(u(lead, 0)) <= floor)
        ++lead;
    if (lead < n)
        u *= std::conj(u(lead, 0)) / std::abs(u(lead, 0));
    double unitarity = max_abs_diff(u.adjoint() * u, CMatrix::Identity(n, n));
    if (unitarity > tol.member_eps)
        throw Error(ErrorCode::StructureMismatch, "extracted factor is not unitary", unitarity);
    SpanBuilder builder(kdim, h, tol);
    for (Index r = 0; r < beta; ++r)
        for (Index c = 0; c < alpha; ++c)
            builder.add(kron(matrix_unit(beta, alpha, r, c), u));
    double d = subspace_defect(builder.finish(), ms);
    if (d > tol.member_eps)
        throw Error(ErrorCode::StructureMismatch, "M differs from M_{b,a} (x) u", d);
    return u;
}

} // namespace qgraph
