#include "qgraph/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace qgraph {

const char* decision_name(DecisionKind k)
{
    switch (k) {
    case DecisionKind::Equivalent: return "Equivalent";
    case DecisionKind::NotEquivalent: return "NotEquivalent";
    case DecisionKind::Undecided: return "Undecided";
    }
    return "Undecided";
}

TroSpace assemble_witness(const SkeletonResult& s, const SkeletonResult& t, const CMatrix& u)
{
    const auto& v = s.canonical_pullback.kraus;
    const auto& w = t.canonical_pullback.kraus;
    std::vector<CMatrix> span;
    for (const auto& wj : w)
        for (const auto& vi : v)
            span.push_back(wj.adjoint() * u * vi);
    MatSubspace x = orthonormalize(span, t.canonical_pullback.dim_h, s.canonical_pullback.dim_h,
                                   s.reduced_system.tol());
    return tro_from_space(x);
}

namespace {

bool all_trivial_multiplicity(const SkeletonResult& r)
{
    return std::all_of(r.blocks.blocks.begin(), r.blocks.blocks.end(), [](const Block& b) { return b.n == 1; });
}

Graph skeleton_as_graph(const SkeletonResult& r)
{
    const int k = static_cast<int>(r.block_count());
    Graph g(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (r.slice_blocks[i][j].dim() > 0)
                g.add_edge(i, j);
    return g;
}

// Objective sum_b |P_perp(u b u*)|^2 over an orthonormal basis b of R^S.
class AlignmentProblem {
public:
    AlignmentProblem(const MatSubspace& rs, const MatSubspace& rt, std::vector<std::pair<Index, Index>> blocks)
        : basis_(rs.basis())
        , perp_(orth_complement(rt).coords())
        , blocks_(std::move(blocks))
        , dim_(rs.rows())
    {
    }

    double value(const CMatrix& u) const
    {
        double f = 0.0;
        for (const auto& b : basis_)
            f += (perp_.adjoint() * flatten(u * b * u.adjoint())).squaredNorm();
        return f;
    }

    // Riemannian gradient direction: block-diagonal skew matrix.
    CMatrix skew_gradient(const CMatrix& u) const
    {
        CMatrix g = CMatrix::Zero(dim_, dim_);
        for (const auto& b : basis_) {
            CVector res = perp_ * (perp_.adjoint() * flatten(u * b * u.adjoint()));
            CMatrix r = unflatten(res, dim_, dim_);
            g += 2.0 * (r * u * b.adjoint() + r.adjoint() * u * b);
        }
        CMatrix x = u.adjoint() * g;
        CMatrix omega = CMatrix::Zero(dim_, dim_);
        for (auto [at, len] : blocks_) {
            CMatrix blk = x.block(at, at, len, len);
            omega.block(at, at, len, len) = 0.5 * (blk - blk.adjoint());
        }
        return omega;
    }

    Index dim() const { return dim_; }
    const std::vector<std::pair<Index, Index>>& blocks() const { return blocks_; }

private:
    std::vector<CMatrix> basis_;
    CMatrix perp_;
    std::vector<std::pair<Index, Index>> blocks_;
    Index dim_;
};

CMatrix expm_skew(const CMatrix& omega, double t)
{
    // omega = i h with h Hermitian; exp(-t omega) = V diag(exp(-i t lambda)) V*.
    CMatrix h = cd(0.0, -1.0) * omega;
    h = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phase(h.rows());
    for (Index i = 0; i < h.rows(); ++i)
        phase(i) = std::exp(cd(0.0, -t * es.eigenvalues()(i)));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

double descend(const AlignmentProblem& p, CMatrix& u, int iterations)
{
    double f = p.value(u);
    double step = 1.0;
    for (int it = 0; it < iterations && f > 1e-26; ++it) {
        CMatrix omega = p.skew_gradient(u);
        double gn = omega.squaredNorm();
        if (gn < 1e-30)
            break;
        bool moved = false;
        step = std::min(step * 2.0, 1e3);
        while (step > 1e-14) {
            CMatrix cand = u * expm_skew(omega, step);
            double fc = p.value(cand);
            if (fc <= f - 1e-4 * step * gn) {
                u = cand;
                f = fc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    return f;
}

// Block matchings S block i -> T block consistent with multiplicities, signatures and the dim grid.
void enumerate_matchings(const SkeletonResult& s, const SkeletonResult& t, const std::vector<BlockSignature>& ss,
                         const std::vector<BlockSignature>& ts, std::size_t i, std::vector<int>& cur,
                         std::vector<char>& used, std::vector<std::vector<int>>& out, std::size_t cap)
{
    if (out.size() >= cap)
        return;
    const std::size_t k = ss.size();
    if (i == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (used[j] || !(ss[i] == ts[j]))
            continue;
        bool ok = s.slice_blocks[i][i].dim() == t.slice_blocks[j][j].dim();
        for (std::size_t p = 0; p < i && ok; ++p) {
            ok = s.slice_blocks[i][p].dim() == t.slice_blocks[j][cur[p]].dim()
                && s.slice_blocks[p][i].dim() == t.slice_blocks[cur[p]][j].dim();
        }
        if (!ok)
            continue;
        cur[i] = static_cast<int>(j);
        used[j] = 1;
        enumerate_matchings(s, t, ss, ts, i + 1, cur, used, out, cap);
        used[j] = 0;
    }
}

// Unitary L^S -> L^T placing S block i onto T block matching[i] (identity inside blocks).
CMatrix block_permutation(const SkeletonResult& s, const SkeletonResult& t, const std::vector<int>& matching)
{
    const auto so = s.reduced_offsets();
    const auto to = t.reduced_offsets();
    CMatrix p = CMatrix::Zero(t.reduced_dim(), s.reduced_dim());
    for (std::size_t i = 0; i < matching.size(); ++i) {
        Index len = s.blocks.blocks[i].n;
        p.block(to[matching[i]], so[i], len, len) = CMatrix::Identity(len, len);
    }
    return p;
}

bool try_witness(const SkeletonResult& s, const SkeletonResult& t, const QuantumGraph& sq, const QuantumGraph& tq,
                 const CMatrix& u, Decision& out)
{
    try {
        TroSpace m = assemble_witness(s, t, u);
        CheckReport rep = verify_tro_equivalence(m, sq, tq);
        if (!rep.passed()) {
            out.witness_report = rep;
            return false;
        }
        out.kind = DecisionKind::Equivalent;
        out.witness = std::move(m);
        out.witness_report = std::move(rep);
        out.skeleton_unitary = u;
        return true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Degenerate)
            return false;
        throw;
    }
}

} // namespace

Decision decide_tro_equivalence(const QuantumGraph& s, const QuantumGraph& t, const SearchBudget& budget)
{
    if (irreducibility_test(s.system()) != Irreducibility::MultiplicityFree
        || irreducibility_test(t.system()) != Irreducibility::MultiplicityFree)
        throw Error(ErrorCode::NotIrreducible, "decision requires multiplicity-free systems");
    SkeletonResult ks = quantum_skeleton(s, budget.seed);
    SkeletonResult kt = quantum_skeleton(t, budget.seed);
    Decision out;

    auto fs = skeleton_fingerprint(ks);
    auto ft = skeleton_fingerprint(kt);
    if (!(fs == ft)) {
        out.kind = DecisionKind::NotEquivalent;
        out.reason = "skeleton fingerprints differ in " + fs.difference(ft);
        return out;
    }

    if (all_trivial_multiplicity(ks) && all_trivial_multiplicity(kt)) {
        auto iso = graph_isomorphism(skeleton_as_graph(ks), skeleton_as_graph(kt));
        if (!iso) {
            out.kind = DecisionKind::NotEquivalent;
            out.reason = "skeleton graphs are not isomorphic";
            return out;
        }
        out.block_matching = iso->image;
        CMatrix u = block_permutation(ks, kt, iso->image);
        if (try_witness(ks, kt, s, t, u, out)) {
            out.reason = "skeleton graphs are isomorphic";
            return out;
        }
        throw Error(ErrorCode::InternalError, "witness from a skeleton graph isomorphism failed verification");
    }

    const std::size_t k = ks.block_count();
    std::vector<BlockSignature> ss, ts;
    for (std::size_t i = 0; i < k; ++i) {
        ss.push_back(block_signature(ks, i));
        ts.push_back(block_signature(kt, i));
    }
    std::vector<std::vector<int>> matchings;
    std::vector<int> cur(k, -1);
    std::vector<char> used(k, 0);
    enumerate_matchings(ks, kt, ss, ts, 0, cur, used, matchings, 10000);
    if (matchings.empty()) {
        out.kind = DecisionKind::NotEquivalent;
        out.reason = "no block matching preserves the dimension grid";
        return out;
    }

    std::mt19937_64 rng(budget.seed);
    std::vector<std::pair<Index, Index>> spans;
    {
        auto so = ks.reduced_offsets();
        for (std::size_t i = 0; i < k; ++i)
            spans.emplace_back(so[i], ks.blocks.blocks[i].n);
    }
    double best = std::numeric_limits<double>::infinity();
    int used_restarts = 0;
    for (const auto& matching : matchings) {
        CMatrix p = block_permutation(ks, kt, matching);
        // Target skeleton pulled back into the S block order.
        MatSubspace target = transform_space(kt.reduced_system, p.adjoint(), p);
        AlignmentProblem prob(ks.reduced_system, target, spans);
        for (int restart = 0; restart < budget.restarts; ++restart) {
            if (used_restarts >= budget.restarts)
                break;
            ++used_restarts;
            CMatrix u = CMatrix::Identity(prob.dim(), prob.dim());
            if (restart > 0)
                for (auto [at, len] : spans)
                    u.block(at, at, len, len) = random_unitary(len, rng);
            double f = descend(prob, u, budget.iterations);
            best = std::min(best, f);
            if (f > 1e-16)
                continue;
            if (try_witness(ks, kt, s, t, p * u, out)) {
                out.block_matching = matching;
                out.search_defect = f;
                out.restarts_used = used_restarts;
                out.reason = "block unitary aligns the skeletons";
                return out;
            }
        }
    }
    out.kind = DecisionKind::Undecided;
    out.search_defect = best;
    out.restarts_used = used_restarts;
    out.reason = "search budget exhausted";
    return out;
}

} // namespace qgraph
