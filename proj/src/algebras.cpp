#include "qgraph/algebras.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qgraph {

namespace {

void require_square(const MatSubspace& s, const char* where)
{
    if (!s.is_square())
        throw Error(ErrorCode::ShapeMismatch, std::string(where) + ": ambient space is not square");
}

bool is_abelian(const MatSubspace& a)
{
    auto b = a.basis();
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            if ((b[i] * b[j] - b[j] * b[i]).norm() > a.tol().member_eps)
                return false;
    return true;
}

} // namespace

std::vector<Index> BlockDecomposition::offsets() const
{
    std::vector<Index> off;
    Index at = 0;
    for (const auto& b : blocks) {
        off.push_back(at);
        at += b.alpha * b.n;
    }
    return off;
}

CMatrix BlockDecomposition::block_rows(std::size_t i) const
{
    Index at = offsets()[i];
    return w.middleRows(at, blocks[i].alpha * blocks[i].n);
}

OperatorSystem validate_operator_system(const MatSubspace& space)
{
    require_square(space, "validate_operator_system");
    const Index n = space.rows();
    auto unit = contains(space, CMatrix::Identity(n, n));
    if (!unit.member)
        throw Error(ErrorCode::NotUnital, "identity not in system (residual " + std::to_string(unit.residual) + ")",
                    unit.residual);
    double sa = subspace_defect(space, adjoint_space(space));
    if (sa > space.tol().member_eps)
        throw Error(ErrorCode::NotSelfAdjoint, "S* != S (residual " + std::to_string(sa) + ")", sa);
    return OperatorSystem::trusted(space);
}

void validate_algebra(const MatSubspace& a)
{
    require_square(a, "validate_algebra");
    const Index n = a.rows();
    auto unit = contains(a, CMatrix::Identity(n, n));
    if (!unit.member)
        throw Error(ErrorCode::NotUnital, "identity not in algebra", unit.residual);
    double sa = subspace_defect(a, adjoint_space(a));
    if (sa > a.tol().member_eps)
        throw Error(ErrorCode::NotSelfAdjoint, "algebra is not *-closed", sa);
    double mult = inclusion_defect(product_span(a, a), a);
    if (mult > a.tol().member_eps)
        throw Error(ErrorCode::NotAlgebra, "algebra is not closed under products", mult);
    double bic = subspace_defect(commutant(commutant(a)), a);
    if (bic > a.tol().member_eps)
        throw Error(ErrorCode::NotBicommutant, "A'' != A", bic);
}

QuantumGraph validate_quantum_graph(const MatSubspace& s, const MatSubspace& a)
{
    require_same_shape(s, a, "validate_quantum_graph");
    require_same_tol(s, a, "validate_quantum_graph");
    OperatorSystem sys = validate_operator_system(s);
    validate_algebra(a);
    MatSubspace ap = commutant(a);
    double bim = subspace_defect(bimodule_closure(s, ap, ap), s);
    if (bim > s.tol().member_eps)
        throw Error(ErrorCode::NotBimodule, "A' S A' is not contained in S (residual " + std::to_string(bim) + ")",
                    bim);
    return QuantumGraph::trusted(sys.space(), a);
}

MatSubspace generated_cstar(const MatSubspace& s)
{
    require_square(s, "generated_cstar");
    const Index n = s.rows();
    MatSubspace gens = sum_space(s, adjoint_space(s));
    auto g = gens.basis();

    SpanBuilder builder(n, n, s.tol());
    builder.mark();
    builder.add(CMatrix::Identity(n, n));
    builder.add(gens);
    CMatrix frontier = builder.since_mark();
    while (frontier.cols() > 0 && !builder.full()) {
        builder.mark();
        for (Index k = 0; k < frontier.cols(); ++k) {
            CMatrix y = unflatten(frontier.col(k), n, n);
            for (const auto& x : g)
                builder.add(y * x);
        }
        frontier = builder.since_mark();
    }
    return builder.finish();
}

MatSubspace commutant(const MatSubspace& a)
{
    require_square(a, "commutant");
    const Index n = a.rows();
    auto b = a.basis();
    MatSubspace all = full_space(n, n, a.tol());
    return kernel_within(all, static_cast<Index>(b.size()),
                         [&](const CMatrix& x, Index c) { return flatten(x * b[c] - b[c] * x); });
}

MatSubspace center(const MatSubspace& a)
{
    require_square(a, "center");
    return intersect_space(a, commutant(a));
}

Irreducibility irreducibility_test(const OperatorSystem& s)
{
    MatSubspace gens = sum_space(s.space(), adjoint_space(s.space()));
    return is_abelian(commutant(gens)) ? Irreducibility::MultiplicityFree : Irreducibility::NotMultiplicityFree;
}

bool is_connected(const OperatorSystem& s)
{
    const Index n = s.n();
    return generated_cstar(s.space()).dim() == n * n;
}

MatSubspace multiplier_algebra(const OperatorSystem& s)
{
    if (irreducibility_test(s) != Irreducibility::MultiplicityFree)
        throw Error(ErrorCode::NotIrreducible, "multiplier algebra requires a multiplicity-free system");
    const MatSubspace& sp = s.space();
    MatSubspace cs = generated_cstar(sp);
    CMatrix perp = orth_complement(sp).coords();
    auto sb = sp.basis();
    MatSubspace left = kernel_within(cs, static_cast<Index>(sb.size()), [&](const CMatrix& x, Index c) {
        CVector v = perp.adjoint() * flatten(x * sb[c]);
        return v;
    });
    return intersect_space(left, adjoint_space(left));
}

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatSubspace tensor_system(const MatSubspace& s, const MatSubspace& t)
{
    require_square(s, "tensor_system");
    require_square(t, "tensor_system");
    require_same_tol(s, t, "tensor_system");
    // Kronecker products of orthonormal bases are orthonormal.
    const Index n = s.rows() * t.rows();
    CMatrix q(n * n, s.dim() * t.dim());
    auto tb = t.basis();
    Index col = 0;
    for (Index i = 0; i < s.dim(); ++i) {
        CMatrix x = s.element(i);
        for (const auto& y : tb)
            q.col(col++) = flatten(kron(x, y));
    }
    return MatSubspace::from_orthonormal(n, n, q, s.tol());
}

MatSubspace block_algebra(const std::vector<Block>& blocks, Tolerance tol)
{
    Index n = 0;
    Index d = 0;
    for (const auto& b : blocks) {
        n += b.alpha * b.n;
        d += b.alpha * b.alpha;
    }
    CMatrix q = CMatrix::Zero(n * n, d);
    Index off = 0;
    Index col = 0;
    for (const auto& b : blocks) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(b.n));
        for (Index r = 0; r < b.alpha; ++r)
            for (Index c = 0; c < b.alpha; ++c) {
                for (Index s = 0; s < b.n; ++s) {
                    Index row = off + r * b.n + s;
                    Index cl = off + c * b.n + s;
                    q(row * n + cl, col) = scale;
                }
                ++col;
            }
        off += b.alpha * b.n;
    }
    return MatSubspace::from_orthonormal(n, n, q, tol);
}

namespace {

VectorSetReport check_vector_set(const MatSubspace& s, const std::vector<CVector>& vectors, bool want_member)
{
    require_square(s, "vector set check");
    VectorSetReport rep;
    for (const auto& v : vectors)
        if (v.size() != s.rows())
            throw Error(ErrorCode::ShapeMismatch, "vector length differs from ambient dimension");
    const std::size_t m = vectors.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cd ip = vectors[i].dot(vectors[j]);
            double target = i == j ? 1.0 : 0.0;
            rep.orthonormality_residual = std::max(rep.orthonormality_residual, std::abs(ip - target));
        }
    if (rep.orthonormality_residual > s.tol().member_eps)
        rep.ok = false;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j)
                continue;
            CMatrix x = vectors[i] * vectors[j].adjoint();
            double res;
            if (want_member) {
                res = contains(s, x).residual;
            } else {
                res = s.project(x).norm() / std::max(1.0, x.norm());
            }
            if (res > s.tol().member_eps) {
                rep.ok = false;
                rep.failures.push_back({i, j, res});
            }
        }
    return rep;
}

} // namespace

VectorSetReport verify_independent_set(const MatSubspace& s, const std::vector<CVector>& vectors)
{
    return check_vector_set(s, vectors, false);
}

VectorSetReport verify_clique_set(const MatSubspace& s, const std::vector<CVector>& vectors)
{
    return check_vector_set(s, vectors, true);
}

} // namespace qgraph
