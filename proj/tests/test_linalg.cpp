#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgraph/linalg.hpp"

using namespace qgraph;

namespace {

std::vector<CMatrix> random_rank_set(Index rows, Index cols, Index r, Index count, std::mt19937_64& rng)
{
    // count matrices drawn from an r-dimensional random subspace.
    std::vector<CMatrix> gens;
    for (Index k = 0; k < r; ++k)
        gens.push_back(oracle::gaussian(rows, cols, rng));
    std::normal_distribution<double> g;
    std::vector<CMatrix> out;
    for (Index k = 0; k < count; ++k) {
        CMatrix x = CMatrix::Zero(rows, cols);
        for (const auto& y : gens)
            x += cd(g(rng), g(rng)) * y;
        out.push_back(x);
    }
    return out;
}

} // namespace

TEST(Linalg, FlattenIsRowMajor)
{
    CMatrix x(2, 3);
    x << 1, 2, 3, 4, 5, 6;
    CVector v = flatten(x);
    for (int k = 0; k < 6; ++k)
        EXPECT_EQ(v(k), cd(k + 1));
    EXPECT_EQ(unflatten(v, 2, 3), x);
}

TEST(Linalg, OrthonormalizeMatchesRank)
{
    std::mt19937_64 rng(1);
    for (Index r : {0, 1, 3, 5}) {
        auto xs = random_rank_set(3, 2, r, 7, rng);
        MatSubspace s = orthonormalize(xs, 3, 2);
        EXPECT_EQ(s.dim(), oracle::rank(xs));
        EXPECT_LT((s.coords().adjoint() * s.coords() - CMatrix::Identity(s.dim(), s.dim())).norm(), 1e-12);
        for (const auto& x : xs)
            EXPECT_TRUE(contains(s, x).member);
    }
}

TEST(Linalg, ContainsRejectsOutsideElements)
{
    MatSubspace d = diagonal_algebra(3);
    EXPECT_TRUE(contains(d, CMatrix::Identity(3, 3)).member);
    Membership m = contains(d, matrix_unit(3, 3, 0, 1));
    EXPECT_FALSE(m.member);
    EXPECT_NEAR(m.residual, 1.0, 1e-12);
}

TEST(Linalg, IntersectionDimensionFormula)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        auto shared = random_rank_set(3, 3, 2, 2, rng);
        auto a = shared;
        auto b = shared;
        for (int k = 0; k < 3; ++k) {
            a.push_back(oracle::gaussian(3, 3, rng));
            b.push_back(oracle::gaussian(3, 3, rng));
        }
        MatSubspace sa = orthonormalize(a, 3, 3);
        MatSubspace sb = orthonormalize(b, 3, 3);
        MatSubspace i = intersect_space(sa, sb);
        auto ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        EXPECT_EQ(i.dim(), oracle::rank(a) + oracle::rank(b) - oracle::rank(ab));
        for (const auto& x : shared)
            EXPECT_TRUE(contains(i, x).member);
    }
}

TEST(Linalg, ComplementIsOrthogonalAndComplementary)
{
    std::mt19937_64 rng(3);
    auto xs = random_rank_set(2, 4, 3, 5, rng);
    MatSubspace s = orthonormalize(xs, 2, 4);
    MatSubspace c = orth_complement(s);
    EXPECT_EQ(s.dim() + c.dim(), 8);
    EXPECT_LT((s.coords().adjoint() * c.coords()).norm(), 1e-12);
}

TEST(Linalg, ProductSpanAgainstRankOracle)
{
    std::mt19937_64 rng(4);
    auto as = random_rank_set(3, 2, 2, 2, rng);
    auto bs = random_rank_set(2, 4, 2, 2, rng);
    std::vector<CMatrix> prods;
    for (const auto& a : as)
        for (const auto& b : bs)
            prods.push_back(a * b);
    MatSubspace p = product_span(orthonormalize(as, 3, 2), orthonormalize(bs, 2, 4));
    EXPECT_EQ(p.dim(), oracle::rank(prods));
    for (const auto& x : prods)
        EXPECT_TRUE(contains(p, x).member);
}

TEST(Linalg, AdjointSpaceIsInvolutive)
{
    std::mt19937_64 rng(5);
    MatSubspace s = orthonormalize(random_rank_set(2, 3, 3, 3, rng), 2, 3);
    MatSubspace a = adjoint_space(s);
    EXPECT_EQ(a.rows(), 3);
    EXPECT_EQ(a.cols(), 2);
    EXPECT_LT(subspace_defect(adjoint_space(a), s), 1e-10);
}

TEST(Linalg, BimoduleClosureOfMatrixUnit)
{
    MatSubspace e = orthonormalize({matrix_unit(3, 3, 0, 1)}, 3, 3);
    EXPECT_EQ(bimodule_closure(e, full_space(3, 3), full_space(3, 3)).dim(), 9);
    EXPECT_EQ(bimodule_closure(e, diagonal_algebra(3), diagonal_algebra(3)).dim(), 1);
    MatSubspace row = bimodule_closure(e, scalar_algebra(3), full_space(3, 3));
    std::vector<CMatrix> oracle_row = {matrix_unit(3, 3, 0, 0), matrix_unit(3, 3, 0, 1), matrix_unit(3, 3, 0, 2)};
    EXPECT_LT(subspace_defect(row, orthonormalize(oracle_row, 3, 3)), 1e-12);
}

TEST(Linalg, BimoduleClosureRequiresUnitalAlgebras)
{
    MatSubspace e = orthonormalize({matrix_unit(2, 2, 0, 0)}, 2, 2);
    try {
        bimodule_closure(e, e, full_space(2, 2));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::NotUnitalAlgebra);
    }
}

TEST(Linalg, ShapeAndToleranceMismatch)
{
    try {
        sum_space(full_space(2, 2), full_space(2, 3));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::ShapeMismatch);
    }
    try {
        sum_space(full_space(2, 2), full_space(2, 2, Tolerance{1e-7, 1e-6}));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::ToleranceMismatch);
    }
}

TEST(Linalg, NearDependentVectorsRespectRankTolerance)
{
    CMatrix a = matrix_unit(2, 2, 0, 0);
    CMatrix b = a + 1e-12 * matrix_unit(2, 2, 1, 1);
    EXPECT_EQ(orthonormalize({a, b}, 2, 2).dim(), 1);
    CMatrix c = a + 1e-3 * matrix_unit(2, 2, 1, 1);
    EXPECT_EQ(orthonormalize({a, c}, 2, 2).dim(), 2);
}

TEST(Linalg, TransformSpaceConjugates)
{
    std::mt19937_64 rng(6);
    CMatrix u = oracle::haar_unitary(3, rng);
    MatSubspace d = diagonal_algebra(3);
    MatSubspace t = transform_space(d, u, u.adjoint());
    for (int i = 0; i < 3; ++i)
        EXPECT_TRUE(contains(t, u * matrix_unit(3, 3, i, i) * u.adjoint()).member);
    EXPECT_EQ(t.dim(), 3);
}
