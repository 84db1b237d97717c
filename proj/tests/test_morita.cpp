#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgraph/instances.hpp"
#include "qgraph/morita.hpp"

using namespace qgraph;

namespace {

// Kraus operators e_i^T (x) I_n: amplification x -> I_r (x) x from M_n to M_{rn}.
KrausMap amplification(Index r, Index n)
{
    std::vector<CMatrix> ks;
    for (Index i = 0; i < r; ++i) {
        CMatrix v = CMatrix::Zero(n, r * n);
        v.middleCols(i * n, n) = CMatrix::Identity(n, n);
        ks.push_back(v);
    }
    std::vector<CMatrix> amp;
    for (const auto& x : full_space(n, n).basis())
        amp.push_back(kron(CMatrix::Identity(r, r), x));
    return make_kraus_map(ks, full_space(n, n), orthonormalize(amp, r * n, r * n));
}

} // namespace

TEST(Morita, KrausValidation)
{
    EXPECT_TRUE(validate_kraus(amplification(2, 2)).passed());
    KrausMap bad = make_kraus_map({2.0 * CMatrix::Identity(2, 2)}, full_space(2, 2), full_space(2, 2));
    CheckReport r = validate_kraus(bad);
    EXPECT_FALSE(r.passed());
    ASSERT_NE(r.find("unital"), nullptr);
    EXPECT_FALSE(r.find("unital")->passed);
    EXPECT_THROW(make_kraus_map({CMatrix::Identity(2, 3), CMatrix::Identity(3, 3)}, full_space(2, 2),
                                full_space(3, 3)),
                 Error);
}

TEST(Morita, UcpAndDualArePaired)
{
    std::mt19937_64 rng(30);
    KrausMap phi = instances::diagonal_ucp_counterexample();
    for (int t = 0; t < 5; ++t) {
        CMatrix b = oracle::gaussian(3, 3, rng);
        CMatrix a = oracle::gaussian(3, 3, rng);
        // <phi(b), a> = <b, phi_*(a)> in the trace pairing.
        cd lhs = (apply_ucp(phi, b).adjoint() * a).trace();
        cd rhs = (b.adjoint() * apply_dual(phi, a)).trace();
        EXPECT_LT(std::abs(lhs - rhs), 1e-10);
    }
    EXPECT_LT(max_abs_diff(apply_ucp(phi, CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3)), 1e-12);
}

TEST(Morita, FaithfulnessAgainstRangeOracle)
{
    // phi is faithful iff the Kraus ranges jointly span K.
    KrausMap amp = amplification(3, 2);
    EXPECT_TRUE(is_faithful(amp).faithful);
    VertexMap f{complete_graph(3), Graph(2), {0, 0, 0}};
    Faithfulness fa = is_faithful(canonical_pullback_channel(f));
    EXPECT_FALSE(fa.faithful);
    EXPECT_EQ(fa.support_dim, 1);
    CMatrix sum = CMatrix::Zero(2, 2);
    for (const auto& v : canonical_pullback_channel(f).kraus)
        sum += v * v.adjoint();
    Eigen::FullPivLU<CMatrix> lu(sum);
    EXPECT_EQ(lu.rank(), fa.support_dim);
}

TEST(Morita, PullbackOfAmplificationIsTensorSystem)
{
    std::mt19937_64 rng(31);
    KrausMap theta = amplification(3, 2);
    MatSubspace s = instances::path_system_m2();
    MatSubspace pb = pullback(s, theta);
    // Oracle: span{E_ij (x) x}.
    std::vector<CMatrix> want;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (const auto& x : s.basis())
                want.push_back(kron(matrix_unit(3, 3, i, j), x));
    EXPECT_EQ(pb.dim(), oracle::rank(want));
    for (const auto& x : want)
        EXPECT_TRUE(contains(pb, x).member);
    EXPECT_LT(subspace_defect(pushforward(pb, theta), s), 1e-8);
}

TEST(Morita, CohomomorphismChecks)
{
    auto a = instances::doubling_amplification();
    EXPECT_TRUE(is_cohomomorphism(a.theta, a.large.space(), a.small.space()));
    EXPECT_TRUE(is_strong_cohomomorphism(a.theta, a.large.space(), a.small.space()));
    // A smaller target on K is not reached by the pushforward.
    MatSubspace diag = diagonal_algebra(2);
    EXPECT_FALSE(is_cohomomorphism(a.theta, a.large.space(), diag));
    // The full space on H pushes forward into M2 but is strictly larger than the pullback of S.
    EXPECT_TRUE(is_cohomomorphism(a.theta, full_space(4, 4), full_space(2, 2)));
    EXPECT_FALSE(is_strong_cohomomorphism(a.theta, full_space(4, 4), a.small.space()));
}

TEST(Morita, StarHomomorphismCriteriaAgree)
{
    StarHomReport hom = star_homomorphism_report(amplification(2, 3));
    EXPECT_TRUE(hom.is_homomorphism());
    EXPECT_TRUE(hom.consistent());
    StarHomReport ucp = star_homomorphism_report(instances::diagonal_ucp_counterexample());
    EXPECT_FALSE(ucp.is_homomorphism());
    EXPECT_TRUE(ucp.consistent());
}

TEST(Morita, PullbackHomomorphismVerdicts)
{
    auto a = instances::doubling_amplification();
    PullbackHomReport r = pullback_homomorphism_report(a.theta, a.small, a.large);
    EXPECT_EQ(r.verdict, PullbackVerdict::FullPullback);
    EXPECT_LT(r.pullback_defect, 1e-8);
    EXPECT_LT(r.pushforward_defect, 1e-8);
    // Same channel against an unrelated system on H.
    auto wrong = QuantumGraph::trusted(full_space(4, 4), a.large.algebra());
    EXPECT_EQ(is_pullback_homomorphism(a.theta, a.small, wrong), PullbackVerdict::No);
    EXPECT_THROW(is_pullback_homomorphism(instances::diagonal_ucp_counterexample(),
                                          graph_operator_system(Graph(3)), graph_operator_system(Graph(3))),
                 Error);
}

TEST(Morita, TroSpaces)
{
    TroSpace m = tro_from_space(full_space(3, 2));
    EXPECT_EQ(m.left().dim(), 9);
    EXPECT_EQ(m.right().dim(), 4);
    EXPECT_LT(tro_axiom_defect(full_space(3, 2)), 1e-12);
    // A single rank-one operator is a degenerate TRO.
    EXPECT_THROW(tro_from_space(orthonormalize({matrix_unit(2, 2, 0, 0)}, 2, 2)), Error);
    // E12 E12^* I = E11 leaves span{I, E12}.
    MatSubspace x = orthonormalize({CMatrix::Identity(2, 2), matrix_unit(2, 2, 0, 1)}, 2, 2);
    EXPECT_GT(tro_axiom_defect(x), 0.1);
}

TEST(Morita, VerifyTroEquivalenceForUnitaryConjugates)
{
    std::mt19937_64 rng(32);
    CMatrix u = oracle::haar_unitary(2, rng);
    MatSubspace s = instances::path_system_m2();
    MatSubspace t = transform_space(s, u, u.adjoint());
    TroSpace m = tro_from_space(orthonormalize({u}, 2, 2));
    EXPECT_TRUE(verify_tro_equivalence(m, s, t).passed());
    EXPECT_FALSE(verify_tro_equivalence(m, s, diagonal_algebra(2)).passed());
}

TEST(Morita, BalancedEquivalence)
{
    TroSpace m = tro_from_space(full_space(3, 2));
    auto s = QuantumGraph::trusted(full_space(2, 2), full_space(2, 2));
    auto t_bad = QuantumGraph::trusted(full_space(3, 3), scalar_algebra(3));
    auto t_good = QuantumGraph::trusted(full_space(3, 3), full_space(3, 3));
    EXPECT_TRUE(verify_balanced_equivalence(m, s, t_good).passed());
    CheckReport bad = verify_balanced_equivalence(m, s, t_bad);
    EXPECT_FALSE(bad.passed());
    EXPECT_TRUE(bad.find("MtTM_eq_S")->passed);
    BalancedTro b = balance_tro(m, s, t_good);
    EXPECT_TRUE(b.report.passed());
    EXPECT_LT(subspace_defect(b.tro.right(), s.algebra()), 1e-8);
    EXPECT_LT(subspace_defect(b.tro.left(), t_good.algebra()), 1e-8);
}

TEST(Morita, KrausSpaceIsRepresentationIndependent)
{
    std::mt19937_64 rng(33);
    KrausMap phi = amplification(2, 2);
    CMatrix w = oracle::haar_unitary(2, rng);
    std::vector<CMatrix> mixed;
    for (Index i = 0; i < 2; ++i) {
        CMatrix v = CMatrix::Zero(2, 4);
        for (Index j = 0; j < 2; ++j)
            v += w(i, j) * phi.kraus[j];
        mixed.push_back(v);
    }
    KrausMap psi = make_kraus_map(mixed, phi.domain_algebra, phi.codomain_algebra);
    EXPECT_LT(subspace_defect(kraus_space(phi), kraus_space(psi)), 1e-8);
    MatSubspace s = instances::path_system_m2();
    EXPECT_LT(subspace_defect(pullback(s, phi), pullback(s, psi)), 1e-8);
}
