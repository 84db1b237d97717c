#include "qgraph/morita.hpp"

#include <cmath>
#include <sstream>

namespace qgraph {

bool CheckReport::passed() const
{
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

const Check* CheckReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

const char* verdict_name(PullbackVerdict v)
{
    switch (v) {
    case PullbackVerdict::Pullback: return "Pullback";
    case PullbackVerdict::FullPullback: return "FullPullback";
    case PullbackVerdict::No: return "No";
    }
    return "No";
}

namespace {

double eps_of(const KrausMap& phi) { return phi.domain_algebra.tol().member_eps; }

Index column_rank(const CMatrix& m, double rank_eps, CMatrix* range = nullptr)
{
    if (m.cols() == 0) {
        if (range)
            *range = CMatrix::Zero(m.rows(), m.rows());
        return 0;
    }
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index r = 0;
    if (sv.size() > 0 && sv(0) > 0)
        while (r < sv.size() && sv(r) > rank_eps * sv(0))
            ++r;
    if (range) {
        CMatrix u = svd.matrixU().leftCols(r);
        *range = u * u.adjoint();
    }
    return r;
}

CMatrix hstack(const std::vector<CMatrix>& parts, Index rows)
{
    Index cols = 0;
    for (const auto& p : parts)
        cols += p.cols();
    CMatrix out(rows, cols);
    Index at = 0;
    for (const auto& p : parts) {
        out.middleCols(at, p.cols()) = p;
        at += p.cols();
    }
    return out;
}

MatSubspace conjugate_span(const MatSubspace& x, const MatSubspace& mid)
{
    // [X* mid X]
    return product_span(product_span(adjoint_space(x), mid), x);
}

MatSubspace coconjugate_span(const MatSubspace& x, const MatSubspace& mid)
{
    // [X mid X*]
    return product_span(product_span(x, mid), adjoint_space(x));
}

void require_system_shapes(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t)
{
    if (s.rows() != phi.dim_h || s.cols() != phi.dim_h || t.rows() != phi.dim_k || t.cols() != phi.dim_k)
        throw Error(ErrorCode::ShapeMismatch, "systems do not match the Kraus map's spaces");
}

} // namespace

KrausMap make_kraus_map(std::vector<CMatrix> kraus, MatSubspace domain_algebra, MatSubspace codomain_algebra)
{
    if (kraus.empty())
        throw Error(ErrorCode::ShapeMismatch, "empty Kraus list");
    KrausMap phi;
    phi.dim_k = kraus.front().rows();
    phi.dim_h = kraus.front().cols();
    for (const auto& v : kraus)
        if (v.rows() != phi.dim_k || v.cols() != phi.dim_h)
            throw Error(ErrorCode::ShapeMismatch, "Kraus operators differ in shape");
    if (domain_algebra.rows() != phi.dim_k || domain_algebra.cols() != phi.dim_k)
        throw Error(ErrorCode::ShapeMismatch, "domain algebra must act on K");
    if (codomain_algebra.rows() != phi.dim_h || codomain_algebra.cols() != phi.dim_h)
        throw Error(ErrorCode::ShapeMismatch, "codomain algebra must act on H");
    require_same_tol(domain_algebra, codomain_algebra, "make_kraus_map");
    phi.kraus = std::move(kraus);
    phi.domain_algebra = std::move(domain_algebra);
    phi.codomain_algebra = std::move(codomain_algebra);
    return phi;
}

CMatrix apply_ucp(const KrausMap& phi, const CMatrix& b)
{
    if (b.rows() != phi.dim_k || b.cols() != phi.dim_k)
        throw Error(ErrorCode::ShapeMismatch, "apply_ucp: argument must act on K");
    CMatrix out = CMatrix::Zero(phi.dim_h, phi.dim_h);
    for (const auto& v : phi.kraus)
        out += v.adjoint() * b * v;
    return out;
}

CMatrix apply_dual(const KrausMap& phi, const CMatrix& a)
{
    if (a.rows() != phi.dim_h || a.cols() != phi.dim_h)
        throw Error(ErrorCode::ShapeMismatch, "apply_dual: argument must act on H");
    CMatrix out = CMatrix::Zero(phi.dim_k, phi.dim_k);
    for (const auto& v : phi.kraus)
        out += v * a * v.adjoint();
    return out;
}

CheckReport validate_kraus(const KrausMap& phi)
{
    CheckReport rep;
    const double eps = eps_of(phi);
    CMatrix sum = apply_ucp(phi, CMatrix::Identity(phi.dim_k, phi.dim_k));
    rep.add_bound("unital", max_abs_diff(sum, CMatrix::Identity(phi.dim_h, phi.dim_h)), eps);
    double range = 0.0;
    for (const auto& b : phi.domain_algebra.basis())
        range = std::max(range, contains(phi.codomain_algebra, apply_ucp(phi, b)).residual);
    rep.add_bound("range_in_codomain_algebra", range, eps);
    return rep;
}

MatSubspace kraus_span(const KrausMap& phi)
{
    return orthonormalize(phi.kraus, phi.dim_k, phi.dim_h, phi.domain_algebra.tol());
}

MatSubspace kraus_space(const KrausMap& phi)
{
    return bimodule_closure(kraus_span(phi), commutant(phi.domain_algebra), commutant(phi.codomain_algebra));
}

Faithfulness is_faithful(const KrausMap& phi)
{
    MatSubspace bp = commutant(phi.domain_algebra);
    std::vector<CMatrix> cols;
    for (const auto& b : bp.basis())
        for (const auto& v : phi.kraus)
            cols.push_back(b * v);
    Faithfulness f;
    f.support_dim = column_rank(hstack(cols, phi.dim_k), phi.domain_algebra.tol().rank_eps, &f.support_projection);
    f.faithful = f.support_dim == phi.dim_k;
    return f;
}

PullbackResult pullback_detailed(const MatSubspace& t, const KrausMap& phi)
{
    if (t.rows() != phi.dim_k || t.cols() != phi.dim_k)
        throw Error(ErrorCode::ShapeMismatch, "pullback: system must act on K");
    SpanBuilder builder(phi.dim_h, phi.dim_h, t.tol());
    auto tb = t.basis();
    for (const auto& vi : phi.kraus)
        for (const auto& x : tb) {
            CMatrix left = vi.adjoint() * x;
            for (const auto& vj : phi.kraus)
                builder.add(left * vj);
        }
    MatSubspace plain = builder.finish();
    MatSubspace ap = commutant(phi.codomain_algebra);
    MatSubspace closed = bimodule_closure(plain, ap, ap);
    double d = subspace_defect(plain, closed);
    return {closed, d, d <= t.tol().member_eps};
}

MatSubspace pullback(const MatSubspace& t, const KrausMap& phi) { return pullback_detailed(t, phi).space; }

MatSubspace pullback(const QuantumGraph& t, const KrausMap& phi) { return pullback(t.space(), phi); }

MatSubspace pushforward(const MatSubspace& s, const KrausMap& phi)
{
    if (s.rows() != phi.dim_h || s.cols() != phi.dim_h)
        throw Error(ErrorCode::ShapeMismatch, "pushforward: system must act on H");
    SpanBuilder builder(phi.dim_k, phi.dim_k, s.tol());
    auto sb = s.basis();
    for (const auto& vi : phi.kraus)
        for (const auto& x : sb) {
            CMatrix left = vi * x;
            for (const auto& vj : phi.kraus)
                builder.add(left * vj.adjoint());
        }
    MatSubspace bp = commutant(phi.domain_algebra);
    return bimodule_closure(builder.finish(), bp, bp);
}

MatSubspace pushforward(const QuantumGraph& s, const KrausMap& phi) { return pushforward(s.space(), phi); }

CohomReport cohomomorphism_report(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t)
{
    require_system_shapes(phi, s, t);
    double r = inclusion_defect(conjugate_span(kraus_space(phi), t), s);
    return {r <= s.tol().member_eps, r};
}

CohomReport strong_cohomomorphism_report(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t)
{
    require_system_shapes(phi, s, t);
    MatSubspace x = kraus_space(phi);
    double r1 = inclusion_defect(conjugate_span(x, t), s);
    double r2 = inclusion_defect(coconjugate_span(x, s), t);
    double r = std::max(r1, r2);
    return {r <= s.tol().member_eps, r};
}

bool is_cohomomorphism(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t)
{
    return cohomomorphism_report(phi, s, t).holds;
}

bool is_strong_cohomomorphism(const KrausMap& phi, const MatSubspace& s, const MatSubspace& t)
{
    return strong_cohomomorphism_report(phi, s, t).holds;
}

StarHomReport star_homomorphism_report(const KrausMap& phi)
{
    const double eps = eps_of(phi);
    StarHomReport rep{};
    auto bb = phi.domain_algebra.basis();
    std::vector<CMatrix> images;
    for (const auto& b : bb)
        images.push_back(apply_ucp(phi, b));
    double mult = 0.0;
    for (std::size_t i = 0; i < bb.size(); ++i)
        for (std::size_t j = 0; j < bb.size(); ++j) {
            CMatrix lhs = apply_ucp(phi, bb[i] * bb[j]);
            mult = std::max(mult, (lhs - images[i] * images[j]).norm());
        }
    double adj = 0.0;
    for (std::size_t i = 0; i < bb.size(); ++i)
        adj = std::max(adj, (apply_ucp(phi, bb[i].adjoint()) - images[i].adjoint()).norm());
    MatSubspace bp = commutant(phi.domain_algebra);
    double kr = 0.0;
    for (const auto& vi : phi.kraus)
        for (const auto& vj : phi.kraus)
            kr = std::max(kr, contains(bp, vi * vj.adjoint()).residual);
    rep.multiplicative_residual = mult;
    rep.multiplicative = mult <= eps;
    rep.adjoint_preserving = adj <= eps;
    rep.kraus_residual = kr;
    rep.kraus_in_commutant = kr <= eps;
    return rep;
}

bool is_star_homomorphism(const KrausMap& phi)
{
    auto rep = star_homomorphism_report(phi);
    if (!rep.consistent())
        throw Error(ErrorCode::InternalError,
                    "multiplicativity and the Kraus commutant criterion disagree (residuals "
                        + std::to_string(rep.multiplicative_residual) + ", " + std::to_string(rep.kraus_residual)
                        + ")");
    return rep.is_homomorphism();
}

PullbackHomReport pullback_homomorphism_report(const KrausMap& theta, const QuantumGraph& t, const QuantumGraph& s)
{
    if (!is_star_homomorphism(theta))
        throw Error(ErrorCode::NotStarHomomorphism, "theta is not a *-homomorphism");
    require_system_shapes(theta, s.space(), t.space());
    const double eps = s.space().tol().member_eps;
    PullbackHomReport rep{};
    rep.pullback_defect = subspace_defect(s.space(), pullback(t, theta));
    rep.pushforward_defect = subspace_defect(t.space(), pushforward(s, theta));
    rep.faithful = is_faithful(theta).faithful;
    if (rep.pullback_defect > eps) {
        rep.verdict = PullbackVerdict::No;
        return rep;
    }
    bool push_eq = rep.pushforward_defect <= eps;
    if (push_eq != rep.faithful)
        throw Error(ErrorCode::InternalError,
                    "faithfulness and pushforward equality disagree (pushforward residual "
                        + std::to_string(rep.pushforward_defect) + ")",
                    rep.pushforward_defect);
    rep.verdict = rep.faithful ? PullbackVerdict::FullPullback : PullbackVerdict::Pullback;
    return rep;
}

PullbackVerdict is_pullback_homomorphism(const KrausMap& theta, const QuantumGraph& t, const QuantumGraph& s)
{
    return pullback_homomorphism_report(theta, t, s).verdict;
}

TroSpace TroSpace::trusted(MatSubspace m)
{
    TroSpace out;
    MatSubspace ms = adjoint_space(m);
    out.left_ = product_span(m, ms);
    out.right_ = product_span(ms, m);
    out.space_ = std::move(m);
    return out;
}

Nondegeneracy nondegeneracy(const MatSubspace& x)
{
    auto xb = x.basis();
    std::vector<CMatrix> cols;
    std::vector<CMatrix> cocols;
    for (const auto& v : xb) {
        cols.push_back(v);
        cocols.push_back(v.adjoint());
    }
    Nondegeneracy nd;
    nd.range_dim = column_rank(hstack(cols, x.rows()), x.tol().rank_eps);
    nd.corange_dim = column_rank(hstack(cocols, x.cols()), x.tol().rank_eps);
    nd.ok = nd.range_dim == x.rows() && nd.corange_dim == x.cols();
    return nd;
}

double tro_axiom_defect(const MatSubspace& m)
{
    return inclusion_defect(product_span(product_span(m, adjoint_space(m)), m), m);
}

TroSpace tro_from_space(const MatSubspace& x)
{
    auto nd = nondegeneracy(x);
    if (!nd.ok) {
        std::ostringstream os;
        os << "[XH] has dimension " << nd.range_dim << " of " << x.rows() << ", [X*K] has dimension "
           << nd.corange_dim << " of " << x.cols();
        throw Error(ErrorCode::Degenerate, os.str());
    }
    MatSubspace a = generated_cstar(product_span(adjoint_space(x), x));
    TroSpace m = TroSpace::trusted(product_span(x, a));
    const double eps = x.tol().member_eps;
    double axiom = tro_axiom_defect(m.space());
    if (axiom > eps)
        throw Error(ErrorCode::InternalError, "constructed space violates M M* M in M", axiom);
    double l = contains(m.left(), CMatrix::Identity(x.rows(), x.rows())).residual;
    double r = contains(m.right(), CMatrix::Identity(x.cols(), x.cols())).residual;
    if (l > eps || r > eps)
        throw Error(ErrorCode::Degenerate, "identity missing from [MM*] or [M*M]", std::max(l, r));
    return m;
}

CheckReport verify_tro_equivalence(const TroSpace& m, const MatSubspace& s, const MatSubspace& t)
{
    const MatSubspace& ms = m.space();
    if (s.rows() != ms.cols() || s.cols() != ms.cols() || t.rows() != ms.rows() || t.cols() != ms.rows())
        throw Error(ErrorCode::ShapeMismatch, "verify_tro_equivalence: M must map the space of S to that of T");
    const double eps = s.tol().member_eps;
    CheckReport rep;
    rep.add_bound("tro_axiom", tro_axiom_defect(ms), eps);
    rep.add_bound("nondegenerate_left", contains(m.left(), CMatrix::Identity(ms.rows(), ms.rows())).residual, eps);
    rep.add_bound("nondegenerate_right", contains(m.right(), CMatrix::Identity(ms.cols(), ms.cols())).residual, eps);
    MatSubspace mtm = conjugate_span(ms, t);
    MatSubspace msm = coconjugate_span(ms, s);
    rep.add_bound("MtTM_in_S", inclusion_defect(mtm, s), eps);
    rep.add_bound("MSMt_in_T", inclusion_defect(msm, t), eps);
    rep.add_bound("MtTM_eq_S", subspace_defect(mtm, s), eps);
    rep.add_bound("MSMt_eq_T", subspace_defect(msm, t), eps);
    return rep;
}

CheckReport verify_tro_equivalence(const TroSpace& m, const QuantumGraph& s, const QuantumGraph& t)
{
    return verify_tro_equivalence(m, s.space(), t.space());
}

BalancedTro balance_tro(const TroSpace& m, const QuantumGraph& s, const QuantumGraph& t)
{
    const double eps = s.space().tol().member_eps;
    MatSubspace as = multiplier_algebra(s.system());
    MatSubspace at = multiplier_algebra(t.system());
    MatSubspace n = product_span(product_span(at, m.space()), as);
    BalancedTro out{TroSpace::trusted(n), {}};
    out.report.add_bound("NtN_eq_AS", subspace_defect(out.tro.right(), as), eps);
    out.report.add_bound("NNt_eq_AT", subspace_defect(out.tro.left(), at), eps);
    out.report.add_bound("NtTN_eq_S", subspace_defect(conjugate_span(n, t.space()), s.space()), eps);
    out.report.add_bound("NSNt_eq_T", subspace_defect(coconjugate_span(n, s.space()), t.space()), eps);
    return out;
}

CheckReport verify_balanced_equivalence(const TroSpace& m, const QuantumGraph& s, const QuantumGraph& t)
{
    const double eps = s.space().tol().member_eps;
    CheckReport rep = verify_tro_equivalence(m, s, t);
    const MatSubspace& ms = m.space();
    MatSubspace bp = commutant(t.algebra());
    MatSubspace ap = commutant(s.algebra());
    rep.add_bound("bimodule", inclusion_defect(product_span(product_span(bp, ms), ap), ms), eps);
    MatSubspace mbm = conjugate_span(ms, t.algebra());
    MatSubspace mam = coconjugate_span(ms, s.algebra());
    rep.add_bound("MtBM_in_A", inclusion_defect(mbm, s.algebra()), eps);
    rep.add_bound("MAMt_in_B", inclusion_defect(mam, t.algebra()), eps);
    rep.add_bound("MtBM_eq_A", subspace_defect(mbm, s.algebra()), eps);
    rep.add_bound("MAMt_eq_B", subspace_defect(mam, t.algebra()), eps);
    return rep;
}

CheckReport verify_balanced_equivalence(const KrausMap& phi, const QuantumGraph& s, const QuantumGraph& t)
{
    require_system_shapes(phi, s.space(), t.space());
    const double eps = s.space().tol().member_eps;
    CheckReport rep;
    auto f = is_faithful(phi);
    rep.add("faithful", f.faithful, static_cast<double>(phi.dim_k - f.support_dim));
    MatSubspace x = kraus_space(phi);
    rep.add_bound("XtTX_in_S", inclusion_defect(conjugate_span(x, t.space()), s.space()), eps);
    rep.add_bound("XSXt_in_T", inclusion_defect(coconjugate_span(x, s.space()), t.space()), eps);
    rep.add_bound("XtBX_in_A", inclusion_defect(conjugate_span(x, t.algebra()), s.algebra()), eps);
    rep.add_bound("XAXt_in_B", inclusion_defect(coconjugate_span(x, s.algebra()), t.algebra()), eps);
    return rep;
}

} // namespace qgraph
