#include "qgraph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgraph {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ToleranceMismatch: return "ToleranceMismatch";
    case ErrorCode::NotUnitalAlgebra: return "NotUnitalAlgebra";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::NotAlgebra: return "NotAlgebra";
    case ErrorCode::NotBicommutant: return "NotBicommutant";
    case ErrorCode::NotBimodule: return "NotBimodule";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::DecompositionFailed: return "DecompositionFailed";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotPullback: return "NotPullback";
    case ErrorCode::NotStarHomomorphism: return "NotStarHomomorphism";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::FactorizationFailed: return "FactorizationFailed";
    case ErrorCode::StructureMismatch: return "StructureMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

CVector flatten(const CMatrix& x)
{
    CVector v(x.size());
    for (Index r = 0; r < x.rows(); ++r)
        for (Index c = 0; c < x.cols(); ++c)
            v(r * x.cols() + c) = x(r, c);
    return v;
}

CMatrix unflatten(const Eigen::Ref<const CVector>& v, Index rows, Index cols)
{
    CMatrix x(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            x(r, c) = v(r * cols + c);
    return x;
}

CMatrix matrix_unit(Index rows, Index cols, Index i, Index j)
{
    CMatrix e = CMatrix::Zero(rows, cols);
    e(i, j) = 1.0;
    return e;
}

MatSubspace::MatSubspace(Index rows, Index cols, Tolerance tol)
    : rows_(rows)
    , cols_(cols)
    , tol_(tol)
    , coords_(rows * cols, 0)
{
}

MatSubspace MatSubspace::from_orthonormal(Index rows, Index cols, CMatrix coords, Tolerance tol)
{
    if (coords.rows() != rows * cols)
        throw Error(ErrorCode::ShapeMismatch, "coordinate length does not match ambient shape");
    MatSubspace s(rows, cols, tol);
    s.coords_ = std::move(coords);
    return s;
}

CMatrix MatSubspace::element(Index k) const { return unflatten(coords_.col(k), rows_, cols_); }

std::vector<CMatrix> MatSubspace::basis() const
{
    std::vector<CMatrix> out;
    out.reserve(dim());
    for (Index k = 0; k < dim(); ++k)
        out.push_back(element(k));
    return out;
}

CMatrix MatSubspace::project(const CMatrix& x) const
{
    if (x.rows() != rows_ || x.cols() != cols_)
        throw Error(ErrorCode::ShapeMismatch, "projection argument has wrong shape");
    CVector v = flatten(x);
    CVector p = coords_ * (coords_.adjoint() * v);
    return unflatten(p, rows_, cols_);
}

void require_same_shape(const MatSubspace& a, const MatSubspace& b, const char* where)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << where << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw Error(ErrorCode::ShapeMismatch, os.str());
    }
}

void require_same_tol(const MatSubspace& a, const MatSubspace& b, const char* where)
{
    if (a.tol() != b.tol())
        throw Error(ErrorCode::ToleranceMismatch, where);
}

// SpanBuilder

// Left singular pairs of p above `floor`. A column-pivoted QR first drops the trailing
// block (bounded by sqrt(cols) * |R_rr|), so Jacobi only runs on the numerical range.
struct LeftSvd {
    CMatrix u;
    Eigen::VectorXd sv;
};

LeftSvd left_svd(const CMatrix& p, double floor)
{
    Eigen::ColPivHouseholderQR<CMatrix> qr(p);
    const CMatrix& r = qr.matrixQR();
    const Index diag = std::min(p.rows(), p.cols());
    const double cut = 1e-3 * floor / std::sqrt(static_cast<double>(std::max<Index>(1, p.cols())));
    Index top = 0;
    while (top < diag && std::abs(r(top, top)) > cut)
        ++top;
    if (top == 0)
        return {CMatrix(p.rows(), 0), Eigen::VectorXd(0)};
    CMatrix rt = r.topRows(top).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<CMatrix> svd(rt, Eigen::ComputeThinU);
    CMatrix q = qr.householderQ() * CMatrix::Identity(p.rows(), top);
    return {q * svd.matrixU(), svd.singularValues()};
}


SpanBuilder::SpanBuilder(Index rows, Index cols, Tolerance tol, double reference_scale)
    : rows_(rows)
    , cols_(cols)
    , tol_(tol)
    , scale_(reference_scale)
    , q_(rows * cols, 0)
{
}

SpanBuilder::SpanBuilder(const MatSubspace& start, double reference_scale)
    : rows_(start.rows())
    , cols_(start.cols())
    , tol_(start.tol())
    , scale_(reference_scale)
    , q_(start.coords())
    , w_(Eigen::VectorXd::Constant(start.dim(), reference_scale))
{
}

void SpanBuilder::add(const CMatrix& x)
{
    if (x.rows() != rows_ || x.cols() != cols_)
        throw Error(ErrorCode::ShapeMismatch, "span element has wrong shape");
    add_flat(flatten(x));
}

void SpanBuilder::add_flat(const Eigen::Ref<const CVector>& v)
{
    if (q_.cols() == rows_ * cols_)
        return;
    pending_.emplace_back(v);
    if (static_cast<Index>(pending_.size()) >= std::max<Index>(16, rows_ * cols_ / 2))
        flush();
}

void SpanBuilder::add(const MatSubspace& s)
{
    for (Index k = 0; k < s.dim(); ++k)
        add_flat(s.coords().col(k));
}

// Truncated incremental SVD of every vector seen so far. Directions found from a tiny
// singular value carry error ~ eps/sigma; keeping their weights lets later, larger
// contributions re-align them instead of leaking noise as spurious new directions.
void SpanBuilder::flush()
{
    if (pending_.empty())
        return;
    const Index n = rows_ * cols_;
    const Index b = static_cast<Index>(pending_.size());
    CMatrix p(n, b);
    for (Index j = 0; j < b; ++j) {
        p.col(j) = pending_[j];
        scale_ = std::max(scale_, pending_[j].norm());
    }
    pending_.clear();
    const Index k = q_.cols();
    if (k == n)
        return;
    const double thr = tol_.rank_eps * scale_;
    const double weak = 1e-4 * scale_;

    CMatrix c = CMatrix::Zero(k, b);
    if (k > 0) {
        c = q_.adjoint() * p;
        p -= q_ * c;
        CMatrix c2 = q_.adjoint() * p;
        p -= q_ * c2;
        c += c2;
    }
    const bool weak_old = k > 0 && w_.minCoeff() < weak;
    // Nothing new and nothing to re-align.
    if (!weak_old && p.norm() <= thr)
        return;
    const LeftSvd svd = left_svd(p, thr);
    const auto& sv = svd.sv;
    Index fresh_count = 0;
    while (fresh_count < sv.size() && sv(fresh_count) > thr)
        ++fresh_count;
    fresh_count = std::min(fresh_count, n - k);
    const bool weak_new = fresh_count > 0 && sv(fresh_count - 1) < weak;

    auto orthonormal_complement = [&](Index m) {
        CMatrix fresh = svd.u.leftCols(m);
        if (k > 0)
            fresh -= q_ * (q_.adjoint() * fresh);
        Eigen::HouseholderQR<CMatrix> qr(fresh);
        return CMatrix(qr.householderQ() * CMatrix::Identity(n, m));
    };

    if (!weak_old && !weak_new) {
        if (fresh_count == 0)
            return;
        CMatrix grown(n, k + fresh_count);
        grown << q_, orthonormal_complement(fresh_count);
        q_ = std::move(grown);
        Eigen::VectorXd w(k + fresh_count);
        w << w_, sv.head(fresh_count);
        w_ = std::move(w);
        return;
    }

    // Re-align: SVD of [Q diag(w), p] expressed in the basis [Q, R].
    const Index m = std::min(sv.size(), n - k);
    CMatrix r = orthonormal_complement(m);
    CMatrix core = CMatrix::Zero(k + m, k + b);
    core.topLeftCorner(k, k) = w_.cast<cd>().asDiagonal();
    core.topRightCorner(k, b) = c;
    core.bottomRightCorner(m, b) = r.adjoint() * p;
    Eigen::JacobiSVD<CMatrix> csvd(core, Eigen::ComputeThinU);
    const auto& csv = csvd.singularValues();
    Index keep = 0;
    while (keep < csv.size() && csv(keep) > thr)
        ++keep;
    keep = std::min(keep, n);
    CMatrix basis(n, k + m);
    basis << q_, r;
    q_ = basis * csvd.matrixU().leftCols(keep);
    w_ = csv.head(keep);
    rotated_ = true;
}

bool SpanBuilder::full()
{
    flush();
    return q_.cols() == rows_ * cols_;
}

Index SpanBuilder::dim()
{
    flush();
    return q_.cols();
}

void SpanBuilder::mark()
{
    flush();
    marked_ = q_;
    rotated_ = false;
}

CMatrix SpanBuilder::since_mark()
{
    flush();
    const Index before = marked_.cols();
    if (!rotated_)
        return q_.rightCols(q_.cols() - before);
    if (before == 0)
        return q_;
    CMatrix rest = q_ - marked_ * (marked_.adjoint() * q_);
    Eigen::JacobiSVD<CMatrix> svd(rest, Eigen::ComputeThinU);
    const Index added = std::max<Index>(0, q_.cols() - before);
    CMatrix u = svd.matrixU().leftCols(added);
    u -= marked_ * (marked_.adjoint() * u);
    Eigen::HouseholderQR<CMatrix> qr(u);
    return qr.householderQ() * CMatrix::Identity(q_.rows(), added);
}

MatSubspace SpanBuilder::finish()
{
    flush();
    return MatSubspace::from_orthonormal(rows_, cols_, q_, tol_);
}

// Lattice operations

MatSubspace orthonormalize(const std::vector<CMatrix>& spanning, Index rows, Index cols, Tolerance tol)
{
    const Index n = rows * cols;
    if (spanning.empty())
        return MatSubspace(rows, cols, tol);
    CMatrix stack(n, static_cast<Index>(spanning.size()));
    for (std::size_t k = 0; k < spanning.size(); ++k) {
        const CMatrix& x = spanning[k];
        if (x.rows() != rows || x.cols() != cols)
            throw Error(ErrorCode::ShapeMismatch, "spanning matrices differ in shape");
        if (!x.allFinite())
            throw Error(ErrorCode::ShapeMismatch, "non-finite entry in spanning matrix");
        stack.col(static_cast<Index>(k)) = flatten(x);
    }
    Eigen::JacobiSVD<CMatrix> svd(stack, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index keep = 0;
    if (sv.size() > 0 && sv(0) > 0.0)
        while (keep < sv.size() && sv(keep) > tol.rank_eps * sv(0))
            ++keep;
    return MatSubspace::from_orthonormal(rows, cols, svd.matrixU().leftCols(keep), tol);
}

MatSubspace orthonormalize(const std::vector<CMatrix>& spanning, Tolerance tol)
{
    if (spanning.empty())
        return MatSubspace(0, 0, tol);
    return orthonormalize(spanning, spanning.front().rows(), spanning.front().cols(), tol);
}

Membership contains(const MatSubspace& s, const CMatrix& x)
{
    if (x.rows() != s.rows() || x.cols() != s.cols())
        throw Error(ErrorCode::ShapeMismatch, "contains: element has wrong shape");
    CVector v = flatten(x);
    double nx = v.norm();
    CVector r = v - s.coords() * (s.coords().adjoint() * v);
    double res = r.norm() / std::max(1.0, nx);
    return {res <= s.tol().member_eps, res};
}

double inclusion_defect(const MatSubspace& a, const MatSubspace& b)
{
    require_same_shape(a, b, "inclusion");
    require_same_tol(a, b, "inclusion");
    if (a.dim() == 0)
        return 0.0;
    CMatrix r = a.coords() - b.coords() * (b.coords().adjoint() * a.coords());
    return r.colwise().norm().maxCoeff();
}

bool is_subset(const MatSubspace& a, const MatSubspace& b) { return inclusion_defect(a, b) <= a.tol().member_eps; }

double subspace_defect(const MatSubspace& a, const MatSubspace& b)
{
    return std::max(inclusion_defect(a, b), inclusion_defect(b, a));
}

bool equals(const MatSubspace& a, const MatSubspace& b) { return subspace_defect(a, b) <= a.tol().member_eps; }

MatSubspace product_span(const MatSubspace& a, const MatSubspace& b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorCode::ShapeMismatch, "product_span: inner dimensions differ");
    require_same_tol(a, b, "product_span");
    SpanBuilder builder(a.rows(), b.cols(), a.tol());
    auto bs = b.basis();
    for (Index i = 0; i < a.dim() && !builder.full(); ++i) {
        CMatrix x = a.element(i);
        for (const auto& y : bs)
            builder.add(x * y);
    }
    return builder.finish();
}

MatSubspace product_span(const MatSubspace& a, const MatSubspace& b, const MatSubspace& c)
{
    return product_span(product_span(a, b), c);
}

MatSubspace adjoint_space(const MatSubspace& s)
{
    CMatrix q(s.ambient_dim(), s.dim());
    for (Index k = 0; k < s.dim(); ++k)
        q.col(k) = flatten(s.element(k).adjoint());
    return MatSubspace::from_orthonormal(s.cols(), s.rows(), std::move(q), s.tol());
}

MatSubspace sum_space(const MatSubspace& a, const MatSubspace& b)
{
    require_same_shape(a, b, "sum_space");
    require_same_tol(a, b, "sum_space");
    SpanBuilder builder(a);
    builder.add(b);
    return builder.finish();
}

MatSubspace orth_complement(const MatSubspace& s)
{
    const Index n = s.ambient_dim();
    const Index d = s.dim();
    if (d == 0)
        return MatSubspace::from_orthonormal(s.rows(), s.cols(), CMatrix::Identity(n, n), s.tol());
    Eigen::HouseholderQR<CMatrix> qr(s.coords());
    CMatrix full = qr.householderQ() * CMatrix::Identity(n, n);
    return MatSubspace::from_orthonormal(s.rows(), s.cols(), full.rightCols(n - d), s.tol());
}

MatSubspace intersect_space(const MatSubspace& a, const MatSubspace& b)
{
    require_same_shape(a, b, "intersect_space");
    require_same_tol(a, b, "intersect_space");
    return orth_complement(sum_space(orth_complement(a), orth_complement(b)));
}

MatSubspace bimodule_closure(const MatSubspace& x, const MatSubspace& left, const MatSubspace& right)
{
    if (left.rows() != x.rows() || left.cols() != x.rows() || right.rows() != x.cols() || right.cols() != x.cols())
        throw Error(ErrorCode::ShapeMismatch, "bimodule_closure: algebra shapes do not fit");
    require_same_tol(x, left, "bimodule_closure");
    require_same_tol(x, right, "bimodule_closure");
    if (!contains(left, CMatrix::Identity(x.rows(), x.rows())).member)
        throw Error(ErrorCode::NotUnitalAlgebra, "left algebra does not contain the identity");
    if (!contains(right, CMatrix::Identity(x.cols(), x.cols())).member)
        throw Error(ErrorCode::NotUnitalAlgebra, "right algebra does not contain the identity");

    auto ls = left.basis();
    auto rs = right.basis();
    SpanBuilder builder(x);
    CMatrix frontier = x.coords();
    while (frontier.cols() > 0 && !builder.full()) {
        builder.mark();
        for (Index k = 0; k < frontier.cols(); ++k) {
            CMatrix y = unflatten(frontier.col(k), x.rows(), x.cols());
            for (const auto& l : ls)
                builder.add(l * y);
            for (const auto& r : rs)
                builder.add(y * r);
        }
        frontier = builder.since_mark();
    }
    return builder.finish();
}

MatSubspace full_space(Index rows, Index cols, Tolerance tol)
{
    const Index n = rows * cols;
    return MatSubspace::from_orthonormal(rows, cols, CMatrix::Identity(n, n), tol);
}

MatSubspace scalar_algebra(Index n, Tolerance tol)
{
    CMatrix q = flatten(CMatrix::Identity(n, n)) / std::sqrt(static_cast<double>(n));
    return MatSubspace::from_orthonormal(n, n, q, tol);
}

MatSubspace diagonal_algebra(Index n, Tolerance tol)
{
    CMatrix q = CMatrix::Zero(n * n, n);
    for (Index i = 0; i < n; ++i)
        q(i * n + i, i) = 1.0;
    return MatSubspace::from_orthonormal(n, n, q, tol);
}

MatSubspace transform_space(const MatSubspace& s, const CMatrix& left, const CMatrix& right)
{
    if (left.cols() != s.rows() || right.rows() != s.cols())
        throw Error(ErrorCode::ShapeMismatch, "transform_space: factor shapes do not fit");
    std::vector<CMatrix> span;
    span.reserve(s.dim());
    for (Index k = 0; k < s.dim(); ++k)
        span.push_back(left * s.element(k) * right);
    SpanBuilder builder(left.rows(), right.cols(), s.tol());
    for (const auto& x : span)
        builder.add(x);
    return builder.finish();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    if (a.size() == 0)
        return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace qgraph
