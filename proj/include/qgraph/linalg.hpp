#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/errors.hpp"

namespace qgraph {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Tolerance {
    double rank_eps = 1e-9;
    double member_eps = 1e-8;

    bool operator==(const Tolerance& o) const { return rank_eps == o.rank_eps && member_eps == o.member_eps; }
    bool operator!=(const Tolerance& o) const { return !(*this == o); }
};

// Row-major flattening: vec[r * cols + c] = x(r, c).
CVector flatten(const CMatrix& x);
CMatrix unflatten(const Eigen::Ref<const CVector>& v, Index rows, Index cols);

CMatrix matrix_unit(Index rows, Index cols, Index i, Index j);

// Subspace of rows x cols matrices (rows = dim K, cols = dim H), stored as an
// orthonormal basis of flattened coordinates.
class MatSubspace {
public:
    MatSubspace() = default;
    MatSubspace(Index rows, Index cols, Tolerance tol = {});

    // coords must have orthonormal columns of length rows * cols.
    static MatSubspace from_orthonormal(Index rows, Index cols, CMatrix coords, Tolerance tol);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index dim() const { return coords_.cols(); }
    Index ambient_dim() const { return rows_ * cols_; }
    bool is_zero() const { return coords_.cols() == 0; }
    bool is_square() const { return rows_ == cols_; }
    const Tolerance& tol() const { return tol_; }

    const CMatrix& coords() const { return coords_; }
    CMatrix element(Index k) const;
    std::vector<CMatrix> basis() const;

    CMatrix project(const CMatrix& x) const;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    Tolerance tol_;
    CMatrix coords_;
};

// Incremental span accumulator (truncated incremental SVD). Singular values are
// thresholded against rank_eps * max(reference_scale, largest input norm seen).
class SpanBuilder {
public:
    SpanBuilder(Index rows, Index cols, Tolerance tol, double reference_scale = 1.0);
    explicit SpanBuilder(const MatSubspace& start, double reference_scale = 1.0);

    void add(const CMatrix& x);
    void add_flat(const Eigen::Ref<const CVector>& v);
    void add(const MatSubspace& s);

    bool full();
    Index dim();
    // Remember the current span; since_mark() returns an orthonormal basis of what was added after.
    void mark();
    CMatrix since_mark();
    MatSubspace finish();

private:
    void flush();

    Index rows_;
    Index cols_;
    Tolerance tol_;
    double scale_;
    CMatrix q_;
    // Weight of each basis direction; small weights mean poorly determined directions.
    Eigen::VectorXd w_;
    std::vector<CVector> pending_;
    CMatrix marked_;
    bool rotated_ = false;
};

struct Membership {
    bool member;
    double residual;
};

MatSubspace orthonormalize(const std::vector<CMatrix>& spanning, Index rows, Index cols, Tolerance tol = {});
MatSubspace orthonormalize(const std::vector<CMatrix>& spanning, Tolerance tol = {});

Membership contains(const MatSubspace& s, const CMatrix& x);
// Largest containment residual of basis(a) in b.
double inclusion_defect(const MatSubspace& a, const MatSubspace& b);
bool is_subset(const MatSubspace& a, const MatSubspace& b);
// max of both inclusion defects.
double subspace_defect(const MatSubspace& a, const MatSubspace& b);
bool equals(const MatSubspace& a, const MatSubspace& b);

MatSubspace product_span(const MatSubspace& a, const MatSubspace& b);
MatSubspace product_span(const MatSubspace& a, const MatSubspace& b, const MatSubspace& c);
MatSubspace adjoint_space(const MatSubspace& s);
MatSubspace sum_space(const MatSubspace& a, const MatSubspace& b);
MatSubspace intersect_space(const MatSubspace& a, const MatSubspace& b);
MatSubspace orth_complement(const MatSubspace& s);
MatSubspace bimodule_closure(const MatSubspace& x, const MatSubspace& left, const MatSubspace& right);

MatSubspace full_space(Index rows, Index cols, Tolerance tol = {});
MatSubspace scalar_algebra(Index n, Tolerance tol = {});
MatSubspace diagonal_algebra(Index n, Tolerance tol = {});
// Basis matrices conjugated: { u x v }.
MatSubspace transform_space(const MatSubspace& s, const CMatrix& left, const CMatrix& right);

// Largest |entry| of a - b, for tests and reports.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

void require_same_shape(const MatSubspace& a, const MatSubspace& b, const char* where);
void require_same_tol(const MatSubspace& a, const MatSubspace& b, const char* where);

} // namespace qgraph
