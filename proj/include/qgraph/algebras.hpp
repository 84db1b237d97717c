#pragma once

#include <cstdint>
#include <vector>

#include "qgraph/linalg.hpp"

namespace qgraph {

// Unital self-adjoint subspace of M_n. Only produced by validate_operator_system
// or by constructions that guarantee the axioms.
class OperatorSystem {
public:
    OperatorSystem() = default;
    const MatSubspace& space() const { return space_; }
    Index n() const { return space_.rows(); }

    static OperatorSystem trusted(MatSubspace s) { return OperatorSystem(std::move(s)); }

private:
    explicit OperatorSystem(MatSubspace s)
        : space_(std::move(s))
    {
    }
    MatSubspace space_;
};

// Operator system S that is a bimodule over A' for a unital *-algebra A = A''.
class QuantumGraph {
public:
    QuantumGraph() = default;
    const OperatorSystem& system() const { return system_; }
    const MatSubspace& space() const { return system_.space(); }
    const MatSubspace& algebra() const { return algebra_; }
    Index n() const { return system_.n(); }

    static QuantumGraph trusted(MatSubspace s, MatSubspace a)
    {
        return QuantumGraph(OperatorSystem::trusted(std::move(s)), std::move(a));
    }

private:
    QuantumGraph(OperatorSystem s, MatSubspace a)
        : system_(std::move(s))
        , algebra_(std::move(a))
    {
    }
    OperatorSystem system_;
    MatSubspace algebra_;
};

struct Block {
    Index alpha;
    Index n;
    bool operator==(const Block& o) const { return alpha == o.alpha && n == o.n; }
};

// W A W* = (+)_i M_{alpha_i} (x) I_{n_i}; inside block i the coordinate
// r * n_i + s carries the matrix-unit index r and the multiplicity index s.
struct BlockDecomposition {
    CMatrix w;
    std::vector<Block> blocks;

    Index dim() const { return w.rows(); }
    std::vector<Index> offsets() const;
    // Rows of W belonging to block i (an isometry onto H_i, as m_i x n).
    CMatrix block_rows(std::size_t i) const;
};

OperatorSystem validate_operator_system(const MatSubspace& space);
QuantumGraph validate_quantum_graph(const MatSubspace& s, const MatSubspace& a);
// Throws unless a is a unital *-algebra with a = a''.
void validate_algebra(const MatSubspace& a);

MatSubspace generated_cstar(const MatSubspace& s);
MatSubspace commutant(const MatSubspace& a);
MatSubspace multiplier_algebra(const OperatorSystem& s);
MatSubspace center(const MatSubspace& a);
BlockDecomposition block_decomposition(const MatSubspace& a, std::uint64_t seed = 0);

enum class Irreducibility { MultiplicityFree, NotMultiplicityFree };
Irreducibility irreducibility_test(const OperatorSystem& s);
bool is_connected(const OperatorSystem& s);

CMatrix kron(const CMatrix& a, const CMatrix& b);
MatSubspace tensor_system(const MatSubspace& s, const MatSubspace& t);

// (+)_i M_{alpha_i} (x) I_{n_i} in the standard basis.
MatSubspace block_algebra(const std::vector<Block>& blocks, Tolerance tol = {});

// {x in v : f(x) = 0} for a family of linear constraints f_c, c < count.
// eval(x, c) returns f_c(x) as a flat vector.
template <class Eval>
MatSubspace kernel_within(const MatSubspace& v, Index count, Eval eval, Index batch = 8);

struct PairResidual {
    std::size_t i;
    std::size_t j;
    double residual;
};

struct VectorSetReport {
    bool ok = true;
    double orthonormality_residual = 0.0;
    std::vector<PairResidual> failures;
};

VectorSetReport verify_independent_set(const MatSubspace& s, const std::vector<CVector>& vectors);
VectorSetReport verify_clique_set(const MatSubspace& s, const std::vector<CVector>& vectors);

// Random self-adjoint element of a *-closed subspace (complex Gaussian coefficients, then Hermitian part).
template <class Rng>
CMatrix random_selfadjoint_element(const MatSubspace& a, Rng& rng);
template <class Rng>
CMatrix random_element(const MatSubspace& a, Rng& rng);
template <class Rng>
CMatrix random_unitary(Index n, Rng& rng);

} // namespace qgraph

#include "qgraph/algebras_impl.hpp"
