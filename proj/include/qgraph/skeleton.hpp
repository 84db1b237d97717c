#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/classical.hpp"
#include "qgraph/morita.hpp"

namespace qgraph {

struct SkeletonResult {
    MatSubspace multiplier;      // A_S
    BlockDecomposition blocks;   // of A_S
    MatSubspace reduced_system;  // R on L = (+) C^{n_i}
    MatSubspace reduced_algebra; // C = (+) M_{n_i}
    std::vector<std::vector<MatSubspace>> system_blocks; // S_ij in the block basis
    std::vector<std::vector<MatSubspace>> slice_blocks;  // R_ij
    KrausMap canonical_pullback; // Kraus v_{i,r}: H -> L
    double factorization_residual = 0.0;

    std::size_t block_count() const { return blocks.blocks.size(); }
    Index reduced_dim() const { return reduced_system.rows(); }
    std::vector<Index> reduced_offsets() const;
    QuantumGraph reduced_graph() const { return QuantumGraph::trusted(reduced_system, reduced_algebra); }
};

SkeletonResult quantum_skeleton(const QuantumGraph& s, std::uint64_t seed = 0);

CheckReport slice_independence_check(const SkeletonResult& res, std::size_t i, std::size_t j, int trials,
                                     std::uint64_t seed);
// Slices of a block S_ij of shape (alpha_i n_i) x (alpha_j n_j) against R_ij.
CheckReport slice_independence_check(const MatSubspace& sij, const MatSubspace& rij, Index alpha_i, Index alpha_j,
                                     int trials, std::uint64_t seed);

struct BlockLink {
    Index n;
    Index dim;         // dim R_ij
    Index return_dim;  // dim [R_ij R_ji]
    auto operator<=>(const BlockLink&) const = default;
};

struct BlockSignature {
    Index n;
    Index self_dim;     // dim R_ii
    Index self_square;  // dim [R_ii R_ii]
    std::vector<BlockLink> links; // j != i, sorted
    auto operator<=>(const BlockSignature&) const = default;
};

struct SkeletonFingerprint {
    std::vector<Index> multiplicities; // sorted n_i
    Index block_count = 0;
    std::vector<Index> dim_profile;    // sorted dim R_ij over all pairs
    std::vector<BlockSignature> signatures; // sorted
    std::uint64_t hash = 0;

    bool operator==(const SkeletonFingerprint& o) const
    {
        return multiplicities == o.multiplicities && block_count == o.block_count && dim_profile == o.dim_profile
            && signatures == o.signatures && hash == o.hash;
    }
    // Name of the first differing field, empty when equal.
    std::string difference(const SkeletonFingerprint& o) const;
};

SkeletonFingerprint skeleton_fingerprint(const SkeletonResult& res);
BlockSignature block_signature(const SkeletonResult& res, std::size_t i);

CMatrix tro_between_amplified_factors(const TroSpace& m);

struct SearchBudget {
    int restarts = 50;
    int iterations = 500;
    std::uint64_t seed = 0;
};

enum class DecisionKind { Equivalent, NotEquivalent, Undecided };
const char* decision_name(DecisionKind k);

struct Decision {
    DecisionKind kind = DecisionKind::Undecided;
    std::string reason;
    std::optional<TroSpace> witness;
    CMatrix skeleton_unitary;     // u: L^S -> L^T with u R^S u* = R^T
    std::vector<int> block_matching; // S block i -> T block
    CheckReport witness_report;
    double search_defect = 0.0;
    int restarts_used = 0;
};

Decision decide_tro_equivalence(const QuantumGraph& s, const QuantumGraph& t, const SearchBudget& budget = {});

// Witness from two skeletons and a unitary u: L^S -> L^T.
TroSpace assemble_witness(const SkeletonResult& s, const SkeletonResult& t, const CMatrix& u);

} // namespace qgraph
