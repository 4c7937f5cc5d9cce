#pragma once

#include "buchi/chain.hpp"
#include "buchi/dense.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace buchi {

/// Two-discount surrogate reward for a Büchi objective: reward 1 - gamma_b and
/// discount gamma_b on accepting states, reward 0 and discount gamma elsewhere.
class SurrogateReward {
public:
    /// Throws InvalidDiscounts unless 0 < gamma_b < gamma <= 1.
    SurrogateReward(double gamma, double gamma_b);

    double gamma() const noexcept { return gamma_; }
    double gamma_b() const noexcept { return gamma_b_; }

    double reward(bool accepting) const noexcept { return accepting ? 1.0 - gamma_b_ : 0.0; }
    double discount(bool accepting) const noexcept { return accepting ? gamma_b_ : gamma_; }

    Vector rewards(const std::vector<bool>& accepting) const;
    Vector discounts(const std::vector<bool>& accepting) const;

private:
    double gamma_;
    double gamma_b_;
};

/// Bellman equation V = b + Gamma_B P V in accepting-first order. Position k
/// of the internal ordering holds original state order[k]; the first m
/// positions are the accepting states, the remaining n the others, each in
/// ascending original index.
struct BellmanSystem {
    std::vector<std::size_t> order;
    std::size_t m = 0;
    std::size_t n = 0;
    Matrix p;         // P_pi permuted
    Vector discount;  // diagonal of Gamma_B, permuted
    Vector b;         // (1 - gamma_b) [1_m; 0_n]
    double gamma = 1.0;
    double gamma_b = 0.5;

    enum class Side { accepting, rejecting };
    /// P_{from -> to} block.
    Matrix block(Side from, Side to) const;

    /// Maps a vector in internal order back to original state order.
    Vector to_original(const Vector& internal) const;
    Vector to_internal(const Vector& original) const;
};

/// Throws InvalidDiscounts through SurrogateReward.
BellmanSystem build_system(const InducedChain& chain, const SurrogateReward& r);

/// Maximum row sum of Gamma_B P_pi; bounds the spectral radius.
double gershgorin_bound(const BellmanSystem& sys);

enum class SolveMethod { discounted, accepting, constrained };
std::string_view method_name(SolveMethod m) noexcept;

struct Solution {
    Vector value;       // original state order
    double residual = 0.0; // ||V - R - Gamma P V||_inf on the full equation
    SolveMethod method = SolveMethod::discounted;
};

/// ||V - R - Gamma .* (P V)||_inf in original order, assembled directly from the chain.
double bellman_residual(const InducedChain& chain, const SurrogateReward& r, const Vector& v);

/// V = (I - Gamma_B P)^{-1} b. Throws RequiresGammaLessThanOne when gamma == 1.
Solution solve_discounted(const BellmanSystem& sys);

/// First-return structure on the accepting states.
struct AcceptingChain {
    std::vector<std::size_t> states;      // B, ascending original indices
    std::vector<std::size_t> non_accepting; // not B, ascending original indices
    Matrix p_b;    // first-return matrix on B
    Matrix p_init; // first-visit matrix from the non-accepting states into B
    Vector mu;     // initial distribution on B
};

/// P_B = P_BB + P_BN (I - P_NN)^{-1} P_NB and P_init = (I - P_NN)^{-1} P_NB.
/// Throws RejectingBsccPresent naming the first rejecting BSCC.
AcceptingChain first_return_matrix(const InducedChain& chain);
AcceptingChain first_return_matrix(const InducedChain& chain, const BsccPartition& partition);

/// gamma = 1 with only accepting BSCCs: U^B = (1 - gamma_b)(I - gamma_b P_B)^{-1} 1
/// and U^{not B} = P_init U^B.
Solution solve_accepting(const InducedChain& chain, double gamma_b);
Solution solve_accepting(const InducedChain& chain, const BsccPartition& partition, double gamma_b);

/// gamma = 1 system restricted to the transient states once the BSCC values
/// are pinned: U^{B_A} = U^{nB_A} = 1, U^{nB_R} = 0.
struct ConstrainedSystem {
    std::vector<std::size_t> accepting_transient;  // B_T
    std::vector<std::size_t> rejecting_transient;  // nB_T
    std::vector<std::size_t> pinned_one;           // B_A and nB_A
    std::vector<std::size_t> pinned_zero;          // nB_R
    Matrix p_bt_bt, p_bt_nbt, p_nbt_bt, p_nbt_nbt;
    Vector b1; // (1 - gamma_b) 1 + gamma_b (P_{B_T -> B_A} + P_{B_T -> nB_A}) 1
    Vector b2; // (P_{nB_T -> B_A} + P_{nB_T -> nB_A}) 1
    double gamma_b = 0.5;
};

ConstrainedSystem build_constrained(const InducedChain& chain, const BsccPartition& partition, double gamma_b);

/// `joint` solves the stacked transient system in one elimination;
/// `two_stage` first eliminates nB_T to get a contraction on B_T, then
/// recovers nB_T from it.
enum class ConstrainedRoute { joint, two_stage };

Solution solve_constrained(const InducedChain& chain, const BsccPartition& partition, double gamma_b,
                           ConstrainedRoute route = ConstrainedRoute::joint);

struct UniquenessCertificate {
    double gamma = 1.0;
    double gamma_b = 0.5;
    /// The Bellman equation by itself has exactly one solution.
    bool unique = true;
    /// Unique once the rejecting-BSCC values are pinned to zero (always when gamma < 1).
    bool unique_under_condition = true;
    std::size_t null_space_dim = 0;
    std::vector<Vector> null_basis;
    Solution value;
    bool condition_applied = false;
    std::size_t rejecting_bscc_count = 0;
    double gershgorin = 0.0;
};

UniquenessCertificate certify(const InducedChain& chain, const BsccPartition& partition, const SurrogateReward& r);

} // namespace buchi
