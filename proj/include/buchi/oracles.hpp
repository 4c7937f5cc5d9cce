#pragma once

#include "buchi/bellman.hpp"
#include "buchi/chain.hpp"
#include "buchi/dense.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace buchi {

/// E[G_{0:K} | start = s], by backward recursion E_0 = R, E_{k+1} = R + Gamma .* (P E_k).
double finite_horizon_return(const InducedChain& chain, const SurrogateReward& r, std::size_t s, std::size_t k);
Vector finite_horizon_returns(const InducedChain& chain, const SurrogateReward& r, std::size_t k);

struct EstimatorMode {
    enum class Kind { bscc_aware, cap };
    Kind kind = Kind::bscc_aware;
    std::size_t horizon = 0; // K for cap mode: rewards at steps 0..K

    /// "bscc-aware" or "cap:<K>"; throws InputError otherwise.
    static EstimatorMode parse(std::string_view text);
    std::string str() const;
};

struct ReturnEstimate {
    double mean = 0.0;
    double std_error = 0.0; // sample standard deviation / sqrt(samples)
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    EstimatorMode mode;
};

/// Samples per parallel block. Sample i always uses stream i of the seed and
/// blocks are merged in index order, so results do not depend on threading.
inline constexpr std::size_t kSampleBlock = 4096;

/// bscc-aware mode requires gamma == 1 (throws ModeRequiresGammaOne): the walk
/// stops at the first BSCC state and adds the running discount times 1 for an
/// accepting BSCC, 0 for a rejecting one. cap:K sums rewards at steps 0..K and
/// stops early inside a rejecting BSCC, where no further reward is possible.
ReturnEstimate mc_return(const InducedChain& chain, const BsccPartition& partition, const SurrogateReward& r,
                         std::size_t s, std::size_t samples, std::uint64_t seed, EstimatorMode mode,
                         Backend backend = default_backend());

struct Trajectory {
    enum class End { entered_bscc, horizon_cap };
    std::vector<std::size_t> states;
    End end = End::horizon_cap;
    std::size_t bscc = BsccPartition::npos; // index into partition.bsccs when entered
};

/// Walks from s using stream `stream` of `seed` until a BSCC state is reached
/// or max_steps transitions have been taken.
Trajectory sample_trajectory(const InducedChain& chain, const BsccPartition& partition, std::size_t s,
                             std::uint64_t seed, std::uint64_t stream, std::size_t max_steps);

/// Probability of eventually entering an accepting BSCC from each state.
Vector reachability_probability(const InducedChain& chain, const BsccPartition& partition);

struct NullSpace {
    std::size_t dim = 0;
    /// Each vector scaled to infinity norm 1 with its largest-magnitude entry positive.
    std::vector<Vector> basis;
};

/// Complete-pivot elimination; a pivot counts as zero when its magnitude is
/// at most rel_tol * ||m||_inf.
NullSpace null_space(const Matrix& m, double rel_tol = 1e-8);

/// ||A^k||_inf^{1/k} for k = 2^squarings; an upper bound on the spectral
/// radius that tightens as k grows.
double spectral_radius_estimate(const Matrix& a, std::size_t squarings = 10);

} // namespace buchi
