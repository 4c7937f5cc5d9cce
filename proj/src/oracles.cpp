#include "buchi/oracles.hpp"

#include "buchi/errors.hpp"
#include "buchi/kernels.hpp"
#include "buchi/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace buchi {

namespace {

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }
};

} // namespace

Vector finite_horizon_returns(const InducedChain& chain, const SurrogateReward& r, std::size_t k) {
    const Vector reward = r.rewards(chain.accepting);
    const Vector discount = r.discounts(chain.accepting);
    Vector e = reward;
    Vector next(chain.size());
    for (std::size_t step = 0; step < k; ++step) {
        kernels::bellman_apply(Backend::serial, chain.p, discount, reward, e, next);
        e.swap(next);
    }
    return e;
}

double finite_horizon_return(const InducedChain& chain, const SurrogateReward& r, std::size_t s, std::size_t k) {
    return finite_horizon_returns(chain, r, k).at(s);
}

EstimatorMode EstimatorMode::parse(std::string_view text) {
    if (text == "bscc-aware") return {};
    if (text.starts_with("cap:")) {
        const auto digits = text.substr(4);
        std::size_t k = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty())
            return {Kind::cap, k};
    }
    throw InputError("unknown estimator mode '" + std::string(text) + "' (expected bscc-aware or cap:<K>)");
}

std::string EstimatorMode::str() const {
    return kind == Kind::bscc_aware ? "bscc-aware" : "cap:" + std::to_string(horizon);
}

ReturnEstimate mc_return(const InducedChain& chain, const BsccPartition& partition, const SurrogateReward& r,
                         std::size_t s, std::size_t samples, std::uint64_t seed, EstimatorMode mode, Backend backend) {
    if (samples == 0) throw InputError("samples must be at least 1");
    if (s >= chain.size()) throw InputError("state index out of range");
    if (mode.kind == EstimatorMode::Kind::bscc_aware && r.gamma() != 1.0) throw ModeRequiresGammaOne();

    const ChainSampler sampler(chain);
    const Vector reward = r.rewards(chain.accepting);
    const Vector discount = r.discounts(chain.accepting);
    const auto bscc_value = [&](std::size_t state) {
        return partition.bscc_accepting[partition.bscc_of[state]] ? 1.0 : 0.0;
    };
    std::vector<bool> dead(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) dead[i] = partition.in_bscc(i) && bscc_value(i) == 0.0;

    const auto one_sample = [&](std::size_t i) {
        CounterRng rng(seed, i);
        std::size_t x = s;
        double d = 1.0;
        double g = 0.0;
        if (mode.kind == EstimatorMode::Kind::bscc_aware) {
            while (!partition.in_bscc(x)) {
                g += d * reward[x];
                d *= discount[x];
                x = sampler.next(x, rng.uniform());
            }
            return g + d * bscc_value(x);
        }
        for (std::size_t t = 0;; ++t) {
            if (dead[x]) break;
            g += d * reward[x];
            if (t == mode.horizon) break;
            d *= discount[x];
            x = sampler.next(x, rng.uniform());
        }
        return g;
    };

    const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
    std::vector<Moments> partial(blocks);
    kernels::for_each_block(backend, blocks, [&](std::size_t b) {
        const std::size_t lo = b * kSampleBlock;
        const std::size_t hi = std::min(samples, lo + kSampleBlock);
        Moments m;
        for (std::size_t i = lo; i < hi; ++i) m.add(one_sample(i));
        partial[b] = m;
    });
    Moments total;
    for (const auto& m : partial) total.merge(m);

    ReturnEstimate est;
    est.mean = total.mean;
    est.samples = samples;
    est.seed = seed;
    est.mode = mode;
    est.std_error = samples > 1 ? std::sqrt(total.m2 / (total.n - 1.0)) / std::sqrt(total.n) : 0.0;
    return est;
}

Trajectory sample_trajectory(const InducedChain& chain, const BsccPartition& partition, std::size_t s,
                             std::uint64_t seed, std::uint64_t stream, std::size_t max_steps) {
    const ChainSampler sampler(chain);
    CounterRng rng(seed, stream);
    Trajectory t;
    t.states.push_back(s);
    for (std::size_t step = 0;; ++step) {
        if (partition.in_bscc(s)) {
            t.end = Trajectory::End::entered_bscc;
            t.bscc = partition.bscc_of[s];
            return t;
        }
        if (step == max_steps) return t;
        s = sampler.next(s, rng.uniform());
        t.states.push_back(s);
    }
}

Vector reachability_probability(const InducedChain& chain, const BsccPartition& partition) {
    Vector x(chain.size(), 0.0);
    std::vector<std::size_t> transient, accepting;
    for (std::size_t s = 0; s < chain.size(); ++s) {
        if (!partition.in_bscc(s))
            transient.push_back(s);
        else if (partition.bscc_accepting[partition.bscc_of[s]]) {
            accepting.push_back(s);
            x[s] = 1.0;
        }
    }
    if (transient.empty()) return x;
    Matrix a = submatrix(chain.p, transient, transient);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = (i == j ? 1.0 : 0.0) - a(i, j);
    const Vector y = solve(std::move(a), block_row_sums(chain.p, transient, accepting));
    for (std::size_t i = 0; i < transient.size(); ++i) x[transient[i]] = y[i];
    return x;
}

NullSpace null_space(const Matrix& m, double rel_tol) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    Matrix a = m;
    const double threshold = rel_tol * m.norm_inf();
    std::vector<std::size_t> col_order(cols);
    for (std::size_t j = 0; j < cols; ++j) col_order[j] = j;

    // Reduce to [I R; 0 0] in permuted columns.
    std::size_t rank = 0;
    while (rank < std::min(rows, cols)) {
        std::size_t pr = rank, pc = rank;
        double best = -1.0;
        for (std::size_t i = rank; i < rows; ++i)
            for (std::size_t j = rank; j < cols; ++j) {
                const double v = std::abs(a(i, col_order[j]));
                if (v > best) {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        if (best <= threshold) break;
        if (pr != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(pr, j), a(rank, j));
        std::swap(col_order[pc], col_order[rank]);
        const std::size_t c = col_order[rank];
        const double pivot = a(rank, c);
        for (std::size_t j = 0; j < cols; ++j) a(rank, j) /= pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank) continue;
            const double f = a(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(rank, j);
        }
        ++rank;
    }

    NullSpace out;
    out.dim = cols - rank;
    for (std::size_t f = rank; f < cols; ++f) {
        Vector v(cols, 0.0);
        v[col_order[f]] = 1.0;
        for (std::size_t i = 0; i < rank; ++i) v[col_order[i]] = -a(i, col_order[f]);
        std::size_t big = 0;
        for (std::size_t j = 1; j < cols; ++j)
            if (std::abs(v[j]) > std::abs(v[big])) big = j;
        const double scale = v[big];
        for (double& x : v) x /= scale;
        for (double& x : v)
            if (x == 0.0) x = 0.0; // drop negative zeros
        out.basis.push_back(std::move(v));
    }
    std::sort(out.basis.begin(), out.basis.end(), [](const Vector& x, const Vector& y) {
        const auto first = [](const Vector& v) {
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0.0) return i;
            return v.size();
        };
        return first(x) < first(y);
    });
    return out;
}

double spectral_radius_estimate(const Matrix& a, std::size_t squarings) {
    if (a.rows() == 0) return 0.0;
    Matrix power = a;
    double log_scale = 0.0; // A^k = exp(log_scale) * power
    double k = 1.0;
    for (std::size_t i = 0; i < squarings; ++i) {
        const double norm = power.norm_inf();
        if (norm == 0.0) return 0.0;
        for (std::size_t r = 0; r < power.rows(); ++r)
            for (double& x : power.row(r)) x /= norm;
        log_scale += std::log(norm);
        power = multiply(power, power);
        log_scale *= 2.0;
        k *= 2.0;
    }
    const double norm = power.norm_inf();
    if (norm == 0.0) return 0.0;
    return std::exp((log_scale + std::log(norm)) / k);
}

} // namespace buchi
