#include "buchi/bellman.hpp"

#include "buchi/errors.hpp"
#include "buchi/kernels.hpp"
#include "buchi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace buchi {

namespace {

std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
}

Matrix identity_minus(Matrix a, double scale = 1.0) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = (i == j ? 1.0 : 0.0) - scale * a(i, j);
    return a;
}

std::string describe_bscc(const InducedChain& chain, const BsccPartition& partition) {
    for (std::size_t k = 0; k < partition.bsccs.size(); ++k) {
        if (partition.bscc_accepting[k]) continue;
        std::string out = "{";
        const auto& members = partition.sccs[partition.bsccs[k]];
        for (std::size_t i = 0; i < members.size(); ++i) out += (i ? "," : "") + chain.states[members[i]];
        return out + "}";
    }
    return "{}";
}

} // namespace

SurrogateReward::SurrogateReward(double gamma, double gamma_b) : gamma_(gamma), gamma_b_(gamma_b) {
    if (!(gamma_b > 0.0 && gamma_b < gamma && gamma <= 1.0)) {
        std::ostringstream os;
        os << "discounts must satisfy 0 < gamma_b < gamma <= 1 (gamma = " << gamma << ", gamma_b = " << gamma_b << ")";
        throw InvalidDiscounts(os.str());
    }
}

Vector SurrogateReward::rewards(const std::vector<bool>& accepting) const {
    Vector out(accepting.size());
    for (std::size_t i = 0; i < accepting.size(); ++i) out[i] = reward(accepting[i]);
    return out;
}

Vector SurrogateReward::discounts(const std::vector<bool>& accepting) const {
    Vector out(accepting.size());
    for (std::size_t i = 0; i < accepting.size(); ++i) out[i] = discount(accepting[i]);
    return out;
}

Matrix BellmanSystem::block(Side from, Side to) const {
    const auto range = [&](Side side) {
        std::vector<std::size_t> idx;
        const std::size_t lo = side == Side::accepting ? 0 : m;
        const std::size_t hi = side == Side::accepting ? m : m + n;
        for (std::size_t k = lo; k < hi; ++k) idx.push_back(k);
        return idx;
    };
    const auto rows = range(from);
    const auto cols = range(to);
    return submatrix(p, rows, cols);
}

Vector BellmanSystem::to_original(const Vector& internal) const {
    Vector out(internal.size());
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = internal[k];
    return out;
}

Vector BellmanSystem::to_internal(const Vector& original) const {
    Vector out(original.size());
    for (std::size_t k = 0; k < order.size(); ++k) out[k] = original[order[k]];
    return out;
}

BellmanSystem build_system(const InducedChain& chain, const SurrogateReward& r) {
    BellmanSystem sys;
    sys.gamma = r.gamma();
    sys.gamma_b = r.gamma_b();
    for (std::size_t s = 0; s < chain.size(); ++s)
        if (chain.accepting[s]) sys.order.push_back(s);
    sys.m = sys.order.size();
    for (std::size_t s = 0; s < chain.size(); ++s)
        if (!chain.accepting[s]) sys.order.push_back(s);
    sys.n = chain.size() - sys.m;
    sys.p = submatrix(chain.p, sys.order, sys.order);
    sys.discount.resize(chain.size());
    sys.b.resize(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const bool acc = k < sys.m;
        sys.discount[k] = r.discount(acc);
        sys.b[k] = r.reward(acc);
    }
    return sys;
}

double gershgorin_bound(const BellmanSystem& sys) {
    double best = 0.0;
    for (std::size_t i = 0; i < sys.p.rows(); ++i) {
        double sum = 0.0;
        for (double x : sys.p.row(i)) sum += std::abs(sys.discount[i] * x);
        best = std::max(best, sum);
    }
    return best;
}

std::string_view method_name(SolveMethod m) noexcept {
    switch (m) {
    case SolveMethod::discounted: return "discounted";
    case SolveMethod::accepting: return "accepting";
    case SolveMethod::constrained: return "constrained";
    }
    return "?";
}

double bellman_residual(const InducedChain& chain, const SurrogateReward& r, const Vector& v) {
    const Vector reward = r.rewards(chain.accepting);
    const Vector discount = r.discounts(chain.accepting);
    Vector image(chain.size());
    kernels::bellman_apply(default_backend(), chain.p, discount, reward, v, image);
    double worst = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) worst = std::max(worst, std::abs(v[i] - image[i]));
    return worst;
}

Solution solve_discounted(const BellmanSystem& sys) {
    if (sys.gamma >= 1.0) throw RequiresGammaLessThanOne();
    const std::size_t size = sys.m + sys.n;
    Matrix a(size, size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - sys.discount[i] * sys.p(i, j);
    Vector internal = size == 0 ? Vector{} : solve(std::move(a), sys.b);

    Vector image(size);
    kernels::bellman_apply(default_backend(), sys.p, sys.discount, sys.b, internal, image);
    double residual = 0.0;
    for (std::size_t i = 0; i < size; ++i) residual = std::max(residual, std::abs(internal[i] - image[i]));
    return {sys.to_original(internal), residual, SolveMethod::discounted};
}

AcceptingChain first_return_matrix(const InducedChain& chain) { return first_return_matrix(chain, decompose(chain)); }

AcceptingChain first_return_matrix(const InducedChain& chain, const BsccPartition& partition) {
    if (partition.rejecting_bscc_count() > 0)
        throw RejectingBsccPresent("rejecting BSCC " + describe_bscc(chain, partition) + " present");
    AcceptingChain out;
    for (std::size_t s = 0; s < chain.size(); ++s) (chain.accepting[s] ? out.states : out.non_accepting).push_back(s);
    const auto& b = out.states;
    const auto& nb = out.non_accepting;

    const Matrix p_bb = submatrix(chain.p, b, b);
    const Matrix p_bn = submatrix(chain.p, b, nb);
    const Matrix p_nb = submatrix(chain.p, nb, b);
    const Matrix p_nn = submatrix(chain.p, nb, nb);

    if (nb.empty()) {
        out.p_init = Matrix(0, b.size());
        out.p_b = p_bb;
    } else {
        out.p_init = lu_solve(lu_decompose(identity_minus(p_nn)), p_nb);
        out.p_b = p_bb;
        const Matrix excursion = multiply(p_bn, out.p_init);
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out.p_b(i, j) += excursion(i, j);
    }

    out.mu.assign(b.size(), 0.0);
    if (chain.size() > 0) {
        if (chain.accepting[chain.initial]) {
            out.mu[static_cast<std::size_t>(std::find(b.begin(), b.end(), chain.initial) - b.begin())] = 1.0;
        } else {
            const auto row = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), chain.initial) - nb.begin());
            for (std::size_t j = 0; j < b.size(); ++j) out.mu[j] = out.p_init(row, j);
        }
    }
    return out;
}

Solution solve_accepting(const InducedChain& chain, double gamma_b) {
    return solve_accepting(chain, decompose(chain), gamma_b);
}

Solution solve_accepting(const InducedChain& chain, const BsccPartition& partition, double gamma_b) {
    const SurrogateReward r(1.0, gamma_b);
    const AcceptingChain ac = first_return_matrix(chain, partition);
    const std::size_t m = ac.states.size();

    Vector u_b;
    if (m > 0) {
        Matrix a = identity_minus(ac.p_b, gamma_b);
        u_b = solve(std::move(a), Vector(m, 1.0 - gamma_b));
    }
    Vector u_nb = multiply(ac.p_init, u_b);

    Vector value(chain.size());
    for (std::size_t i = 0; i < m; ++i) value[ac.states[i]] = u_b[i];
    for (std::size_t i = 0; i < ac.non_accepting.size(); ++i) value[ac.non_accepting[i]] = u_nb[i];
    return {value, bellman_residual(chain, r, value), SolveMethod::accepting};
}

ConstrainedSystem build_constrained(const InducedChain& chain, const BsccPartition& partition, double gamma_b) {
    ConstrainedSystem cs;
    cs.gamma_b = gamma_b;
    cs.accepting_transient = partition.states_of(StateClass::accepting_transient);
    cs.rejecting_transient = partition.states_of(StateClass::rejecting_transient);
    cs.pinned_one = concat(partition.states_of(StateClass::accepting_recurrent),
                           partition.states_of(StateClass::rejecting_in_accepting));
    cs.pinned_zero = partition.states_of(StateClass::rejecting_recurrent);

    const auto& bt = cs.accepting_transient;
    const auto& nbt = cs.rejecting_transient;
    cs.p_bt_bt = submatrix(chain.p, bt, bt);
    cs.p_bt_nbt = submatrix(chain.p, bt, nbt);
    cs.p_nbt_bt = submatrix(chain.p, nbt, bt);
    cs.p_nbt_nbt = submatrix(chain.p, nbt, nbt);

    const Vector into_accepting_bt = block_row_sums(chain.p, bt, cs.pinned_one);
    cs.b1.resize(bt.size());
    for (std::size_t i = 0; i < bt.size(); ++i) cs.b1[i] = (1.0 - gamma_b) + gamma_b * into_accepting_bt[i];
    cs.b2 = block_row_sums(chain.p, nbt, cs.pinned_one);
    return cs;
}

Solution solve_constrained(const InducedChain& chain, const BsccPartition& partition, double gamma_b,
                           ConstrainedRoute route) {
    const SurrogateReward r(1.0, gamma_b);
    const ConstrainedSystem cs = build_constrained(chain, partition, gamma_b);
    const std::size_t m1 = cs.accepting_transient.size();
    const std::size_t n1 = cs.rejecting_transient.size();

    Vector u_bt(m1), u_nbt(n1);
    if (route == ConstrainedRoute::joint) {
        const std::size_t size = m1 + n1;
        if (size > 0) {
            Matrix a(size, size);
            Vector rhs(size);
            for (std::size_t i = 0; i < m1; ++i) {
                for (std::size_t j = 0; j < m1; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - gamma_b * cs.p_bt_bt(i, j);
                for (std::size_t j = 0; j < n1; ++j) a(i, m1 + j) = -gamma_b * cs.p_bt_nbt(i, j);
                rhs[i] = cs.b1[i];
            }
            for (std::size_t i = 0; i < n1; ++i) {
                for (std::size_t j = 0; j < m1; ++j) a(m1 + i, j) = -cs.p_nbt_bt(i, j);
                for (std::size_t j = 0; j < n1; ++j) a(m1 + i, m1 + j) = (i == j ? 1.0 : 0.0) - cs.p_nbt_nbt(i, j);
                rhs[m1 + i] = cs.b2[i];
            }
            const Vector u = solve(std::move(a), std::move(rhs));
            std::copy(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m1), u_bt.begin());
            std::copy(u.begin() + static_cast<std::ptrdiff_t>(m1), u.end(), u_nbt.begin());
        }
    } else {
        // (I - P_{nBT->nBT})^{-1} applied to [P_{nBT->BT} | B2].
        Matrix rhs(n1, m1 + 1);
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < m1; ++j) rhs(i, j) = cs.p_nbt_bt(i, j);
            rhs(i, m1) = cs.b2[i];
        }
        Matrix fundamental_rhs = n1 > 0 ? lu_solve(lu_decompose(identity_minus(cs.p_nbt_nbt)), rhs) : rhs;
        if (m1 > 0) {
            // P^{B_T} = P_{BT->BT} + P_{BT->nBT} N P_{nBT->BT}; c = P_{BT->nBT} N B2.
            Matrix reduced = cs.p_bt_bt;
            Vector c(m1, 0.0);
            for (std::size_t i = 0; i < m1; ++i)
                for (std::size_t k = 0; k < n1; ++k) {
                    const double w = cs.p_bt_nbt(i, k);
                    if (w == 0.0) continue;
                    for (std::size_t j = 0; j < m1; ++j) reduced(i, j) += w * fundamental_rhs(k, j);
                    c[i] += w * fundamental_rhs(k, m1);
                }
            Vector rhs_bt(m1);
            for (std::size_t i = 0; i < m1; ++i) rhs_bt[i] = gamma_b * c[i] + cs.b1[i];
            u_bt = solve(identity_minus(std::move(reduced), gamma_b), std::move(rhs_bt));
        }
        for (std::size_t i = 0; i < n1; ++i) {
            double acc = fundamental_rhs(i, m1);
            for (std::size_t j = 0; j < m1; ++j) acc += fundamental_rhs(i, j) * u_bt[j];
            u_nbt[i] = acc;
        }
    }

    Vector value(chain.size(), 0.0);
    for (std::size_t s : cs.pinned_one) value[s] = 1.0;
    for (std::size_t s : cs.pinned_zero) value[s] = 0.0;
    for (std::size_t i = 0; i < m1; ++i) value[cs.accepting_transient[i]] = u_bt[i];
    for (std::size_t i = 0; i < n1; ++i) value[cs.rejecting_transient[i]] = u_nbt[i];
    return {value, bellman_residual(chain, r, value), SolveMethod::constrained};
}

UniquenessCertificate certify(const InducedChain& chain, const BsccPartition& partition, const SurrogateReward& r) {
    UniquenessCertificate cert;
    cert.gamma = r.gamma();
    cert.gamma_b = r.gamma_b();
    cert.rejecting_bscc_count = partition.rejecting_bscc_count();
    const BellmanSystem sys = build_system(chain, r);
    cert.gershgorin = gershgorin_bound(sys);

    if (r.gamma() < 1.0) {
        cert.unique = true;
        cert.unique_under_condition = true;
        cert.null_space_dim = 0;
        cert.value = solve_discounted(sys);
        return cert;
    }

    const std::size_t n = chain.size();
    Matrix operator_matrix(n, n);
    const Vector discount = r.discounts(chain.accepting);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) operator_matrix(i, j) = (i == j ? 1.0 : 0.0) - discount[i] * chain.p(i, j);
    NullSpace ns = null_space(operator_matrix);
    cert.null_space_dim = ns.dim;
    cert.null_basis = std::move(ns.basis);
    cert.unique = ns.dim == 0;
    cert.value = solve_constrained(chain, partition, r.gamma_b());
    cert.condition_applied = true;
    cert.unique_under_condition = true;
    return cert;
}

} // namespace buchi
