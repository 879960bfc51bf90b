#include "morseopt/sos.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

namespace morseopt {

std::vector<Monomial> monomials_up_to_degree(std::size_t nvars, unsigned degree) {
    std::vector<Monomial> out;
    std::vector<std::uint32_t> exps(nvars, 0u);
    for (;;) {
        std::uint64_t total = 0;
        for (auto e : exps) total += e;
        if (total <= degree) out.emplace_back(std::vector<std::uint32_t>(exps));
        // Odometer with per-digit bound `degree`.
        std::size_t pos = 0;
        while (pos < nvars) {
            if (++exps[pos] <= degree) break;
            exps[pos] = 0;
            ++pos;
        }
        if (pos == nvars) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

Monomial monomial_product_key(const Monomial& a, const Monomial& b) { return a * b; }

struct Assembly {
    std::map<Monomial, std::size_t> matched_index;  // monomial -> index in matched
};

void emit_entries(std::vector<SdpEntry>& out, const std::map<std::pair<Eigen::Index, Eigen::Index>, double>& acc) {
    for (const auto& [rc, v] : acc)
        if (v != 0.0) out.push_back({rc.first, rc.second, v});
}

}  // namespace

RelaxationProblem build_grad_relaxation(const Polynomial& f, unsigned order) {
    const std::size_t n = f.nvars();
    const auto deg_opt = f.degree();
    const auto d = static_cast<unsigned>(deg_opt.value_or(0));
    if (2 * order + 1 < d)
        throw std::invalid_argument("relaxation order too small: need 2N >= deg f - 1");

    RelaxationProblem p;
    p.f = f;
    p.grad = gradient(f);
    p.order = order;
    const unsigned phi_degree = 2 * order + 1 - d;  // 2N - d + 1 >= 0 by the guard
    p.sos_basis = monomials_up_to_degree(n, order);
    p.phi_basis = monomials_up_to_degree(n, phi_degree);

    const auto ns = static_cast<Eigen::Index>(p.sos_basis.size());
    p.sdp.block_size = ns;

    // Matched monomials: everything of degree <= 2N, with the most balanced
    // product pair designated to carry the matching equality.
    Assembly asmb;
    {
        std::map<Monomial, std::pair<Eigen::Index, Eigen::Index>> designated;
        for (Eigen::Index i = 0; i < ns; ++i) {
            for (Eigen::Index j = i; j < ns; ++j) {
                const Monomial m = monomial_product_key(p.sos_basis[static_cast<std::size_t>(i)],
                                                        p.sos_basis[static_cast<std::size_t>(j)]);
                auto it = designated.find(m);
                // Prefer the pair whose smaller factor is grevlex-largest;
                // diagonal pairs win automatically.
                if (it == designated.end() ||
                    p.sos_basis[static_cast<std::size_t>(it->second.first)] <
                        p.sos_basis[static_cast<std::size_t>(i)]) {
                    designated[m] = {i, j};
                }
            }
        }
        for (const auto& [m, rc] : designated) {
            asmb.matched_index[m] = p.matched.size();
            p.matched.push_back({m, rc.first, rc.second});
        }
    }

    // Any term of f outside the matchable range makes the identity
    // impossible at this order.
    for (const auto& [mon, coeff] : f.terms()) {
        if (!asmb.matched_index.count(mon)) {
            p.sdp.trivially_infeasible = true;
            p.sdp.infeasibility_note = "term " + mon.to_string() +
                                       " of degree above 2N cannot be matched at order N = " +
                                       std::to_string(order);
        }
    }

    auto designated_of = [&](std::size_t matched_idx) {
        const auto& mm = p.matched[matched_idx];
        const double mult = (mm.row == mm.col) ? 1.0 : 2.0;
        return std::pair<std::pair<Eigen::Index, Eigen::Index>, double>({mm.row, mm.col}, mult);
    };

    // C carries the coefficients of f on the designated slots.
    {
        std::map<std::pair<Eigen::Index, Eigen::Index>, double> acc;
        for (const auto& [mon, coeff] : f.terms()) {
            auto it = asmb.matched_index.find(mon);
            if (it == asmb.matched_index.end()) continue;
            const auto [rc, mult] = designated_of(it->second);
            acc[rc] += to_double(coeff) / mult;
        }
        emit_entries(p.sdp.cost, acc);
    }

    std::vector<double> objective;
    // Variable 0: gamma. It enters the constant-monomial row only.
    {
        VariableInfo v;
        v.role = VariableRole::gamma;
        p.variables.push_back(v);
        objective.push_back(1.0);
        std::map<std::pair<Eigen::Index, Eigen::Index>, double> acc;
        const auto it = asmb.matched_index.find(Monomial(n));
        const auto [rc, mult] = designated_of(it->second);
        acc[rc] += 1.0 / mult;
        p.sdp.constraints.emplace_back();
        emit_entries(p.sdp.constraints.back(), acc);
    }

    // Multiplier coefficients: one variable per (i, phi monomial), skipping
    // identically zero partials.
    if (!p.plain_sos) {
        for (std::size_t i = 0; i < n; ++i) {
            if (p.grad[i].is_zero()) continue;
            for (const auto& mphi : p.phi_basis) {
                VariableInfo v;
                v.role = VariableRole::multiplier_coeff;
                v.phi_index = i;
                v.monomial = mphi;
                std::map<std::pair<Eigen::Index, Eigen::Index>, double> acc;
                for (const auto& [mon, coeff] : p.grad[i].terms()) {
                    const Monomial m = mphi * mon;
                    auto it = asmb.matched_index.find(m);
                    if (it == asmb.matched_index.end())
                        throw InternalConsistencyError("multiplier product escaped the matched range");
                    const auto [rc, mult] = designated_of(it->second);
                    acc[rc] += to_double(coeff) / mult;
                }
                p.sdp.constraints.emplace_back();
                emit_entries(p.sdp.constraints.back(), acc);
                if (p.sdp.constraints.back().empty()) {
                    // All products cancelled; drop the useless variable.
                    p.sdp.constraints.pop_back();
                    continue;
                }
                p.variables.push_back(v);
                objective.push_back(0.0);
            }
        }
    }

    // Free Gram entries: every non-designated product pair.
    for (Eigen::Index i = 0; i < ns; ++i) {
        for (Eigen::Index j = i; j < ns; ++j) {
            const Monomial m = monomial_product_key(p.sos_basis[static_cast<std::size_t>(i)],
                                                    p.sos_basis[static_cast<std::size_t>(j)]);
            const std::size_t mi = asmb.matched_index.at(m);
            if (p.matched[mi].row == i && p.matched[mi].col == j) continue;  // designated
            VariableInfo v;
            v.role = VariableRole::gram_entry;
            v.gram_row = i;
            v.gram_col = j;
            p.variables.push_back(v);
            objective.push_back(0.0);

            std::map<std::pair<Eigen::Index, Eigen::Index>, double> acc;
            acc[{i, j}] += -1.0;
            const auto [rc, mult] = designated_of(mi);
            const double pair_mult = (i == j) ? 1.0 : 2.0;
            acc[rc] += pair_mult / mult;
            p.sdp.constraints.emplace_back();
            emit_entries(p.sdp.constraints.back(), acc);
        }
    }

    p.sdp.objective = Eigen::Map<Eigen::VectorXd>(objective.data(), static_cast<Eigen::Index>(objective.size()));
    return p;
}

RelaxationProblem build_plain_sos(const Polynomial& f) {
    const auto d = static_cast<unsigned>(f.degree().value_or(0));
    const unsigned order = (d + 1) / 2;

    // Keep only gamma and the Gram entries: build at f's order with the
    // multipliers suppressed by handing in a zero gradient.
    RelaxationProblem p = build_grad_relaxation(Polynomial::zero(f.nvars()), order);
    p.plain_sos = true;
    p.f = f;
    p.grad = gradient(f);
    p.phi_basis.clear();

    // Re-derive the cost from the real f.
    p.sdp.cost.clear();
    std::map<Monomial, std::size_t> matched_index;
    for (std::size_t k = 0; k < p.matched.size(); ++k) matched_index[p.matched[k].monomial] = k;
    std::map<std::pair<Eigen::Index, Eigen::Index>, double> acc;
    for (const auto& [mon, coeff] : f.terms()) {
        auto it = matched_index.find(mon);
        if (it == matched_index.end()) {
            p.sdp.trivially_infeasible = true;
            p.sdp.infeasibility_note = "term " + mon.to_string() + " cannot be matched";
            continue;
        }
        const auto& mm = p.matched[it->second];
        const double mult = (mm.row == mm.col) ? 1.0 : 2.0;
        acc[{mm.row, mm.col}] += to_double(coeff) / mult;
    }
    emit_entries(p.sdp.cost, acc);

    if (d % 2 == 1) {
        p.sdp.trivially_infeasible = true;
        p.sdp.infeasibility_note = "odd total degree; no sum of squares can match it";
    }
    return p;
}

std::vector<Polynomial> extract_sos(const Eigen::MatrixXd& gram,
                                    const std::vector<Monomial>& basis, std::size_t nvars,
                                    double tol) {
    if (gram.rows() != gram.cols() ||
        static_cast<std::size_t>(gram.rows()) != basis.size())
        throw DimensionMismatchError("Gram matrix does not match the monomial basis");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()));
    if (es.info() != Eigen::Success) throw SolverError("Gram eigendecomposition failed");

    std::vector<Polynomial> squares;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam < -tol)
            throw SolverError("Gram matrix has eigenvalue " + std::to_string(lam) +
                              " below the PSD tolerance");
        if (lam <= tol) continue;
        const double w = std::sqrt(lam);
        Polynomial sq(nvars);
        for (Eigen::Index r = 0; r < gram.rows(); ++r) {
            const double coef = w * es.eigenvectors()(r, k);
            if (coef != 0.0)
                sq.add_term(basis[static_cast<std::size_t>(r)], rational_from_double_exact(coef));
        }
        if (!sq.is_zero()) squares.push_back(std::move(sq));
    }
    return squares;
}

Polynomial verify_identity(const Polynomial& f, const Rational& gamma,
                           const std::vector<Polynomial>& multipliers,
                           const std::vector<Polynomial>& squares) {
    const std::size_t n = f.nvars();
    Polynomial residual = f - Polynomial::constant(n, gamma);
    const std::vector<Polynomial> grad = gradient(f);
    if (!multipliers.empty() && multipliers.size() != n)
        throw DimensionMismatchError("expected one multiplier per variable");
    for (std::size_t i = 0; i < multipliers.size(); ++i)
        residual = residual - multipliers[i] * grad[i];
    for (const auto& s : squares) residual = residual - s * s;
    return residual;
}

namespace {

Polynomial rationalize_poly(const Polynomial& p, unsigned long max_den) {
    Polynomial out(p.nvars());
    for (const auto& [mon, coeff] : p.terms()) {
        const Rational r = rationalize(to_double(coeff), max_den);
        if (sgn(r) != 0) out.add_term(mon, r);
    }
    return out;
}

double identity_residual_double(const Polynomial& f, double gamma,
                                const std::vector<Polynomial>& grad,
                                const std::vector<std::map<Monomial, double>>& phis,
                                const std::vector<std::map<Monomial, double>>& squares) {
    std::map<Monomial, double> acc;
    for (const auto& [mon, c] : f.terms()) acc[mon] += to_double(c);
    acc[Monomial(f.nvars())] -= gamma;
    for (std::size_t i = 0; i < phis.size(); ++i) {
        for (const auto& [mp, cp] : phis[i])
            for (const auto& [mg, cg] : grad[i].terms()) acc[mp * mg] -= cp * to_double(cg);
    }
    for (const auto& sq : squares) {
        for (const auto& [ma, ca] : sq)
            for (const auto& [mb, cb] : sq) acc[ma * mb] -= ca * cb;
    }
    double worst = 0.0;
    for (const auto& [mon, v] : acc) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace

RelaxationResult solve_relaxation(const RelaxationProblem& p, const RelaxationParams& params) {
    RelaxationResult res;
    res.order = p.order;

    const SdpSolution sol = solve_sdp(p.sdp, params.sdp);
    res.status = sol.status;
    res.iterations = sol.iterations;
    res.sdp_gap = sol.gap;
    if (sol.status != SdpStatus::optimal) {
        res.note = p.sdp.trivially_infeasible ? p.sdp.infeasibility_note : "";
        return res;
    }

    res.gamma = sol.y(0);
    res.gram = sol.slack;

    // Pull the multipliers back through the variable-role metadata.
    std::vector<std::map<Monomial, double>> phi_float(p.f.nvars());
    for (std::size_t k = 0; k < p.variables.size(); ++k) {
        const auto& v = p.variables[k];
        if (v.role == VariableRole::multiplier_coeff)
            phi_float[v.phi_index][v.monomial] = sol.y(static_cast<Eigen::Index>(k));
    }

    // The slack recomputed from y carries the solver's feasibility error;
    // project mildly negative eigenvalues away, then extract at the fine
    // truncation tolerance so no real square mass is lost.
    const double neg_tol =
        std::max(params.extract_tol, 10.0 * params.sdp.feasibility_tol * (1.0 + res.gram.norm()));
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (res.gram + res.gram.transpose()));
        if (es.eigenvalues()(0) < -neg_tol) {
            res.status = SdpStatus::numerical_failure;
            res.note = "slack matrix is not positive semidefinite within tolerance";
            return res;
        }
        const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
        res.gram = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
    }
    const std::vector<Polynomial> squares_exact =
        extract_sos(res.gram, p.sos_basis, p.f.nvars(), params.extract_tol);

    std::vector<std::map<Monomial, double>> squares_float;
    for (const auto& sq : squares_exact) {
        std::map<Monomial, double> fm;
        for (const auto& [mon, c] : sq.terms()) fm[mon] = to_double(c);
        squares_float.push_back(std::move(fm));
    }
    res.identity_residual_float =
        identity_residual_double(p.f, res.gamma, p.grad, phi_float, squares_float);

    // Rationalized certificate: continued-fraction rounding of gamma, the
    // multipliers and the squares, then one exact residual computation. If
    // the exact residual misses the tolerance at the requested denominator
    // cap, the cap escalates; the final fallback converts every double
    // losslessly, whose exact residual matches the float one.
    for (unsigned long cap : {params.rationalize_max_den, 1000ul * params.rationalize_max_den,
                              1000000ul * params.rationalize_max_den, 0ul}) {
        const bool dyadic = cap == 0;
        auto round_value = [&](double v) {
            return dyadic ? rational_from_double_exact(v) : rationalize(v, cap);
        };
        const Rational gamma_r = round_value(res.gamma);
        std::vector<Polynomial> phis_r;
        for (std::size_t i = 0; i < p.f.nvars(); ++i) {
            Polynomial phi(p.f.nvars());
            for (const auto& [mon, c] : phi_float[i]) {
                const Rational r = round_value(c);
                if (sgn(r) != 0) phi.add_term(mon, r);
            }
            phis_r.push_back(std::move(phi));
        }
        std::vector<Polynomial> squares_r;
        squares_r.reserve(squares_exact.size());
        for (const auto& sq : squares_exact)
            squares_r.push_back(dyadic ? sq : rationalize_poly(sq, cap));

        const Polynomial residual = verify_identity(p.f, gamma_r, phis_r, squares_r);
        res.identity_residual = residual.max_abs_coefficient();
        res.multipliers = std::move(phis_r);
        res.sos_squares = std::move(squares_r);
        res.rationalize_den_used = cap;
        if (res.identity_residual <= params.certificate_tol) break;
    }

    if (res.identity_residual > params.certificate_tol &&
        res.identity_residual_float > params.certificate_tol) {
        res.status = SdpStatus::numerical_failure;
        res.note = "certificate residual exceeds the verification tolerance";
    }
    return res;
}

unsigned default_sweep_min(const Polynomial& f) {
    const auto d = static_cast<unsigned>(f.degree().value_or(0));
    return std::max(1u, (d + 1) / 2);
}

ConvergenceTrace run_convergence_sweep(const Polynomial& f, unsigned n_min, unsigned n_max,
                                       const RelaxationParams& params,
                                       const std::vector<CriticalPoint>* points) {
    if (n_max < n_min) throw std::invalid_argument("empty sweep range");
    ConvergenceTrace trace;

    for (unsigned N = n_min; N <= n_max; ++N) {
        try {
            const RelaxationProblem prob = build_grad_relaxation(f, N);
            trace.results.push_back(solve_relaxation(prob, params));
        } catch (const std::exception& e) {
            RelaxationResult bad;
            bad.order = N;
            bad.status = SdpStatus::numerical_failure;
            bad.note = e.what();
            trace.results.push_back(std::move(bad));
        }
    }

    const double slack = 10.0 * params.sdp.gap_tol;
    const RelaxationResult* prev = nullptr;
    for (const auto& r : trace.results) {
        if (r.status != SdpStatus::optimal) continue;
        if (prev && r.gamma < prev->gamma - slack) trace.monotone = false;
        prev = &r;
    }
    // Stabilized when the last two solved orders agree.
    prev = nullptr;
    for (const auto& r : trace.results) {
        if (r.status != SdpStatus::optimal) continue;
        if (prev) trace.stabilized = std::abs(r.gamma - prev->gamma) <= params.stab_tol;
        prev = &r;
    }
    if (!prev) trace.stabilized = false;

    // Cross-check against the minimal real critical value, when available.
    try {
        std::vector<CriticalPoint> local;
        if (points == nullptr) {
            local = solve_variety(f, params.variety, MonomialOrder::grevlex(), params.limits);
            points = &local;
        }
        trace.candidate_inf = candidate_infimum(f, *points, params.variety);
        if (!trace.candidate_inf) {
            trace.caveat = "no real critical point; the stabilized bound has no attainment witness";
        } else if (prev) {
            trace.matches_candidate = std::abs(prev->gamma - *trace.candidate_inf) <= 1e-4;
            trace.caveat = trace.matches_candidate
                               ? "stabilized bound equals the minimal real critical value; it equals "
                                 "the infimum only if the infimum is attained"
                               : "stabilized bound differs from the minimal real critical value";
        }
    } catch (const std::exception& e) {
        trace.caveat = std::string("no critical-value cross-check: ") + e.what();
    }
    return trace;
}

}  // namespace morseopt
