#include "morseopt/sdp.hpp"

#include <cmath>
#include <sstream>
#include <limits>

#include "morseopt/dense.hpp"

namespace morseopt {

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal: return "optimal";
        case SdpStatus::infeasible: return "infeasible";
        case SdpStatus::unbounded: return "unbounded";
        case SdpStatus::max_iter: return "max_iter";
        case SdpStatus::numerical_failure: return "numerical_failure";
    }
    return "?";
}

namespace {

Eigen::MatrixXd densify(const std::vector<SdpEntry>& entries, Eigen::Index p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (const auto& e : entries) {
        m(e.row, e.col) = e.value;
        m(e.col, e.row) = e.value;
    }
    return m;
}

double sparse_dot(const std::vector<SdpEntry>& entries, const Eigen::MatrixXd& x) {
    // <A, X> with A given by its upper triangle; off-diagonal entries count twice.
    double s = 0.0;
    for (const auto& e : entries)
        s += (e.row == e.col ? 1.0 : 2.0) * e.value * x(e.row, e.col);
    return s;
}

void add_scaled(Eigen::MatrixXd& acc, const std::vector<SdpEntry>& entries, double w) {
    for (const auto& e : entries) {
        acc(e.row, e.col) += w * e.value;
        if (e.row != e.col) acc(e.col, e.row) += w * e.value;
    }
}

// t_i a_{ij} t_j^T summed over the sparse entries: T A T for symmetric A.
Eigen::MatrixXd congruence(const Eigen::MatrixXd& t, const std::vector<SdpEntry>& entries) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(t.rows(), t.cols());
    for (const auto& e : entries) {
        out += e.value * (t.col(e.row) * t.col(e.col).transpose());
        if (e.row != e.col) out += e.value * (t.col(e.col) * t.col(e.row).transpose());
    }
    return out;
}

struct Scaling {
    Eigen::MatrixXd r;        // Z = R D R^T, R^T S R = D
    Eigen::MatrixXd r_inv;    // R^{-1}
    Eigen::MatrixXd t;        // R R^T, maps S to Z by congruence
    Eigen::VectorXd lambda;   // diagonal of D, ascending
};

bool compute_scaling(const Eigen::MatrixXd& z, const Eigen::MatrixXd& s, Scaling& w) {
    using dense::jacobi_eigen;
    using dense::symmetric_power;
    const auto ez = jacobi_eigen(z);
    if (ez.values(0) <= 0.0) return false;
    const Eigen::MatrixXd z_half = symmetric_power(ez, 0.5);
    const Eigen::MatrixXd z_half_inv = symmetric_power(ez, -0.5);

    const Eigen::MatrixXd y = z_half * s * z_half;
    const auto ey = jacobi_eigen(0.5 * (y + y.transpose()));
    if (ey.values(0) <= 0.0) return false;

    const Eigen::Index p = z.rows();
    Eigen::VectorXd theta_quarter(p), theta_quarter_inv(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double q = std::pow(ey.values(i), 0.25);
        theta_quarter(i) = q;
        theta_quarter_inv(i) = 1.0 / q;
    }
    w.r = z_half * ey.vectors * theta_quarter_inv.asDiagonal();
    w.r_inv = theta_quarter.asDiagonal() * ey.vectors.transpose() * z_half_inv;
    w.t = w.r * w.r.transpose();
    w.lambda = ey.values.cwiseSqrt();
    return true;
}

// Largest alpha in (0, cap] with D + alpha * G >= 0, where G lives in the
// scaled space and D = diag(lambda).
double psd_step_length(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& g, double cap) {
    Eigen::VectorXd inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = inv_sqrt.asDiagonal() * g * inv_sqrt.asDiagonal();
    const double lo = dense::min_eigenvalue(0.5 * (scaled + scaled.transpose()));
    if (lo >= 0.0) return cap;
    return std::min(cap, 1.0 / (-lo));
}

}  // namespace

Eigen::MatrixXd SdpProblem::constraint_matrix(std::size_t k) const {
    return densify(constraints.at(k), block_size);
}

Eigen::MatrixXd SdpProblem::cost_matrix() const { return densify(cost, block_size); }

double min_eigenvalue(const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols() || !dense::is_symmetric(s, 1e-9))
        throw std::invalid_argument("min_eigenvalue requires a symmetric matrix");
    return dense::min_eigenvalue(0.5 * (s + s.transpose()));
}

namespace {

// Rescales the data so every constraint matrix and the cost have unit
// Frobenius norm; y and the objective are mapped back afterwards.
struct ScaledProblem {
    SdpProblem prob;
    Eigen::VectorXd var_scale;  // y_original = c_scale * y_scaled / var_scale
    double c_scale = 1.0;
};

ScaledProblem rescale(const SdpProblem& in) {
    ScaledProblem out;
    out.prob = in;
    const auto m = static_cast<Eigen::Index>(in.num_vars());
    out.var_scale = Eigen::VectorXd::Ones(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        double norm2 = 0.0;
        for (const auto& e : in.constraints[static_cast<std::size_t>(k)])
            norm2 += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
        const double s = std::sqrt(norm2);
        if (s > 0.0) {
            out.var_scale(k) = s;
            for (auto& e : out.prob.constraints[static_cast<std::size_t>(k)]) e.value /= s;
        }
    }
    double cnorm2 = 0.0;
    for (const auto& e : in.cost) cnorm2 += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    out.c_scale = std::max(std::sqrt(cnorm2), 1.0);
    for (auto& e : out.prob.cost) e.value /= out.c_scale;
    // Objective scaling keeps the argmax unchanged.
    for (Eigen::Index k = 0; k < m; ++k) out.prob.objective(k) = in.objective(k) / out.var_scale(k);
    return out;
}

}  // namespace

static SdpSolution solve_sdp_scaled(const SdpProblem& prob, const SdpParams& params);

SdpSolution solve_sdp(const SdpProblem& prob, const SdpParams& params) {
    const Eigen::Index p = prob.block_size;
    const auto m = static_cast<Eigen::Index>(prob.num_vars());
    if (p <= 0) throw std::invalid_argument("solve_sdp: empty PSD block");
    if (m <= 0) throw std::invalid_argument("solve_sdp: at least one variable required");
    if (static_cast<Eigen::Index>(prob.constraints.size()) != m)
        throw DimensionMismatchError("objective and constraint counts differ");
    for (const auto& a : prob.constraints)
        for (const auto& e : a)
            if (e.row > e.col || e.col >= p)
                throw DimensionMismatchError("constraint entry outside the upper triangle");
    for (const auto& e : prob.cost)
        if (e.row > e.col || e.col >= p)
            throw DimensionMismatchError("cost entry outside the upper triangle");

    if (prob.trivially_infeasible) {
        SdpSolution sol;
        sol.y = Eigen::VectorXd::Zero(m);
        sol.status = SdpStatus::infeasible;
        sol.slack = prob.cost_matrix();
        return sol;
    }

    const ScaledProblem scaled = rescale(prob);
    SdpSolution sol = solve_sdp_scaled(scaled.prob, params);
    sol.y = scaled.c_scale * sol.y.cwiseQuotient(scaled.var_scale);
    sol.slack = prob.cost_matrix();
    for (Eigen::Index k = 0; k < m; ++k)
        add_scaled(sol.slack, prob.constraints[static_cast<std::size_t>(k)], -sol.y(k));
    sol.objective = prob.objective.dot(sol.y);
    return sol;
}

static SdpSolution solve_sdp_scaled(const SdpProblem& prob, const SdpParams& params) {
    const Eigen::Index p = prob.block_size;
    const auto m = static_cast<Eigen::Index>(prob.num_vars());

    SdpSolution sol;
    sol.y = Eigen::VectorXd::Zero(m);

    const Eigen::MatrixXd c_mat = prob.cost_matrix();
    const Eigen::VectorXd& b = prob.objective;
    const double c_norm = 1.0 + c_mat.norm();
    const double b_norm = 1.0 + b.norm();

    // HSD iterates.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(p, p);
    double tau = 1.0, kappa = 1.0;

    const double nu = static_cast<double>(p) + 1.0;
    int stalls = 0;

    auto apply_a = [&](const Eigen::VectorXd& v) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
        for (Eigen::Index k = 0; k < m; ++k)
            add_scaled(acc, prob.constraints[static_cast<std::size_t>(k)], v(k));
        return acc;
    };
    auto apply_a_adj = [&](const Eigen::MatrixXd& x) {
        Eigen::VectorXd v(m);
        for (Eigen::Index k = 0; k < m; ++k)
            v(k) = sparse_dot(prob.constraints[static_cast<std::size_t>(k)], x);
        return v;
    };

    // Best iterate snapshot, reported when the solve degrades.
    Eigen::VectorXd best_y = y;
    double best_tau = tau, best_err = std::numeric_limits<double>::infinity(), best_gap = 1.0;

    auto finish = [&](SdpStatus status, int iters, double gap) {
        sol.status = status;
        sol.iterations = iters;
        sol.gap = gap;
        if (status == SdpStatus::optimal) {
            sol.y = y / tau;
        } else if (status == SdpStatus::infeasible || status == SdpStatus::unbounded) {
            sol.y.setZero();
        } else {
            sol.y = best_tau > 0.0 ? Eigen::VectorXd(best_y / best_tau) : Eigen::VectorXd::Zero(m);
            sol.gap = best_gap;
        }
        return sol;
    };

    for (int iter = 0; iter < params.max_iter; ++iter) {
        const Eigen::MatrixXd r_d = apply_a(y) + s - c_mat * tau;
        const Eigen::VectorXd r_p = apply_a_adj(z) - b * tau;
        const double r_g = b.dot(y) - (c_mat.cwiseProduct(z)).sum() - kappa;
        const double zs = (z.cwiseProduct(s)).sum();
        const double mu = (zs + tau * kappa) / nu;

        const double pobj = (c_mat.cwiseProduct(z)).sum() / tau;
        const double dobj = b.dot(y) / tau;
        const double gap_rel = std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
        const double compl_rel = zs / (tau * tau) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
        const double feas_d = r_d.norm() / (tau * c_norm);
        const double feas_p = r_p.norm() / (tau * b_norm);

        const double err = std::max({gap_rel, compl_rel, feas_d, feas_p});
        if (err < best_err) {
            best_err = err;
            best_y = y;
            best_tau = tau;
            best_gap = gap_rel;
        }

        if (std::max(gap_rel, compl_rel) <= params.gap_tol && feas_d <= params.feasibility_tol &&
            feas_p <= params.feasibility_tol)
            return finish(SdpStatus::optimal, iter, gap_rel);

        // Ray detection via the tau/kappa ratio of the embedding, accepted
        // only when the matching certificate checks out.
        if (kappa / tau >= 1e8) {
            const double unb_value = b.dot(y);
            const double inf_value = -(c_mat.cwiseProduct(z)).sum();
            const bool inf_ok = inf_value > 0.0 && apply_a_adj(z).norm() <= 1e-6 * inf_value;
            const bool unb_ok = unb_value > 0.0 && (apply_a(y) + s).norm() <= 1e-6 * unb_value;
            if (inf_ok && (!unb_ok || inf_value >= unb_value))
                return finish(SdpStatus::infeasible, iter, gap_rel);
            if (unb_ok) return finish(SdpStatus::unbounded, iter, gap_rel);
            if (tau < 1e-14) return finish(SdpStatus::numerical_failure, iter, gap_rel);
        }

        Scaling w;
        if (!compute_scaling(z, s, w)) return finish(SdpStatus::numerical_failure, iter, gap_rel);

        // Normal matrix M_kl = <A_k, T A_l T> and related projections.
        std::vector<Eigen::MatrixXd> tat(static_cast<std::size_t>(m));
        for (Eigen::Index k = 0; k < m; ++k)
            tat[static_cast<std::size_t>(k)] = congruence(w.t, prob.constraints[static_cast<std::size_t>(k)]);
        Eigen::MatrixXd normal(m, m);
        for (Eigen::Index k = 0; k < m; ++k)
            for (Eigen::Index l = 0; l < m; ++l)
                normal(k, l) = sparse_dot(prob.constraints[static_cast<std::size_t>(k)],
                                          tat[static_cast<std::size_t>(l)]);
        normal = 0.5 * (normal + normal.transpose());

        Eigen::MatrixXd chol;
        if (!dense::cholesky(normal, chol)) {
            // Mild ridge before giving up; the Gram matrix can go singular
            // near the boundary.
            const double ridge = 1e-12 * (1.0 + normal.trace() / static_cast<double>(m));
            if (!dense::cholesky(normal + ridge * Eigen::MatrixXd::Identity(m, m), chol))
                return finish(SdpStatus::numerical_failure, iter, gap_rel);
        }

        const Eigen::MatrixXd tct = w.t * c_mat * w.t;
        const Eigen::VectorXd g = apply_a_adj(tct);
        const double c_t = (c_mat.cwiseProduct(tct)).sum();
        const Eigen::VectorXd m_inv_gb = dense::cholesky_solve(chol, g + b);

        // Solves the two-block system for a given set of targets.
        struct Direction {
            Eigen::VectorXd dy;
            Eigen::MatrixXd ds, dz;
            double dtau = 0.0, dkappa = 0.0;
            Eigen::MatrixXd ds_scaled, dz_scaled;
        };
        auto solve_direction = [&](const Eigen::MatrixXd& rd_t, const Eigen::VectorXd& rp_t,
                                   double rg_t, const Eigen::MatrixXd& e_scaled, double dtau_rhs) {
            Direction d;
            const Eigen::MatrixXd re_rt = w.r * e_scaled * w.r.transpose();
            const Eigen::MatrixXd t_rdt_t = w.t * rd_t * w.t;
            const Eigen::VectorXd u1 = rp_t - apply_a_adj(re_rt) + apply_a_adj(t_rdt_t);
            const double u2 = rg_t + (c_mat.cwiseProduct(re_rt)).sum() -
                              (c_mat.cwiseProduct(t_rdt_t)).sum() + dtau_rhs / tau;
            const Eigen::VectorXd v1 = dense::cholesky_solve(chol, u1);
            const double denom = (b - g).dot(m_inv_gb) + c_t + kappa / tau;
            d.dtau = (u2 - (b - g).dot(v1)) / denom;
            d.dy = v1 + d.dtau * m_inv_gb;
            d.ds = rd_t - apply_a(d.dy) + c_mat * d.dtau;
            d.dz = re_rt - w.t * d.ds * w.t;
            d.dkappa = (dtau_rhs - kappa * d.dtau) / tau;
            d.ds_scaled = w.r.transpose() * d.ds * w.r;
            d.dz_scaled = w.r_inv * d.dz * w.r_inv.transpose();
            return d;
        };

        auto step_length = [&](const Direction& d) {
            double a = 1.0;
            a = psd_step_length(w.lambda, d.ds_scaled, a);
            a = psd_step_length(w.lambda, d.dz_scaled, a);
            if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
            if (d.dkappa < 0.0) a = std::min(a, -kappa / d.dkappa);
            return a;
        };

        // Predictor.
        const Eigen::MatrixXd d_mat_aff = -Eigen::MatrixXd(w.lambda.asDiagonal());
        Direction aff = solve_direction(-r_d, -r_p, -r_g, d_mat_aff, -tau * kappa);
        const double alpha_aff = step_length(aff);

        // Centering parameter from the predictor outcome.
        const Eigen::MatrixXd d_lam = Eigen::MatrixXd(w.lambda.asDiagonal());
        const Eigen::MatrixXd z_aff = d_lam + alpha_aff * aff.dz_scaled;
        const Eigen::MatrixXd s_aff = d_lam + alpha_aff * aff.ds_scaled;
        const double mu_aff = ((z_aff.cwiseProduct(s_aff)).sum() +
                               (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa)) /
                              nu;
        double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
        sigma = std::min(1.0, sigma);

        // Corrector with Mehrotra second-order term; residual targets are
        // damped by (1 - sigma).
        Eigen::MatrixXd d_mat = -d_lam * d_lam;
        d_mat -= 0.5 * (aff.dz_scaled * aff.ds_scaled + aff.ds_scaled * aff.dz_scaled);
        d_mat.diagonal().array() += sigma * mu;
        Eigen::MatrixXd e_scaled(p, p);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j)
                e_scaled(i, j) = 2.0 * d_mat(i, j) / (w.lambda(i) + w.lambda(j));
        const double dtau_rhs = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;

        const double damp = 1.0 - sigma;
        Direction dir = solve_direction(-damp * r_d, -damp * r_p, -damp * r_g, e_scaled, dtau_rhs);

        double alpha = 0.98 * step_length(dir);
        alpha = std::min(alpha, 1.0);
        if (!std::isfinite(alpha) || alpha <= 1e-10)
            return finish(SdpStatus::numerical_failure, iter, gap_rel);
        if (alpha < 1e-7) {
            if (++stalls >= 6) return finish(SdpStatus::numerical_failure, iter, gap_rel);
        } else {
            stalls = 0;
        }

        y += alpha * dir.dy;
        s += alpha * dir.ds;
        z += alpha * dir.dz;
        s = 0.5 * (s + s.transpose().eval());
        z = 0.5 * (z + z.transpose().eval());
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;

        if (!(tau > 0.0) || !(kappa > 0.0) || !y.allFinite())
            return finish(SdpStatus::numerical_failure, iter + 1, gap_rel);
    }

    return finish(SdpStatus::max_iter, params.max_iter, 0.0);
}

std::string export_sdp_text(const SdpProblem& p) {
    std::ostringstream os;
    os.precision(17);
    os << "SDP 1\n";
    os << "m " << p.num_vars() << " blocks 1\n";
    os << "blocksize " << p.block_size << "\n";
    os << "objective";
    for (Eigen::Index k = 0; k < p.objective.size(); ++k) os << " " << p.objective(k);
    os << "\n";
    for (const auto& e : p.cost) os << "0 1 " << e.row + 1 << " " << e.col + 1 << " " << e.value << "\n";
    for (std::size_t k = 0; k < p.constraints.size(); ++k)
        for (const auto& e : p.constraints[k])
            os << k + 1 << " 1 " << e.row + 1 << " " << e.col + 1 << " " << e.value << "\n";
    return os.str();
}

}  // namespace morseopt
