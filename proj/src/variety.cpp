#include "morseopt/variety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace morseopt {

std::string to_string(MorseVerdict v) {
    switch (v) {
        case MorseVerdict::morse: return "morse";
        case MorseVerdict::not_morse_degenerate: return "not_morse_degenerate";
        case MorseVerdict::not_morse_equal_values: return "not_morse_equal_values";
        case MorseVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(RadicalityVerdict v) {
    switch (v) {
        case RadicalityVerdict::radical: return "radical";
        case RadicalityVerdict::not_radical: return "not_radical";
        case RadicalityVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<Eigen::MatrixXd> multiplication_matrices(const GroebnerBasis& gb,
                                                     const QuotientBasis& qb) {
    const auto mu = static_cast<Eigen::Index>(qb.size());
    std::map<Monomial, Eigen::Index> index;
    for (Eigen::Index j = 0; j < mu; ++j) index[qb.standard_monomials[j]] = j;

    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(gb.nvars);
    for (std::size_t i = 0; i < gb.nvars; ++i) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mu, mu);
        const Polynomial xi = Polynomial::variable(gb.nvars, i);
        for (Eigen::Index j = 0; j < mu; ++j) {
            const Polynomial b = Polynomial::term(gb.nvars, qb.standard_monomials[j], Rational(1));
            const Polynomial nf = normal_form(xi * b, gb);
            for (const auto& [mon, coeff] : nf.terms()) {
                auto it = index.find(mon);
                if (it == index.end())
                    throw DimensionMismatchError(
                        "normal form left the quotient basis; basis and quotient are inconsistent");
                m(it->second, j) = to_double(coeff);
            }
        }
        mats.push_back(std::move(m));
    }
    return mats;
}

namespace {

// Merge thresholds for eigenpair clustering. Computed eigenvalues of a
// defective (multiple-point) cluster wander by about eps^(1/k) while their
// eigenvectors stay nearly parallel, so near-parallel evaluation vectors are
// the primary merge signal and the point distance band is a sanity guard.
constexpr double kDefectAngleTol = 5e-3;

double sin_angle(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 1.0;
    double c = std::abs(a.dot(b)) / (na * nb);  // Eigen's dot conjugates the lhs
    c = std::min(c, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

double point_distance(const Point& a, const Point& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double max_gradient_residual(const std::vector<Polynomial>& grad, const Point& p) {
    double r = 0.0;
    for (const auto& g : grad) r = std::max(r, std::abs(g.evaluate(p)));
    return r;
}

// One damped-free Newton step on the gradient system; the step is kept only
// if it does not increase the residual.
Point newton_polish(const Polynomial& f, const std::vector<Polynomial>& grad, const Point& p) {
    const auto n = static_cast<Eigen::Index>(f.nvars());
    Eigen::VectorXcd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = grad[static_cast<std::size_t>(i)].evaluate(p);
    const Eigen::MatrixXcd h = hessian_at(f, p);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(h);
    const Point q = p - cod.solve(g);
    if (!q.allFinite()) return p;
    return max_gradient_residual(grad, q) <= max_gradient_residual(grad, p) ? q : p;
}

struct EigenData {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // left eigenvectors of the combination, columns
    std::vector<Point> estimates;
};

}  // namespace

std::vector<CriticalPoint> solve_variety(const Polynomial& f, const GroebnerBasis& gb,
                                         const QuotientBasis& qb, const VarietyTolerances& tol) {
    const std::size_t n = f.nvars();
    const auto mu = static_cast<Eigen::Index>(qb.size());
    if (mu == 0) return {};  // empty variety (unit gradient ideal)

    const std::vector<Eigen::MatrixXd> mult = multiplication_matrices(gb, qb);

    // Random real combination with a fixed, reported seed.
    std::mt19937_64 rng(tol.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd combo(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) combo(static_cast<Eigen::Index>(i)) = dist(rng);
    combo.normalize();

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mu, mu);
    for (std::size_t i = 0; i < n; ++i) m += combo(static_cast<Eigen::Index>(i)) * mult[i];

    EigenData ed;
    {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.transpose().cast<Complex>());
        if (es.info() != Eigen::Success)
            throw SolverError("eigen decomposition of the multiplication combination failed");
        ed.values = es.eigenvalues();
        ed.vectors = es.eigenvectors();
    }

    // Coordinate estimates: a left eigenvector w of the combination is an
    // evaluation functional, so p_i = (w^T M_i)_1 / w_1 with basis element 1
    // in slot 0 of the quotient basis.
    ed.estimates.reserve(static_cast<std::size_t>(mu));
    for (Eigen::Index j = 0; j < mu; ++j) {
        const Eigen::VectorXcd w = ed.vectors.col(j);
        const Complex w1 = w(0);
        Point p(static_cast<Eigen::Index>(n));
        if (std::abs(w1) < 1e-300) {
            p.setConstant(std::numeric_limits<double>::quiet_NaN());
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const Complex num = w.transpose() * mult[i].col(0).cast<Complex>();
                p(static_cast<Eigen::Index>(i)) = num / w1;
            }
        }
        if (!p.allFinite())
            throw SolverError("eigenvector produced a non-finite coordinate estimate");
        ed.estimates.push_back(std::move(p));
    }

    double scale = 1.0;
    for (const auto& p : ed.estimates) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double defect_band = std::max(100.0 * tol.cluster_tol, 1e-3 * scale);

    // Single-linkage clustering of eigenpairs via union-find.
    std::vector<std::size_t> parent(static_cast<std::size_t>(mu));
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (Eigen::Index a = 0; a < mu; ++a) {
        for (Eigen::Index b = a + 1; b < mu; ++b) {
            const double d = point_distance(ed.estimates[static_cast<std::size_t>(a)],
                                            ed.estimates[static_cast<std::size_t>(b)]);
            const bool tight = d <= tol.cluster_tol;
            const bool defect = d <= defect_band &&
                                sin_angle(ed.vectors.col(a), ed.vectors.col(b)) <= kDefectAngleTol;
            if (tight || defect) {
                const auto ra = find(static_cast<std::size_t>(a));
                const auto rb = find(static_cast<std::size_t>(b));
                if (ra != rb) parent[rb] = ra;
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t j = 0; j < static_cast<std::size_t>(mu); ++j) clusters[find(j)].push_back(j);

    // Ambiguity guard: distinct clusters must be separated by a clear margin.
    for (auto ia = clusters.begin(); ia != clusters.end(); ++ia) {
        for (auto ib = std::next(ia); ib != clusters.end(); ++ib) {
            for (std::size_t a : ia->second) {
                for (std::size_t b : ib->second) {
                    const double d = point_distance(ed.estimates[a], ed.estimates[b]);
                    if (d <= 10.0 * tol.cluster_tol)
                        throw ClusteringInconclusiveError(
                            "eigenvalue clusters are separated by " + std::to_string(d) +
                            ", inside the ambiguity band of the cluster tolerance");
                }
            }
        }
    }

    const std::vector<Polynomial> grad = gradient(f);
    std::vector<CriticalPoint> points;
    points.reserve(clusters.size());
    for (const auto& [root, members] : clusters) {
        Point p = Point::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t j : members) p += ed.estimates[j];
        p /= static_cast<double>(members.size());

        p = newton_polish(f, grad, p);
        const double res = max_gradient_residual(grad, p);
        if (res > tol.residual_tol)
            throw ResidualFailureError("candidate critical point has gradient residual " +
                                       std::to_string(res) + " above the acceptance tolerance");

        CriticalPoint cp;
        cp.location = p;
        cp.multiplicity = members.size();
        cp.critical_value = f.evaluate(p);
        cp.hessian_det = hessian_at(f, p).determinant();
        cp.residual = res;
        cp.is_real = true;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            if (std::abs(p(i).imag()) > tol.real_tol) cp.is_real = false;
        points.push_back(std::move(cp));
    }

    std::size_t total = 0;
    for (const auto& cp : points) total += cp.multiplicity;
    if (total != static_cast<std::size_t>(mu))
        throw InternalConsistencyError("multiplicities do not sum to the quotient dimension");

    std::sort(points.begin(), points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        for (Eigen::Index i = 0; i < a.location.size(); ++i) {
            if (a.location(i).real() != b.location(i).real())
                return a.location(i).real() < b.location(i).real();
            if (a.location(i).imag() != b.location(i).imag())
                return a.location(i).imag() < b.location(i).imag();
        }
        return false;
    });
    return points;
}

std::vector<CriticalPoint> solve_variety(const Polynomial& f, const VarietyTolerances& tol,
                                         const MonomialOrder& order, const GroebnerLimits& limits) {
    const GroebnerBasis gb = buchberger(gradient(f), order, limits);
    if (!is_zero_dimensional(gb))
        throw PositiveDimensionalError("the gradient ideal is positive-dimensional");
    return solve_variety(f, gb, quotient_basis(gb), tol);
}

MorseCertificate morse_certificate(const Polynomial& f, const std::vector<CriticalPoint>& points,
                                   const VarietyTolerances& tol) {
    MorseCertificate cert;
    cert.nondegeneracy_tol = tol.nondegeneracy_tol;
    cert.value_gap_tol = tol.value_gap_tol;
    cert.min_value_gap = std::numeric_limits<double>::infinity();

    if (points.empty()) {
        cert.verdict = MorseVerdict::morse;
        cert.note = "no critical points; the conditions hold vacuously";
        return cert;
    }

    const double nd = tol.nondegeneracy_tol;
    bool degenerate = false, det_band = false;
    for (const auto& cp : points) {
        const Eigen::MatrixXcd h = hessian_at(f, cp.location);
        const double fro = h.norm();
        const double det = std::abs(h.determinant());
        const double rel =
            fro > 0.0 ? det / std::pow(fro, static_cast<double>(f.nvars())) : 0.0;
        cert.hessian_dets.push_back(h.determinant());
        cert.relative_dets.push_back(rel);
        if (cp.multiplicity > 1 || rel <= nd) degenerate = true;
        else if (rel <= 10.0 * nd) det_band = true;
    }

    bool equal_values = false, gap_band = false;
    for (std::size_t a = 0; a < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            const double gap = std::abs(points[a].critical_value - points[b].critical_value);
            cert.min_value_gap = std::min(cert.min_value_gap, gap);
        }
    }
    if (points.size() >= 2) {
        if (cert.min_value_gap <= tol.value_gap_tol) equal_values = true;
        else if (cert.min_value_gap <= 10.0 * tol.value_gap_tol) gap_band = true;
    }

    if (degenerate) {
        cert.verdict = MorseVerdict::not_morse_degenerate;
    } else if (equal_values) {
        cert.verdict = MorseVerdict::not_morse_equal_values;
    } else if (det_band || gap_band) {
        cert.verdict = MorseVerdict::inconclusive;
        cert.note = "a Hessian determinant or value gap falls inside the tolerance band";
    } else {
        cert.verdict = MorseVerdict::morse;
    }
    // Critical-value distinctness is checked over all complex critical
    // points, not just the real ones.
    return cert;
}

RadicalityReport radicality_report(const Polynomial& f, std::size_t total_milnor,
                                   const std::vector<CriticalPoint>& points,
                                   const VarietyTolerances& tol) {
    RadicalityReport rep;
    rep.num_points = points.size();
    rep.total_milnor = total_milnor;
    rep.morse = morse_certificate(f, points, tol);

    if (rep.num_points > total_milnor)
        throw InternalConsistencyError("more variety points than the quotient dimension");
    rep.verdict = rep.num_points == total_milnor ? RadicalityVerdict::radical
                                                 : RadicalityVerdict::not_radical;

    if (rep.morse.verdict == MorseVerdict::morse && rep.verdict != RadicalityVerdict::radical)
        throw InternalConsistencyError(
            "Morse certificate with a non-radical gradient ideal; counts are inconsistent");
    return rep;
}

RadicalityReport radicality_report(const Polynomial& f, const VarietyTolerances& tol,
                                   const MonomialOrder& order, const GroebnerLimits& limits) {
    const GroebnerBasis gb = buchberger(gradient(f), order, limits);
    if (!is_zero_dimensional(gb))
        throw PositiveDimensionalError("the gradient ideal is positive-dimensional");
    const QuotientBasis qb = quotient_basis(gb);
    try {
        const auto points = solve_variety(f, gb, qb, tol);
        return radicality_report(f, qb.size(), points, tol);
    } catch (const ClusteringInconclusiveError& e) {
        RadicalityReport rep;
        rep.total_milnor = qb.size();
        rep.verdict = RadicalityVerdict::inconclusive;
        rep.morse.verdict = MorseVerdict::inconclusive;
        rep.note = e.what();
        return rep;
    }
}

std::optional<double> candidate_infimum(const Polynomial&,
                                        const std::vector<CriticalPoint>& points,
                                        const VarietyTolerances&) {
    std::optional<double> best;
    for (const auto& cp : points) {
        if (!cp.is_real) continue;
        const double v = cp.critical_value.real();
        if (!best || v < *best) best = v;
    }
    return best;
}

}  // namespace morseopt
