#ifndef MORSEOPT_VARIETY_HPP
#define MORSEOPT_VARIETY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "morseopt/groebner.hpp"
#include "morseopt/polynomial.hpp"

namespace morseopt {

struct VarietyTolerances {
    double cluster_tol = 1e-6;
    double residual_tol = 1e-8;
    double nondegeneracy_tol = 1e-8;  // relative to the Frobenius norm of the Hessian
    double value_gap_tol = 1e-8;
    double real_tol = 1e-8;
    std::uint64_t seed = 1729;  // seed of the random matrix combination
};

// One point of the critical variety with its local multiplicity.
struct CriticalPoint {
    Point location;
    std::size_t multiplicity = 1;
    Complex critical_value;
    Complex hessian_det;
    double residual = 0.0;  // max |f_i(p)| over the gradient generators
    bool is_real = false;
};

enum class MorseVerdict { morse, not_morse_degenerate, not_morse_equal_values, inconclusive };

std::string to_string(MorseVerdict v);

struct MorseCertificate {
    MorseVerdict verdict = MorseVerdict::inconclusive;
    std::vector<Complex> hessian_dets;
    std::vector<double> relative_dets;  // |det H| / ||H||_F^n per point
    double min_value_gap = 0.0;         // min pairwise distance of critical values
    double nondegeneracy_tol = 0.0;
    double value_gap_tol = 0.0;
    std::string note;
};

enum class RadicalityVerdict { radical, not_radical, inconclusive };

std::string to_string(RadicalityVerdict v);

struct RadicalityReport {
    std::size_t num_points = 0;
    std::optional<std::size_t> total_milnor;
    RadicalityVerdict verdict = RadicalityVerdict::inconclusive;
    MorseCertificate morse;
    std::string note;
};

// Raised when eigenvalue clusters cannot be separated decisively.
class ClusteringInconclusiveError : public Error {
public:
    explicit ClusteringInconclusiveError(const std::string& message)
        : Error("inconclusive", message) {}
};

// Raised when a candidate point fails the gradient-residual gate; points are
// never dropped silently.
class ResidualFailureError : public Error {
public:
    explicit ResidualFailureError(const std::string& message)
        : Error("residual_failure", message) {}
};

// Multiplication-by-x_i operators on the quotient ring: column j of M_i holds
// the coordinates of normal_form(x_i * b_j) in the quotient basis. Exact
// rational entries are converted to floating point at this boundary.
std::vector<Eigen::MatrixXd> multiplication_matrices(const GroebnerBasis& gb,
                                                     const QuotientBasis& qb);

// Recovers the critical variety from the joint eigenstructure of a random
// (seeded) linear combination of the multiplication matrices, assigns
// multiplicities from cluster sizes, and polishes each point with one Newton
// step. The multiplicities always sum to the quotient dimension.
std::vector<CriticalPoint> solve_variety(const Polynomial& f, const GroebnerBasis& gb,
                                         const QuotientBasis& qb,
                                         const VarietyTolerances& tol = {});

// Convenience wrapper that runs the basis computation itself.
std::vector<CriticalPoint> solve_variety(const Polynomial& f, const VarietyTolerances& tol = {},
                                         const MonomialOrder& order = MonomialOrder::grevlex(),
                                         const GroebnerLimits& limits = {});

MorseCertificate morse_certificate(const Polynomial& f, const std::vector<CriticalPoint>& points,
                                   const VarietyTolerances& tol = {});

RadicalityReport radicality_report(const Polynomial& f, const VarietyTolerances& tol = {},
                                   const MonomialOrder& order = MonomialOrder::grevlex(),
                                   const GroebnerLimits& limits = {});

RadicalityReport radicality_report(const Polynomial& f, std::size_t total_milnor,
                                   const std::vector<CriticalPoint>& points,
                                   const VarietyTolerances& tol = {});

// Minimum of Re f(p) over real critical points; nullopt when none is real.
std::optional<double> candidate_infimum(const Polynomial& f,
                                        const std::vector<CriticalPoint>& points,
                                        const VarietyTolerances& tol = {});

}  // namespace morseopt

#endif
