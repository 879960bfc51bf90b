#ifndef MORSEOPT_SOS_HPP
#define MORSEOPT_SOS_HPP

#include <optional>
#include <string>
#include <vector>

#include "morseopt/sdp.hpp"
#include "morseopt/variety.hpp"

namespace morseopt {

// Role of one scalar SDP variable in the relaxation
//
//   maximize    gamma
//   subject to  f - gamma - sum_i phi_i * df/dx_i  is a sum of squares,
//               deg phi_i <= 2N - d + 1,
//
// assembled in dual form with a single PSD block: the Gram matrix is the
// slack, coefficient-matching equalities are eliminated by designating one
// Gram entry per matched monomial and solving for it, and gamma, the phi
// coefficients and the remaining Gram entries are the free variables.
enum class VariableRole { gamma, multiplier_coeff, gram_entry };

struct VariableInfo {
    VariableRole role = VariableRole::gamma;
    std::size_t phi_index = 0;  // multiplier_coeff: which partial
    Monomial monomial;          // multiplier_coeff: which phi monomial
    Eigen::Index gram_row = 0;  // gram_entry: indices into the SOS basis
    Eigen::Index gram_col = 0;
};

struct RelaxationProblem {
    SdpProblem sdp;
    std::vector<VariableInfo> variables;  // one per SDP variable
    std::vector<Monomial> sos_basis;      // monomials of degree <= N
    std::vector<Monomial> phi_basis;      // monomials of degree <= 2N-d+1

    // One designated Gram slot per matched monomial of degree <= 2N.
    struct MatchedMonomial {
        Monomial monomial;
        Eigen::Index row = 0, col = 0;  // row <= col
    };
    std::vector<MatchedMonomial> matched;

    Polynomial f;
    std::vector<Polynomial> grad;
    unsigned order = 0;       // N
    bool plain_sos = false;   // multipliers removed (degenerate case)
};

struct RelaxationParams {
    SdpParams sdp;
    double certificate_tol = 1e-6;
    double extract_tol = 1e-9;                 // Gram eigenvalue truncation
    unsigned long rationalize_max_den = 1000000;
    double stab_tol = 1e-6;
    VarietyTolerances variety;                 // for the sweep cross-check
    GroebnerLimits limits;
};

struct RelaxationResult {
    unsigned order = 0;  // N
    double gamma = 0.0;
    SdpStatus status = SdpStatus::numerical_failure;
    Eigen::MatrixXd gram;
    std::vector<Polynomial> multipliers;  // rationalized certificate
    std::vector<Polynomial> sos_squares;  // rationalized certificate
    double identity_residual = 0.0;        // exact residual of the rationalized certificate
    double identity_residual_float = 0.0;  // same identity evaluated in doubles
    unsigned long rationalize_den_used = 0;  // denominator cap that verified; 0 = lossless
    int iterations = 0;
    double sdp_gap = 0.0;
    std::string note;
};

struct ConvergenceTrace {
    std::vector<RelaxationResult> results;  // ascending N
    bool monotone = true;
    bool stabilized = false;
    std::optional<double> candidate_inf;
    bool matches_candidate = false;
    std::string caveat;
};

// Assembles the order-N gradient relaxation. Requires 2N >= deg f - 1; when
// deg f exceeds 2N the problem is marked trivially infeasible since the top
// coefficients cannot be matched.
RelaxationProblem build_grad_relaxation(const Polynomial& f, unsigned order);

// The plain SOS bound: the N = ceil(d/2) instance with all multipliers
// removed. Odd-degree inputs are reported as immediately infeasible.
RelaxationProblem build_plain_sos(const Polynomial& f);

RelaxationResult solve_relaxation(const RelaxationProblem& p, const RelaxationParams& params = {});

// Eigen-decomposes a PSD Gram matrix into explicit squares. Eigenvalues in
// [-tol, tol] are truncated to zero; anything below -tol is an error.
std::vector<Polynomial> extract_sos(const Eigen::MatrixXd& gram,
                                    const std::vector<Monomial>& basis, std::size_t nvars,
                                    double tol);

// Exact residual f - gamma - sum phi_i f_i - sum sigma_j^2 in rational
// arithmetic; the certificate is accepted iff this is the zero polynomial
// (or has max-abs coefficient below the caller's tolerance).
Polynomial verify_identity(const Polynomial& f, const Rational& gamma,
                           const std::vector<Polynomial>& multipliers,
                           const std::vector<Polynomial>& squares);

ConvergenceTrace run_convergence_sweep(const Polynomial& f, unsigned n_min, unsigned n_max,
                                       const RelaxationParams& params = {},
                                       const std::vector<CriticalPoint>* points = nullptr);

// Default sweep window for a polynomial of degree d.
unsigned default_sweep_min(const Polynomial& f);

std::vector<Monomial> monomials_up_to_degree(std::size_t nvars, unsigned degree);

}  // namespace morseopt

#endif
