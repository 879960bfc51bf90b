#ifndef MORSEOPT_SDP_HPP
#define MORSEOPT_SDP_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "morseopt/errors.hpp"

namespace morseopt {

// Semidefinite program in dual form over one PSD block:
//
//   maximize    b^T y
//   subject to  S(y) = C - sum_k y_k A_k  >=  0,
//
// with y free. Matrices are stored sparsely as upper-triangle entries; the
// lower triangle is implied by symmetry.
struct SdpEntry {
    Eigen::Index row = 0;
    Eigen::Index col = 0;  // row <= col
    double value = 0.0;
};

struct SdpProblem {
    Eigen::Index block_size = 0;                  // p
    Eigen::VectorXd objective;                    // b, length m
    std::vector<std::vector<SdpEntry>> constraints;  // A_k, k = 0..m-1
    std::vector<SdpEntry> cost;                   // C

    // Set when assembly already proves the problem infeasible (a constraint
    // row with empty variable support but a nonzero right-hand side).
    bool trivially_infeasible = false;
    std::string infeasibility_note;

    std::size_t num_vars() const { return static_cast<std::size_t>(objective.size()); }
    Eigen::MatrixXd constraint_matrix(std::size_t k) const;
    Eigen::MatrixXd cost_matrix() const;
};

enum class SdpStatus { optimal, infeasible, unbounded, max_iter, numerical_failure };

std::string to_string(SdpStatus s);

struct SdpParams {
    double gap_tol = 1e-8;
    double feasibility_tol = 1e-8;
    int max_iter = 200;
};

struct SdpSolution {
    Eigen::VectorXd y;
    Eigen::MatrixXd slack;  // C - sum_k y_k A_k, recomputed from y
    double objective = 0.0;
    SdpStatus status = SdpStatus::numerical_failure;
    int iterations = 0;
    double gap = 0.0;  // final relative duality-gap estimate
};

// Homogeneous self-dual path-following with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step. Deterministic for fixed inputs.
SdpSolution solve_sdp(const SdpProblem& p, const SdpParams& params = {});

// Smallest eigenvalue of a symmetric matrix (PSD verification helper).
double min_eigenvalue(const Eigen::MatrixXd& s);

// Plain-text sparse export: a header with dimensions, the objective, then one
// line per nonzero entry "k block row col value" with k = 0 for C and
// k = 1..m for the constraint matrices. Indices are 1-based.
std::string export_sdp_text(const SdpProblem& p);

}  // namespace morseopt

#endif
