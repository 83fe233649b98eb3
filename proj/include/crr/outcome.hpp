// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_OUTCOME_HPP
#define CRR_OUTCOME_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "crr/system.hpp"

namespace crr {

enum class SolveStatus { Optimal, Infeasible, MaxIterations };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIterations: return "max_iterations";
    }
    return "?";
}

// Scaled KKT certificate of a returned solution. stationarity is the duality
// gap divided by max(1, |rate|); the feasibility entries are constraint
// violations relative to their natural scales; complementary slackness is the
// larger of the two multiplier*residual products, scaled.
struct KktResiduals {
    double stationarity = 0;
    double feasibility_power = 0;
    double feasibility_crb = 0;
    double comp_slack = 0;

    double max() const {
        return std::max(std::max(stationarity, feasibility_power),
                        std::max(feasibility_crb, comp_slack));
    }
};

struct SolveOutcome {
    Eigen::MatrixXcd q;            // optimal transmit covariance
    double rate = 0;               // bits per channel use
    double crb = kInf;             // achieved value of the scenario metric
    int scenario = 0;
    bool constraint_active = false;
    std::vector<double> duals;     // scenario-specific multiplier vector
    Eigen::VectorXd allocation;    // eigenmode powers where applicable
    KktResiduals kkt;
    SolveStatus status = SolveStatus::Optimal;
    long iterations = 0;
    double wall_time_s = 0;

    // Row-major interleaved re/im serialization of q.
    std::vector<double> q_interleaved() const {
        std::vector<double> out;
        out.reserve(2 * q.size());
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
            for (Eigen::Index j = 0; j < q.cols(); ++j) {
                out.push_back(q(i, j).real());
                out.push_back(q(i, j).imag());
            }
        }
        return out;
    }
};

}  // namespace crr

#endif
