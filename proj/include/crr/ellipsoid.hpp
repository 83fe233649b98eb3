// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_ELLIPSOID_HPP
#define CRR_ELLIPSOID_HPP

#include <Eigen/Dense>

namespace crr {

// Cutting-plane ellipsoid iterate. The caller inspects center(), supplies a
// subgradient of either the objective or a violated constraint, and cut()
// shrinks the ellipsoid to the half-space {x : g^T (x - c) <= 0}.
class Ellipsoid {
public:
    Ellipsoid(const Eigen::VectorXd& center, double radius)
        : c_(center),
          shape_(radius * radius *
                 Eigen::MatrixXd::Identity(center.size(), center.size())) {}

    const Eigen::VectorXd& center() const { return c_; }
    int dim() const { return static_cast<int>(c_.size()); }

    // Volume of the current ellipsoid relative to the initial one.
    double volume_ratio() const { return std::exp(0.5 * (log_det_ - log_det0_)); }

    bool degenerate() const { return degenerate_; }

    void cut(const Eigen::VectorXd& g) {
        const int n = dim();
        const Eigen::VectorXd pg = shape_ * g;
        const double gpg = g.dot(pg);
        if (!(gpg > 0) || !std::isfinite(gpg)) {
            degenerate_ = true;
            return;
        }
        const Eigen::VectorXd gn = pg / std::sqrt(gpg);
        const double nn = static_cast<double>(n);
        c_ -= gn / (nn + 1.0);
        shape_ = nn * nn / (nn * nn - 1.0) *
                 (shape_ - 2.0 / (nn + 1.0) * gn * gn.transpose());
        shape_ = 0.5 * (shape_ + shape_.transpose());
        log_det_ += n * std::log(nn * nn / (nn * nn - 1.0)) +
                    std::log(1.0 - 2.0 / (nn + 1.0));
        if (!c_.allFinite() || !shape_.allFinite()) degenerate_ = true;
    }

private:
    Eigen::VectorXd c_;
    Eigen::MatrixXd shape_;
    double log_det_ = 0;
    double log_det0_ = 0;
    bool degenerate_ = false;
};

}  // namespace crr

#endif
