#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace binreg {

// A binary-regression dataset: predictor values paired with 0/1 responses.
// Immutable after construction; all invariants checked up front.
class Sample {
public:
    Sample(Eigen::VectorXd xs, Eigen::VectorXd ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
        if (xs_.size() != ys_.size()) {
            throw std::invalid_argument("Sample: xs and ys must have equal length");
        }
        if (xs_.size() < 1) throw std::invalid_argument("Sample: need at least one observation");
        for (Eigen::Index i = 0; i < xs_.size(); ++i) {
            if (!std::isfinite(xs_[i])) {
                throw std::invalid_argument("Sample: predictor values must be finite");
            }
            if (ys_[i] != 0.0 && ys_[i] != 1.0) {
                throw std::invalid_argument("Sample: responses must be 0 or 1");
            }
        }
    }

    const Eigen::VectorXd& xs() const { return xs_; }
    const Eigen::VectorXd& ys() const { return ys_; }
    Eigen::Index size() const { return xs_.size(); }

private:
    Eigen::VectorXd xs_;
    Eigen::VectorXd ys_;
};

// Positive, finite smoothing scale in predictor units.
struct Bandwidth {
    explicit Bandwidth(double v) : value(v) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("Bandwidth: value must be positive and finite");
        }
    }

    double value;
};

}  // namespace binreg
