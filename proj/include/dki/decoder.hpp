#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dki/error.hpp"
#include "dki/packing.hpp"

namespace dki {

/// Sorted, duplicate-free set of 0-based message indices, validated against a
/// codebook size M.
class TargetSet {
public:
    TargetSet() = default;
    TargetSet(std::vector<std::int64_t> indices, std::int64_t M);

    std::int64_t K() const { return static_cast<std::int64_t>(indices_.size()); }
    std::int64_t M() const { return M_; }
    bool contains(std::int64_t i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }
    std::span<const std::int64_t> indices() const { return indices_; }
    bool is_subset_of(const TargetSet& other) const {
        return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
    }

private:
    std::vector<std::int64_t> indices_;
    std::int64_t M_ = 0;
};

/// Closed decoding territory test: sum_t (y_t - g c_t)^2 <= sigma2 + tau.
///
/// The residual is accumulated in long double. Terms are nonnegative, so the
/// running sum never decreases and the loop can stop as soon as it exceeds the
/// threshold without changing the answer.
template <typename DerivedY, typename DerivedC>
bool in_territory(const Eigen::MatrixBase<DerivedY>& y, const Eigen::MatrixBase<DerivedC>& c, double g, double sigma2,
                  double tau) {
    if (y.size() != c.size())
        fail(ErrorKind::InvalidParameter, "in_territory: length mismatch (" + std::to_string(y.size()) + " vs " +
                                              std::to_string(c.size()) + ")");
    require(tau >= 0.0, "in_territory: tau must be >= 0");
    const long double threshold = static_cast<long double>(sigma2) + static_cast<long double>(tau);
    const long double gl = g;
    long double acc = 0.0L;
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        const long double d = static_cast<long double>(y(t)) - gl * static_cast<long double>(c(t));
        acc += d * d;
        if (acc > threshold) return false;
    }
    return true;
}

/// Union-of-territories K-identification decision: true iff y lies in the
/// territory of at least one target message.
template <typename DerivedY>
bool k_identify(const Eigen::MatrixBase<DerivedY>& y, const Codebook& cb, const TargetSet& target, double g,
                double sigma2, double tau) {
    for (const std::int64_t j : target.indices()) {
        if (j < 0 || j >= cb.size())
            fail(ErrorKind::IndexOutOfRange,
                 "k_identify: target index " + std::to_string(j) + " outside codebook of size " + std::to_string(cb.size()));
    }
    for (const std::int64_t j : target.indices())
        if (in_territory(y, cb.codeword(j), g, sigma2, tau)) return true;
    return false;
}

}  // namespace dki
