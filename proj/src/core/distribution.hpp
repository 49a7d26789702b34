#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fscd {

inline constexpr double kProbTolerance = 1e-9;

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Sparse probability distribution over integer element ids.
/// Support entries are kept sorted by id, strictly positive, without duplicates.
class Distribution {
public:
    Distribution() = default;
    explicit Distribution(std::vector<std::pair<int, double>> support)
        : support_(std::move(support)) {
        normalizeOrder();
        validate();
    }

    static Distribution dirac(int element) { return Distribution({{element, 1.0}}); }

    const std::vector<std::pair<int, double>>& support() const { return support_; }

    double probabilityOf(int element) const {
        for (const auto& [e, p] : support_)
            if (e == element) return p;
        return 0.0;
    }

    bool isDirac() const { return support_.size() == 1; }

    bool equals(const Distribution& other, double tol = kProbTolerance) const {
        if (support_.size() != other.support_.size()) return false;
        for (size_t i = 0; i < support_.size(); ++i) {
            if (support_[i].first != other.support_[i].first) return false;
            if (std::abs(support_[i].second - other.support_[i].second) > tol) return false;
        }
        return true;
    }

    /// Stable hash key with probabilities quantized to 1e-9.
    std::vector<std::pair<int, std::int64_t>> quantizedKey() const {
        std::vector<std::pair<int, std::int64_t>> key;
        key.reserve(support_.size());
        for (const auto& [e, p] : support_)
            key.emplace_back(e, static_cast<std::int64_t>(std::llround(p * 1e9)));
        return key;
    }

private:
    void normalizeOrder() {
        std::sort(support_.begin(), support_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    void validate() const {
        double sum = 0.0;
        int prev = -1;
        bool first = true;
        for (const auto& [e, p] : support_) {
            if (!first && e == prev) throw ValidationError("distribution has duplicate element id");
            if (p <= 0.0) throw ValidationError("distribution probability not strictly positive");
            sum += p;
            prev = e;
            first = false;
        }
        if (std::abs(sum - 1.0) > kProbTolerance)
            throw ValidationError("distribution sum is " + std::to_string(sum) + ", expected 1");
    }

    std::vector<std::pair<int, double>> support_;
};

}  // namespace fscd
