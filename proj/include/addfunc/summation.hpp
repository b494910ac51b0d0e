#pragma once

#include <cmath>

namespace addfunc {

/// Neumaier compensated summation in extended precision.
class CompensatedSum {
public:
    CompensatedSum& operator+=(long double x) {
        const long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }
    long double extended() const { return sum_ + comp_; }
    double value() const { return static_cast<double>(sum_ + comp_); }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

}  // namespace addfunc
