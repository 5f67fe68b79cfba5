#pragma once

#include <stdexcept>
#include <string>

namespace flownet {

// Nonnegative quantity that may be unbounded. Capacities and buffer sizes use
// this instead of a sentinel double so sums and comparisons involving
// unbounded links stay total operations (no NaN traps in cut arithmetic).
class ExtReal {
public:
    constexpr ExtReal() = default;

    static constexpr ExtReal finite(double v) {
        ExtReal r;
        r.finite_ = true;
        r.v_ = v;
        return r;
    }
    static constexpr ExtReal unbounded() {
        ExtReal r;
        r.finite_ = false;
        r.v_ = 0.0;
        return r;
    }

    constexpr bool is_finite() const { return finite_; }
    constexpr bool is_unbounded() const { return !finite_; }

    double value() const {
        if (!finite_) throw std::logic_error("ExtReal: value() of unbounded quantity");
        return v_;
    }
    // unbounded mapped to a caller-chosen stand-in (e.g. big-M in max-flow)
    constexpr double value_or(double if_unbounded) const { return finite_ ? v_ : if_unbounded; }

    ExtReal& operator+=(const ExtReal& o) {
        if (o.finite_ && finite_)
            v_ += o.v_;
        else
            *this = unbounded();
        return *this;
    }
    friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }

    // scaling by a nonnegative factor (perturbation families)
    friend ExtReal operator*(double f, const ExtReal& x) {
        return x.finite_ ? finite(f * x.v_) : unbounded();
    }

    friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
    }
    friend constexpr bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
    // total order, unbounded above every finite value
    friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.v_ < b.v_;
    }
    friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
    friend constexpr bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend constexpr bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

    std::string str() const { return finite_ ? std::to_string(v_) : "inf"; }

private:
    bool finite_ = true;
    double v_ = 0.0;
};

}  // namespace flownet
