#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qvlasov::quadrature {

/// Fixed n-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> nodes;
    std::array<double, N> weights;

    /// int_a^b fn(t) dt.
    template <class Fn>
    double integrate(Fn&& fn, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) sum += weights[i] * fn(mid + half * nodes[i]);
        return half * sum;
    }
};

extern const GaussLegendre<3> gauss_legendre_3;
extern const GaussLegendre<4> gauss_legendre_4;
extern const GaussLegendre<6> gauss_legendre_6;

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Gregory end-correction weights of the given order.
///
/// Adding sum_i w[i] * f[n - i] (and symmetrically w[i] * f[i]) to the
/// trapezoid sum corrects its endpoint error through backward differences of
/// order 1..order. Entry i multiplies the sample i steps in from the end.
std::vector<double> gregory_end_corrections(int order);

/// Full weight vector (in units of the step) for n equally spaced samples,
/// trapezoid plus Gregory corrections. The order is capped at n - 1.
std::vector<double> gregory_weights(std::size_t n, int order);

/// Composite trapezoid rule over samples with spacing h.
double trapezoid(std::span<const double> values, double h);

}  // namespace qvlasov::quadrature
