#include "qvlasov/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

namespace qvlasov::quadrature {

const GaussLegendre<3> gauss_legendre_3{
    {-0.7745966692414833770, 0.0, 0.7745966692414833770},
    {0.5555555555555555556, 0.8888888888888888889, 0.5555555555555555556}};

const GaussLegendre<4> gauss_legendre_4{
    {-0.8611363115940525752, -0.3399810435848562648, 0.3399810435848562648,
     0.8611363115940525752},
    {0.3478548451374538574, 0.6521451548625461426, 0.6521451548625461426,
     0.3478548451374538574}};

const GaussLegendre<6> gauss_legendre_6{
    {-0.9324695142031520278, -0.6612093864662645137, -0.2386191860831969086,
     0.2386191860831969086, 0.6612093864662645137, 0.9324695142031520278},
    {0.1713244923791703450, 0.3607615730481386076, 0.4679139345726910474,
     0.4679139345726910474, 0.3607615730481386076, 0.1713244923791703450}};

namespace {

// Gregory coefficients for backward differences of order 1..8.
constexpr std::array<double, 8> kGregory = {
    1.0 / 12.0,        1.0 / 24.0,         19.0 / 720.0,      3.0 / 160.0,
    863.0 / 60480.0,   275.0 / 24192.0,    33953.0 / 3628800.0, 8183.0 / 1036800.0};

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

std::vector<double> gregory_end_corrections(int order) {
    if (order < 0 || order > static_cast<int>(kGregory.size()))
        throw std::invalid_argument("gregory order out of range");
    std::vector<double> w(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 1; k <= order; ++k) {
        for (int i = 0; i <= k; ++i) {
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            w[static_cast<std::size_t>(i)] -= kGregory[static_cast<std::size_t>(k - 1)] * sign * binomial(k, i);
        }
    }
    return w;
}

std::vector<double> gregory_weights(std::size_t n, int order) {
    if (n < 2) throw std::invalid_argument("gregory_weights needs at least two samples");
    std::vector<double> w(n, 1.0);
    w.front() = 0.5;
    w.back() = 0.5;
    order = std::min(order, static_cast<int>(n) - 1);
    const auto corr = gregory_end_corrections(order);
    for (std::size_t i = 0; i < corr.size(); ++i) {
        w[i] += corr[i];
        w[n - 1 - i] += corr[i];
    }
    return w;
}

double trapezoid(std::span<const double> values, double h) {
    if (values.size() < 2) return 0.0;
    CompensatedSum s;
    s.add(0.5 * values.front());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s.add(values[i]);
    s.add(0.5 * values.back());
    return h * s.value();
}

}  // namespace qvlasov::quadrature
