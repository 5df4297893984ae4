#include "kproc/stable.hpp"

#include <cmath>
#include <stdexcept>

namespace kproc {

double sample_stable(double alpha, Stream& stream) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("sample_stable: alpha in (0, 1]");
    if (alpha == 1.0) return 1.0;
    const double u = stream.uniform01() * M_PI;
    const double e = stream.exponential();
    const double r = (1.0 - alpha) / alpha;
    // log-domain keeps the (1-alpha)->0 endpoint well behaved
    const double log_x = std::log(std::sin(alpha * u)) +
                         r * std::log(std::sin((1.0 - alpha) * u)) -
                         std::log(std::sin(u)) / alpha - r * std::log(e);
    return std::exp(log_x);
}

}  // namespace kproc
