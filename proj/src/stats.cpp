#include "kproc/stats.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace kproc {

StatEstimate estimate_from_samples(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("estimate_from_samples: need at least 2 samples");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(samples.size())), samples.size()};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        default: return "INCONCLUSIVE";
    }
}

ComparisonResult compare_to_oracle(std::string name, const StatEstimate& observed,
                                   double expected, double truncation_halfwidth,
                                   double z_threshold) {
    ComparisonResult r;
    r.name = std::move(name);
    r.observed = observed;
    r.expected = expected;
    r.truncation_halfwidth = truncation_halfwidth;
    r.z_threshold = z_threshold;
    r.z_score = observed.std_error > 0.0
                    ? (observed.mean - expected) / observed.std_error
                    : (observed.mean == expected ? 0.0
                                                 : std::numeric_limits<double>::infinity());
    const double diff = std::fabs(observed.mean - expected);
    const double stat_tol = z_threshold * observed.std_error;
    if (diff <= stat_tol)
        r.verdict = Verdict::Pass;
    else if (truncation_halfwidth > stat_tol)
        r.verdict = diff <= stat_tol + truncation_halfwidth ? Verdict::Inconclusive
                                                            : Verdict::Fail;
    else
        r.verdict = diff <= stat_tol + truncation_halfwidth ? Verdict::Pass : Verdict::Fail;
    return r;
}

namespace {

// asymptotic Kolmogorov distribution Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2)
double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("ks_two_sample_pvalue: need at least 2 per sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    while (i < sa.size() && j < sb.size()) {
        // advance through all entries tied at the current value in both
        // samples before recording the gap, so atoms do not inflate D
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == v) ++i;
        while (j < sb.size() && sb[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    // Stephens' small-sample correction
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    return kolmogorov_q(lambda);
}

namespace {

template <class T, class F>
void run_indexed(std::size_t count, std::size_t workers, std::vector<T>& out, F&& fn) {
    out.resize(count);
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

StatEstimate run_replicas(std::size_t count, std::size_t workers,
                          const std::function<double(std::size_t)>& replica) {
    std::vector<double> samples;
    run_indexed(count, workers, samples, replica);
    return estimate_from_samples(samples);
}

std::vector<double> collect_replicas(std::size_t count, std::size_t workers,
                                     const std::function<double(std::size_t)>& replica) {
    std::vector<double> samples;
    run_indexed(count, workers, samples, replica);
    return samples;
}

std::vector<std::vector<double>> collect_replica_rows(
    std::size_t count, std::size_t workers,
    const std::function<std::vector<double>(std::size_t)>& replica) {
    std::vector<std::vector<double>> rows;
    run_indexed(count, workers, rows, replica);
    return rows;
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median_of: empty");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double m = values[mid];
    if (values.size() % 2 == 0) {
        const double lo = *std::max_element(values.begin(), values.begin() + mid);
        m = 0.5 * (m + lo);
    }
    return m;
}

}  // namespace kproc
