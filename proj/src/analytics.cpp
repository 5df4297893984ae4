#include "kproc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "kproc/special_functions.hpp"

namespace kproc {

double stable_moment(const StableLaw& law, double beta) {
    if (!(law.c > 0.0 && law.alpha > 0.0 && law.alpha <= 1.0))
        throw std::domain_error("stable_moment: invalid law");
    if (!(beta > 0.0 && beta < law.alpha))
        throw std::domain_error("stable_moment: requires 0 < beta < alpha");
    return std::pow(law.c, beta / law.alpha) * gamma_fn(1.0 - beta / law.alpha) /
           gamma_fn(1.0 - beta);
}

double cylinder_sum_laplace(const AlphaSchedule& schedule, std::size_t j, std::size_t k,
                            double lambda) {
    if (!(j < k && k + 1 <= schedule.size()))
        throw std::domain_error("cylinder_sum_laplace: requires 0 <= j < k <= depth");
    if (lambda < 0.0) throw std::domain_error("cylinder_sum_laplace: lambda >= 0");
    if (lambda == 0.0) return 1.0;
    const double ak = schedule.alpha(k);
    const double aj1 = schedule.alpha(j + 1);
    const double coeff =
        std::pow(gamma_fn(schedule.gap(k)) / gamma_fn(schedule.ratio_complement(k)),
                 aj1 / ak);
    return std::exp(-coeff * std::pow(lambda, aj1));
}

double h_kernel(double gamma, double z) {
    if (!(gamma > 0.0)) throw std::domain_error("h_kernel: gamma > 0");
    if (z < 0.0) throw std::domain_error("h_kernel: z >= 0");
    const double zg = z * gamma;
    return zg / (1.0 + zg);
}

NestedHResult nested_h_exponent(const Environment& env, std::size_t from_level,
                                double lambda, std::span<const double> leaf_weights) {
    const std::size_t n = env.depth();
    if (from_level < 1 || from_level > n)
        throw std::domain_error("nested_h_exponent: from_level in [1, depth]");
    if (lambda < 0.0) throw std::domain_error("nested_h_exponent: lambda >= 0");
    if (!leaf_weights.empty() && leaf_weights.size() != env.nodes_at(n))
        throw std::invalid_argument("nested_h_exponent: leaf weight count mismatch");

    // Bound on the mean exponent per level, used to price the subtree a
    // discarded mark would have carried.
    const std::vector<double> mean_bound =
        a_upper_recursion(env.schedule().truncated(n + 1), n, std::max(lambda, 1e-300));

    // leaf values at depth n
    std::vector<double> z(env.nodes_at(n));
    double max_leaf = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = lambda * (leaf_weights.empty() ? 1.0 : leaf_weights[i]);
        max_leaf = std::max(max_leaf, z[i]);
    }
    std::vector<double> hw(z.size(), 0.0);

    for (std::size_t level = n; level >= from_level; --level) {
        const std::size_t parents = env.nodes_at(level - 1);
        std::vector<double> zp(parents, 0.0), hwp(parents, 0.0);
        // a discarded child at this level would carry roughly the level's
        // mean exponent; leaves carry the leaf value itself
        const double bound_below = (level == n) ? max_leaf : mean_bound[level];
        for (std::size_t p = 0; p < parents; ++p) {
            const auto marks = env.child_marks(level - 1, p);
            double sum = 0.0, err = 0.0;
            for (std::size_t x = 0; x < marks.size(); ++x) {
                const std::size_t c = p * marks.size() + x;
                const double g = marks[x];
                sum += h_kernel(g, z[c]);
                // d/dz h = g / (1 + z g)^2 propagates the child half-width
                const double dz = 1.0 + z[c] * g;
                err += g / (dz * dz) * hw[c];
            }
            // discarded children: each mark t < cutoff contributes at most
            // t * (its subtree exponent); priced at the level mean bound
            err += env.tail_mass(level - 1, p) * bound_below;
            zp[p] = sum;
            hwp[p] = err;
        }
        z.swap(zp);
        hw.swap(hwp);
    }

    NestedHResult out;
    out.node_depth = from_level - 1;
    out.exponents = std::move(z);
    out.halfwidths = std::move(hw);
    return out;
}

std::vector<double> d_sequence(const AlphaSchedule& schedule) {
    std::vector<double> d(schedule.size() - 1);
    for (std::size_t i = 1; i + 1 <= schedule.size(); ++i) {
        const double ai = schedule.alpha(i);
        d[i - 1] = ai * gamma_fn(ai) * gamma_fn(schedule.gap(i)) /
                   gamma_fn(schedule.ratio_complement(i));
    }
    return d;
}

std::vector<double> a_upper_recursion(const AlphaSchedule& schedule, std::size_t n,
                                      double lambda) {
    if (n + 1 > schedule.size())
        throw std::domain_error("a_upper_recursion: schedule too short");
    if (!(lambda > 0.0)) throw std::domain_error("a_upper_recursion: lambda > 0");
    const std::vector<double> d = d_sequence(schedule);
    std::vector<double> a(n + 1, 0.0);
    const double an = schedule.alpha(n);
    a[n] = std::pow(lambda, an) * gamma_fn(schedule.ratio_complement(n)) /
           gamma_fn(schedule.gap(n));
    if (n >= 1) a[n - 1] = std::pow(lambda, an) * an * gamma_fn(an);
    for (std::size_t k = n - 1; k >= 1; --k)
        a[k - 1] = std::pow(a[k], schedule.alpha(k)) * d[k - 1];
    return a;
}

std::vector<double> a_lower_recursion(const AlphaSchedule& schedule, std::size_t n,
                                      double lambda) {
    if (n + 1 > schedule.size())
        throw std::domain_error("a_lower_recursion: schedule too short");
    if (!(lambda > 0.0)) throw std::domain_error("a_lower_recursion: lambda > 0");
    const std::vector<double> d = d_sequence(schedule);
    const double delta = std::max(lambda, 1.0);
    std::vector<double> a(n + 1, 0.0);
    a[n] = std::pow(lambda, schedule.alpha(n)) * gamma_fn(schedule.ratio_complement(n)) /
           gamma_fn(schedule.gap(n));
    for (std::size_t k = n; k >= 1; --k) {
        // step exponent is 1 - alpha_{k-1}; the k = 1 entry stands in
        // alpha_1 for the undefined alpha_0, which only shrinks the bound
        const double step_gap = schedule.gap(k == 1 ? 1 : k - 1);
        a[k - 1] = a[k] * std::pow(1.0 + delta, -step_gap) * d[k - 1];
    }
    return a;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Nontrivial: return "NONTRIVIAL";
        case Regime::Trivial: return "TRIVIAL";
        case Regime::Uncovered: return "UNCOVERED";
        default: return "INDETERMINATE";
    }
}

std::string to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Convergent: return "convergent";
        case SeriesVerdict::Divergent: return "divergent";
        default: return "indeterminate";
    }
}

SeriesVerdict analyze_series(std::span<const double> terms, const SeriesThresholds& thr) {
    if (terms.empty()) return SeriesVerdict::Indeterminate;
    double sum = 0.0;
    std::size_t quiet = 0;
    bool converged = false;
    for (double a : terms) {
        sum += a;
        if (sum > thr.divergence_sum) return SeriesVerdict::Divergent;
        quiet = (a < thr.tail_tolerance) ? quiet + 1 : 0;
        if (quiet >= thr.quiet_terms) converged = true;
    }
    if (converged && quiet >= thr.quiet_terms) return SeriesVerdict::Convergent;
    // Harmonic minorant: if k*a_k stays above a positive floor over the whole
    // tail half of the horizon, the series dominates a multiple of the
    // harmonic series. The flat partial-sum threshold alone cannot flag such
    // series at any feasible horizon.
    bool harmonic = terms.size() >= 8;
    for (std::size_t k = terms.size() / 2; k < terms.size(); ++k) {
        if (static_cast<double>(k + 1) * terms[k] < thr.harmonic_floor) {
            harmonic = false;
            break;
        }
    }
    if (harmonic) return SeriesVerdict::Divergent;
    return converged ? SeriesVerdict::Convergent : SeriesVerdict::Indeterminate;
}

RegimeReport classify_schedule(const ScheduleFamily& family, std::size_t horizon,
                               const SeriesThresholds& thr) {
    if (horizon < 4) throw std::invalid_argument("classify_schedule: horizon too small");
    RegimeReport report;
    report.family = family.name;
    report.horizon = horizon;

    std::vector<double> gaps(horizon + 1);
    for (std::size_t k = 1; k <= horizon + 1; ++k) gaps[k - 1] = family.gap(k);

    std::vector<double> ratio_terms(horizon), gap_terms(horizon);
    for (std::size_t k = 1; k <= horizon; ++k) {
        gap_terms[k - 1] = gaps[k - 1];
        ratio_terms[k - 1] = gaps[k - 1] > 0.0 ? gaps[k] / gaps[k - 1] : 0.0;
    }

    double rs = 0.0, gs = 0.0;
    report.ratio_partial_sums.reserve(horizon);
    report.gap_partial_sums.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        rs += ratio_terms[k];
        gs += gap_terms[k];
        report.ratio_partial_sums.push_back(rs);
        report.gap_partial_sums.push_back(gs);
    }

    report.ratio_verdict = analyze_series(ratio_terms, thr);
    report.gap_verdict = analyze_series(gap_terms, thr);

    // d_i and b_i traces over the prefix where the schedule is valid
    double alpha_prod = 1.0, b_prod = 1.0;
    for (std::size_t i = 1; i <= horizon; ++i) {
        const double gi = gaps[i - 1], gi1 = gaps[i];
        if (!(gi > 0.0 && gi < 1.0 && gi1 < gi)) break;
        const double rc = (gi - gi1) / (1.0 - gi1);
        const double ai = 1.0 - gi;
        const double di = ai * gamma_fn(ai) * gamma_fn(gi) / gamma_fn(rc);
        report.d_values.push_back(di);
        b_prod *= std::pow(di, alpha_prod);
        report.b_products.push_back(b_prod);
        alpha_prod *= ai;
    }

    if (report.ratio_verdict == SeriesVerdict::Convergent)
        report.classification = Regime::Nontrivial;
    else if (report.gap_verdict == SeriesVerdict::Divergent)
        report.classification = Regime::Uncovered;
    else if (report.gap_verdict == SeriesVerdict::Convergent &&
             report.ratio_verdict == SeriesVerdict::Divergent)
        report.classification = Regime::Trivial;
    else
        report.classification = Regime::Indeterminate;
    return report;
}

void write_regime_report(std::ostream& out, const RegimeReport& report) {
    out << "kproc-regime-report 1\n";
    out << "family " << report.family << '\n';
    out << "horizon " << report.horizon << '\n';
    out << "classification " << to_string(report.classification) << '\n';
    out << "ratio_series " << to_string(report.ratio_verdict) << '\n';
    out << "gap_series " << to_string(report.gap_verdict) << '\n';
    out << "k ratio_partial_sum gap_partial_sum d_i b_product\n";
    for (std::size_t k = 0; k < report.ratio_partial_sums.size(); ++k) {
        out << (k + 1) << ' ' << report.ratio_partial_sums[k] << ' '
            << report.gap_partial_sums[k] << ' ';
        if (k < report.d_values.size())
            out << report.d_values[k] << ' ' << report.b_products[k] << '\n';
        else
            out << "- -\n";
    }
}

}  // namespace kproc
