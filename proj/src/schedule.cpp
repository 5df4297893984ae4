#include "kproc/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kproc/special_functions.hpp"

namespace kproc {

double constant_c(double alpha_k, double alpha_k1) {
    if (!(alpha_k > 0.0 && alpha_k < alpha_k1 && alpha_k1 <= 1.0))
        throw std::domain_error("constant_c: requires 0 < alpha_k < alpha_{k+1} <= 1");
    return alpha_k / gamma_fn(1.0 - alpha_k / alpha_k1);
}

AlphaSchedule AlphaSchedule::from_alphas(const std::vector<double>& alphas) {
    std::vector<double> gaps(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) gaps[i] = 1.0 - alphas[i];
    return from_gaps(std::move(gaps));
}

AlphaSchedule AlphaSchedule::from_gaps(std::vector<double> gaps) {
    if (gaps.size() < 2)
        throw std::invalid_argument("AlphaSchedule: need at least two exponents");
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const bool last = (i + 1 == gaps.size());
        if (!(gaps[i] < 1.0))
            throw std::invalid_argument("AlphaSchedule: alpha_k must be positive");
        if (!(gaps[i] > 0.0) && !last)
            throw std::invalid_argument("AlphaSchedule: alpha_k < 1 except possibly the last");
        if (gaps[i] < 0.0)
            throw std::invalid_argument("AlphaSchedule: alpha_k <= 1");
        if (i > 0 && !(gaps[i] < gaps[i - 1]))
            throw std::invalid_argument("AlphaSchedule: exponents must be strictly increasing");
    }
    return AlphaSchedule(std::move(gaps));
}

double AlphaSchedule::alpha(std::size_t k) const {
    if (k < 1 || k > gaps_.size()) throw std::out_of_range("AlphaSchedule::alpha");
    return 1.0 - gaps_[k - 1];
}

double AlphaSchedule::gap(std::size_t k) const {
    if (k < 1 || k > gaps_.size()) throw std::out_of_range("AlphaSchedule::gap");
    return gaps_[k - 1];
}

double AlphaSchedule::ratio_complement(std::size_t k) const {
    if (k < 1 || k + 1 > gaps_.size()) throw std::out_of_range("AlphaSchedule::ratio_complement");
    return (gaps_[k - 1] - gaps_[k]) / (1.0 - gaps_[k]);
}

double AlphaSchedule::constant_c(std::size_t k) const {
    const double rc = ratio_complement(k);
    if (!(rc > 0.0)) throw std::domain_error("constant_c: alpha_k/alpha_{k+1} hits 1");
    return alpha(k) / gamma_fn(rc);
}

AlphaSchedule AlphaSchedule::truncated(std::size_t count) const {
    if (count < 2 || count > gaps_.size()) throw std::out_of_range("AlphaSchedule::truncated");
    return AlphaSchedule(std::vector<double>(gaps_.begin(), gaps_.begin() + count));
}

ScheduleFamily geometric_gap_family(double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("geometric_gap_family: ratio in (0,1)");
    std::ostringstream name;
    name << "geometric-gap r=" << ratio;
    return {name.str(), [ratio](std::size_t k) { return std::pow(ratio, static_cast<double>(k)); }};
}

ScheduleFamily double_exponential_gap_family() {
    return {"double-exponential-gap", [](std::size_t k) {
                // 2^(-2^k); underflows to 0 for k >= 10, which classification
                // treats as a converged tail.
                return std::exp2(-std::exp2(static_cast<double>(k)));
            }};
}

ScheduleFamily harmonic_gap_family() {
    return {"harmonic-gap", [](std::size_t k) { return 1.0 / static_cast<double>(k); }};
}

ScheduleFamily parse_family(const std::string& spec) {
    std::istringstream in(spec);
    std::string head;
    in >> head;
    if (head == "geometric-gap") {
        double r = 0.5;
        std::string arg;
        while (in >> arg) {
            if (arg.rfind("r=", 0) == 0) r = std::stod(arg.substr(2));
        }
        return geometric_gap_family(r);
    }
    if (head == "double-exponential-gap") return double_exponential_gap_family();
    if (head == "harmonic-gap") return harmonic_gap_family();
    throw std::invalid_argument("parse_family: unknown family '" + spec + "'");
}

AlphaSchedule schedule_from_family(const ScheduleFamily& family, std::size_t count) {
    std::vector<double> gaps(count);
    for (std::size_t k = 1; k <= count; ++k) gaps[k - 1] = family.gap(k);
    return AlphaSchedule::from_gaps(std::move(gaps));
}

}  // namespace kproc
