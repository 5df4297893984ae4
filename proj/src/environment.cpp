#include "kproc/environment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kproc/errors.hpp"

namespace kproc {

double node_tail_mass(double c, double alpha, double smallest_kept) {
    if (!(c > 0.0)) throw std::domain_error("node_tail_mass: c > 0");
    if (alpha >= 1.0) throw std::domain_error("node_tail_mass: diverges for alpha >= 1");
    if (!(alpha > 0.0)) throw std::domain_error("node_tail_mass: alpha > 0");
    if (smallest_kept < 0.0) throw std::domain_error("node_tail_mass: cutoff >= 0");
    if (smallest_kept == 0.0) return 0.0;
    return c * std::pow(smallest_kept, 1.0 - alpha) / (1.0 - alpha);
}

std::vector<double> ppp_marks_from_arrivals(double c, double alpha,
                                            std::span<const double> arrivals) {
    // alpha may round to 1.0 for schedules approaching one; the inverse-tail
    // transform is continuous there
    if (!(c > 0.0 && alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("ppp_marks_from_arrivals: c > 0, alpha in (0,1]");
    std::vector<double> marks(arrivals.size());
    const double scale = c / alpha;
    for (std::size_t i = 0; i < arrivals.size(); ++i)
        marks[i] = std::pow(scale / arrivals[i], 1.0 / alpha);
    return marks;
}

std::vector<double> ordered_ppp_marks(double c, double alpha, std::size_t count,
                                      Stream& stream) {
    if (count == 0) throw std::domain_error("ordered_ppp_marks: count >= 1");
    std::vector<double> arrivals(count);
    double t = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        t += stream.exponential();
        arrivals[i] = t;
    }
    return ppp_marks_from_arrivals(c, alpha, arrivals);
}

std::uint64_t Environment::node_index(const NodePath& node) const {
    std::uint64_t idx = 0;
    for (std::uint32_t coord : node) {
        if (coord < 1 || coord > breadth_) throw PathNotFound("node_index: coordinate out of range");
        idx = idx * breadth_ + (coord - 1);
    }
    return idx;
}

NodePath Environment::node_path(std::size_t depth, std::uint64_t index) const {
    NodePath path(depth);
    for (std::size_t j = depth; j-- > 0;) {
        path[j] = static_cast<std::uint32_t>(index % breadth_) + 1u;
        index /= breadth_;
    }
    return path;
}

std::size_t Environment::nodes_at(std::size_t depth) const {
    std::size_t n = 1;
    for (std::size_t j = 0; j < depth; ++j) n *= breadth_;
    return n;
}

void Environment::check_path(const NodePath& node, std::size_t want_depth) const {
    if (node.size() != want_depth || want_depth > depth_)
        throw PathNotFound("environment: path depth out of range");
}

std::span<const double> Environment::child_marks(std::size_t parent_depth,
                                                 std::uint64_t parent_index) const {
    if (parent_depth >= depth_) throw PathNotFound("child_marks: no such level");
    const auto& level = marks_[parent_depth];
    return {level.data() + parent_index * breadth_, breadth_};
}

std::span<const double> Environment::child_marks(const NodePath& parent) const {
    return child_marks(parent.size(), node_index(parent));
}

double Environment::mark(std::size_t depth, std::uint64_t index) const {
    if (depth < 1 || depth > depth_) throw PathNotFound("mark: depth out of range");
    return marks_[depth - 1][index];
}

double Environment::mark(const NodePath& node) const {
    if (node.empty()) throw PathNotFound("mark: root carries no mark");
    return mark(node.size(), node_index(node));
}

double Environment::gbar(std::size_t depth, std::uint64_t index) const {
    if (depth == 0) return 1.0;
    if (depth > depth_) throw PathNotFound("gbar: depth out of range");
    return gbar_[depth - 1][index];
}

double Environment::gbar(const NodePath& node) const {
    return gbar(node.size(), node_index(node));
}

double Environment::tail_mass(std::size_t parent_depth, std::uint64_t parent_index) const {
    if (parent_depth >= depth_) throw PathNotFound("tail_mass: no such level");
    return tails_[parent_depth][parent_index];
}

double Environment::tail_mass(const NodePath& parent) const {
    return tail_mass(parent.size(), node_index(parent));
}

double Environment::cutoff(std::size_t parent_depth, std::uint64_t parent_index) const {
    const auto marks = child_marks(parent_depth, parent_index);
    return marks[marks.size() - 1];
}

double Environment::level_gbar_sum(std::size_t k) const {
    if (k == 0) return 1.0;
    if (k > depth_) throw PathNotFound("level_gbar_sum: depth out of range");
    double sum = 0.0;
    for (double g : gbar_[k - 1]) sum += g;
    return sum;
}

double Environment::cylinder_gbar_sum(const NodePath& base, std::size_t k) const {
    if (k < base.size() || k > depth_) throw PathNotFound("cylinder_gbar_sum: bad depth");
    const std::uint64_t base_idx = node_index(base);
    std::uint64_t block = 1;
    for (std::size_t j = base.size(); j < k; ++j) block *= breadth_;
    if (k == 0) return 1.0;
    const auto& level = gbar_[k - 1];
    double sum = 0.0;
    for (std::uint64_t i = base_idx * block; i < (base_idx + 1) * block; ++i) sum += level[i];
    return sum;
}

double Environment::estimate_W(const NodePath& base, std::size_t up_to_depth) const {
    const std::size_t k = base.size();
    if (up_to_depth < k || up_to_depth > depth_)
        throw PathNotFound("estimate_W: depth out of range");
    const double a_exp = schedule_.alpha(up_to_depth + 1);
    const double base_gbar = gbar(base);
    if (up_to_depth == k) return 1.0;
    const std::uint64_t base_idx = node_index(base);
    std::uint64_t block = 1;
    for (std::size_t j = k; j < up_to_depth; ++j) block *= breadth_;
    const auto& level = gbar_[up_to_depth - 1];
    double sum = 0.0;
    for (std::uint64_t i = base_idx * block; i < (base_idx + 1) * block; ++i)
        sum += std::pow(level[i] / base_gbar, a_exp);
    return sum;
}

std::vector<double> Environment::estimate_W_level(std::size_t k, std::size_t up_to_depth) const {
    if (up_to_depth < k || up_to_depth > depth_)
        throw PathNotFound("estimate_W_level: depth out of range");
    const std::size_t count = nodes_at(k);
    std::vector<double> out(count, 1.0);
    if (up_to_depth == k) return out;
    const double a_exp = schedule_.alpha(up_to_depth + 1);
    std::uint64_t block = 1;
    for (std::size_t j = k; j < up_to_depth; ++j) block *= breadth_;
    const auto& level = gbar_[up_to_depth - 1];
    for (std::uint64_t b = 0; b < count; ++b) {
        const double base_gbar = gbar(k, b);
        double sum = 0.0;
        for (std::uint64_t i = b * block; i < (b + 1) * block; ++i)
            sum += std::pow(level[i] / base_gbar, a_exp);
        out[b] = sum;
    }
    return out;
}

void Environment::rebuild_derived() {
    gbar_.assign(depth_, {});
    tails_.assign(depth_, {});
    std::size_t parents = 1;
    for (std::size_t k = 1; k <= depth_; ++k) {
        const auto& level = marks_[k - 1];
        auto& g = gbar_[k - 1];
        g.resize(level.size());
        for (std::size_t p = 0; p < parents; ++p) {
            const double parent_gbar = (k == 1) ? 1.0 : gbar_[k - 2][p];
            for (std::size_t x = 0; x < breadth_; ++x)
                g[p * breadth_ + x] = parent_gbar * level[p * breadth_ + x];
        }
        auto& t = tails_[k - 1];
        t.resize(parents);
        const double c = schedule_.constant_c(k);
        // gap-aware form of node_tail_mass, c * cutoff^gap / gap, stays
        // finite when alpha_k rounds to 1.0
        const double gap_k = schedule_.gap(k);
        for (std::size_t p = 0; p < parents; ++p)
            t[p] = c * std::pow(level[p * breadth_ + breadth_ - 1], gap_k) / gap_k;
        parents *= breadth_;
    }
}

Environment generate_environment(const AlphaSchedule& schedule, std::size_t depth,
                                 std::size_t breadth, const SeedPlan& plan,
                                 std::size_t node_budget) {
    if (depth < 1) throw std::invalid_argument("generate_environment: depth >= 1");
    if (breadth < 1) throw std::invalid_argument("generate_environment: breadth >= 1");
    if (schedule.max_depth() < depth)
        throw std::invalid_argument("generate_environment: schedule too short for depth");

    std::size_t total = 0, level_count = 1;
    for (std::size_t k = 1; k <= depth; ++k) {
        if (level_count > node_budget / breadth)
            throw BudgetExceeded("generate_environment: node budget exceeded");
        level_count *= breadth;
        total += level_count;
        if (total > node_budget)
            throw BudgetExceeded("generate_environment: node budget exceeded");
    }

    Environment env;
    env.schedule_ = schedule.truncated(depth + 1);
    env.depth_ = depth;
    env.breadth_ = breadth;
    env.plan_ = plan;
    env.marks_.resize(depth);

    std::size_t parents = 1;
    for (std::size_t k = 1; k <= depth; ++k) {
        const double c = schedule.constant_c(k);
        const double alpha = schedule.alpha(k);
        auto& level = env.marks_[k - 1];
        level.resize(parents * breadth);
        for (std::size_t p = 0; p < parents; ++p) {
            Stream stream(plan, StreamKey{StreamPurpose::EnvMarks, k, p, 0});
            auto marks = ordered_ppp_marks(c, alpha, breadth, stream);
            std::copy(marks.begin(), marks.end(), level.begin() + p * breadth);
        }
        parents *= breadth;
    }
    env.rebuild_derived();
    return env;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_node_lines(std::ostream& out, const Environment& env, std::size_t depth,
                      std::uint64_t index, const std::string& label) {
    out << "node " << label;
    for (double m : env.child_marks(depth, index)) out << ' ' << format_double(m);
    out << '\n';
    if (depth + 1 < env.depth()) {
        for (std::size_t x = 1; x <= env.breadth(); ++x) {
            std::string child = label == "-" ? std::to_string(x)
                                             : label + "." + std::to_string(x);
            write_node_lines(out, env, depth + 1, index * env.breadth() + (x - 1), child);
        }
    }
}

}  // namespace

void write_environment(std::ostream& out, const Environment& env) {
    out << "kproc-environment 1\n";
    out << "alphas";
    for (std::size_t k = 1; k <= env.schedule().size(); ++k)
        out << ' ' << format_double(env.schedule().alpha(k));
    out << '\n';
    out << "depth " << env.depth() << '\n';
    out << "breadth " << env.breadth() << '\n';
    out << "base_seed " << env.seed_plan().base_seed << '\n';
    write_node_lines(out, env, 0, 0, "-");
}

Environment read_environment(std::istream& in) {
    std::string line, tok;
    if (!std::getline(in, line) || line != "kproc-environment 1")
        throw std::runtime_error("read_environment: bad header");

    Environment env;
    std::vector<double> alphas;
    std::size_t depth = 0, breadth = 0;
    std::uint64_t base_seed = 0;

    for (int i = 0; i < 4; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("read_environment: truncated");
        std::istringstream ls(line);
        ls >> tok;
        if (tok == "alphas") {
            double a;
            while (ls >> a) alphas.push_back(a);
        } else if (tok == "depth") {
            ls >> depth;
        } else if (tok == "breadth") {
            ls >> breadth;
        } else if (tok == "base_seed") {
            ls >> base_seed;
        } else {
            throw std::runtime_error("read_environment: unexpected key " + tok);
        }
    }
    if (alphas.empty() || depth == 0 || breadth == 0)
        throw std::runtime_error("read_environment: missing fields");

    env.schedule_ = AlphaSchedule::from_alphas(alphas);
    env.depth_ = depth;
    env.breadth_ = breadth;
    env.plan_.base_seed = base_seed;
    env.marks_.resize(depth);
    std::size_t parents = 1;
    for (std::size_t k = 1; k <= depth; ++k) {
        env.marks_[k - 1].assign(parents * breadth, 0.0);
        parents *= breadth;
    }

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ls >> tok;
        if (tok != "node") throw std::runtime_error("read_environment: expected node line");
        std::string label;
        ls >> label;
        NodePath parent;
        if (label != "-") {
            std::istringstream ps(label);
            std::string part;
            while (std::getline(ps, part, '.'))
                parent.push_back(static_cast<std::uint32_t>(std::stoul(part)));
        }
        const std::size_t pd = parent.size();
        if (pd >= depth) throw std::runtime_error("read_environment: node too deep");
        std::uint64_t idx = 0;
        for (std::uint32_t c : parent) idx = idx * breadth + (c - 1);
        for (std::size_t x = 0; x < breadth; ++x) {
            double m;
            if (!(ls >> m)) throw std::runtime_error("read_environment: short mark list");
            env.marks_[pd][idx * breadth + x] = m;
        }
    }
    env.rebuild_derived();
    return env;
}

void save_environment(const std::string& path, const Environment& env) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_environment: cannot open " + path);
    write_environment(out, env);
}

Environment load_environment(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_environment: cannot open " + path);
    return read_environment(in);
}

}  // namespace kproc
