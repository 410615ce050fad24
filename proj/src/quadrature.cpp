#include "tlo/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/legendre.hpp>

namespace tlo {

namespace {

constexpr int kMaxOrder = 64;

GaussRule make_rule(int order) {
    GaussRule rule;
    // Boost returns the non-negative zeros only (zero included for odd orders).
    const auto half = boost::math::legendre_p_zeros<double>(order);
    std::vector<double> positive(half.begin(), half.end());
    std::sort(positive.begin(), positive.end());
    auto weight = [order](double x) {
        const double dp = boost::math::legendre_p_prime<double>(order, x);
        return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
        if (*it == 0.0) continue;
        rule.nodes.push_back(-*it);
        rule.weights.push_back(weight(*it));
    }
    for (double x : positive) {
        rule.nodes.push_back(x);
        rule.weights.push_back(weight(x));
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > kMaxOrder)
        throw std::invalid_argument("gauss_legendre: order must be in [1, 64], got " + std::to_string(order));
    static std::array<GaussRule, kMaxOrder + 1> cache;
    static std::array<std::once_flag, kMaxOrder + 1> flags;
    std::call_once(flags[order], [order] { cache[order] = make_rule(order); });
    return cache[order];
}

std::vector<double> merge_edges(std::span<const double> base, std::span<const double> extra, double lo,
                                double hi, double merge_tol) {
    if (!(hi > lo)) throw std::invalid_argument("merge_edges: empty interval");
    std::vector<double> all;
    all.reserve(base.size() + extra.size() + 2);
    all.push_back(lo);
    all.push_back(hi);
    for (double x : base)
        if (x > lo && x < hi) all.push_back(x);
    for (double x : extra)
        if (std::isfinite(x) && x > lo && x < hi) all.push_back(x);
    std::sort(all.begin(), all.end());

    const double tol = merge_tol * (hi - lo);
    std::vector<double> edges;
    edges.reserve(all.size());
    for (double x : all) {
        if (edges.empty() || x - edges.back() > tol) edges.push_back(x);
    }
    // The last edge must be hi exactly.
    if (edges.back() != hi) {
        if (edges.size() > 1 && hi - edges[edges.size() - 2] <= tol) edges.pop_back();
        edges.back() = hi;
    }
    return edges;
}

void append_composite(std::span<const double> edges, int order, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    const GaussRule& rule = gauss_legendre(order);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p];
        const double b = edges[p + 1];
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            nodes.push_back(mid + half * rule.nodes[i]);
            weights.push_back(half * rule.weights[i]);
        }
    }
}

}  // namespace tlo
