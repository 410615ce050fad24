#pragma once

#include <span>
#include <vector>

namespace tlo {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes increasing.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule of the given order (1..64).
const GaussRule& gauss_legendre(int order);

/// Sorted, deduplicated panel edges: `base` clipped to [lo, hi], plus every
/// point of `extra` strictly inside, plus lo and hi. Points closer than
/// `merge_tol` * (hi - lo) collapse into one edge.
std::vector<double> merge_edges(std::span<const double> base, std::span<const double> extra, double lo,
                                double hi, double merge_tol = 1e-13);

/// Appends the nodes and weights of a composite Gauss rule over consecutive
/// panels [edges[i], edges[i+1]].
void append_composite(std::span<const double> edges, int order, std::vector<double>& nodes,
                      std::vector<double>& weights);

}  // namespace tlo
