#pragma once

#include <span>
#include <vector>

#include "hampack/graph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// G(n,p): every pair is an edge independently with probability p.
/// Throws InvalidArgument for n < 1 or p outside [0,1].
Graph gen_gnp(Vertex n, double p, Seed seed);

/// G(n,n;p) on left = 0..n-1, right = n..2n-1.
BipartitePair gen_bipartite_gnnp(Vertex n, double p, Seed seed);

/// Edges of a G(|vertices|, p) sample on the listed vertices, drawn from rng.
/// Uses geometric skipping below p = 0.1 and per-pair coins above.
std::vector<Edge> sample_pairs(std::span<const Vertex> vertices, double p, Rng& rng);

}  // namespace hampack
