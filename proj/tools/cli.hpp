#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pqdtw/elastic.hpp"

namespace pqdtw::cli {

/// "none" or "full" for unconstrained, "5%" for a percentage of `length`,
/// otherwise an absolute radius in samples.
Window parse_window(const std::string& text, std::size_t length);

/// Subspace count for a subspace size given as a percentage of D.
std::size_t subspaces_for_percent(double percent);

struct BenchResult {
    std::size_t length = 0;
    std::size_t series = 0;
    std::size_t segments = 0;
    std::size_t clusters = 0;
    double dtw_seconds = 0.0;
    double encode_seconds = 0.0;
    double pq_matrix_seconds = 0.0;

    double pq_seconds() const { return encode_seconds + pq_matrix_seconds; }
    double speedup() const { return dtw_seconds / pq_seconds(); }
};

/// Times the full pairwise matrix of `n` seeded random walks under
/// unconstrained DTW and under PQ (encoding plus symmetric look-ups). The
/// codebook is trained beforehand on an independent set of walks.
BenchResult bench_randomwalk(std::size_t length, std::size_t n, double subspace_percent,
                             std::size_t clusters, std::uint64_t seed);

/// Runs one command line (args[0] is the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pqdtw::cli
