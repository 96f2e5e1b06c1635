#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dim/graph.hpp"
#include "dim/pattern.hpp"

namespace dim {

/// mt19937_64 with bounded integers drawn by rejection, so the stream of
/// values is the same on every platform (std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi);
    /// Uniform in [0, 1) with 53 random bits.
    double unit();
    bool chance(double p) { return unit() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// A pattern that generated graphs must not contain.
struct ClassFilter {
    Pattern pattern = Pattern::Spider;
    int legs[3] = {1, 2, 4};  // Spider only

    static ClassFilter spider(int i, int j, int k);
    static ClassFilter of(Pattern p);
    std::string name() const;
};

/// S_{1,2,4} and K4.
std::vector<ClassFilter> default_filters();

std::optional<PatternWitness> find_filter(const Graph& g, const ClassFilter& f);
/// First filter present in g, if any.
std::optional<PatternWitness> first_violation(const Graph& g, const std::vector<ClassFilter>& filters);

enum class GenMode { Planted, Rejection, Gadget };

struct GenSpec {
    Vertex n = 10;
    double density = 0.3;        // edge probability; planted: for extra I-V(M) edges
    std::uint64_t seed = 1;
    GenMode mode = GenMode::Planted;
    std::string gadget;          // Gadget mode
    std::vector<ClassFilter> filters = default_filters();
    int retry_budget = 1000;
    int max_weight = 0;          // 0: unweighted, else integer weights in 1..max_weight
    Vertex cluster = 12;         // planted: largest connected piece
    bool repair = true;          // rejection: delete pattern edges instead of resampling
};

struct GenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlantedInstance {
    Graph graph;
    EdgeSet matching;
};

/// Disjoint union of connected pieces, each built from M-edges (Black pairs)
/// and an independent set I joined only to V(M), so the planted M is always
/// a d.i.m. Pieces containing a filter pattern are redrawn. Vertices are
/// randomly relabeled. Throws GenError when a piece exhausts the retry budget.
PlantedInstance generate_planted(const GenSpec& spec);

struct RejectionResult {
    std::optional<Graph> graph;  // empty when the budget ran out
    int attempts = 0;
    int repairs = 0;
};

/// G(n, density), resampled (or repaired by deleting edges of a found
/// pattern) until no filter pattern remains.
RejectionResult generate_rejection(const GenSpec& spec);

/// Named small graphs: diamond (v1,v2,v3,u), butterfly (v1..v4,u), gem
/// (v1..v4,u), claw, K4, C<k> for 3<=k<=12, P<k> for 1<=k<=12 and S_{i,j,k}
/// with i+j+k<=8 (center 0, then the legs outward in order). Throws
/// std::invalid_argument for anything else.
Graph gadget(const std::string& name);

/// Dispatches on spec.mode; Rejection throws GenError when the budget runs out.
PlantedInstance generate(const GenSpec& spec);

}  // namespace dim
