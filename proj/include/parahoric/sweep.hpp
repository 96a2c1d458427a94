#pragma once

// Parameter sweeps over lemma cells: a small worker pool, per-(shape, x)
// histogram reuse and ordered report assembly.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "parahoric/intersection.hpp"

namespace parahoric {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). Exceptions from fn are rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    unsigned t = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    if (t <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
}

/// Condition-(D) normalized representatives of exponent spread <= bound,
/// one per central class, in the order of first appearance.
inline std::vector<AffineWeylElem> sweep_representatives(const BlockShape& shape, int f, int e0, int bound) {
    std::vector<AffineWeylElem> out;
    std::set<AffineWeylElem> seen;
    for (const auto& x : weyl_representatives(e0, f, bound)) {
        if (exponent_spread(x) > bound) continue;
        const auto n = condition_D_normalize(x, shape);
        if (seen.insert(n.centered()).second) out.push_back(n);
    }
    return out;
}

struct LemmaGrid {
    std::vector<int> qs;
    std::vector<int> fs;
    std::vector<int> e0s;
    int bound = 2;
    int max_R = 4;
    std::vector<std::vector<int>> shapes;  // empty: every intermediate shape
    std::string tau_filter = "all";        // or "support"
    int threads = 0;
};

struct LemmaSweepResult {
    std::vector<LemmaReport> cells;
    std::int64_t failures = 0;
};

namespace detail {

struct SweepBlock {
    FieldPtr field;
    int f = 1, e0 = 1;
    BlockShape shape;
    std::vector<AffineWeylElem> xs;
    std::vector<ProjectionHistogram> hist;  // hist[0] is x = identity
    std::vector<int> id_key;
    bool tabulated = true;
    std::string error;
};

inline std::vector<SweepBlock> sweep_blocks(const LemmaGrid& grid) {
    std::vector<SweepBlock> blocks;
    for (int q : grid.qs) {
        const auto field = field_of_order(q);
        for (int f : grid.fs)
            for (int e0 : grid.e0s) {
                if (f * e0 > grid.max_R) continue;
                for (const auto& shape : intermediate_shapes(f, e0)) {
                    if (!grid.shapes.empty() &&
                        std::find(grid.shapes.begin(), grid.shapes.end(), shape.parts()) == grid.shapes.end())
                        continue;
                    SweepBlock b;
                    b.field = field;
                    b.f = f;
                    b.e0 = e0;
                    b.shape = shape;
                    b.xs.push_back(AffineWeylElem::identity(f, e0));
                    for (const auto& x : sweep_representatives(shape, f, e0, grid.bound)) b.xs.push_back(x);
                    blocks.push_back(std::move(b));
                }
            }
    }
    return blocks;
}

}  // namespace detail

/// Every cell (q, f, e0, shape, rho_0, x, tau) of the grid, in that nesting
/// order. When a factor of L_B has no character table within the group
/// bound, one class-function cell per (rho_0, x) compares the prB
/// pushforwards of rho instead; equality there is equivalent to left = right
/// for every irreducible tau, and left/right report sum_tau deg(tau) dim Hom.
inline LemmaSweepResult lemma_sweep(const LemmaGrid& grid) {
    auto blocks = detail::sweep_blocks(grid);
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].hist.resize(blocks[b].xs.size());
        for (std::size_t i = 0; i < blocks[b].xs.size(); ++i) jobs.emplace_back(b, i);
    }
    std::vector<std::string> job_errors(jobs.size());
    parallel_for(jobs.size(), grid.threads, [&](std::size_t j) {
        auto& blk = blocks[jobs[j].first];
        try {
            const auto m = build_intersection(BlockShape::uniform(blk.f, blk.e0), blk.shape, blk.xs[jobs[j].second], blk.field);
            blk.hist[jobs[j].second] = reduced_histogram(m);
            if (jobs[j].second == 0) {
                blk.id_key = identity_key(m);
                blk.tabulated = LeviClassKeyer(blk.shape.parts(), blk.field).tabulated();
            }
        } catch (const std::exception& e) {
            job_errors[j] = e.what();
        }
    });
    for (std::size_t j = 0; j < jobs.size(); ++j)
        if (!job_errors[j].empty() && blocks[jobs[j].first].error.empty()) blocks[jobs[j].first].error = job_errors[j];

    LemmaSweepResult res;
    for (auto& blk : blocks) {
        const auto glf = TableCache::instance().table(blk.f, blk.field);
        for (int ri : cuspidal_indices(*glf)) {
            const auto rho = tensor_power((*glf)[ri], blk.e0);
            for (std::size_t xi = 1; xi < blk.xs.size(); ++xi) {
                auto base = [&] {
                    LemmaReport r;
                    r.q = blk.field->q();
                    r.f = blk.f;
                    r.e0 = blk.e0;
                    r.shape = blk.shape;
                    r.rho_index = ri;
                    r.x = blk.xs[xi];
                    return r;
                };
                if (!blk.error.empty()) {
                    auto r = base();
                    r.error = blk.error;
                    res.cells.push_back(r);
                    continue;
                }
                if (!blk.tabulated) {
                    auto r = base();
                    r.mode = "class-function";
                    try {
                        std::int64_t levi = 1;
                        for (int n : blk.shape.parts()) levi *= gl_order(n, blk.field->q());
                        r.left = regular_hom_dim(rho, blk.hist[xi], blk.id_key, levi);
                        r.right = regular_hom_dim(rho, blk.hist[0], blk.id_key, levi);
                        r.equal = r.left == r.right && same_pushforward(rho, blk.hist[xi], blk.hist[0]);
                    } catch (const std::exception& e) {
                        r.error = e.what();
                    }
                    res.cells.push_back(r);
                    continue;
                }
                for (const auto& [idx, tau] : levi_irreducibles(blk.shape.parts(), blk.field)) {
                    if (grid.tau_filter == "support" && !cuspidal_support_matches(tau, rho)) continue;
                    auto r = base();
                    r.tau_index = idx;
                    try {
                        r.left = hom_dim(rho, tau, blk.hist[xi]);
                        r.right = hom_dim(rho, tau, blk.hist[0]);
                        r.equal = r.left == r.right;
                    } catch (const std::exception& e) {
                        r.error = e.what();
                    }
                    res.cells.push_back(r);
                }
            }
        }
    }
    for (const auto& c : res.cells)
        if (!c.equal || !c.error.empty()) ++res.failures;
    return res;
}

/// Recomputes the left side of a sample of cells with random unit
/// identifications in prB; returns the indices of cells whose value changed.
inline std::vector<std::size_t> unit_scaling_check(const std::vector<LemmaReport>& cells, double fraction, std::uint64_t seed,
                                                   std::size_t* sampled = nullptr) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution pick(fraction);
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (pick(rng) && cells[i].error.empty()) chosen.push_back(i);
    if (sampled) *sampled = chosen.size();
    std::vector<std::size_t> changed;
    for (std::size_t i : chosen) {
        const auto& c = cells[i];
        const auto field = field_of_order(c.q);
        std::uniform_int_distribution<int> unit(1, c.q - 1);
        std::vector<Fq> t(c.x.R());
        for (auto& v : t) v = static_cast<Fq>(unit(rng));
        const auto m = build_intersection(BlockShape::uniform(c.f, c.e0), c.shape, c.x, field, kDefaultQuotientBound, t);
        const auto h = reduced_histogram(m);
        const auto rho = tensor_power(cuspidal_rho0(c.f, field, c.rho_index), c.e0);
        std::int64_t left = 0;
        if (c.mode == "class-function") {
            std::int64_t levi = 1;
            for (int n : c.shape.parts()) levi *= gl_order(n, c.q);
            left = regular_hom_dim(rho, h, identity_key(m), levi);
        } else {
            left = hom_dim(rho, levi_irreducible(c.shape, field, c.tau_index), h);
        }
        if (left != c.left) changed.push_back(i);
    }
    return changed;
}

}  // namespace parahoric
