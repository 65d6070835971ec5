// SPDX-License-Identifier: Apache-2.0
#include "spade/knn.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "spade/errors.hpp"
#include "spade/io.hpp"
#include "spade/point_set.hpp"
#include "spade/rng.hpp"

namespace spade {

PointSet::PointSet(RowMatrix coords) : coords_(std::move(coords)) {
    if (coords_.rows() < 1) throw ParameterError("PointSet: need at least one point");
    if (!coords_.allFinite()) throw ParameterError("PointSet: non-finite coordinate");
}

namespace {

void check_k(const PointSet& pts, int k) {
    if (k < 1 || k >= pts.n_points()) {
        throw ParameterError("knn: k=" + std::to_string(k) + " outside [1," +
                             std::to_string(pts.n_points()) + ")");
    }
}

Graph symmetrize(int n, const std::vector<std::vector<int>>& out_neighbors) {
    std::set<std::pair<int, int>> pairs;
    for (int p = 0; p < n; ++p) {
        for (int q : out_neighbors[p]) {
            pairs.emplace(std::min(p, q), std::max(p, q));
        }
    }
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
    return Graph(n, std::move(edges));
}

// (squared distance, id); the id makes every comparison a total order so
// ties break toward the lower node id.
using DistId = std::pair<double, int>;

std::vector<std::vector<int>> exact_neighbor_lists(const PointSet& pts, int k) {
    const int n = pts.n_points();
    std::vector<std::vector<int>> out(n);
    std::vector<DistId> dists(n - 1);
    for (int p = 0; p < n; ++p) {
        int m = 0;
        for (int q = 0; q < n; ++q) {
            if (q == p) continue;
            dists[m++] = {pts.squared_distance(p, q), q};
        }
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        std::sort(dists.begin(), dists.begin() + k);
        out[p].reserve(k);
        for (int i = 0; i < k; ++i) out[p].push_back(dists[i].second);
    }
    return out;
}

// Hierarchical navigable-small-world index; layered greedy search with a
// beam of `ef` candidates per layer. Level draws come from a fixed-seed
// generator so builds are reproducible.
class HnswIndex {
public:
    HnswIndex(const PointSet& pts, int ef_construction, int max_links)
        : pts_(pts),
          ef_construction_(ef_construction),
          max_links_(max_links),
          level_scale_(1.0 / std::log(static_cast<double>(max_links))),
          visited_stamp_(pts.n_points(), 0),
          rng_(0x5eadbeef) {
        links_.resize(pts.n_points());
        for (int p = 0; p < pts_.n_points(); ++p) insert(p);
    }

    std::vector<int> query(int p, int k, int ef) const {
        auto found = search_from_top(p, std::max(ef, k + 1));
        std::sort(found.begin(), found.end());
        std::vector<int> out;
        for (const auto& [d, q] : found) {
            if (q == p) continue;
            out.push_back(q);
            if (static_cast<int>(out.size()) == k) break;
        }
        return out;
    }

private:
    double dist(int a, int b) const { return pts_.squared_distance(a, b); }

    int random_level() {
        double u = rng_.uniform();
        while (u <= 0.0) u = rng_.uniform();
        return static_cast<int>(-std::log(u) * level_scale_);
    }

    int link_cap(int level) const { return level == 0 ? 2 * max_links_ : max_links_; }

    // Beam search over one layer starting from `entry`; returns up to `ef`
    // closest (dist, id) pairs sorted ascending.
    std::vector<DistId> search_layer(int target, int entry, int ef, int level) const {
        ++visit_epoch_;
        auto visit = [&](int q) {
            if (visited_stamp_[q] == visit_epoch_) return false;
            visited_stamp_[q] = visit_epoch_;
            return true;
        };
        std::priority_queue<DistId, std::vector<DistId>, std::greater<>> candidates;
        std::priority_queue<DistId> best;  // max-heap: worst of the beam on top
        visit(entry);
        const DistId e{dist(target, entry), entry};
        candidates.push(e);
        best.push(e);
        while (!candidates.empty()) {
            DistId c = candidates.top();
            if (c > best.top() && static_cast<int>(best.size()) >= ef) break;
            candidates.pop();
            for (int q : links_[c.second][level]) {
                if (!visit(q)) continue;
                DistId cand{dist(target, q), q};
                if (static_cast<int>(best.size()) < ef || cand < best.top()) {
                    candidates.push(cand);
                    best.push(cand);
                    if (static_cast<int>(best.size()) > ef) best.pop();
                }
            }
        }
        std::vector<DistId> out;
        out.reserve(best.size());
        while (!best.empty()) {
            out.push_back(best.top());
            best.pop();
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<DistId> search_from_top(int target, int ef) const {
        int entry = entry_point_;
        for (int level = top_level_; level > 0; --level) {
            entry = search_layer(target, entry, 1, level).front().second;
        }
        return search_layer(target, entry, ef, /*level=*/0);
    }

    // Keeps candidates that are closer to the target than to anyone already
    // selected; diversifies links so the graph stays navigable.
    std::vector<int> select_links(std::vector<DistId> candidates, int cap) const {
        std::sort(candidates.begin(), candidates.end());
        std::vector<int> chosen;
        for (const auto& [d, q] : candidates) {
            if (static_cast<int>(chosen.size()) >= cap) break;
            bool dominated = false;
            for (int c : chosen) {
                if (dist(q, c) < d) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) chosen.push_back(q);
        }
        // Backfill with the nearest pruned candidates if the heuristic was
        // too aggressive.
        if (static_cast<int>(chosen.size()) < cap) {
            for (const auto& [d, q] : candidates) {
                if (static_cast<int>(chosen.size()) >= cap) break;
                if (std::find(chosen.begin(), chosen.end(), q) == chosen.end()) {
                    chosen.push_back(q);
                }
            }
        }
        return chosen;
    }

    void insert(int p) {
        const int level = random_level();
        links_[p].assign(level + 1, {});
        if (entry_point_ < 0) {
            entry_point_ = p;
            top_level_ = level;
            return;
        }
        int entry = entry_point_;
        for (int l = top_level_; l > level; --l) {
            entry = search_layer(p, entry, 1, l).front().second;
        }
        for (int l = std::min(level, top_level_); l >= 0; --l) {
            auto found = search_layer(p, entry, ef_construction_, l);
            entry = found.front().second;
            auto chosen = select_links(found, link_cap(l));
            links_[p][l] = chosen;
            for (int q : chosen) {
                auto& back = links_[q][l];
                back.push_back(p);
                if (static_cast<int>(back.size()) > link_cap(l)) {
                    std::vector<DistId> rated;
                    rated.reserve(back.size());
                    for (int r : back) rated.push_back({dist(q, r), r});
                    back = select_links(std::move(rated), link_cap(l));
                }
            }
        }
        if (level > top_level_) {
            top_level_ = level;
            entry_point_ = p;
        }
    }

    const PointSet& pts_;
    int ef_construction_;
    int max_links_;
    double level_scale_;
    std::vector<std::vector<std::vector<int>>> links_;  // node -> level -> neighbors
    int entry_point_ = -1;
    int top_level_ = -1;
    mutable std::vector<uint32_t> visited_stamp_;
    mutable uint32_t visit_epoch_ = 0;
    Rng rng_;
};

}  // namespace

Graph knn_exact(const PointSet& pts, int k) {
    check_k(pts, k);
    return symmetrize(pts.n_points(), exact_neighbor_lists(pts, k));
}

Graph knn_approx(const PointSet& pts, int k, double quality) {
    check_k(pts, k);
    if (!(quality > 0.0) || quality > 1.0) {
        throw ParameterError("knn_approx: quality must lie in (0,1]");
    }
    if (pts.n_points() < kKnnExactFallback) {
        return knn_exact(pts, k);
    }
    const int ef_construction = static_cast<int>(std::lround(64.0 + 192.0 * quality));
    const int ef_search =
        std::max(k + 16, static_cast<int>(std::lround((32.0 + 160.0 * quality) +
                                                      2.0 * k * quality)));
    HnswIndex index(pts, ef_construction, /*max_links=*/16);
    std::vector<std::vector<int>> out(pts.n_points());
    for (int p = 0; p < pts.n_points(); ++p) out[p] = index.query(p, k, ef_search);
    return symmetrize(pts.n_points(), out);
}

Graph ensure_nullspace_containment(const Graph& g_y, const Graph& g_x,
                                   const PointSet& pts, double link_weight) {
    if (g_y.n_nodes() != g_x.n_nodes() || g_y.n_nodes() != pts.n_points()) {
        throw ParameterError("ensure_nullspace_containment: node/point counts differ");
    }
    const int n = g_y.n_nodes();
    int n_comp_y = 0;
    std::vector<int> comp_y = connected_components(g_y, &n_comp_y);
    if (n_comp_y == 1) return g_y;

    // Group the components of g_y that must merge: those sharing a g_x
    // component. Containment holds iff each group is already one component.
    std::vector<int> group(n_comp_y);
    for (int c = 0; c < n_comp_y; ++c) group[c] = c;
    auto find = [&](int c) {
        while (group[c] != c) c = group[c] = group[group[c]];
        return c;
    };
    int n_comp_x = 0;
    std::vector<int> comp_x = connected_components(g_x, &n_comp_x);
    std::vector<int> rep(n_comp_x, -1);
    for (int v = 0; v < n; ++v) {
        int& r = rep[comp_x[v]];
        if (r < 0) {
            r = comp_y[v];
        } else {
            group[find(comp_y[v])] = find(r);
        }
    }

    RowMatrix centroids = RowMatrix::Zero(n_comp_y, pts.dim());
    std::vector<int> sizes(n_comp_y, 0);
    for (int v = 0; v < n; ++v) {
        centroids.row(comp_y[v]) += pts.point(v);
        ++sizes[comp_y[v]];
    }
    for (int c = 0; c < n_comp_y; ++c) centroids.row(c) /= sizes[c];

    std::vector<Edge> edges = g_y.edges();
    int added = 0;
    for (int g = 0; g < n_comp_y; ++g) {
        if (find(g) != g) continue;
        std::vector<int> members;
        for (int c = 0; c < n_comp_y; ++c) {
            if (find(c) == g) members.push_back(c);
        }
        if (members.size() < 2) continue;
        // Prim-style tree over centroid distances links the group.
        std::vector<bool> in_tree(members.size(), false);
        in_tree[0] = true;
        for (size_t step = 1; step < members.size(); ++step) {
            double best = std::numeric_limits<double>::infinity();
            int best_in = -1, best_out = -1;
            for (size_t i = 0; i < members.size(); ++i) {
                if (!in_tree[i]) continue;
                for (size_t j = 0; j < members.size(); ++j) {
                    if (in_tree[j]) continue;
                    const double d =
                        (centroids.row(members[i]) - centroids.row(members[j])).squaredNorm();
                    if (d < best) {
                        best = d;
                        best_in = static_cast<int>(i);
                        best_out = static_cast<int>(j);
                    }
                }
            }
            in_tree[best_out] = true;
            const int ca = members[best_in], cb = members[best_out];
            // Endpoints: in each component, the node nearest to the other
            // component's centroid (first minimum, i.e. lowest id on ties).
            int node_a = -1, node_b = -1;
            double da = std::numeric_limits<double>::infinity();
            double db = std::numeric_limits<double>::infinity();
            for (int v = 0; v < n; ++v) {
                if (comp_y[v] == ca) {
                    const double d = (pts.point(v) - centroids.row(cb)).squaredNorm();
                    if (d < da) {
                        da = d;
                        node_a = v;
                    }
                } else if (comp_y[v] == cb) {
                    const double d = (pts.point(v) - centroids.row(ca)).squaredNorm();
                    if (d < db) {
                        db = d;
                        node_b = v;
                    }
                }
            }
            edges.push_back({node_a, node_b, link_weight});
            ++added;
        }
    }
    if (added == 0) return g_y;
    warn("ensure_nullspace_containment: added " + std::to_string(added) +
         " link edges of weight " + format_double(link_weight));
    return Graph(n, std::move(edges));
}

}  // namespace spade
