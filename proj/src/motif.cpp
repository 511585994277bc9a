#include "nilmevt/motif.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace nilmevt {

namespace {

using Key = std::tuple<int, int, int, int>;

Key event_key(const Event& e) {
    return {e.start_idx, e.end_idx, e.window_len, static_cast<int>(e.stage)};
}

// Earliest-end greedy; maximizes the number of non-overlapping events.
std::vector<Event> max_nonoverlapping(std::vector<Event> events) {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.end_idx, a.start_idx) < std::tie(b.end_idx, b.start_idx);
    });
    std::vector<Event> picked;
    int last_end = -1;
    for (const auto& e : events) {
        if (e.start_idx > last_end) {
            picked.push_back(e);
            last_end = e.end_idx;
        }
    }
    return picked;
}

}  // namespace

double Motif::mean_length() const {
    if (members.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : members) sum += e.length();
    return sum / static_cast<double>(members.size());
}

std::vector<std::vector<int>> cluster_events(const std::vector<EventFeatures>& features,
                                             double bandwidth) {
    const int n = static_cast<int>(features.size());
    std::vector<std::vector<int>> clusters;
    if (n == 0) return clusters;

    // z-score per dimension; a degenerate dimension stays at zero.
    std::vector<std::array<double, 3>> pts(n);
    for (int i = 0; i < n; ++i)
        pts[i] = {features[i].delta_p, features[i].delta_q, features[i].range_p};
    for (int d = 0; d < 3; ++d) {
        double mean = 0.0;
        for (const auto& p : pts) mean += p[d];
        mean /= n;
        double var = 0.0;
        for (const auto& p : pts) var += (p[d] - mean) * (p[d] - mean);
        double sd = std::sqrt(var / n);
        for (auto& p : pts) p[d] = sd > 0.0 ? (p[d] - mean) / sd : 0.0;
    }

    auto dist2 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
        return s;
    };

    const double bw2 = bandwidth * bandwidth;
    std::vector<std::array<double, 3>> modes(n);
    for (int i = 0; i < n; ++i) {
        std::array<double, 3> x = pts[i];
        for (int iter = 0; iter < 500; ++iter) {
            std::array<double, 3> m{0, 0, 0};
            int cnt = 0;
            for (const auto& p : pts) {
                if (dist2(x, p) <= bw2) {
                    for (int d = 0; d < 3; ++d) m[d] += p[d];
                    ++cnt;
                }
            }
            for (int d = 0; d < 3; ++d) m[d] /= cnt;  // cnt >= 1 (x started on a point)
            if (dist2(m, x) < 1e-12) {
                x = m;
                break;
            }
            x = m;
        }
        modes[i] = x;
    }

    // Group points whose converged modes coincide (within half a bandwidth).
    const double merge2 = bw2 / 4.0;
    std::vector<int> label(n, -1);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
            if (dist2(modes[i], modes[clusters[c].front()]) <= merge2) {
                label[i] = c;
                break;
            }
        }
        if (label[i] < 0) {
            label[i] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[label[i]].push_back(i);
    }
    return clusters;
}

std::vector<Event> dedupe_cluster(const std::vector<Event>& cluster) {
    const int n = static_cast<int>(cluster.size());
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = ncomp;
        std::vector<int> stack{i};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                if (comp[v] < 0 && events_overlap(cluster[u], cluster[v])) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
            }
        }
        ++ncomp;
    }

    std::vector<int> best(ncomp, -1);
    for (int i = 0; i < n; ++i) {
        int c = comp[i];
        if (best[c] < 0) {
            best[c] = i;
            continue;
        }
        const Event& a = cluster[i];
        const Event& b = cluster[best[c]];
        auto rank = [](const Event& e) { return std::tuple(e.length(), e.window_len, e.start_idx); };
        if (rank(a) < rank(b)) best[c] = i;
    }

    std::vector<Event> kept;
    kept.reserve(ncomp);
    std::vector<char> chosen(n, 0);
    for (int c = 0; c < ncomp; ++c) chosen[best[c]] = 1;
    for (int i = 0; i < n; ++i)
        if (chosen[i]) kept.push_back(cluster[i]);
    return kept;
}

std::vector<Motif> form_motifs(const std::vector<std::vector<Event>>& clusters, int n_th) {
    std::vector<Motif> motifs;
    for (const auto& c : clusters) {
        if (static_cast<int>(c.size()) > n_th) {
            Motif m;
            m.id = static_cast<int>(motifs.size());
            m.members = c;
            motifs.push_back(std::move(m));
        }
    }
    return motifs;
}

std::pair<std::vector<OverlapArea>, std::vector<Event>> find_overlap_areas(
    const std::vector<Event>& events) {
    const int n = static_cast<int>(events.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::tie(events[a].start_idx, events[a].end_idx) <
               std::tie(events[b].start_idx, events[b].end_idx);
    });

    // Sweep in start order: a component closes when the next start exceeds
    // the running maximum end.
    std::vector<OverlapArea> areas;
    std::vector<Event> free_events;
    std::vector<Event> current;
    int max_end = -1;

    auto flush = [&]() {
        if (current.empty()) return;
        if (current.size() == 1) {
            free_events.push_back(current.front());
        } else {
            OverlapArea a;
            a.id = static_cast<int>(areas.size());
            a.span_start = current.front().start_idx;
            a.span_end = max_end;
            a.events = current;
            areas.push_back(std::move(a));
        }
        current.clear();
    };

    for (int idx : order) {
        const Event& e = events[idx];
        if (!current.empty() && e.start_idx > max_end) flush();
        current.push_back(e);
        max_end = std::max(max_end, e.end_idx);
    }
    flush();
    return {std::move(areas), std::move(free_events)};
}

namespace {

// Bron-Kerbosch style enumeration of maximal independent sets over a small
// conflict graph.
void maximal_independent_sets(const std::vector<std::vector<char>>& conflict,
                              std::vector<int>& chosen, std::vector<int> candidates,
                              std::vector<int> excluded, std::vector<std::set<int>>& out,
                              const std::vector<int>& ids) {
    if (candidates.empty() && excluded.empty()) {
        std::set<int> s;
        for (int i : chosen) s.insert(ids[i]);
        out.push_back(std::move(s));
        return;
    }
    while (!candidates.empty()) {
        int v = candidates.back();
        candidates.pop_back();
        std::vector<int> nc, nx;
        for (int u : candidates)
            if (!conflict[v][u]) nc.push_back(u);
        for (int u : excluded)
            if (!conflict[v][u]) nx.push_back(u);
        chosen.push_back(v);
        maximal_independent_sets(conflict, chosen, std::move(nc), std::move(nx), out, ids);
        chosen.pop_back();
        excluded.push_back(v);
    }
}

}  // namespace

std::vector<MotifGroup> enumerate_motif_groups(const std::vector<OverlapArea>& areas,
                                               const std::vector<Motif>& motifs) {
    // Key -> motif id lookup for member events.
    std::map<Key, int> owner;
    for (const auto& m : motifs)
        for (const auto& e : m.members) owner[event_key(e)] = m.id;

    std::map<std::set<int>, std::vector<int>> set_to_areas;
    for (const auto& area : areas) {
        std::map<int, std::vector<const Event*>> present;  // motif id -> events here
        for (const auto& e : area.events) {
            auto it = owner.find(event_key(e));
            if (it != owner.end()) present[it->second].push_back(&e);
        }
        if (present.empty()) continue;
        if (present.size() > 20)
            throw std::runtime_error("enumerate_motif_groups: more than 20 motifs in one area");

        std::vector<int> ids;
        for (const auto& [id, evs] : present) ids.push_back(id);
        const int k = static_cast<int>(ids.size());
        std::vector<std::vector<char>> conflict(k, std::vector<char>(k, 0));
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) {
                bool clash = false;
                for (const Event* ea : present[ids[a]]) {
                    for (const Event* eb : present[ids[b]])
                        if (events_overlap(*ea, *eb)) {
                            clash = true;
                            break;
                        }
                    if (clash) break;
                }
                conflict[a][b] = conflict[b][a] = clash;
            }

        std::vector<int> candidates(k);
        std::iota(candidates.begin(), candidates.end(), 0);
        std::vector<int> chosen;
        std::vector<std::set<int>> sets;
        maximal_independent_sets(conflict, chosen, std::move(candidates), {}, sets, ids);
        for (auto& s : sets) set_to_areas[std::move(s)].push_back(area.id);
    }

    std::vector<MotifGroup> groups;
    for (auto& [mset, aids] : set_to_areas) {
        MotifGroup g;
        g.id = static_cast<int>(groups.size());
        g.motif_ids = mset;
        g.area_ids = aids;
        std::sort(g.area_ids.begin(), g.area_ids.end());
        g.area_ids.erase(std::unique(g.area_ids.begin(), g.area_ids.end()), g.area_ids.end());
        groups.push_back(std::move(g));
    }
    return groups;
}

double dl_group(const MotifGroup& mg, const std::vector<Motif>& motifs) {
    double sum = 0.0;
    for (int id : mg.motif_ids) sum += motifs[id].mean_length();
    return sum;
}

double dl_areas_given_group(const std::vector<OverlapArea>& areas, const MotifGroup& mg,
                            const std::vector<Motif>& motifs) {
    std::map<Key, char> member;
    for (int id : mg.motif_ids)
        for (const auto& e : motifs[id].members) member[event_key(e)] = 1;

    double total = 0.0;
    for (const auto& area : areas) {
        double replaced = 0.0;
        for (const auto& e : area.events)
            if (member.count(event_key(e))) replaced += e.length();
        double residual = static_cast<double>(area.raw_len()) - replaced;
        if (residual < 0)
            throw std::logic_error("dl_areas_given_group: replaced events exceed area length");
        total += residual;
    }
    total += static_cast<double>(areas.size()) * static_cast<double>(mg.motif_ids.size());
    return total;
}

double mdl_score(const std::vector<OverlapArea>& areas, const MotifGroup& mg,
                 const std::vector<Motif>& motifs) {
    return dl_areas_given_group(areas, mg, motifs) + dl_group(mg, motifs);
}

ResolveResult resolve_competitions(const std::vector<OverlapArea>& areas,
                                   const std::vector<MotifGroup>& groups,
                                   const std::vector<Motif>& motifs,
                                   const std::vector<Event>& free_events) {
    ResolveResult res;

    auto total_members = [&](const MotifGroup& g) {
        int t = 0;
        for (int id : g.motif_ids) t += motifs[id].n_motif();
        return t;
    };
    // Higher is better everywhere; id breaks the last tie.
    auto prefer = [&](const MotifGroup& a, const MotifGroup& b) {
        return std::tuple(a.occurrences(), total_members(a), static_cast<int>(a.motif_ids.size()),
                          -a.id) >
               std::tuple(b.occurrences(), total_members(b), static_cast<int>(b.motif_ids.size()),
                          -b.id);
    };

    std::vector<char> alive(groups.size(), 1);
    auto shared_areas = [&](const MotifGroup& a, const MotifGroup& b) {
        std::vector<int> shared;
        std::set_intersection(a.area_ids.begin(), a.area_ids.end(), b.area_ids.begin(),
                              b.area_ids.end(), std::back_inserter(shared));
        return shared;
    };

    while (true) {
        std::vector<int> order;
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (alive[i]) order.push_back(static_cast<int>(i));
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return prefer(groups[a], groups[b]); });

        int gi = -1, hi = -1;
        std::vector<int> shared;
        for (std::size_t a = 0; a < order.size() && gi < 0; ++a) {
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                shared = shared_areas(groups[order[a]], groups[order[b]]);
                if (!shared.empty()) {
                    gi = order[a];
                    hi = order[b];
                    break;
                }
            }
        }
        if (gi < 0) break;

        std::vector<OverlapArea> shared_o;
        for (int aid : shared) shared_o.push_back(areas[aid]);
        double sg = mdl_score(shared_o, groups[gi], motifs);
        double sh = mdl_score(shared_o, groups[hi], motifs);

        int winner, loser;
        if (sg < sh) {
            winner = gi;
            loser = hi;
        } else if (sh < sg) {
            winner = hi;
            loser = gi;
        } else {
            winner = prefer(groups[gi], groups[hi]) ? gi : hi;
            loser = winner == gi ? hi : gi;
        }
        res.comparisons.push_back({groups[winner].id, groups[loser].id, shared,
                                   winner == gi ? sg : sh, winner == gi ? sh : sg});
        alive[loser] = 0;
    }

    res.winner_group_per_area.assign(areas.size(), -1);
    for (std::size_t i = 0; i < groups.size(); ++i)
        if (alive[i])
            for (int aid : groups[i].area_ids) res.winner_group_per_area[aid] = static_cast<int>(i);

    std::map<Key, int> owner;
    for (const auto& m : motifs)
        for (const auto& e : m.members) owner[event_key(e)] = m.id;

    for (const auto& e : free_events) {
        res.final_events.push_back(e);
        auto it = owner.find(event_key(e));
        res.motif_id_per_event.push_back(it != owner.end() ? it->second : -1);
    }

    for (const auto& area : areas) {
        int gidx = res.winner_group_per_area[area.id];
        if (gidx >= 0) {
            const MotifGroup& g = groups[gidx];
            std::vector<Event> winner_events;
            std::vector<int> winner_motifs;
            std::vector<Event> leftovers;
            for (const auto& e : area.events) {
                auto it = owner.find(event_key(e));
                if (it != owner.end() && g.motif_ids.count(it->second)) {
                    winner_events.push_back(e);
                    winner_motifs.push_back(it->second);
                } else if (it == owner.end()) {
                    leftovers.push_back(e);  // non-motif events may survive alongside
                }
            }
            std::vector<Event> compatible;
            for (const auto& e : leftovers) {
                bool clashes = false;
                for (const auto& we : winner_events)
                    if (events_overlap(e, we)) {
                        clashes = true;
                        break;
                    }
                if (!clashes) compatible.push_back(e);
            }
            for (std::size_t k = 0; k < winner_events.size(); ++k) {
                res.final_events.push_back(winner_events[k]);
                res.motif_id_per_event.push_back(winner_motifs[k]);
            }
            for (const auto& e : max_nonoverlapping(std::move(compatible))) {
                res.final_events.push_back(e);
                res.motif_id_per_event.push_back(-1);
            }
        } else {
            // No motif explanation for this area: keep as many events as fit.
            for (const auto& e : max_nonoverlapping(area.events)) {
                res.final_events.push_back(e);
                res.motif_id_per_event.push_back(-1);
            }
        }
    }
    return res;
}

}  // namespace nilmevt
