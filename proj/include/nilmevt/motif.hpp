#pragma once

#include <set>
#include <utility>
#include <vector>

#include "nilmevt/types.hpp"

namespace nilmevt {

struct Motif {
    int id = -1;
    std::vector<Event> members;
    int n_motif() const { return static_cast<int>(members.size()); }
    double mean_length() const;
};

struct OverlapArea {
    int id = -1;
    int span_start = 0;
    int span_end = 0;
    std::vector<Event> events;
    int raw_len() const { return span_end - span_start + 1; }
};

struct MotifGroup {
    int id = -1;
    std::set<int> motif_ids;
    std::vector<int> area_ids;  // areas where every member motif has an event
    int occurrences() const { return static_cast<int>(area_ids.size()); }
};

/// Mean-shift with a flat kernel on z-scored features. Returns a partition
/// of feature indices.
std::vector<std::vector<int>> cluster_events(const std::vector<EventFeatures>& features,
                                             double bandwidth);

/// Within a cluster, keep only the shortest event of each connected set of
/// mutually overlapping events. Ties: smaller window_len, then earlier start.
std::vector<Event> dedupe_cluster(const std::vector<Event>& cluster);

/// Clusters with strictly more than n_th members become motifs.
std::vector<Motif> form_motifs(const std::vector<std::vector<Event>>& clusters, int n_th);

/// Connected components of the overlap graph; components of one event are
/// returned as free events.
std::pair<std::vector<OverlapArea>, std::vector<Event>> find_overlap_areas(
    const std::vector<Event>& events);

/// Per area, every maximal set of motifs that are present and pairwise
/// non-overlapping there. Groups with the same motif set are merged across
/// areas; occurrences count the areas where the group appears.
std::vector<MotifGroup> enumerate_motif_groups(const std::vector<OverlapArea>& areas,
                                               const std::vector<Motif>& motifs);

/// Sum of each member motif's mean event length, in samples.
double dl_group(const MotifGroup& mg, const std::vector<Motif>& motifs);

/// Residual samples after replacing member-motif events, plus one motif
/// symbol per area per motif in the group.
double dl_areas_given_group(const std::vector<OverlapArea>& areas, const MotifGroup& mg,
                            const std::vector<Motif>& motifs);

double mdl_score(const std::vector<OverlapArea>& areas, const MotifGroup& mg,
                 const std::vector<Motif>& motifs);

/// One pairwise MDL comparison from the tournament, kept for audit.
struct Comparison {
    int winner_group = -1;
    int loser_group = -1;
    std::vector<int> shared_area_ids;
    double winner_score = 0.0;
    double loser_score = 0.0;
};

struct ResolveResult {
    std::vector<Event> final_events;
    std::vector<int> winner_group_per_area;  // -1 when no group retained
    std::vector<int> motif_id_per_event;     // aligned with final_events; -1 for non-motif
    std::vector<Comparison> comparisons;
};

/// Pairwise tournament in descending order of occurrences; the group with
/// the larger MDL over the shared areas is discarded. Output includes free
/// events, winner events, compatible non-motif events, and for motif-free
/// areas the largest non-overlapping event set.
ResolveResult resolve_competitions(const std::vector<OverlapArea>& areas,
                                   const std::vector<MotifGroup>& groups,
                                   const std::vector<Motif>& motifs,
                                   const std::vector<Event>& free_events);

}  // namespace nilmevt
