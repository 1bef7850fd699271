#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latentry/types.hpp"

namespace latentry {

struct Centroid {
    ConditionId condition = ConditionId::ONL;
    SessionId session = SessionId::M1;
    double pc1 = 0.0;
    double pc2 = 0.0;
    std::size_t n = 0;
};

// Ascending ordering of (condition, value) entries. Groups are anchored:
// a group collects consecutive sorted values within tie_tol of the group's
// smallest member, so any two members of a group differ by less than
// tie_tol. Ties inside a group are broken by condition enumeration order.
struct Ranking {
    std::vector<std::pair<ConditionId, double>> ordered;
    std::vector<std::vector<ConditionId>> tie_groups; // groups of size >= 2
    std::vector<std::size_t> group_index; // parallel to ordered

    // 1-based position of a condition in the ordered list.
    std::size_t position(ConditionId c) const;
};

Centroid centroid(std::span<const LatentPoint> points, ConditionId c,
                  SessionId s);

// Euclidean distance between a condition's M1 and M2 centroids.
double observed_displacement(const Centroid& m1, const Centroid& m2);

// Distance between predicted and observed M2 centroids of one condition.
double centroid_error(const Centroid& pred, const Centroid& obs);

// Distance of every condition centroid of session s to the same session's
// ONL centroid, in condition enumeration order. ONL reports exactly 0.
std::vector<std::pair<ConditionId, double>>
within_session_distances(const std::vector<Centroid>& centroids, SessionId s);

Ranking rank(const std::vector<std::pair<ConditionId, double>>& values,
             double tie_tol);

// True iff `expected` appears in strictly increasing tie-group order; two
// expected conditions sharing a tie group violate the strict expectation.
bool hierarchy_satisfied(const Ranking& r,
                         const std::vector<ConditionId>& expected);

} // namespace latentry
