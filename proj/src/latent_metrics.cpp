#include "latentry/latent_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latentry/errors.hpp"

namespace latentry {

namespace {

double euclid(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }

} // namespace

std::size_t Ranking::position(ConditionId c) const {
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (ordered[i].first == c) return i + 1;
    }
    throw UnknownCondition("condition not present in ranking: " +
                           std::string(to_string(c)));
}

Centroid centroid(std::span<const LatentPoint> points, ConditionId c,
                  SessionId s) {
    Centroid out;
    out.condition = c;
    out.session = s;
    for (const LatentPoint& p : points) {
        if (p.condition == c && p.session == s) {
            out.pc1 += p.pc1;
            out.pc2 += p.pc2;
            ++out.n;
        }
    }
    if (out.n == 0)
        throw NoObservations("no points for " + std::string(to_string(c)) + "/" +
                             std::string(to_string(s)));
    out.pc1 /= static_cast<double>(out.n);
    out.pc2 /= static_cast<double>(out.n);
    return out;
}

double observed_displacement(const Centroid& m1, const Centroid& m2) {
    if (m1.condition != m2.condition)
        throw ConditionMismatch("displacement requires matching conditions");
    return euclid(m2.pc1 - m1.pc1, m2.pc2 - m1.pc2);
}

double centroid_error(const Centroid& pred, const Centroid& obs) {
    if (pred.condition != obs.condition)
        throw ConditionMismatch("centroid error requires matching conditions");
    return euclid(pred.pc1 - obs.pc1, pred.pc2 - obs.pc2);
}

std::vector<std::pair<ConditionId, double>>
within_session_distances(const std::vector<Centroid>& centroids, SessionId s) {
    const Centroid* onl = nullptr;
    for (const Centroid& c : centroids) {
        if (c.condition == ConditionId::ONL && c.session == s) {
            onl = &c;
            break;
        }
    }
    if (!onl)
        throw MissingReference("no ONL centroid in session " +
                               std::string(to_string(s)));

    std::vector<std::pair<ConditionId, double>> out;
    for (ConditionId c : all_conditions()) {
        for (const Centroid& cen : centroids) {
            if (cen.condition == c && cen.session == s) {
                const double d = (c == ConditionId::ONL)
                                     ? 0.0
                                     : euclid(cen.pc1 - onl->pc1, cen.pc2 - onl->pc2);
                out.emplace_back(c, d);
                break;
            }
        }
    }
    return out;
}

Ranking rank(const std::vector<std::pair<ConditionId, double>>& values,
             double tie_tol) {
    if (values.empty()) return Ranking{};
    for (const auto& [c, v] : values) {
        if (std::isnan(v))
            throw DataError("NaN value in ranking input for " +
                            std::string(to_string(c)));
    }

    Ranking r;
    r.ordered = values;
    std::stable_sort(r.ordered.begin(), r.ordered.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second < b.second;
                         return static_cast<int>(a.first) < static_cast<int>(b.first);
                     });

    // Anchor grouping: a group collects values within tie_tol of its first
    // (smallest) member, so max - min < tie_tol inside every group.
    r.group_index.resize(r.ordered.size());
    std::size_t group = 0;
    double anchor = r.ordered[0].second;
    std::vector<ConditionId> members{r.ordered[0].first};
    auto flush = [&]() {
        if (members.size() >= 2) {
            std::sort(members.begin(), members.end(),
                      [](ConditionId a, ConditionId b) {
                          return static_cast<int>(a) < static_cast<int>(b);
                      });
            r.tie_groups.push_back(members);
        }
        members.clear();
    };
    r.group_index[0] = 0;
    for (std::size_t i = 1; i < r.ordered.size(); ++i) {
        if (r.ordered[i].second - anchor < tie_tol) {
            r.group_index[i] = group;
            members.push_back(r.ordered[i].first);
        } else {
            flush();
            ++group;
            anchor = r.ordered[i].second;
            r.group_index[i] = group;
            members.push_back(r.ordered[i].first);
        }
    }
    flush();
    return r;
}

bool hierarchy_satisfied(const Ranking& r,
                         const std::vector<ConditionId>& expected) {
    auto group_of = [&](ConditionId c) -> std::size_t {
        for (std::size_t i = 0; i < r.ordered.size(); ++i) {
            if (r.ordered[i].first == c) return r.group_index[i];
        }
        throw UnknownCondition("expected condition missing from ranking: " +
                               std::string(to_string(c)));
    };
    for (std::size_t i = 0; i + 1 < expected.size(); ++i) {
        if (group_of(expected[i]) >= group_of(expected[i + 1])) return false;
    }
    if (!expected.empty()) group_of(expected.front()); // validate singletons
    return true;
}

} // namespace latentry
