#include "latentry/pairing.hpp"

#include <algorithm>
#include <string>

#include "latentry/errors.hpp"

namespace latentry {

DescriptorVector encode_condition(ConditionId c) {
    switch (c) {
    case ConditionId::ONL: return {1, 0, 0, 0.0, 0.0};
    case ConditionId::OBL: return {0, 1, 0, 0.0, 0.0};
    case ConditionId::OSL: return {1, 0, 1, 0.0, 0.0};
    case ConditionId::OC25: return {1, 0, 0, 2.5, 0.0};
    case ConditionId::OC3: return {1, 0, 0, 3.0, 0.0};
    case ConditionId::OC3P: return {1, 0, 0, 3.0, 2.0};
    }
    return {};
}

std::vector<TrainingPair> build_pairs(const std::vector<LatentPoint>& m1_points,
                                      const std::vector<LatentPoint>& m2_points,
                                      ConditionId c) {
    if (m1_points.empty() || m2_points.empty())
        throw EmptySide("no points on one side of the M1/M2 pairing for " +
                        std::string(to_string(c)));
    for (const LatentPoint& p : m1_points) {
        if (p.condition != c) throw ConditionMismatch("M1 point of wrong condition");
        if (p.session != SessionId::M1) throw SessionMismatch("expected M1 session");
    }
    for (const LatentPoint& p : m2_points) {
        if (p.condition != c) throw ConditionMismatch("M2 point of wrong condition");
        if (p.session != SessionId::M2) throw SessionMismatch("expected M2 session");
    }

    const std::size_t n = std::min(m1_points.size(), m2_points.size());
    std::vector<TrainingPair> pairs;
    pairs.reserve(n);
    const DescriptorVector desc = encode_condition(c);
    for (std::size_t i = 0; i < n; ++i) {
        TrainingPair p;
        p.in_pc1 = m1_points[i].pc1;
        p.in_pc2 = m1_points[i].pc2;
        p.descriptor = desc;
        p.target_pc1 = m2_points[i].pc1;
        p.target_pc2 = m2_points[i].pc2;
        p.condition = c;
        p.pair_index = i;
        pairs.push_back(p);
    }
    return pairs;
}

std::array<double, kModelInputDim> assemble_input(const TrainingPair& p) {
    return {p.in_pc1,
            p.in_pc2,
            p.descriptor.dental_contact,
            p.descriptor.open_mouth,
            p.descriptor.strong_clench,
            p.descriptor.vdo_increase_deg,
            p.descriptor.protrusion_mm,
            p.transition.value};
}

std::array<double, kModelInputDim> assemble_input(const LatentPoint& m1_point,
                                                  ConditionId c) {
    const DescriptorVector d = encode_condition(c);
    return {m1_point.pc1, m1_point.pc2,     d.dental_contact,
            d.open_mouth, d.strong_clench,  d.vdo_increase_deg,
            d.protrusion_mm, TransitionFlag{}.value};
}

} // namespace latentry
