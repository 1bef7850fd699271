#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "latentry/types.hpp"

namespace latentry {

// Mechanical/functional descriptors of an occlusal probe. Using descriptors
// instead of a one-hot code is what makes leave-condition-out evaluation
// possible: a withheld condition still has a meaningful input encoding.
struct DescriptorVector {
    double dental_contact = 0.0; // {0,1}
    double open_mouth = 0.0;     // {0,1}
    double strong_clench = 0.0;  // {0,1}
    double vdo_increase_deg = 0.0;
    double protrusion_mm = 0.0;
};

// The single M1 -> M2 transition indicator, constant 1.0 in this dataset.
struct TransitionFlag {
    double value = 1.0;
};

struct TrainingPair {
    double in_pc1 = 0.0;
    double in_pc2 = 0.0;
    DescriptorVector descriptor;
    TransitionFlag transition;
    double target_pc1 = 0.0;
    double target_pc2 = 0.0;
    ConditionId condition = ConditionId::ONL;
    std::size_t pair_index = 0;
};

// The canonical descriptor encoding of the six conditions.
DescriptorVector encode_condition(ConditionId c);

// Index-aligns M1 and M2 points of one condition after truncating to the
// shorter side. Alignment is by ingestion order; pairs are computational,
// not stride-level correspondences.
std::vector<TrainingPair> build_pairs(const std::vector<LatentPoint>& m1_points,
                                      const std::vector<LatentPoint>& m2_points,
                                      ConditionId c);

inline constexpr std::size_t kModelInputDim = 8;

// Fixed input layout: [pc1, pc2, dental_contact, open_mouth, strong_clench,
// vdo_increase_deg, protrusion_mm, transition].
std::array<double, kModelInputDim> assemble_input(const TrainingPair& p);
std::array<double, kModelInputDim> assemble_input(const LatentPoint& m1_point,
                                                  ConditionId c);

} // namespace latentry
