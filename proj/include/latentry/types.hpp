#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace latentry {

// The six occlusal recording conditions. Enumeration order is the canonical
// order used for deterministic iteration and rank tie-breaking.
enum class ConditionId : int {
    ONL = 0,
    OBL = 1,
    OSL = 2,
    OC25 = 3,
    OC3 = 4,
    OC3P = 5,
};

inline constexpr std::size_t kConditionCount = 6;

constexpr std::array<ConditionId, kConditionCount> all_conditions() {
    return {ConditionId::ONL, ConditionId::OBL, ConditionId::OSL,
            ConditionId::OC25, ConditionId::OC3, ConditionId::OC3P};
}

// String names round-trip: "OC2.5" parses to OC25 and formats back as "OC2.5".
std::string_view to_string(ConditionId c);
std::optional<ConditionId> parse_condition(std::string_view s);

// The two measurement sessions; M1 precedes M2.
enum class SessionId : int {
    M1 = 0,
    M2 = 1,
};

std::string_view to_string(SessionId s);
std::optional<SessionId> parse_session(std::string_view s);

// One observation projected into the PC1-PC2 latent plane.
struct LatentPoint {
    double pc1 = 0.0;
    double pc2 = 0.0;
    ConditionId condition = ConditionId::ONL;
    SessionId session = SessionId::M1;
};

} // namespace latentry
