#include "latentry/types.hpp"

namespace latentry {

std::string_view to_string(ConditionId c) {
    switch (c) {
    case ConditionId::ONL: return "ONL";
    case ConditionId::OBL: return "OBL";
    case ConditionId::OSL: return "OSL";
    case ConditionId::OC25: return "OC2.5";
    case ConditionId::OC3: return "OC3";
    case ConditionId::OC3P: return "OC3P";
    }
    return "?";
}

std::optional<ConditionId> parse_condition(std::string_view s) {
    for (ConditionId c : all_conditions()) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::string_view to_string(SessionId s) {
    return s == SessionId::M1 ? "M1" : "M2";
}

std::optional<SessionId> parse_session(std::string_view s) {
    if (s == "M1") return SessionId::M1;
    if (s == "M2") return SessionId::M2;
    return std::nullopt;
}

} // namespace latentry
