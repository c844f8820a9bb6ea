#include "aodv/render.hpp"

#include <sstream>

namespace aodv {

std::string render(NodeId id, const NodeNames* names) {
    if (names && id.value < names->size()) return (*names)[id.value];
    return "n" + std::to_string(id.value);
}

std::string render(const NodeSet& s, const NodeNames* names) {
    std::string out = "{";
    bool first = true;
    for (NodeId id : s) {
        if (!first) out += ",";
        out += render(id, names);
        first = false;
    }
    return out + "}";
}

std::string render(const RouteEntry& e, const NodeNames* names) {
    std::ostringstream os;
    os << "(" << render(e.dip, names) << "," << e.dsn << "," << to_string(e.dsk) << ","
       << to_string(e.flag) << "," << e.hops << "," << render(e.nhip, names) << ","
       << render(e.pre, names) << ")";
    return os.str();
}

std::string render(const Message& m, const NodeNames* names) {
    auto n = [names](NodeId id) { return render(id, names); };
    std::ostringstream os;
    std::visit(
        [&](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, Rreq>) {
                os << "RREQ(" << msg.hops << "," << msg.rreqid << "," << n(msg.dip) << "," << msg.dsn
                   << "," << to_string(msg.dsk) << "," << n(msg.oip) << "," << msg.osn << ","
                   << n(msg.sip) << ")";
            } else if constexpr (std::is_same_v<T, Rrep>) {
                os << "RREP(" << msg.hops << "," << n(msg.dip) << "," << msg.dsn << "," << n(msg.oip)
                   << "," << n(msg.sip) << ")";
            } else if constexpr (std::is_same_v<T, Rerr>) {
                os << "RERR({";
                bool first = true;
                for (const auto& [rip, rsn] : msg.dests) {
                    if (!first) os << ",";
                    os << "(" << n(rip) << "," << rsn << ")";
                    first = false;
                }
                os << "}," << n(msg.sip) << ")";
            } else if constexpr (std::is_same_v<T, Newpkt>) {
                os << "NEWPKT(" << msg.data.token << "," << n(msg.dip) << ")";
            } else {
                os << "PKT(" << msg.data.token << "," << n(msg.dip) << "," << n(msg.sip) << ")";
            }
        },
        m);
    return os.str();
}

std::string render(const StepChoice& c, const NodeNames* names) {
    if (std::holds_alternative<HandleMessage>(c)) return "HandleMessage";
    if (const auto* s = std::get_if<SendQueuedPacket>(&c)) return "SendQueuedPacket(" + render(s->dip, names) + ")";
    return "InitiateRouteRequest(" + render(std::get<InitiateRouteRequest>(c).dip, names) + ")";
}

}  // namespace aodv
