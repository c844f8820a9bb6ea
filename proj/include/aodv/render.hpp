#pragma once

#include <string>

#include "aodv/network.hpp"

namespace aodv {

// Plain-text forms used in witnesses and traces. Without a name table nodes
// render as n<id>.
std::string render(NodeId id, const NodeNames* names = nullptr);
std::string render(const NodeSet& s, const NodeNames* names = nullptr);
std::string render(const RouteEntry& e, const NodeNames* names = nullptr);
std::string render(const Message& m, const NodeNames* names = nullptr);
std::string render(const StepChoice& c, const NodeNames* names = nullptr);

}  // namespace aodv
