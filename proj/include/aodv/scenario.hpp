#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "aodv/explorer.hpp"

namespace aodv {

// Message names the offending line (syntax errors) or field path (schema
// errors).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unknown keys, unknown node names, self-links and unknown mutations are all
// rejected with ScenarioError.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);

}  // namespace aodv
