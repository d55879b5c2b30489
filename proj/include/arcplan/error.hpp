#pragma once

#include <stdexcept>
#include <string>

namespace arcplan {

// Single exception type for all planner errors. The CLI maps it to exit 1;
// "no viable channel" is a report outcome, not an Error.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace arcplan
