#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace groupflow {

/// Error with a stable machine-readable id ("empty-sources", "over-capacity", ...)
/// plus a human message. Tests and the CLI match on the id.
class Error : public std::runtime_error {
public:
    Error(std::string id, const std::string& message)
        : std::runtime_error(id + ": " + message), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

} // namespace groupflow
