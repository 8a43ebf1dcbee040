#include "copath/error.hpp"

#include <string>

namespace copath {

ParseError::ParseError(std::string file, std::size_t line, std::string reason)
    : Error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " +
            reason),
      file_(std::move(file)),
      line_(line),
      reason_(std::move(reason)) {}

UnknownSeverity::UnknownSeverity(const std::string& token)
    : Error("unknown severity '" + token + "'") {}

UnassignedNode::UnassignedNode(const std::string& node)
    : Error("executed node '" + node + "' lacks a clock or a valid choice") {}

BudgetExceeded::BudgetExceeded(std::uint64_t space, std::uint64_t budget)
    : Error("search space of " + std::to_string(space) +
            " assignments exceeds budget " + std::to_string(budget)),
      space_(space) {}

}  // namespace copath
