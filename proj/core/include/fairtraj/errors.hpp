#pragma once

#include <stdexcept>
#include <string>

namespace fairtraj {

struct MalformedConfig : std::runtime_error {
    explicit MalformedConfig(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleEndpoints : std::runtime_error {
    explicit InfeasibleEndpoints(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveConstant : std::runtime_error {
    explicit NonPositiveConstant(const std::string& what) : std::runtime_error(what) {}
};

/// p > 0 with b ~ 0 at some (user, slot): per-user SNR term undefined.
struct DegenerateAllocation : std::runtime_error {
    explicit DegenerateAllocation(const std::string& what) : std::runtime_error(what) {}
};

struct SolverFailure : std::runtime_error {
    SolverFailure(const std::string& what, int slot_index = -1, int round_index = -1)
        : std::runtime_error(what), slot(slot_index), round(round_index) {}
    int slot;   // offending slot, -1 if not slot-specific
    int round;  // outer iteration, -1 if not applicable
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairtraj
