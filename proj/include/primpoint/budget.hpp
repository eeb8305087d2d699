#pragma once

#include <cstdint>
#include <stdexcept>

namespace primpoint {

// Exhaustive loops fail fast and predictably: callers estimate the number of
// elementary field operations up front and give up before starting.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Global work budget in elementary field operations per call. Default 1e10.
double work_budget();
void set_work_budget(double ops);

void require_budget(double estimated_ops, const char* what);

}  // namespace primpoint
