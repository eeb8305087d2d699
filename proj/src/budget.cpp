#include "primpoint/budget.hpp"

#include <atomic>
#include <string>

namespace primpoint {

namespace {
std::atomic<double> g_budget{1e10};
}

double work_budget() { return g_budget.load(std::memory_order_relaxed); }

void set_work_budget(double ops) {
    if (ops <= 0) throw std::invalid_argument("work budget must be positive");
    g_budget.store(ops, std::memory_order_relaxed);
}

void require_budget(double estimated_ops, const char* what) {
    double limit = work_budget();
    if (estimated_ops > limit) {
        throw budget_error(std::string(what) + ": estimated " + std::to_string(estimated_ops) +
                           " field ops exceeds work budget " + std::to_string(limit));
    }
}

}  // namespace primpoint
