#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tlsbath/rates.hpp"

namespace tlsbath::app {

enum class Status { Pass, Fail, Skipped };

const char* to_string(Status s);

struct CriterionResult {
    int id = 0;
    std::string name;
    Status status = Status::Fail;
    std::string measured;
    std::string tolerance;
    std::string detail;
    double seconds = 0.0;
};

using ClosedForm = std::function<SqueezingRates(double N, double G, double kappa1, double s, double Delta_0)>;

struct ValidationOptions {
    ClosedForm closed_form = resonant_closed_form;  // replaceable for mutation testing
    std::size_t oracle_dimension_cap = 64;
    std::size_t oracle_fock_dim = 10;
    std::uint64_t seed = 0x5eed7151;
    unsigned jobs = 1;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id, const ValidationOptions& options = {});
std::vector<CriterionResult> validate_all(const ValidationOptions& options = {});

}  // namespace tlsbath::app
