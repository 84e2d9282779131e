#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "g2kit/forms.hpp"

namespace g2kit {

struct Check {
    std::string name;
    std::string ref;  // the identity being tested
    double max_error = 0;
    double threshold = 0;
    bool pass = false;
};

struct VerificationReport {
    std::string suite = "verify";
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::vector<Check> checks;
    double wall_time = -1;  // seconds; negative when not recorded
    bool pass() const;
};

struct VerifyConfig {
    std::uint64_t seed = 1;
    std::size_t samples = 10000;
    // Threshold for checks built from several floating operations; exact
    // table identities use min(tol, 1e-12).
    double tol = 1e-10;
    // The 3-form under test; replaced by a corrupted copy in mutation tests.
    AlternatingForm phi = phi0();
    bool timing = false;
};

VerificationReport run_verify(const VerifyConfig& cfg);

}  // namespace g2kit
