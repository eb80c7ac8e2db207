#pragma once

#include "tomodyn/types.hpp"
#include "tomodyn/gaussian_dynamics.hpp"
#include "tomodyn/green_function.hpp"
#include "tomodyn/tomography.hpp"
#include "tomodyn/pde_residual.hpp"
#include "tomodyn/scenario.hpp"
#include "tomodyn/validation.hpp"

namespace tomodyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tomodyn
