#pragma once

#include <string>

namespace fraclimit {

std::string version();
//! Compiler and numerical backend versions, "name=version" separated by "; ".
std::string backend_versions();

}  // namespace fraclimit
