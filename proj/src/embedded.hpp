#pragma once

#include <map>
#include <string_view>

namespace hkl::embedded {

// Files under data/, keyed by their path relative to it.
const std::map<std::string_view, std::string_view>& files();

}  // namespace hkl::embedded
