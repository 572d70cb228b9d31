#pragma once

namespace rddi {

// single version string shared by every module; stamped into run manifests
inline constexpr const char* library_version = "0.3.0";

} // namespace rddi
