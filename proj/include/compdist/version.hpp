#ifndef COMPDIST_VERSION_HPP
#define COMPDIST_VERSION_HPP

#include <string_view>

namespace compdist {

inline constexpr std::string_view kToolName = "compdist";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace compdist

#endif
