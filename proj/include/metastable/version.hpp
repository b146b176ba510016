#ifndef METASTABLE_VERSION_HPP
#define METASTABLE_VERSION_HPP

namespace metastable {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
