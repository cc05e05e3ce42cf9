#ifndef SSF_VERSION_HPP
#define SSF_VERSION_HPP

namespace ssf {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
