#ifndef CIRCLELAB_VERSION_HPP
#define CIRCLELAB_VERSION_HPP

namespace circlelab {

inline constexpr const char* version_string = "circlelab 0.1.0";

}

#endif
