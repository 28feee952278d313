#ifndef MSMSIM_VERSION_HPP
#define MSMSIM_VERSION_HPP

namespace msmsim {
inline constexpr const char* engine_version = "0.1.0";
}

#endif
