#ifndef MORSEOPT_VERSION_HPP
#define MORSEOPT_VERSION_HPP

namespace morseopt {

inline constexpr const char* kToolName = "morse-opt";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "morse-opt/1";

}  // namespace morseopt

#endif
