#pragma once

#include <stdexcept>
#include <string>

namespace csd {

// Error categories map onto the CLI exit-code contract:
// usage = 2, data = 3, numeric = 4.
enum class errc {
    usage = 2,
    data = 3,
    numeric = 4,
};

class Error : public std::runtime_error {
  public:
    Error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}

    errc kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

  private:
    errc kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) { throw Error(errc::usage, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(errc::data, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(errc::numeric, msg); }

}  // namespace csd
