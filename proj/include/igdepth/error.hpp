#ifndef IGDEPTH_ERROR_HPP
#define IGDEPTH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace igdepth {

// Coarse failure classes. The numeric values double as CLI exit codes.
enum class ErrorKind {
  Usage = 1,     // bad arguments, unknown tags, parameter bounds
  Data = 2,      // unreadable files, dimension mismatches, empty sets
  Internal = 3,  // invariant violated inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) {
  throw Error(ErrorKind::Usage, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(ErrorKind::Data, msg);
}
[[noreturn]] inline void throw_internal(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

}  // namespace igdepth

#endif  // IGDEPTH_ERROR_HPP
