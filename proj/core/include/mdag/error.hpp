#ifndef MDAG_ERROR_HPP
#define MDAG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mdag {

/// Machine-readable failure categories; the CLI maps each one to a fixed
/// exit code and prints it as `error[<category>]: <message>`.
enum class ErrorCategory {
    InvalidInput,  // bad arguments: unknown vertex, overlapping sets, ...
    Parse,         // malformed graph text
    Resource,      // a configured cap would be exceeded
    Degenerate,    // zero-probability conditioning cell or similar
    Consistency,   // internal cross-check failed; indicates a bug
};

const char* to_string(ErrorCategory c);

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }

  private:
    ErrorCategory category_;
};

[[noreturn]] inline void throw_input(const std::string& msg) { throw Error(ErrorCategory::InvalidInput, msg); }
[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorCategory::Parse, msg); }
[[noreturn]] inline void throw_resource(const std::string& msg) { throw Error(ErrorCategory::Resource, msg); }
[[noreturn]] inline void throw_degenerate(const std::string& msg) { throw Error(ErrorCategory::Degenerate, msg); }
[[noreturn]] inline void throw_consistency(const std::string& msg) { throw Error(ErrorCategory::Consistency, msg); }

}  // namespace mdag

#endif  // MDAG_ERROR_HPP
