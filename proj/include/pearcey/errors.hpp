#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pearcey {

enum class ErrorKind { Domain, Pole, Convergence, Numerical, Singular, Sign };

// Every failure in the library is raised as this type; the kind survives to the
// CLI, which turns it into a machine-readable error record.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    const char* kind_name() const noexcept;

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// Throws Numerical if v is not finite; used on every returned value.
double checked(double v, const char* where);

using WarningHandler = std::function<void(std::string_view)>;
// Non-fatal diagnostics (branch-cut proximity and similar). Default writes to stderr.
void set_warning_handler(WarningHandler h);
void warn(std::string_view msg);

}  // namespace pearcey
