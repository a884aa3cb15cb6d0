#include "pearcey/errors.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

namespace pearcey {

const char* Error::kind_name() const noexcept {
    switch (kind_) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Pole: return "pole";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::Sign: return "sign";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

double checked(double v, const char* where) {
    if (!std::isfinite(v)) fail(ErrorKind::Numerical, std::string("non-finite value in ") + where);
    return v;
}

namespace {
std::mutex g_warn_mutex;
WarningHandler& handler() {
    static WarningHandler h = [](std::string_view m) { std::cerr << "warning: " << m << '\n'; };
    return h;
}
}  // namespace

void set_warning_handler(WarningHandler h) {
    std::lock_guard lock(g_warn_mutex);
    handler() = std::move(h);
}

void warn(std::string_view msg) {
    std::lock_guard lock(g_warn_mutex);
    if (handler()) handler()(msg);
}

}  // namespace pearcey
