#ifndef GRAPHCLUST_ERROR_HPP
#define GRAPHCLUST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace graphclust {

enum class errc {
    ok = 0,
    invalid_argument,
    io,
    parse,
    infeasible,
    no_valid_k,
    verify_failed,
    internal,
};

/// Library-wide exception carrying a coarse error category for the C boundary.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace graphclust

#endif
