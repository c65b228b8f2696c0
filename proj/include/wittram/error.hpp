#pragma once

#include <stdexcept>
#include <string>

namespace wittram {

enum class errc {
    division_by_zero,
    zero_input,
    insufficient_precision,
    shape_mismatch,
    parse_error,
    non_rational_place,
    undecided_triviality,
    unsupported,
    internal_check,
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void check(bool ok, errc code, const std::string& what)
{
    if (!ok) fail(code, what);
}

} // namespace wittram
