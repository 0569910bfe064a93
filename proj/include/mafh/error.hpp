#pragma once

#include <stdexcept>
#include <string>

namespace mafh {

// Raised for violated invariants, infeasible inputs and invalid arguments.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what)
{
    if (!condition) throw Error(what);
}

} // namespace mafh
