#include "qlens/errors.hpp"

namespace qlens {

void throw_invalid(const std::string& what) { throw InvalidArgument(what); }

}  // namespace qlens
