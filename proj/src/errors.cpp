#include "htlrc/errors.hpp"

namespace htlrc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::verification: return "verification";
    case ErrorKind::singular: return "singular";
    case ErrorKind::missing_read: return "missing_read";
    case ErrorKind::inconsistent: return "inconsistent";
    case ErrorKind::exhausted: return "exhausted";
  }
  return "unknown";
}

}  // namespace htlrc
