#include "dynstrat/errors.hpp"

namespace dynstrat {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::sample_size: return "sample_size";
    case ErrorKind::domain: return "domain";
    case ErrorKind::singular: return "singular";
    case ErrorKind::regularization_needed: return "regularization_needed";
    case ErrorKind::parse: return "parse";
    case ErrorKind::numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace dynstrat
