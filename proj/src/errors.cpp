#include "agency/errors.hpp"

namespace agency {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::iteration_limit: return "iteration_limit";
    case ErrorKind::resource: return "resource";
    case ErrorKind::domain: return "domain";
    case ErrorKind::file_not_found: return "file_not_found";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace agency
