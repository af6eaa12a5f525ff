#include "wugbench/error.hpp"

namespace wugbench {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kEncoding: return "encoding";
    case ErrorKind::kLength: return "length";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kDiverged: return "diverged";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace wugbench
