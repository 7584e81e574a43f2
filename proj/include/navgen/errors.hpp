#pragma once

#include <stdexcept>
#include <string>

namespace navgen {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid algebra / map composition
struct GridSpecMismatch : Error { using Error::Error; };

// Dataset ingestion and map serialization
struct IoError : Error { using Error::Error; };
struct MissingFile : IoError { using IoError::IoError; };
struct RowCountMismatch : IoError { using IoError::IoError; };
struct MalformedRecord : IoError { using IoError::IoError; };
struct FormatError : IoError { using IoError::IoError; };

// Geometry kernels
struct NonUnitNormal : Error { using Error::Error; };

// Pipeline stages
struct NoGroundFound : Error { using Error::Error; };
struct NoCoverage : Error { using Error::Error; };

// Validation
struct EmptyFreeSpace : Error { using Error::Error; };
struct InvalidStart : Error { using Error::Error; };

// Synthetic generation
struct PathOutsideScene : Error { using Error::Error; };

// Configuration
struct ConfigError : Error { using Error::Error; };

}  // namespace navgen
