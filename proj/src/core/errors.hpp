#pragma once

#include <stdexcept>
#include <string>

namespace newsdesk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Store errors.
struct InvalidName : Error { using Error::Error; };
struct DuplicateBlackboard : Error { using Error::Error; };
struct UnknownBlackboard : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };
struct StoreUnavailable : Error { using Error::Error; };

// Settings / registry errors.
struct ParseError : Error { using Error::Error; };
struct MissingKey : Error { using Error::Error; };
struct InvalidValue : Error { using Error::Error; };
struct UnknownModule : Error { using Error::Error; };
struct DuplicateModule : Error { using Error::Error; };
struct DuplicateEntry : Error { using Error::Error; };

// Ingestion errors.
struct FetchError : Error { using Error::Error; };
struct MalformedFeed : Error { using Error::Error; };

// Annotator errors.
struct MissingModel : Error { using Error::Error; };
struct EmptyTrainingSet : Error { using Error::Error; };

// Report errors.
struct UnknownMood : Error { using Error::Error; };
struct UnknownOutlet : Error { using Error::Error; };

}  // namespace newsdesk
