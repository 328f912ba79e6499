#pragma once

#include <stdexcept>
#include <string>

namespace wikigap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// filesystem / encoding
struct IoError : Error { using Error::Error; };
struct EncodingError : Error { using Error::Error; };

// remote content
struct NotFoundError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// gateway family; pipeline stages catch GatewayError as a group
struct GatewayError : Error { using Error::Error; };
struct RemoteError : GatewayError { using GatewayError::GatewayError; };
struct DimensionMismatchError : GatewayError { using GatewayError::GatewayError; };
struct ZeroVectorError : GatewayError { using GatewayError::GatewayError; };
struct EmptyTranslationError : GatewayError { using GatewayError::GatewayError; };
struct TokenLimitError : GatewayError { using GatewayError::GatewayError; };

// mapping / retrieval
struct EmptyArticleError : Error { using Error::Error; };
struct EmptyIndexError : Error { using Error::Error; };
struct InvalidParamsError : Error { using Error::Error; };

// npov
struct MissingExemplarsError : Error { using Error::Error; };

// evaluation
struct EmptyTextError : Error { using Error::Error; };
struct DegenerateStatsError : Error { using Error::Error; };
struct DegenerateMatrixError : Error { using Error::Error; };
struct EmptyInputError : Error { using Error::Error; };
struct MissingArtifactsError : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };

}  // namespace wikigap
