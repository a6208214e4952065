#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy for the whole engine. Every error carries a human-readable
// message; callers that need to react programmatically catch the concrete type.
namespace mdb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- value encoding -------------------------------------------------------
struct OverflowError : Error { using Error::Error; };       // integer outside the 56-bit signed range
struct NotAValueError : Error { using Error::Error; };      // decode of a non-value id
struct CorruptionError : Error { using Error::Error; };     // bad offset / malformed on-disk data

// ---- graph construction ---------------------------------------------------
struct PropertyConflictError : Error { using Error::Error; };  // two values for one (object, property)

// ---- storage --------------------------------------------------------------
struct StorageError : Error { using Error::Error; };
struct PoolExhaustedError : StorageError { using StorageError::StorageError; };  // every frame pinned
struct SortOrderError : StorageError { using StorageError::StorageError; };      // bulk load input unsorted
struct UnknownEdgeError : StorageError { using StorageError::StorageError; };    // edge id past table end

// ---- ingest ---------------------------------------------------------------
struct ImportError : Error {
    ImportError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}
    std::size_t line_no;
};
struct DuplicateAliasError : ImportError { using ImportError::ImportError; };
struct UndeclaredAliasError : ImportError { using ImportError::ImportError; };

// ---- query language -------------------------------------------------------
struct SyntaxError : Error {
    SyntaxError(std::size_t position, const std::string& what)
        : Error("at offset " + std::to_string(position) + ": " + what), position(position) {}
    std::size_t position;
};
struct UnknownClauseError : SyntaxError { using SyntaxError::SyntaxError; };
struct WellDesignednessError : Error { using Error::Error; };  // message names the variable

// ---- algebra --------------------------------------------------------------
struct IncompatibleError : Error { using Error::Error; };  // merge of incompatible mappings

// ---- planner / exec -------------------------------------------------------
struct StrategyUnavailableError : Error { using Error::Error; };
struct PermutationUnavailableError : Error { using Error::Error; };

// ---- path engine ----------------------------------------------------------
struct UnboundEndpointsError : Error { using Error::Error; };

}  // namespace mdb
