#pragma once

#include <stdexcept>
#include <string>

namespace latentry {

// Base of all pipeline errors. Subclasses map onto CLI exit codes:
// ConfigError -> 2, DataError -> 3, NumericError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

struct MissingColumn final : DataError { using DataError::DataError; };
struct EmptyDataset final : DataError { using DataError::DataError; };
struct RaggedRows final : DataError { using DataError::DataError; };
struct AllFeaturesExcluded final : DataError { using DataError::DataError; };
struct DimensionMismatch final : DataError { using DataError::DataError; };
struct NoObservations final : DataError { using DataError::DataError; };
struct ConditionMismatch final : DataError { using DataError::DataError; };
struct MissingReference final : DataError { using DataError::DataError; };
struct UnknownCondition final : DataError { using DataError::DataError; };
struct EmptySide final : DataError { using DataError::DataError; };
struct SessionMismatch final : DataError { using DataError::DataError; };
struct EmptyBatch final : DataError { using DataError::DataError; };
struct TooFewPairs final : DataError { using DataError::DataError; };
struct LengthMismatch final : DataError { using DataError::DataError; };
struct DivergedLoss final : NumericError { using NumericError::NumericError; };

} // namespace latentry
