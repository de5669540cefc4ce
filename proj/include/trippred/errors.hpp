#pragma once

#include <stdexcept>
#include <string>

namespace trippred {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trip violates the single-leg scope or carries non-finite coordinates.
class InvalidTripError : public Error {
public:
    using Error::Error;
};

/// Two trips inside one entity share a y-day, so the history cannot be ordered.
class DuplicateYdayError : public Error {
public:
    using Error::Error;
};

/// Two entities with the same (ticket, weekday, hour) key.
class DuplicateEntityError : public Error {
public:
    using Error::Error;
};

/// Lookup of an entity key that is not present.
class UnknownEntityError : public Error {
public:
    using Error::Error;
};

/// The ordered history distance was given sequences of different lengths.
class LengthMismatchError : public Error {
public:
    using Error::Error;
};

/// A history-level operation received an empty trip sequence.
class EmptyHistoryError : public Error {
public:
    using Error::Error;
};

/// An entity history is too short to split into training and validation halves.
class CannotSplitError : public Error {
public:
    using Error::Error;
};

/// sim() was called with an offset smaller than the trip distance.
class NegativeSimilarityError : public Error {
public:
    using Error::Error;
};

/// Medoid operations on an empty trip pool.
class EmptyPoolError : public Error {
public:
    using Error::Error;
};

/// A CSV header is missing required columns.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Invalid input to the matrix factorization (rank, negativity, all zeros).
class NmfError : public Error {
public:
    using Error::Error;
};

/// Invalid generator or experiment parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An evaluated entity is missing a prediction or a test trip.
class EvaluationIncompleteError : public Error {
public:
    using Error::Error;
};

} // namespace trippred
