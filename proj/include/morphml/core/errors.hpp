#pragma once

#include <stdexcept>
#include <string>

namespace morphml {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (STL, CSV, model container, config).
struct FormatError : Error {
    using Error::Error;
};

// Arguments outside their documented range.
struct InvalidArgument : Error {
    using Error::Error;
};

// Mesh is not closed / not consistently oriented where that is required.
struct NotClosedError : Error {
    using Error::Error;
};

// Coplanar or otherwise degenerate geometry where a 3D body is required.
struct DegenerateGeometryError : Error {
    using Error::Error;
};

// Neck-plane annotation does not intersect the mesh.
struct AnnotationError : Error {
    using Error::Error;
};

// Empty set where at least one element is required (empty grid, no windows).
struct EmptySetError : Error {
    using Error::Error;
};

// Not enough scales / points for a fit.
struct InsufficientScalesError : Error {
    using Error::Error;
};

struct DegenerateFitError : Error {
    using Error::Error;
};

// Table schema problems (duplicate header, unknown column reference, ...).
struct SchemaError : Error {
    using Error::Error;
};

// Labels contain a single class where two are required.
struct DegenerateLabelsError : Error {
    using Error::Error;
};

struct EncodingError : Error {
    using Error::Error;
};

struct InfeasibleStratificationError : Error {
    using Error::Error;
};

struct UnsupportedKindError : Error {
    using Error::Error;
};

struct UnsupportedVersionError : Error {
    using Error::Error;
};

struct CorruptionError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct PlotDataError : Error {
    using Error::Error;
};

} // namespace morphml
