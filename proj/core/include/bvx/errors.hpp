#pragma once

#include <stdexcept>
#include <string>

namespace bvx {

enum class Errc {
    NotStationary,
    NotPrimitive,
    NotProperlyOrdered,
    LevelOutOfRange,
    BadCuts,
    DepthExhausted,
    UndecidableNonInjective,
    UnknownPreset,
    IdentityHasNoUniqueFixedPoint,
    CannotTelescope,
    NoAvoidingPath,
    IdSubgraphNotSinglePath,
    DimensionUnsupported,
    MalformedInput,
    InvalidArgument,
};

/// Library error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

const char* errc_name(Errc code);

}  // namespace bvx
