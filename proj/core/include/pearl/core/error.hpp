#pragma once

#include <stdexcept>
#include <string>

namespace pearl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PEARL_DEFINE_ERROR(Name)                         \
    class Name : public Error {                          \
    public:                                              \
        explicit Name(const std::string& what)           \
            : Error(std::string(#Name ": ") + what) {}   \
    }

PEARL_DEFINE_ERROR(OutOfDomainAction);
PEARL_DEFINE_ERROR(EpisodeFinished);
PEARL_DEFINE_ERROR(InvalidArgument);
PEARL_DEFINE_ERROR(UnsplittableLeaf);
PEARL_DEFINE_ERROR(DegenerateModel);
PEARL_DEFINE_ERROR(MalformedTree);
PEARL_DEFINE_ERROR(MalformedLayout);
PEARL_DEFINE_ERROR(MalformedInput);
PEARL_DEFINE_ERROR(ConfigError);
PEARL_DEFINE_ERROR(SingleClass);
PEARL_DEFINE_ERROR(DimensionMismatch);
PEARL_DEFINE_ERROR(InsufficientData);

#undef PEARL_DEFINE_ERROR

}  // namespace pearl
