#pragma once

#include <stdexcept>
#include <string>

namespace mda {

// Base for all domain errors. `name()` is the stable machine-readable
// identifier printed by the CLI on failure; `what()` carries detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define MDA_DEFINE_ERROR(ErrName)                                   \
    class ErrName : public Error {                                  \
    public:                                                         \
        explicit ErrName(const std::string& detail)                 \
            : Error(#ErrName, detail) {}                            \
    }

// ingest
MDA_DEFINE_ERROR(EmptyIndex);
MDA_DEFINE_ERROR(NotFound);
MDA_DEFINE_ERROR(TransportError);
MDA_DEFINE_ERROR(ParseError);

// textprep
MDA_DEFINE_ERROR(EmptyAfterClean);
MDA_DEFINE_ERROR(SectionNotFound);
MDA_DEFINE_ERROR(TooShort);
MDA_DEFINE_ERROR(IncorporatedByReference);

// lexicon
MDA_DEFINE_ERROR(FormatError);
MDA_DEFINE_ERROR(EmptyDocument);

// dataset
MDA_DEFINE_ERROR(SchemaMismatch);
MDA_DEFINE_ERROR(DuplicateKey);
MDA_DEFINE_ERROR(Insufficient);

// glm
MDA_DEFINE_ERROR(DimensionMismatch);
MDA_DEFINE_ERROR(Separation);
MDA_DEFINE_ERROR(Singular);
MDA_DEFINE_ERROR(NotConverged);
MDA_DEFINE_ERROR(NotNested);

// eval
MDA_DEFINE_ERROR(OneClass);
MDA_DEFINE_ERROR(Degenerate);

// cli
MDA_DEFINE_ERROR(ConfigError);

#undef MDA_DEFINE_ERROR

}  // namespace mda
