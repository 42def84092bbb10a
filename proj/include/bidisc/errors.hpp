#pragma once

#include <stdexcept>
#include <string>

namespace bidisc {

struct Error : std::runtime_error {
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name(std::move(name)) {}
    std::string name;
};

#define BIDISC_ERROR(Name)                                   \
    struct Name : Error {                                    \
        explicit Name(const std::string& what = #Name)       \
            : Error(#Name, what) {}                          \
    }

BIDISC_ERROR(DenominatorTooSmall);
BIDISC_ERROR(NoConvergence);
BIDISC_ERROR(InstabilityDetected);
BIDISC_ERROR(NonUnimodularTarget);
BIDISC_ERROR(SourceNotSingular);
BIDISC_ERROR(UnsupportedWeight);
BIDISC_ERROR(DegenerateFit);
BIDISC_ERROR(SingularityMismatch);
BIDISC_ERROR(EnvelopeTooSparse);
BIDISC_ERROR(BetaTooSmall);
BIDISC_ERROR(ConfigError);

#undef BIDISC_ERROR

}  // namespace bidisc
