#ifndef METASTABLE_ERRORS_HPP
#define METASTABLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace metastable {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// landscape
struct NonConvergence : Error { using Error::Error; };
struct NotIndexOne : Error { using Error::Error; };
struct DegenerateHessian : Error { using Error::Error; };
struct Disconnected : Error { using Error::Error; };

// asymptotics
struct GenericityViolation : Error { using Error::Error; };
struct NonUniqueSaddle : Error { using Error::Error; };

// discrete potential theory
struct RegionError : Error { using Error::Error; };
struct IndefiniteSystem : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct DivisionRegion : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct EmptyBasin : Error { using Error::Error; };

// sampler
struct TooFewSamples : Error { using Error::Error; };

// cli / config
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg), line(line_), column(column_) {}
};
struct ValidationError : Error { using Error::Error; };
struct MissingAnalysis : Error { using Error::Error; };
struct PreconditionViolation : Error { using Error::Error; };

} // namespace metastable

#endif
