#pragma once

#include <stdexcept>
#include <string>

namespace qnoise {

// Exit-code family: config problems map to 2, numeric failures to 3, I/O to 4.
enum class ErrorKind { Config = 2, Numeric = 3, Io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), kind_(kind), name_(std::move(name)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    ErrorKind kind_;
    std::string name_;
};

#define QNOISE_ERROR(Cls, Kind)                                                  \
    struct Cls : Error {                                                         \
        explicit Cls(const std::string& msg) : Error(ErrorKind::Kind, #Cls, msg) {} \
    }

QNOISE_ERROR(ValidationError, Config);
QNOISE_ERROR(RangeError, Config);
QNOISE_ERROR(DimensionError, Config);
QNOISE_ERROR(ImaginaryFrequency, Config);
QNOISE_ERROR(NotHighTemperature, Config);
QNOISE_ERROR(OverdampedUnsupported, Config);
QNOISE_ERROR(ResonanceSingularity, Numeric);
QNOISE_ERROR(GridTooCoarse, Numeric);
QNOISE_ERROR(UnitMismatch, Numeric);
QNOISE_ERROR(FactorizationFailure, Numeric);
QNOISE_ERROR(NegativeVariance, Numeric);
QNOISE_ERROR(QuadratureFailure, Numeric);
QNOISE_ERROR(IoError, Io);

#undef QNOISE_ERROR

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error(ErrorKind::Config, "ParseError",
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line(line), column(column) {}
    int line;
    int column;
};

}  // namespace qnoise
