#pragma once

#include <stdexcept>
#include <string>

namespace envsdr {

// Exit-code classes used by the CLI: 2 config, 3 data, 4 numeric.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 4; }
    ~Error() override = default;
};

struct ConfigError : Error {
    using Error::Error;
    int exit_code() const override { return 2; }
};

struct InvalidInput : Error {
    using Error::Error;
    int exit_code() const override { return 3; }
};

struct ParseError : Error {
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    long line;
    int exit_code() const override { return 3; }
};

struct EmptyData : Error {
    using Error::Error;
    int exit_code() const override { return 3; }
};

struct TooManySlices : Error {
    using Error::Error;
    int exit_code() const override { return 3; }
};

struct SliceTooSmall : Error {
    using Error::Error;
    int exit_code() const override { return 3; }
};

struct RankMismatch : Error {
    using Error::Error;
};

struct NotPSD : Error {
    using Error::Error;
};

struct DegenerateSpectrum : Error {
    using Error::Error;
};

struct BootstrapDegenerate : Error {
    using Error::Error;
};

}  // namespace envsdr
