#pragma once

#include <stdexcept>
#include <string>

namespace revsem {

// Exit-code classes used by the CLI. 1 is reserved for unexpected failures.
enum class ErrorClass : int {
    config = 2,
    data = 3,
    parse = 4,
    estimation = 5,
    network = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string message)
        : std::runtime_error(std::move(message)), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

struct ConfigError : Error {
    explicit ConfigError(std::string m) : Error(ErrorClass::config, std::move(m)) {}
};
struct DataError : Error {
    explicit DataError(std::string m) : Error(ErrorClass::data, std::move(m)) {}
};
struct ParseError : Error {
    explicit ParseError(std::string m) : Error(ErrorClass::parse, std::move(m)) {}
};
struct EstimationError : Error {
    explicit EstimationError(std::string m) : Error(ErrorClass::estimation, std::move(m)) {}
};
struct NetworkError : Error {
    explicit NetworkError(std::string m) : Error(ErrorClass::network, std::move(m)) {}
};

}  // namespace revsem
