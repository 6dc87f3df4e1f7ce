// errors.hpp -- error taxonomy shared by all pipeline stages.
//
// Each class maps to one CLI exit code: config 2, I/O 3, geometry 4,
// insufficient data 5, numeric precondition 6.

#ifndef AUTOCOMB_ERRORS_HPP
#define AUTOCOMB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace autocomb {

class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

// Bad configuration or invalid user-supplied parameter values.
class config_error : public error {
public:
    using error::error;
    int exit_code() const override { return 2; }
};

// File system / stream failures.
class io_error : public error {
public:
    using error::error;
    int exit_code() const override { return 3; }
};

// Malformed file contents (bad magic, corrupt header).
class format_error : public io_error {
public:
    using io_error::io_error;
};

// Recognized but unsupported file variant (datatype, pair files).
class unsupported_error : public io_error {
public:
    using io_error::io_error;
};

// Inputs do not share one voxel grid.
class geometry_error : public error {
public:
    using error::error;
    int exit_code() const override { return 4; }
};

// Not enough data to proceed (empty mask, too few voxels).
class insufficient_data_error : public error {
public:
    using error::error;
    int exit_code() const override { return 5; }
};

// Violated numeric precondition (sigma <= 0, lambda outside [0,1], ...).
class precondition_error : public error {
public:
    using error::error;
    int exit_code() const override { return 6; }
};

} // namespace autocomb

#endif
