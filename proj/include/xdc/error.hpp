#pragma once

#include <stdexcept>
#include <string>

namespace xdc {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user-facing input: configuration, shapes, files, masks.
class InputError : public Error {
public:
    using Error::Error;
};

class InvalidFilterError : public InputError {
public:
    using InputError::InputError;
};

class ShapeError : public InputError {
public:
    using InputError::InputError;
};

class PlacementError : public InputError {
public:
    using InputError::InputError;
};

class ScheduleError : public InputError {
public:
    using InputError::InputError;
};

class StepError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

class MaskError : public InputError {
public:
    using InputError::InputError;
};

class IoError : public InputError {
public:
    using InputError::InputError;
};

class DiagnosticError : public Error {
public:
    using Error::Error;
};

// Anything that went wrong talking to a denoiser backend.
class BackendError : public Error {
public:
    using Error::Error;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

class ProtocolError : public BackendError {
public:
    using BackendError::BackendError;
};

class RemoteError : public BackendError {
public:
    using BackendError::BackendError;
};

}  // namespace xdc
