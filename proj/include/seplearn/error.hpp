#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seplearn {

enum class Errc {
    UnknownOperator,
    ArityMismatch,
    TypeMismatch,
    InvalidId,
    SyntaxError,
    EmptyNullaryLayer,
    InvalidSignature,
    EmptyAlphabet,
    InvalidK,
    UnknownAction,
    UnknownLetter,
    AlphabetMismatch,
    BlockingState,
    InvalidModel,
    TupleNotInTable,
    PartialTableInconclusive,
    NotInLxFragment,
    NotMonotone,
    InputTooLarge,
    InvalidArgument,
    BudgetExceeded,
    CapExceeded,
    MalformedInput,
};

inline const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::UnknownOperator: return "UnknownOperator";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::TypeMismatch: return "TypeMismatch";
        case Errc::InvalidId: return "InvalidId";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::EmptyNullaryLayer: return "EmptyNullaryLayer";
        case Errc::InvalidSignature: return "InvalidSignature";
        case Errc::EmptyAlphabet: return "EmptyAlphabet";
        case Errc::InvalidK: return "InvalidK";
        case Errc::UnknownAction: return "UnknownAction";
        case Errc::UnknownLetter: return "UnknownLetter";
        case Errc::AlphabetMismatch: return "AlphabetMismatch";
        case Errc::BlockingState: return "BlockingState";
        case Errc::InvalidModel: return "InvalidModel";
        case Errc::TupleNotInTable: return "TupleNotInTable";
        case Errc::PartialTableInconclusive: return "PartialTableInconclusive";
        case Errc::NotInLxFragment: return "NotInLxFragment";
        case Errc::NotMonotone: return "NotMonotone";
        case Errc::InputTooLarge: return "InputTooLarge";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Parse failure with a byte offset into the input text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : Error(Errc::SyntaxError, "at position " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace seplearn
