#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgame {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-range arguments to an operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A strategy profile whose shape does not match the game.
class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t player, const std::string& what)
        : Error("player " + std::to_string(player + 1) + ": " + what), player_(player) {}

    // Zero-based index of the offending player.
    std::size_t player() const noexcept { return player_; }

private:
    std::size_t player_;
};

// Raised before (or during) a computation whose cost exceeds the configured ceiling.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, double estimated_cost, double budget)
        : Error(what + ": estimated cost " + format_cost(estimated_cost) + " exceeds budget " +
                format_cost(budget)),
          estimated_cost_(estimated_cost),
          budget_(budget) {}

    double estimated_cost() const noexcept { return estimated_cost_; }
    double budget() const noexcept { return budget_; }

private:
    static std::string format_cost(double c);

    double estimated_cost_;
    double budget_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// The caller-asserted promise of a decision procedure is contradicted by what was found.
class PromiseViolation : public Error {
public:
    PromiseViolation(const std::string& what, double found_value)
        : Error(what), found_value_(found_value) {}

    double found_value() const noexcept { return found_value_; }

private:
    double found_value_;
};

}  // namespace fgame
