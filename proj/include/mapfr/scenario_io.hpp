#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mapfr/model.hpp"

namespace mapfr {

/// Line-oriented text formats.
///
/// Scenario (`.scn`):
///
///     mapfr-scenario 1
///     radius <r>
///     vertex <id> <x> <y>
///     edge <u> <v> [<length>]
///     agent <id> <start> <goal>
///
/// Solution (`.sol`):
///
///     mapfr-solution 1
///     plan <agent>
///     move <from> <to> <start>
///     wait <vertex> <start> <duration|inf>
///     end
///
/// Blank lines and `#` comments are ignored. Numbers are written with 12
/// significant digits.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& field, const std::string& message);
    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

Instance parse_scenario(const std::string& text);
std::string format_scenario(const Instance& inst);

/// Plans are normalized (start and terminal waits materialized) but not
/// validated; use validate_solution for that.
Solution parse_solution(const std::string& text, const Instance& inst);
std::string format_solution(const Instance& inst, const Solution& sol);

Instance load_scenario(const std::filesystem::path& path);
Solution load_solution(const std::filesystem::path& path, const Instance& inst);
void save_text(const std::filesystem::path& path, const std::string& text);

std::string format_number(double x);

}  // namespace mapfr
