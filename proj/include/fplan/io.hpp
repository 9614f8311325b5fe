#pragma once

#include <string>

#include "fplan/solver.hpp"

namespace fplan {

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Canonical instance format, one directive per line ('#' starts a comment):
//
//   die <W> <H>
//   module <id> <w> <h>
//   iopin <id> fixed <x> <y>
//   iopin <id> side <L|R|T|B>
//   pin <id> module <module-id> <dx> <dy>
//   pin <id> iopin <iopin-id>
//   net <id> [weight <w>] <pin-id> <pin-id> ...
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

std::string write_result(const SolveResult& result);
SolveResult read_result(const std::string& text);
SolveResult load_result(const std::string& path);

void save_text(const std::string& path, const std::string& text);

std::string render_svg(const Instance& inst, const Placement& p);

}  // namespace fplan
