#pragma once

#include <iosfwd>
#include <string>

#include "bmc/instance.hpp"
#include "bmc/reductions.hpp"

namespace bmc {

// Instance text format, one record per line, '#' starts a comment:
//
//   p bmc <n> <m> <k>
//   e <u> <v> <w>        (exactly m lines)
//   d <s> <t>            (exactly k lines)
//
// Vertex ids are 0-based. Weights are decimal reals.
BmcInstance parse_instance(std::istream& in);
BmcInstance parse_instance_string(const std::string& text);
BmcInstance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const BmcInstance& inst);

// Min UnCut text format:
//
//   p minuncut <n> <c>
//   c <i> <j> <parity>   (exactly c lines; 0-based variables, parity 0 or 1)
MinUncutInstance parse_minuncut(std::istream& in);
MinUncutInstance parse_minuncut_string(const std::string& text);
MinUncutInstance read_minuncut_file(const std::string& path);
void write_minuncut(std::ostream& out, const MinUncutInstance& mu);

}  // namespace bmc
