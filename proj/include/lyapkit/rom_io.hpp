// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_ROM_IO_HPP
#define LYAPKIT_ROM_IO_HPP

#include <map>
#include <string>

#include "lyapkit/pork.hpp"

namespace lyapkit
{

//
// JSON bundle: {"order", "inputs", "outputs", "real", "E", "A", "B", "C", "P", "poles",
// "metadata"}. Matrices are {"rows", "cols", "data" (row-major), "imag" (complex only)}.
// The basis is not part of the bundle.
//
std::string rom_to_json(const ReducedModel &rom,
                        const std::map<std::string, std::string> &metadata = {});
ReducedModel rom_from_json(const std::string &text);

void write_rom(const std::string &path, const ReducedModel &rom,
               const std::map<std::string, std::string> &metadata = {});
ReducedModel read_rom(const std::string &path);

// Writes <prefix>E.mtx, A.mtx, B.mtx, C.mtx (when present) and P.mtx.
void write_rom_mtx(const std::string &prefix, const ReducedModel &rom);

}  // namespace lyapkit

#endif  // LYAPKIT_ROM_IO_HPP
