// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LYAPKIT_MMIO_HPP
#define LYAPKIT_MMIO_HPP

#include <iosfwd>
#include <string>

#include "lyapkit/types.hpp"

// Matrix Market reader and writer. Supported headers:
//   coordinate real|integer|pattern general|symmetric|skew-symmetric
//   array      real|integer|complex general|symmetric
// Values are written in shortest round-trip form, so write/read is lossless.
namespace lyapkit::mm
{

SparseMatrix read_sparse(std::istream &in);
SparseMatrix read_sparse(const std::string &path);

Matrix read_dense(std::istream &in);
Matrix read_dense(const std::string &path);

// Accepts real and complex fields.
CMatrix read_dense_complex(std::istream &in);
CMatrix read_dense_complex(const std::string &path);

void write_sparse(std::ostream &out, const SparseMatrix &M);
void write_sparse(const std::string &path, const SparseMatrix &M);

void write_dense(std::ostream &out, const Matrix &M);
void write_dense(const std::string &path, const Matrix &M);

// Writes the real field when every imaginary part is exactly zero.
void write_dense(std::ostream &out, const CMatrix &M);
void write_dense(const std::string &path, const CMatrix &M);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace lyapkit::mm

#endif  // LYAPKIT_MMIO_HPP
