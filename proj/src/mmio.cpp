// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/mmio.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "lyapkit/error.hpp"

namespace lyapkit::mm
{

namespace
{

enum class Format
{
  Coordinate,
  Array
};
enum class Field
{
  Real,
  Integer,
  Complex,
  Pattern
};
enum class Symmetry
{
  General,
  Symmetric,
  SkewSymmetric
};

struct Header
{
  Format format = Format::Coordinate;
  Field field = Field::Real;
  Symmetry symmetry = Symmetry::General;
};

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Header parse_header(std::istream &in)
{
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::Io, "empty Matrix Market stream");
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  require(banner == "%%MatrixMarket", ErrorKind::Io, "missing %%MatrixMarket banner");
  require(lower(object) == "matrix", ErrorKind::Io, "only 'matrix' objects are supported");

  Header h;
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format == "coordinate")
    h.format = Format::Coordinate;
  else if (format == "array")
    h.format = Format::Array;
  else
    throw Error(ErrorKind::Io, "unsupported format '" + format + "'");

  if (field == "real" || field == "double")
    h.field = Field::Real;
  else if (field == "integer")
    h.field = Field::Integer;
  else if (field == "complex")
    h.field = Field::Complex;
  else if (field == "pattern")
    h.field = Field::Pattern;
  else
    throw Error(ErrorKind::Io, "unsupported field '" + field + "'");

  if (symmetry == "general")
    h.symmetry = Symmetry::General;
  else if (symmetry == "symmetric")
    h.symmetry = Symmetry::Symmetric;
  else if (symmetry == "skew-symmetric")
    h.symmetry = Symmetry::SkewSymmetric;
  else
    throw Error(ErrorKind::Io, "unsupported symmetry '" + symmetry + "'");

  require(!(h.format == Format::Array && h.field == Field::Pattern), ErrorKind::Io,
          "array format cannot use the pattern field");
  return h;
}

// Next non-comment, non-blank line.
bool data_line(std::istream &in, std::string &line)
{
  while (std::getline(in, line))
  {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%')
    {
      continue;
    }
    return true;
  }
  return false;
}

struct Entries
{
  Index rows = 0;
  Index cols = 0;
  std::vector<Eigen::Triplet<Complex>> triplets;
};

Entries read_entries(std::istream &in)
{
  const Header h = parse_header(in);
  std::string line;
  require(data_line(in, line), ErrorKind::Io, "missing size line");
  std::istringstream ss(line);
  Entries e;
  long long rows = 0, cols = 0, nnz = 0;
  if (h.format == Format::Coordinate)
  {
    ss >> rows >> cols >> nnz;
  }
  else
  {
    ss >> rows >> cols;
  }
  require(!ss.fail() && rows > 0 && cols > 0 && nnz >= 0, ErrorKind::Io,
          "malformed size line: '" + line + "'");
  require(h.symmetry == Symmetry::General || rows == cols, ErrorKind::Io,
          "symmetric storage requires a square matrix");
  e.rows = rows;
  e.cols = cols;

  auto read_value = [&](std::istringstream &vs) -> Complex {
    if (h.field == Field::Pattern)
    {
      return Complex(1.0, 0.0);
    }
    double re = 0.0, im = 0.0;
    vs >> re;
    if (h.field == Field::Complex)
    {
      vs >> im;
    }
    require(!vs.fail(), ErrorKind::Io, "malformed value line");
    return Complex(re, im);
  };
  auto push = [&](Index i, Index j, Complex v) {
    e.triplets.emplace_back(i, j, v);
    if (i != j)
    {
      if (h.symmetry == Symmetry::Symmetric)
        e.triplets.emplace_back(j, i, v);
      else if (h.symmetry == Symmetry::SkewSymmetric)
        e.triplets.emplace_back(j, i, -v);
    }
  };

  if (h.format == Format::Coordinate)
  {
    e.triplets.reserve(static_cast<std::size_t>(nnz));
    for (long long k = 0; k < nnz; k++)
    {
      require(data_line(in, line), ErrorKind::Io, "unexpected end of coordinate data");
      std::istringstream vs(line);
      long long i = 0, j = 0;
      vs >> i >> j;
      require(!vs.fail() && i >= 1 && i <= rows && j >= 1 && j <= cols, ErrorKind::Io,
              "entry index out of range: '" + line + "'");
      push(Index(i - 1), Index(j - 1), read_value(vs));
    }
  }
  else
  {
    for (long long j = 0; j < cols; j++)
    {
      const long long start = (h.symmetry == Symmetry::General)         ? 0
                              : (h.symmetry == Symmetry::SkewSymmetric) ? j + 1
                                                                        : j;
      for (long long i = start; i < rows; i++)
      {
        require(data_line(in, line), ErrorKind::Io, "unexpected end of array data");
        std::istringstream vs(line);
        push(Index(i), Index(j), read_value(vs));
      }
    }
  }
  return e;
}

std::ofstream open_out(const std::string &path)
{
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "' for reading");
  return in;
}

template <class F>
auto with_path(const std::string &path, F &&f)
{
  try
  {
    return f();
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::Io && std::string(e.what()).find(path) == std::string::npos)
    {
      throw Error(ErrorKind::Io, path + ": " + e.what());
    }
    throw;
  }
}

}  // namespace

std::string format_double(double v)
{
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  require(ec == std::errc(), ErrorKind::Io, "number formatting failed");
  return std::string(buf.data(), ptr);
}

SparseMatrix read_sparse(std::istream &in)
{
  const Entries e = read_entries(in);
  std::vector<Eigen::Triplet<double>> real;
  real.reserve(e.triplets.size());
  for (const auto &t : e.triplets)
  {
    require(t.value().imag() == 0.0, ErrorKind::Io, "complex entries in a real matrix");
    real.emplace_back(t.row(), t.col(), t.value().real());
  }
  SparseMatrix M(e.rows, e.cols);
  M.setFromTriplets(real.begin(), real.end());
  M.makeCompressed();
  return M;
}

SparseMatrix read_sparse(const std::string &path)
{
  return with_path(path, [&] {
    auto in = open_in(path);
    return read_sparse(in);
  });
}

CMatrix read_dense_complex(std::istream &in)
{
  const Entries e = read_entries(in);
  CMatrix M = CMatrix::Zero(e.rows, e.cols);
  for (const auto &t : e.triplets)
  {
    M(t.row(), t.col()) += t.value();
  }
  return M;
}

CMatrix read_dense_complex(const std::string &path)
{
  return with_path(path, [&] {
    auto in = open_in(path);
    return read_dense_complex(in);
  });
}

Matrix read_dense(std::istream &in)
{
  const CMatrix M = read_dense_complex(in);
  require(M.imag().isZero(0.0), ErrorKind::Io, "complex entries in a real matrix");
  return M.real();
}

Matrix read_dense(const std::string &path)
{
  return with_path(path, [&] {
    auto in = open_in(path);
    return read_dense(in);
  });
}

void write_sparse(std::ostream &out, const SparseMatrix &M)
{
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << ' ' << M.cols() << ' ' << M.nonZeros() << '\n';
  for (Index j = 0; j < M.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(M, j); it; ++it)
    {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
    }
  }
}

void write_sparse(const std::string &path, const SparseMatrix &M)
{
  auto out = open_out(path);
  write_sparse(out, M);
}

void write_dense(std::ostream &out, const Matrix &M)
{
  out << "%%MatrixMarket matrix array real general\n";
  out << M.rows() << ' ' << M.cols() << '\n';
  for (Index j = 0; j < M.cols(); j++)
  {
    for (Index i = 0; i < M.rows(); i++)
    {
      out << format_double(M(i, j)) << '\n';
    }
  }
}

void write_dense(const std::string &path, const Matrix &M)
{
  auto out = open_out(path);
  write_dense(out, M);
}

void write_dense(std::ostream &out, const CMatrix &M)
{
  if (M.imag().isZero(0.0))
  {
    write_dense(out, Matrix(M.real()));
    return;
  }
  out << "%%MatrixMarket matrix array complex general\n";
  out << M.rows() << ' ' << M.cols() << '\n';
  for (Index j = 0; j < M.cols(); j++)
  {
    for (Index i = 0; i < M.rows(); i++)
    {
      out << format_double(M(i, j).real()) << ' ' << format_double(M(i, j).imag()) << '\n';
    }
  }
}

void write_dense(const std::string &path, const CMatrix &M)
{
  auto out = open_out(path);
  write_dense(out, M);
}

}  // namespace lyapkit::mm
