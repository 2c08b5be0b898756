// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/rom_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lyapkit/bench.hpp"
#include "lyapkit/error.hpp"
#include "lyapkit/mmio.hpp"

namespace lyapkit
{

namespace
{

using json = nlohmann::ordered_json;

json matrix_json(const CMatrix &M, bool real)
{
  json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  auto &re = j["data"] = json::array();
  for (Index i = 0; i < M.rows(); i++)
  {
    for (Index k = 0; k < M.cols(); k++)
    {
      re.push_back(M(i, k).real());
    }
  }
  if (!real)
  {
    auto &im = j["imag"] = json::array();
    for (Index i = 0; i < M.rows(); i++)
    {
      for (Index k = 0; k < M.cols(); k++)
      {
        im.push_back(M(i, k).imag());
      }
    }
  }
  return j;
}

CMatrix matrix_from_json(const json &j, const std::string &name)
{
  require(j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("data"),
          ErrorKind::Io, "reduced model: matrix '" + name + "' is malformed");
  const Index r = j["rows"].get<Index>();
  const Index c = j["cols"].get<Index>();
  const auto &re = j["data"];
  require(r >= 0 && c >= 0 && re.size() == static_cast<std::size_t>(r * c), ErrorKind::Io,
          "reduced model: matrix '" + name + "' has wrong entry count");
  const bool cplx = j.contains("imag");
  require(!cplx || j["imag"].size() == re.size(), ErrorKind::Io,
          "reduced model: matrix '" + name + "' has wrong imaginary entry count");
  CMatrix M(r, c);
  for (Index i = 0; i < r; i++)
  {
    for (Index k = 0; k < c; k++)
    {
      const auto idx = static_cast<std::size_t>(i * c + k);
      M(i, k) = Complex(re[idx].get<double>(), cplx ? j["imag"][idx].get<double>() : 0.0);
    }
  }
  return M;
}

}  // namespace

std::string rom_to_json(const ReducedModel &rom, const std::map<std::string, std::string> &metadata)
{
  const bool real = rom.is_real(0.0);
  json j;
  j["order"] = rom.order();
  j["inputs"] = rom.B.cols();
  j["outputs"] = rom.C.rows();
  j["real"] = real;
  j["E"] = matrix_json(rom.E, real);
  j["A"] = matrix_json(rom.A, real);
  j["B"] = matrix_json(rom.B, real);
  j["C"] = matrix_json(rom.C, real);
  j["P"] = matrix_json(rom.P, real);
  auto &poles = j["poles"] = json::array();
  for (Index i = 0; i < rom.poles.size(); i++)
  {
    poles.push_back({rom.poles(i).real(), rom.poles(i).imag()});
  }
  json meta = json::object();
  meta["source"] = rom.source;
  for (const auto &[k, v] : metadata)
  {
    meta[k] = v;
  }
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

ReducedModel rom_from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Io, std::string("reduced model: invalid JSON: ") + e.what());
  }
  ReducedModel rom;
  try
  {
    rom.E = matrix_from_json(j.at("E"), "E");
    rom.A = matrix_from_json(j.at("A"), "A");
    rom.B = matrix_from_json(j.at("B"), "B");
    rom.C = matrix_from_json(j.at("C"), "C");
    rom.P = matrix_from_json(j.at("P"), "P");
    if (j.contains("metadata") && j["metadata"].contains("source"))
    {
      rom.source = j["metadata"]["source"].get<std::string>();
    }
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Io, std::string("reduced model: ") + e.what());
  }
  const Index q = rom.A.rows();
  require(rom.A.cols() == q && rom.E.rows() == q && rom.E.cols() == q && rom.B.rows() == q &&
            rom.C.cols() == q && rom.P.rows() == q && rom.P.cols() == q,
          ErrorKind::Io, "reduced model: inconsistent matrix dimensions");
  rom.poles = model_poles(rom.A, rom.E);
  return rom;
}

void write_rom(const std::string &path, const ReducedModel &rom,
               const std::map<std::string, std::string> &metadata)
{
  write_text_file(path, rom_to_json(rom, metadata));
}

ReducedModel read_rom(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try
  {
    return rom_from_json(ss.str());
  }
  catch (const Error &e)
  {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_rom_mtx(const std::string &prefix, const ReducedModel &rom)
{
  mm::write_dense(prefix + "E.mtx", rom.E);
  mm::write_dense(prefix + "A.mtx", rom.A);
  mm::write_dense(prefix + "B.mtx", rom.B);
  if (rom.has_output())
  {
    mm::write_dense(prefix + "C.mtx", rom.C);
  }
  mm::write_dense(prefix + "P.mtx", rom.P);
}

}  // namespace lyapkit
