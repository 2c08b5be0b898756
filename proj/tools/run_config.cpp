// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lyapkit/error.hpp"

namespace lyapkit::cli
{

namespace
{

using json = nlohmann::ordered_json;

// Single field table shared by serialization and parsing.
template <class Config, class Visit>
void visit_fields(Config &c, Visit &&v)
{
  v("system", "E", c.E_path);
  v("system", "A", c.A_path);
  v("system", "B", c.B_path);
  v("system", "C", c.C_path);
  v("system", "generator", c.generator);
  v("system", "n", c.n);
  v("system", "m", c.m);
  v("system", "p", c.p);
  v("system", "seed", c.seed);
  v("system", "mass_matrix", c.mass_matrix);
  v("system", "input_profile", c.input_profile);
  v("system", "source_width", c.source_width);
  v("system", "nonsymmetric", c.nonsymmetric);
  v("system", "general_E", c.general_E);

  v("shifts", "list", c.shifts);
  v("shifts", "file", c.shift_file);
  v("shifts", "irka", c.irka_shifts);
  v("shifts", "q", c.q);
  v("shifts", "init", c.init);
  v("shifts", "irka_max_iter", c.irka_max_iter);
  v("shifts", "irka_tol", c.irka_tol);
  v("shifts", "monitor", c.monitor);

  v("solver", "tol", c.tol);
  v("solver", "max_steps", c.max_steps);
  v("solver", "cyclic", c.cyclic);
  v("solver", "timing", c.timing);
  v("solver", "oblique", c.oblique);
  v("solver", "krylov_drop", c.krylov_drop);

  v("rom", "from", c.from_dir);
  v("rom", "path", c.rom_path);
  v("rom", "samples", c.samples);
  v("rom", "orthogonality_tol", c.orthogonality_tol);
  v("rom", "pythagoras_tol", c.pythagoras_tol);
  v("rom", "perturb", c.perturb);

  v("experiment", "fig", c.fig);
  v("experiment", "total_steps", c.total_steps);

  v("output", "dir", c.out_dir);
}

}  // namespace

std::string RunConfig::to_json() const
{
  json j;
  j["command"] = command;
  RunConfig copy = *this;
  visit_fields(copy, [&](const char *group, const char *key, const auto &field) {
    j[group][key] = field;
  });
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Io, std::string("config: ") + e.what());
  }
  require(j.is_object(), ErrorKind::Io, "config: top level must be an object");
  RunConfig c;
  c.command = j.value("command", std::string());
  visit_fields(c, [&](const char *group, const char *key, auto &field) {
    if (!j.contains(group) || !j[group].contains(key))
    {
      return;
    }
    try
    {
      j[group][key].get_to(field);
    }
    catch (const json::exception &e)
    {
      throw Error(ErrorKind::Io, std::string("config: ") + group + "." + key + ": " + e.what());
    }
  });
  return c;
}

RunConfig RunConfig::load(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace lyapkit::cli
