// Copyright The lyapkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "lyapkit/shift_set.hpp"

#include <charconv>
#include <sstream>

#include "lyapkit/error.hpp"
#include "lyapkit/mmio.hpp"

namespace lyapkit
{

bool is_conjugate(Complex a, Complex b, double tol)
{
  const double scale = std::max({std::abs(a), std::abs(b), 1.0e-300});
  return std::abs(a - std::conj(b)) <= tol * scale;
}

ShiftSet::ShiftSet(std::vector<Complex> shifts) : shifts_(std::move(shifts))
{
  for (const auto &s : shifts_)
  {
    require(std::isfinite(s.real()) && std::isfinite(s.imag()), ErrorKind::InvalidArgument,
            "shift must be finite");
    require(s.real() > 0.0, ErrorKind::InvalidArgument,
            "shift " + format_complex(s) + " is not in the open right half-plane");
  }
}

bool ShiftSet::conjugation_closed() const
{
  for (const auto &s : shifts_)
  {
    bool found = false;
    for (const auto &t : shifts_)
    {
      if (is_conjugate(s, t))
      {
        found = true;
        break;
      }
    }
    if (!found)
    {
      return false;
    }
  }
  return true;
}

bool ShiftSet::balanced() const { return balanced_prefix(shifts_, shifts_.size()); }

bool ShiftSet::all_real() const
{
  return std::all_of(shifts_.begin(), shifts_.end(),
                     [](const Complex &s) { return s.imag() == 0.0; });
}

bool balanced_prefix(const std::vector<Complex> &seq, std::size_t length)
{
  length = std::min(length, seq.size());
  std::vector<bool> used(length, false);
  for (std::size_t i = 0; i < length; i++)
  {
    if (used[i] || seq[i].imag() == 0.0)
    {
      continue;
    }
    bool matched = false;
    for (std::size_t j = i + 1; j < length; j++)
    {
      if (!used[j] && is_conjugate(seq[i], seq[j]) && seq[j].imag() != 0.0)
      {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched)
    {
      return false;
    }
  }
  return true;
}

std::vector<Complex> cyclic_schedule(const ShiftSet &shifts, std::size_t total_steps)
{
  require(!shifts.empty(), ErrorKind::InvalidArgument, "cyclic schedule needs shifts");
  std::vector<Complex> seq;
  seq.reserve(total_steps);
  for (std::size_t i = 0; i < total_steps; i++)
  {
    seq.push_back(shifts[i % shifts.size()]);
  }
  return seq;
}

namespace
{

double parse_real(std::string_view text, std::string_view whole)
{
  double v = 0.0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  if (!text.empty() && text.front() == '+')
  {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, v);
  require(ec == std::errc() && ptr == last && first != last, ErrorKind::InvalidArgument,
          "cannot parse shift '" + std::string(whole) + "'");
  return v;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
  {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Complex parse_complex(std::string_view text)
{
  text = trim(text);
  require(!text.empty(), ErrorKind::InvalidArgument, "empty shift literal");
  if (text.back() != 'i' && text.back() != 'j')
  {
    return {parse_real(text, text), 0.0};
  }
  const auto body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;)
  {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
    {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos)
  {
    const auto im = body.empty() || body == "+" ? 1.0
                    : body == "-"               ? -1.0
                                                : parse_real(body, text);
    return {0.0, im};
  }
  const double re = parse_real(body.substr(0, split), text);
  const auto ims = body.substr(split);
  const double im = ims == "+" ? 1.0 : ims == "-" ? -1.0 : parse_real(ims, text);
  return {re, im};
}

std::string format_complex(Complex z)
{
  std::string s = mm::format_double(z.real());
  if (z.imag() != 0.0)
  {
    if (z.imag() >= 0.0)
    {
      s += '+';
    }
    s += mm::format_double(z.imag()) + "i";
  }
  return s;
}

ShiftSet ShiftSet::parse(std::string_view text)
{
  std::vector<Complex> shifts;
  std::size_t start = 0;
  while (start <= text.size())
  {
    auto end = text.find(',', start);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    const auto token = trim(text.substr(start, end - start));
    require(!token.empty(), ErrorKind::InvalidArgument,
            "empty entry in shift list '" + std::string(text) + "'");
    shifts.push_back(parse_complex(token));
    start = end + 1;
  }
  return ShiftSet(std::move(shifts));
}

std::string ShiftSet::to_string() const
{
  std::string s;
  for (std::size_t i = 0; i < shifts_.size(); i++)
  {
    if (i > 0)
    {
      s += ',';
    }
    s += format_complex(shifts_[i]);
  }
  return s;
}

}  // namespace lyapkit
