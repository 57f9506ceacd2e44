#include "ramsey/coloring.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ramsey {

PairColoring::PairColoring(Num n, unsigned k) : n_(n), k_(k) {
  const std::size_t cells = static_cast<std::size_t>(n) * (n + 1) / 2;
  cells_.assign(cells, -1);
  stages_.assign(cells, 0);
}

std::size_t PairColoring::idx(Num x, Num y) const {
  if (!(x < y && y <= n_)) throw std::out_of_range("pair outside coloring");
  // rows x = 0..N-1 hold N - x cells each
  const std::size_t before = static_cast<std::size_t>(x) * n_ - static_cast<std::size_t>(x) * (x - 1) / 2;
  return before + (y - x - 1);
}

std::optional<unsigned> PairColoring::at(Num x, Num y) const {
  int v = cells_[idx(x, y)];
  if (v < 0) return std::nullopt;
  return static_cast<unsigned>(v);
}

std::optional<unsigned> PairColoring::at(Num x, Num y, Stage s) const {
  const auto i = idx(x, y);
  if (cells_[i] < 0 || stages_[i] > s) return std::nullopt;
  return static_cast<unsigned>(cells_[i]);
}

void PairColoring::set(Num x, Num y, unsigned color) { set(x, y, color, y); }

void PairColoring::set(Num x, Num y, unsigned color, Stage stage) {
  if (color >= k_) throw std::out_of_range("color out of range");
  const auto i = idx(x, y);
  cells_[i] = static_cast<int>(color);
  stages_[i] = stage;
}

void PairColoring::clear(Num x, Num y) {
  const auto i = idx(x, y);
  cells_[i] = -1;
  stages_[i] = 0;
}

bool PairColoring::total() const {
  return std::none_of(cells_.begin(), cells_.end(), [](int v) { return v < 0; });
}

std::optional<std::string> PairColoring::check_convergence() const {
  for (Num x = 0; x < n_; ++x) {
    Stage prev = 0;
    bool gap = false;
    for (Num y = x + 1; y <= n_; ++y) {
      const auto i = idx(x, y);
      if (cells_[i] < 0) {
        gap = true;
        continue;
      }
      if (gap) return "defined pair above an undefined one at x=" + std::to_string(x);
      if (stages_[i] < prev) return "stage decreases along row x=" + std::to_string(x);
      prev = stages_[i];
    }
  }
  return std::nullopt;
}

StabilityCert stability_cert(const PairColoring& d) {
  if (!d.total()) throw std::invalid_argument("stability certificate needs a total coloring");
  StabilityCert cert;
  for (Num x = 0; x < d.bound(); ++x) {
    const unsigned c = *d.at(x, d.bound());
    Num z = d.bound();
    while (z > x + 1 && *d.at(x, z - 1) == c) --z;
    cert.limits.push_back({c, z});
  }
  return cert;
}

bool check_cert(const PairColoring& d, const StabilityCert& cert) {
  if (cert.limits.size() != d.bound()) return false;
  for (Num x = 0; x < d.bound(); ++x) {
    const auto& l = cert.limits[x];
    if (l.color >= d.colors() || l.threshold > d.bound()) return false;
    for (Num y = std::max(l.threshold, x + 1); y <= d.bound(); ++y)
      if (d.at(x, y) != l.color) return false;
  }
  return true;
}

PairColoring stable_coloring(Num n, unsigned k, const std::vector<unsigned>& limits,
                             const std::vector<Num>& thresholds, std::mt19937_64& rng) {
  if (limits.size() < n || thresholds.size() < n) throw std::invalid_argument("limits too short");
  PairColoring d(n, k);
  std::uniform_int_distribution<unsigned> noise(0, k - 1);
  for (Num x = 0; x < n; ++x)
    for (Num y = x + 1; y <= n; ++y) d.set(x, y, y >= thresholds[x] ? limits[x] : noise(rng));
  return d;
}

std::uint64_t hash_count(unsigned k) {
  if (k > 4) throw std::overflow_error("#(k) is only computed for k <= 4");
  std::uint64_t h = 1;
  for (unsigned i = 1; i <= k; ++i) {
    std::uint64_t p = i + 1;
    for (unsigned r = 0; r < i; ++r) p *= h;
    h = p;
  }
  return h;
}

std::vector<std::uint64_t> tuple_radices(unsigned k) {
  std::vector<std::uint64_t> r{k + 1};
  if (k > 0) r.insert(r.end(), k, hash_count(k - 1));
  return r;
}

std::uint64_t encode_tuple(const std::vector<std::uint64_t>& values,
                           const std::vector<std::uint64_t>& radices) {
  if (values.size() != radices.size()) throw std::invalid_argument("tuple length mismatch");
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= radices[i]) throw std::out_of_range("tuple coordinate exceeds its radix");
    code = code * radices[i] + values[i];
  }
  return code;
}

std::vector<std::uint64_t> decode_tuple(std::uint64_t code,
                                        const std::vector<std::uint64_t>& radices) {
  std::vector<std::uint64_t> out(radices.size());
  for (std::size_t i = radices.size(); i-- > 0;) {
    out[i] = code % radices[i];
    code /= radices[i];
  }
  if (code) throw std::out_of_range("code exceeds the radix product");
  return out;
}

std::optional<unsigned> guess_limit(const PairColoring& d, Num x, Stage s) {
  const Num top = static_cast<Num>(std::min<Stage>(s, d.bound()));
  for (Num y = top; y > x; --y)
    if (auto v = d.at(x, y, s)) return v;
  return std::nullopt;
}

bool is_homogeneous(const FinSet& h, const PairColoring& d, unsigned color) {
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j)
      if (d.at(h[i], h[j]) != color) return false;
  return true;
}

bool is_limit_homogeneous(const FinSet& l, const StabilityCert& cert, unsigned color) {
  return std::all_of(l.begin(), l.end(), [&](Num x) {
    return x < cert.limits.size() && cert.limits[x].color == color;
  });
}

bool is_almost_homogeneous(const FinSet& s, const UnaryColoring& c, Num threshold) {
  std::optional<unsigned> seen;
  for (Num x : s) {
    if (x < threshold) continue;
    if (seen && *seen != c(x)) return false;
    seen = c(x);
  }
  return true;
}

FinSet thin_to_homogeneous(const FinSet& l, const PairColoring& d, const StabilityCert& cert,
                           unsigned color) {
  if (l.empty()) throw EmptyResult("nothing to thin");
  FinSet h;
  Num past = 0;  // every kept element's threshold is <= past
  for (Num x : l) {
    if (x < past) continue;
    bool ok = std::all_of(h.begin(), h.end(), [&](Num y) { return d.at(y, x) == color; });
    if (!ok) continue;
    h.push_back(x);
    if (x < cert.limits.size()) past = std::max(past, cert.limits[x].threshold);
  }
  return h;
}

DigitFamily digit_family(const UnaryColoring& e, unsigned k) {
  const std::uint64_t h = hash_count(k);
  unsigned width = 0;
  while ((h >> width) > 1) ++width;  // floor(log2 h)
  ++width;
  DigitFamily f;
  f.width = width;
  f.columns.assign(width, std::vector<unsigned>(e.size(), 0));
  for (Num x = 0; x < e.size(); ++x) {
    if (e(x) >= h) throw std::out_of_range("color exceeds #(k)");
    for (unsigned s = 0; s < width; ++s) f.columns[s][x] = (e(x) >> (width - 1 - s)) & 1U;
  }
  return f;
}

bool is_cohesive_upto(const FinSet& y, const std::vector<std::vector<unsigned>>& family,
                      std::size_t n, Num tailStart) {
  for (std::size_t s = 0; s < n && s < family.size(); ++s) {
    std::optional<unsigned> side;
    for (Num x : y) {
      if (x < tailStart) continue;
      const unsigned v = family[s].at(x);
      if (side && *side != v) return false;
      side = v;
    }
  }
  return true;
}

std::string serialize_pair(const PairColoring& d) {
  std::string s = "pair " + std::to_string(d.bound()) + " " + std::to_string(d.colors()) + "\n";
  for (Num x = 0; x < d.bound(); ++x) {
    for (Num y = x + 1; y <= d.bound(); ++y) {
      if (y > x + 1) s += ' ';
      auto v = d.at(x, y);
      s += v ? std::to_string(*v) : ".";
    }
    s += "\n";
  }
  return s;
}

namespace {
std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(line);
  }
  return out;
}
}  // namespace

PairColoring parse_pair(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty pair coloring");
  std::stringstream head(lines[0]);
  std::string tag;
  long n = -1, k = -1;
  if (!(head >> tag >> n >> k) || tag != "pair" || n < 1 || k < 1)
    throw ParseError("expected header 'pair N k'");
  if (lines.size() != static_cast<std::size_t>(n) + 1) throw ParseError("expected N rows");
  PairColoring d(static_cast<Num>(n), static_cast<unsigned>(k));
  for (Num x = 0; x < static_cast<Num>(n); ++x) {
    std::stringstream row(lines[x + 1]);
    std::string tok;
    Num y = x + 1;
    while (row >> tok) {
      if (y > static_cast<Num>(n)) throw ParseError("row too long at x=" + std::to_string(x));
      if (tok != ".") {
        if (tok.find_first_not_of("0123456789") != std::string::npos)
          throw ParseError("bad color '" + tok + "'");
        const unsigned v = static_cast<unsigned>(std::stoul(tok));
        if (v >= static_cast<unsigned>(k)) throw ParseError("color out of range");
        d.set(x, y, v);
      }
      ++y;
    }
    if (y != static_cast<Num>(n) + 1) throw ParseError("row too short at x=" + std::to_string(x));
  }
  return d;
}

std::string serialize_unary(const UnaryColoring& c) {
  std::string s = "unary " + std::to_string(c.m) + "\n";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(c.values[i]);
  }
  return s + "\n";
}

UnaryColoring parse_unary(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty unary coloring");
  std::stringstream head(lines[0]);
  std::string tag;
  long m = -1;
  if (!(head >> tag >> m) || tag != "unary" || m < 1) throw ParseError("expected header 'unary m'");
  UnaryColoring c;
  c.m = static_cast<unsigned>(m);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::stringstream row(lines[i]);
    std::string tok;
    while (row >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad color '" + tok + "'");
      const unsigned v = static_cast<unsigned>(std::stoul(tok));
      if (v >= c.m) throw ParseError("color out of range");
      c.values.push_back(v);
    }
  }
  return c;
}

std::string serialize_digits(const DigitFamily& f) {
  std::string s;
  for (const auto& col : f.columns) {
    for (unsigned v : col) s += v ? '1' : '0';
    s += "\n";
  }
  return s;
}

}  // namespace ramsey
