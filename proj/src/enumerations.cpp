#include "ramsey/enumerations.hpp"

#include <algorithm>
#include <sstream>

namespace ramsey {

std::optional<std::size_t> TreeEnumeration::top(Stage s) const {
  std::optional<std::size_t> t;
  for (std::size_t x = 0; x < levels_.size() && stages_[x] <= s; ++x) t = x;
  return t;
}

void TreeEnumeration::append(std::vector<Str> strings, Stage stage) {
  std::sort(strings.begin(), strings.end());
  strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
  levels_.push_back(std::move(strings));
  stages_.push_back(stage);
}

namespace {

bool increasing(const Str& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] >= s[i]) return false;
  return true;
}

}  // namespace

std::optional<std::string> TreeEnumeration::validate() const {
  if (levels_.empty()) return std::nullopt;
  if (levels_[0] != std::vector<Str>{Str{}}) return "level 0 is not {()}";
  for (std::size_t x = 0; x < levels_.size(); ++x) {
    if (x > 0 && stages_[x] < stages_[x - 1]) return "level " + std::to_string(x) + " precedes its parent";
    for (const auto& s : levels_[x]) {
      if (s.size() != x) return "wrong length at level " + std::to_string(x);
      if (!increasing(s)) return "string not increasing at level " + std::to_string(x);
      if (x > 0) {
        Str parent(s.begin(), s.end() - 1);
        if (!std::binary_search(levels_[x - 1].begin(), levels_[x - 1].end(), parent))
          return "string at level " + std::to_string(x) + " extends nothing";
      }
    }
  }
  if (closedAt_ && !stages_.empty() && *closedAt_ < stages_.back()) return "closed before its last level";
  return std::nullopt;
}

std::optional<std::string> UniformSequence::validate() const {
  for (std::size_t l = 0; l < members.size(); ++l) {
    const auto& u = members[l];
    if (auto e = u.validate()) return "member " + std::to_string(l) + ": " + *e;
    for (std::size_t x = 0; x < u.size(); ++x)
      if (u.stage_of(x) <= l) return "member " + std::to_string(l) + " defined too early";
    for (std::size_t lp = 0; lp < l; ++lp)
      for (std::size_t x = 0; x < u.size() && x < members[lp].size(); ++x)
        if (members[lp].stage_of(x) >= u.stage_of(x))
          return "member " + std::to_string(l) + " level " + std::to_string(x) +
                 " not preceded by member " + std::to_string(lp);
  }
  return std::nullopt;
}

bool UniformSequence::sequential() const {
  for (std::size_t l = 1; l < members.size(); ++l) {
    if (members[l].size() == 0) continue;
    const Stage start = members[l].stage_of(0);
    for (std::size_t lp = 0; lp < l; ++lp)
      for (std::size_t x = 0; x < members[lp].size(); ++x)
        if (members[lp].stage_of(x) >= start) return false;
  }
  return true;
}

std::optional<std::size_t> UniformSequence::active(Stage s) const {
  std::optional<std::size_t> a;
  for (std::size_t l = 0; l < members.size(); ++l)
    if (members[l].defined(0, s)) a = l;
  return a;
}

bool looks_extendible(const TreeEnumeration& u, const Str& sigma, Stage s) {
  auto t = u.top(s);
  if (!t || sigma.size() > *t) return false;
  for (const auto& a : u.level(*t))
    if (std::equal(sigma.begin(), sigma.end(), a.begin())) return true;
  return false;
}

bool looks_infinite(const UniformSequence& seq, std::size_t l, Stage s) {
  if (l >= seq.members.size() || !seq.members[l].defined(0, s)) return false;
  for (std::size_t lp = l + 1; lp < seq.members.size(); ++lp)
    if (seq.members[lp].defined(0, s)) return false;
  return true;
}

std::vector<Str> extendible_terminals(const TreeEnumeration& u, Stage s) {
  auto t = u.top(s);
  if (!t) return {};
  return u.level(*t);
}

UniformSequence from_canonical_trace(const std::vector<TraceEvent>& trace, std::size_t level) {
  UniformSequence seq;
  for (const auto& ev : trace) {
    if (ev.level != level) continue;
    if (seq.members.size() <= ev.index) seq.members.resize(ev.index + 1);
    auto& u = seq.members[ev.index];
    if (ev.kind == TraceEvent::TreeFound) {
      u.close(ev.step);
    } else {
      if (ev.depth != u.size()) throw std::invalid_argument("trace levels out of order");
      u.append(ev.nodes, ev.step);
    }
  }
  return seq;
}

UniformSequence trivial_sequence(std::size_t depth) {
  UniformSequence seq;
  seq.members.emplace_back();
  Str s;
  for (std::size_t x = 0; x <= depth; ++x) {
    seq.members[0].append({s}, x + 1);
    s.push_back(static_cast<Num>(x));
  }
  return seq;
}

std::string serialize_sequence(const UniformSequence& seq) {
  std::string out;
  for (std::size_t l = 0; l < seq.members.size(); ++l) {
    const auto& u = seq.members[l];
    for (std::size_t x = 0; x < u.size(); ++x) {
      out += std::to_string(l) + " ; " + std::to_string(x) + " ; " + std::to_string(u.stage_of(x)) + " ;";
      for (const auto& s : u.level(x)) out += " " + format_str(s);
      out += "\n";
    }
    if (u.closed_at()) out += std::to_string(l) + " ; closed ; " + std::to_string(*u.closed_at()) + "\n";
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::uint64_t number(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a number, got '" + s + "'");
  return std::stoull(t);
}

}  // namespace

UniformSequence parse_sequence(const std::string& text) {
  UniformSequence seq;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string part;
    while (std::getline(ls, part, ';')) f.push_back(trim(part));
    if (f.size() < 3) throw ParseError("sequence line needs 'l ; x ; stage ; strings': " + line);
    const std::size_t l = number(f[0]);
    if (seq.members.size() <= l) seq.members.resize(l + 1);
    auto& u = seq.members[l];
    if (f[1] == "closed") {
      u.close(number(f[2]));
      continue;
    }
    if (f.size() != 4) throw ParseError("sequence line needs 4 fields: " + line);
    if (number(f[1]) != u.size()) throw ParseError("levels must be listed in order: " + line);
    std::vector<Str> strings;
    std::stringstream st(f[3]);
    std::string tok;
    while (st >> tok) strings.push_back(parse_str(tok));
    u.append(std::move(strings), number(f[2]));
  }
  if (auto e = seq.validate()) throw ParseError("invalid sequence: " + *e);
  return seq;
}

}  // namespace ramsey
