#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "stripsplus/pddl_io.hpp"

namespace stripsplus {

namespace {

struct RawAtom {
  std::string pred;
  std::vector<std::string> args;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ParseError("trace: " + msg, static_cast<int>(line), 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<RawAtom> parse_atoms(std::string_view s, std::size_t line) {
  std::vector<RawAtom> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t' || s[i] == '\r') {
      ++i;
      continue;
    }
    if (s[i] != '(') fail(line, "malformed atom");
    auto close = s.find(')', i);
    if (close == std::string_view::npos) fail(line, "unterminated atom");
    auto inner = s.substr(i + 1, close - i - 1);
    if (inner.find('(') != std::string_view::npos) fail(line, "malformed atom");
    auto toks = split_ws(inner);
    if (toks.empty()) fail(line, "empty atom");
    RawAtom a;
    a.pred = to_lower(toks[0]);
    for (std::size_t k = 1; k < toks.size(); ++k) a.args.push_back(to_lower(toks[k]));
    if (a.args.size() > kMaxArity) fail(line, "atom arity too large");
    out.push_back(std::move(a));
    i = close + 1;
  }
  return out;
}

}  // namespace

std::string write_trace_text(const Trace& t) {
  std::string out;
  out.reserve(64 + t.steps.size() * 256);
  out += "H " + std::to_string(t.version) + " " + t.domain_name + " " + std::to_string(t.seed) + "\n";
  for (std::size_t i = 0; i < t.objects.size(); ++i) out += "O " + t.objects.names[i] + " " + t.objects.types[i] + "\n";
  for (const auto& d : t.dropped) out += "D " + d + "\n";
  auto state_line = [&](char tag, const State& s) {
    out += tag;
    for (const auto& a : sorted_atom_strings(s, t.predicates, t.objects)) {
      out += ' ';
      out += a;
    }
    out += '\n';
  };
  state_line('I', t.init);
  for (const auto& st : t.steps) {
    out += "A " + st.action.name;
    for (auto o : st.action.args) out += " " + t.objects.names[o];
    out += '\n';
    state_line('S', st.state);
  }
  if (t.dead_end) out += "E dead-end\n";
  return out;
}

Trace read_trace_text(std::string_view text) {
  Trace t;
  std::vector<std::vector<RawAtom>> states;  // init first
  std::vector<std::pair<std::string, std::vector<std::string>>> actions;
  std::vector<std::size_t> state_lines;
  bool header = false;
  bool init = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    char tag = line[0];
    if (line.size() > 1 && line[1] != ' ') fail(lineno, "unknown record");
    auto rest = line.size() > 2 ? line.substr(2) : std::string_view{};
    if (!header && tag != 'H') fail(lineno, "missing header");
    switch (tag) {
      case 'H': {
        if (header) fail(lineno, "duplicate header");
        auto toks = split_ws(rest);
        if (toks.size() != 3) fail(lineno, "malformed header");
        int version = 0;
        std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), version);
        if (version != kTraceVersion) fail(lineno, "unsupported trace version " + std::string(toks[0]));
        t.version = version;
        t.domain_name = to_lower(toks[1]);
        auto r = std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(), t.seed);
        if (r.ec != std::errc{}) fail(lineno, "malformed seed");
        header = true;
        break;
      }
      case 'O': {
        auto toks = split_ws(rest);
        if (toks.size() != 2 || init) fail(lineno, "malformed object record");
        t.objects.add(to_lower(toks[0]), to_lower(toks[1]));
        break;
      }
      case 'D': {
        auto toks = split_ws(rest);
        if (toks.size() != 1 || init) fail(lineno, "malformed dropped-predicate record");
        t.dropped.push_back(to_lower(toks[0]));
        break;
      }
      case 'I':
        if (init) fail(lineno, "duplicate init record");
        init = true;
        states.push_back(parse_atoms(rest, lineno));
        state_lines.push_back(lineno);
        break;
      case 'A': {
        if (!init || states.size() != actions.size() + 1) fail(lineno, "action record out of place");
        auto toks = split_ws(rest);
        if (toks.empty()) fail(lineno, "action without a name");
        std::vector<std::string> args;
        for (std::size_t k = 1; k < toks.size(); ++k) args.push_back(to_lower(toks[k]));
        actions.emplace_back(to_lower(toks[0]), std::move(args));
        break;
      }
      case 'S':
        if (states.size() != actions.size()) fail(lineno, "state record out of place");
        states.push_back(parse_atoms(rest, lineno));
        state_lines.push_back(lineno);
        break;
      case 'E':
        if (rest != "dead-end") fail(lineno, "unknown end marker");
        t.dead_end = true;
        break;
      default:
        fail(lineno, "unknown record");
    }
  }
  if (!header) fail(lineno, "missing header");
  if (!init) fail(lineno, "missing init record");
  if (states.size() != actions.size() + 1) fail(lineno, "action without a successor state");

  std::map<std::string, std::size_t> arity;
  for (std::size_t k = 0; k < states.size(); ++k)
    for (const auto& a : states[k]) {
      auto [it, fresh] = arity.emplace(a.pred, a.args.size());
      if (!fresh && it->second != a.args.size()) fail(state_lines[k], "predicate " + a.pred + " used with two arities");
    }
  std::map<std::string, PredId> ids;
  for (const auto& [name, n] : arity) {
    ids.emplace(name, static_cast<PredId>(t.predicates.size()));
    t.predicates.push_back({name, std::vector<TypeSet>(n)});
  }
  auto to_state = [&](const std::vector<RawAtom>& raw, std::size_t line) {
    std::vector<GroundAtom> atoms;
    atoms.reserve(raw.size());
    for (const auto& a : raw) {
      GroundAtom g;
      g.pred = ids.at(a.pred);
      for (std::size_t k = 0; k < a.args.size(); ++k) {
        auto o = t.objects.find(a.args[k]);
        if (!o) fail(line, "object " + a.args[k] + " not in header table");
        g.args[k] = *o;
      }
      atoms.push_back(g);
    }
    return State(std::move(atoms));
  };
  t.init = to_state(states[0], state_lines[0]);
  for (std::size_t k = 0; k < actions.size(); ++k) {
    TraceStep st;
    st.action.name = actions[k].first;
    for (const auto& n : actions[k].second) {
      auto o = t.objects.find(n);
      if (!o) fail(state_lines[k + 1] - 1, "object " + n + " not in header table");
      st.action.args.push_back(*o);
    }
    st.state = to_state(states[k + 1], state_lines[k + 1]);
    t.steps.push_back(std::move(st));
  }
  return t;
}

void write_trace(const Trace& trace, const std::filesystem::path& path) { write_file(path, write_trace_text(trace)); }

Trace read_trace(const std::filesystem::path& path) { return read_trace_text(read_file(path)); }

}  // namespace stripsplus
