#include "icrl/game24/solution.hpp"

#include <regex>
#include <sstream>

namespace icrl::game24 {

namespace {

const std::string kNum = R"(-?\d+(?:\.\d+)?(?:/\d+)?)";

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_suffixes(std::string s) {
  static const std::string_view kTails[] = {"</answer>", "`", "**", "\\\\"};
  bool changed = true;
  while (changed) {
    changed = false;
    s = trim(s);
    for (auto tail : kTails) {
      if (s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0) {
        s.erase(s.size() - tail.size());
        changed = true;
      }
    }
  }
  return s;
}

struct Marker {
  std::size_t begin;
  std::size_t end;  // one past the marker's ':'
};

std::optional<Marker> find_marker(const std::string& text, const std::regex& re, std::size_t from) {
  std::smatch m;
  auto start = text.cbegin() + static_cast<std::ptrdiff_t>(from);
  if (!std::regex_search(start, text.cend(), m, re)) return std::nullopt;
  std::size_t begin = from + static_cast<std::size_t>(m.position(0));
  return Marker{begin, begin + static_cast<std::size_t>(m.length(0))};
}

Rational parse_number_or_throw(const std::string& s, const std::string& line) {
  Rational r;
  if (!parse_rational(s, r)) throw SolutionParseError("bad number '" + s + "'", line);
  return r;
}

}  // namespace

SolutionSegments extract_segments(std::string_view response) {
  const std::string text(response);
  static const std::regex kStep[3] = {std::regex(R"(Step\s*1\s*:)", std::regex::icase),
                                      std::regex(R"(Step\s*2\s*:)", std::regex::icase),
                                      std::regex(R"(Step\s*3\s*:)", std::regex::icase)};
  static const std::regex kAnswer(R"((\*\*)?Answer(\*\*)?\s*:(\*\*)?)", std::regex::icase);

  std::vector<std::pair<int, Marker>> found;  // label index, marker
  std::size_t from = 0;
  for (int i = 0; i < 3; ++i) {
    if (auto m = find_marker(text, kStep[i], from)) {
      found.emplace_back(i, *m);
      from = m->end;
    }
  }
  if (auto m = find_marker(text, kAnswer, from)) found.emplace_back(3, *m);

  SolutionSegments out;
  for (std::size_t k = 0; k < found.size(); ++k) {
    const auto& [label, marker] = found[k];
    std::size_t stop = k + 1 < found.size() ? found[k + 1].second.begin : text.size();
    std::size_t newline = text.find('\n', marker.end);
    if (newline != std::string::npos && newline < stop) stop = newline;
    std::string seg = strip_suffixes(text.substr(marker.begin, stop - marker.begin));
    if (label < 3) {
      out.steps[static_cast<std::size_t>(label)] = seg;
    } else {
      out.answer = seg;
    }
  }
  return out;
}

Game24Step parse_step_line(std::string_view line) {
  static const std::regex kStepRe("^Step\\s*[1-3]\\s*:\\s*(" + kNum + ")\\s*([-+*/])\\s*(" + kNum +
                                      ")\\s*=\\s*(" + kNum +
                                      ")\\s*\\(\\s*left\\s*:?\\s*([^)]*)\\)",
                                  std::regex::icase);
  const std::string original(line);
  const std::string normalized = normalize_operators(line);
  std::smatch m;
  if (!std::regex_search(normalized, m, kStepRe)) {
    throw SolutionParseError("malformed step line", original);
  }
  Game24Step step;
  step.lhs = parse_number_or_throw(m[1].str(), original);
  step.op = static_cast<Op>(m[2].str()[0]);
  step.rhs = parse_number_or_throw(m[3].str(), original);
  step.result = parse_number_or_throw(m[4].str(), original);
  std::istringstream left(m[5].str());
  for (std::string tok; left >> tok;) {
    while (!tok.empty() && (tok.back() == ',' || tok.back() == '.')) tok.pop_back();
    if (tok.empty()) continue;
    step.remaining.push_back(parse_number_or_throw(tok, original));
  }
  if (step.remaining.empty()) throw SolutionParseError("empty remaining list", original);
  return step;
}

std::string answer_expression_text(std::string_view answer_line) {
  std::string s(answer_line);
  auto colon = s.find(':');
  if (colon != std::string::npos) s = s.substr(colon + 1);
  while (!s.empty() && (s.front() == '*' || s.front() == ' ')) s.erase(0, 1);
  if (auto eq = s.find('='); eq != std::string::npos) s = s.substr(0, eq);
  s = strip_suffixes(s);
  if (s.size() >= 2 && s.front() == '`' && s.back() == '`') s = s.substr(1, s.size() - 2);
  if (!s.empty() && s.front() == '`') s.erase(0, 1);
  return trim(s);
}

Game24Solution parse_solution(std::string_view text) {
  SolutionSegments seg = extract_segments(text);
  Game24Solution sol;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!seg.steps[i]) {
      throw SolutionParseError("missing Step" + std::to_string(i + 1), std::string(text));
    }
    sol.steps.push_back(parse_step_line(*seg.steps[i]));
  }
  if (!seg.answer) throw SolutionParseError("missing Answer", std::string(text));
  sol.answer_text = answer_expression_text(*seg.answer);
  if (sol.answer_text.empty()) throw SolutionParseError("empty answer expression", *seg.answer);
  try {
    sol.answer = parse_expression(sol.answer_text);
  } catch (const ExprParseError& e) {
    throw SolutionParseError(std::string("malformed answer: ") + e.what(), *seg.answer);
  }
  return sol;
}

std::vector<std::string> remaining_numbers(std::string_view segment) {
  std::string s = normalize_operators(segment);
  std::vector<std::string> out;
  static const std::regex kLeft(R"(\(\s*left\s*:?\s*([^)]*)\))", std::regex::icase);
  std::smatch m;
  std::string source;
  if (std::regex_search(s, m, kLeft)) {
    source = m[1].str();
  } else if (auto eq = s.rfind('='); eq != std::string::npos) {
    source = s.substr(eq + 1);
  }
  static const std::regex kNumRe(kNum);
  for (auto it = std::sregex_iterator(source.begin(), source.end(), kNumRe);
       it != std::sregex_iterator(); ++it) {
    out.push_back(it->str());
  }
  return out;
}

}  // namespace icrl::game24
