#include "oops/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "oops/isa.hpp"

namespace oops {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

bool parse_u64(const std::string& s, uint64_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_i64(const std::string& s, int64_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

// "k=3" or "k=1..30"
bool parse_range(const std::string& s, int64_t& lo, int64_t& hi) {
  if (s.rfind("k=", 0) != 0) return false;
  std::string body = s.substr(2);
  size_t dots = body.find("..");
  if (dots == std::string::npos) {
    if (!parse_i64(body, lo)) return false;
    hi = lo;
    return true;
  }
  return parse_i64(body.substr(0, dots), lo) &&
         parse_i64(body.substr(dots + 2), hi) && lo <= hi;
}

struct PendingWeight {
  uint8_t tok;
  uint32_t w;
};

}  // namespace

ConfigResult parse_config(const std::string& text) {
  ConfigResult r;
  RunSetup& s = r.setup;

  std::vector<uint8_t> alphabet;
  std::vector<PendingWeight> weights;
  struct PendingTask {
    std::string kind;  // "1k2k" | "hanoi" | "planted"
    int64_t lo = 0, hi = 0;
    std::vector<uint8_t> program;
  };
  std::vector<PendingTask> tasks;

  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    r.ok = false;
    r.error = "line " + std::to_string(lineno) + ": " + msg;
    return r;
  };

  while (std::getline(is, line)) {
    lineno++;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto words = split_ws(line);
    if (words.empty()) continue;
    const std::string& key = words[0];

    if (key == "alphabet") {
      if (words.size() < 2) return fail("alphabet needs at least one token");
      alphabet.clear();
      for (size_t i = 1; i < words.size(); ++i) {
        auto id = op_from_name(words[i]);
        if (!id) return fail("unknown token '" + words[i] + "'");
        alphabet.push_back(*id);
      }
      std::sort(alphabet.begin(), alphabet.end());
      if (std::adjacent_find(alphabet.begin(), alphabet.end()) !=
          alphabet.end())
        return fail("duplicate token in alphabet");
    } else if (key == "weight") {
      if (words.size() != 3) return fail("expected: weight <token> <integer>");
      auto id = op_from_name(words[1]);
      if (!id) return fail("unknown token '" + words[1] + "'");
      uint64_t w;
      if (!parse_u64(words[2], w) || w < 1 || w > kWeightCap)
        return fail("weight must be an integer in [1, " +
                    std::to_string(kWeightCap) + "]");
      weights.push_back({*id, static_cast<uint32_t>(w)});
    } else if (key == "task") {
      if (words.size() < 2) return fail("task needs a kind");
      PendingTask t;
      t.kind = words[1];
      if (t.kind == "1k2k" || t.kind == "hanoi") {
        if (words.size() != 3 || !parse_range(words[2], t.lo, t.hi) ||
            t.lo < 1)
          return fail("expected: task " + t.kind + " k=A or k=A..B, A >= 1");
      } else if (t.kind == "planted") {
        if (words.size() < 3) return fail("planted task needs a program");
        for (size_t i = 2; i < words.size(); ++i) {
          auto id = op_from_name(words[i]);
          if (!id) return fail("unknown token '" + words[i] + "'");
          t.program.push_back(*id);
        }
      } else {
        return fail("unknown task kind '" + t.kind + "'");
      }
      tasks.push_back(std::move(t));
    } else if (key == "n_factor") {
      uint64_t v;
      if (words.size() != 2 || !parse_u64(words[1], v) || v < 1)
        return fail("n_factor must be an integer >= 1");
      s.n_factor = static_cast<uint32_t>(v);
    } else if (key == "ceiling") {
      if (words.size() != 2 || !parse_u64(words[1], s.ceiling) ||
          s.ceiling == 0)
        return fail("ceiling must be a positive integer");
    } else if (key == "workers") {
      uint64_t v;
      if (words.size() != 2 || !parse_u64(words[1], v) || v < 1 || v > 1024)
        return fail("workers must be in [1, 1024]");
      s.workers = static_cast<int>(v);
    } else if (key == "seed") {
      if (words.size() != 2 || !parse_u64(words[1], s.seed))
        return fail("seed must be a nonnegative integer");
    } else if (key == "samples") {
      if (words.size() != 2 || !parse_u64(words[1], s.samples) ||
          s.samples == 0)
        return fail("samples must be a positive integer");
    } else if (key == "global_steps") {
      if (words.size() != 2 || !parse_u64(words[1], s.global_steps) ||
          s.global_steps == 0)
        return fail("global_steps must be a positive integer");
    } else if (key == "gamma") {
      if (words.size() != 2) return fail("expected: gamma <num>/<den>");
      size_t slash = words[1].find('/');
      if (slash == std::string::npos ||
          !parse_i64(words[1].substr(0, slash), s.gamma_num) ||
          !parse_i64(words[1].substr(slash + 1), s.gamma_den) ||
          s.gamma_num < 1 || s.gamma_den < 1 || s.gamma_num >= s.gamma_den)
        return fail("gamma must be a rational in (0, 1), e.g. 1/2");
    } else if (key == "frozen_load") {
      if (words.size() != 2) return fail("expected: frozen_load <path>");
      s.frozen_load = words[1];
    } else {
      return fail("unknown key '" + key + "'");
    }
  }

  s.weights =
      alphabet.empty() ? WeightTable::full_uniform() : WeightTable(alphabet);
  for (const auto& pw : weights) {
    if (!s.weights.enabled(pw.tok)) {
      lineno = 0;
      r.ok = false;
      r.error = "weight set for token '" + std::string(op_name(pw.tok)) +
                "' outside the alphabet";
      return r;
    }
    s.weights.set_weight(pw.tok, pw.w);
  }

  for (const auto& t : tasks) {
    if (t.kind == "1k2k") {
      for (int64_t k = t.lo; k <= t.hi; ++k) s.tasks.push_back(make_1k2k(k));
    } else if (t.kind == "hanoi") {
      for (int64_t k = t.lo; k <= t.hi; ++k) s.tasks.push_back(make_hanoi(k));
    } else {
      s.tasks.push_back(planted_task(t.program, s.weights).task);
    }
  }

  r.ok = true;
  return r;
}

ConfigResult parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    ConfigResult r;
    r.error = "cannot open config file '" + path + "'";
    return r;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

}  // namespace oops
