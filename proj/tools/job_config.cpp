// Copyright 2026 The affine-recur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "job_config.hpp"

#include <fstream>
#include <sstream>

#include "affine_recur/errors.hpp"
#include "json.hpp"

namespace affine_recur::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw config_error("config error at " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known |= (it.key() == key);
    if (!known) fail(path, "unknown field '" + it.key() + "'");
  }
}

const json& need(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required field '" + std::string(key) + "'");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_number_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::int64_t> as_integer_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of integers");
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(as_integer(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Word as_word(const json& v, const std::string& path, int alphabet) {
  const auto raw = as_integer_array(v, path);
  std::vector<std::uint8_t> letters;
  letters.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0 || raw[i] >= alphabet)
      fail(path + "[" + std::to_string(i) + "]",
           "letter out of range [0, " + std::to_string(alphabet) + ")");
    letters.push_back(static_cast<std::uint8_t>(raw[i]));
  }
  return Word(std::move(letters), alphabet);
}

AffineSystem parse_system(const json& v) {
  const std::string path = "system";
  if (!v.is_object()) fail(path, "expected an object");
  check_keys(v, path, {"dim", "strict", "maps"});
  const std::int64_t dim = as_integer(need(v, path, "dim"), path + ".dim");
  if (dim < 1 || dim > 16) fail(path + ".dim", "dim must be in [1, 16]");
  const bool strict =
      v.contains("strict") ? as_bool(v["strict"], path + ".strict") : true;
  const json& maps = need(v, path, "maps");
  if (!maps.is_array() || maps.size() < 2)
    fail(path + ".maps", "expected an array of at least two maps");

  std::vector<AffineContraction> contractions;
  for (size_t i = 0; i < maps.size(); ++i) {
    const std::string mpath = path + ".maps[" + std::to_string(i) + "]";
    const json& map = maps[i];
    if (!map.is_object()) fail(mpath, "expected an object");
    check_keys(map, mpath, {"linear", "translation"});
    const auto linear = as_number_array(need(map, mpath, "linear"), mpath + ".linear");
    if (linear.size() != static_cast<size_t>(dim * dim))
      fail(mpath + ".linear", "expected " + std::to_string(dim * dim) +
           " row-major entries");
    const auto translation =
        as_number_array(need(map, mpath, "translation"), mpath + ".translation");
    if (translation.size() != static_cast<size_t>(dim))
      fail(mpath + ".translation", "expected " + std::to_string(dim) + " entries");
    try {
      contractions.emplace_back(Matrix(static_cast<int>(dim), linear), translation);
    } catch (const input_error& e) {
      fail(mpath, e.what());
    }
  }
  try {
    return AffineSystem(std::move(contractions), strict);
  } catch (const input_error& e) {
    fail(path, e.what());
  }
}

TargetPoint parse_target(const json& v, int alphabet) {
  const std::string path = "target";
  if (!v.is_object()) fail(path, "expected an object");
  if (v.contains("random")) {
    check_keys(v, path, {"random"});
    const json& r = v["random"];
    if (!r.is_object()) fail(path + ".random", "expected an object");
    check_keys(r, path + ".random", {"seed"});
    const std::int64_t seed = as_integer(need(r, path + ".random", "seed"),
                                         path + ".random.seed");
    return TargetPoint::sampled(static_cast<std::uint64_t>(seed), alphabet);
  }
  check_keys(v, path, {"preperiod", "period"});
  Word preperiod = Word::empty(alphabet);
  if (v.contains("preperiod"))
    preperiod = as_word(v["preperiod"], path + ".preperiod", alphabet);
  const Word period = as_word(need(v, path, "period"), path + ".period", alphabet);
  if (period.is_empty()) fail(path + ".period", "period must be non-empty");
  return TargetPoint::eventually_periodic(std::move(preperiod), period);
}

LengthSchedule parse_schedule(const json& v) {
  const std::string path = "schedule";
  if (!v.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(need(v, path, "kind"), path + ".kind");
  try {
    if (kind == "linear") {
      check_keys(v, path, {"kind", "L"});
      return LengthSchedule::linear(as_number(need(v, path, "L"), path + ".L"));
    }
    if (kind == "power") {
      check_keys(v, path, {"kind", "alpha"});
      return LengthSchedule::power(
          as_number(need(v, path, "alpha"), path + ".alpha"));
    }
    if (kind == "log") {
      check_keys(v, path, {"kind", "c"});
      return LengthSchedule::log2(as_number(need(v, path, "c"), path + ".c"));
    }
    if (kind == "explicit") {
      check_keys(v, path, {"kind", "values"});
      return LengthSchedule::explicit_list(
          as_integer_array(need(v, path, "values"), path + ".values"));
    }
  } catch (const input_error& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "expected linear | power | log | explicit");
}

MeasureSpec parse_measure(const json& v) {
  const std::string path = "measure";
  if (!v.is_object()) fail(path, "expected an object");
  MeasureSpec spec;
  spec.kind = as_string(need(v, path, "kind"), path + ".kind");
  if (spec.kind == "bernoulli") {
    check_keys(v, path, {"kind", "weights"});
    if (v.contains("weights"))
      spec.weights = as_number_array(v["weights"], path + ".weights");
    return spec;
  }
  if (spec.kind == "normalized_phi") {
    check_keys(v, path, {"kind", "t", "level"});
    spec.t = as_number(need(v, path, "t"), path + ".t");
    spec.level = static_cast<int>(as_integer(need(v, path, "level"), path + ".level"));
    return spec;
  }
  if (spec.kind == "recurrence_constrained") {
    check_keys(v, path, {"kind", "t", "level", "times"});
    spec.t = as_number(need(v, path, "t"), path + ".t");
    spec.level = static_cast<int>(as_integer(need(v, path, "level"), path + ".level"));
    if (v.contains("times"))
      spec.times = as_integer_array(v["times"], path + ".times");
    return spec;
  }
  fail(path + ".kind",
       "expected bernoulli | normalized_phi | recurrence_constrained");
}

RenderSpec parse_render(const json& v) {
  const std::string path = "task.render";
  if (!v.is_object()) fail(path, "expected an object");
  check_keys(v, path, {"mode", "depth", "points", "width", "height"});
  RenderSpec spec;
  if (v.contains("mode")) spec.mode = as_string(v["mode"], path + ".mode");
  if (spec.mode != "words" && spec.mode != "chaos")
    fail(path + ".mode", "expected words | chaos");
  if (v.contains("depth"))
    spec.depth = static_cast<int>(as_integer(v["depth"], path + ".depth"));
  if (v.contains("points")) spec.points = as_integer(v["points"], path + ".points");
  if (v.contains("width"))
    spec.width = static_cast<int>(as_integer(v["width"], path + ".width"));
  if (v.contains("height"))
    spec.height = static_cast<int>(as_integer(v["height"], path + ".height"));
  if (spec.depth < 0) fail(path + ".depth", "depth must be >= 0");
  if (spec.points < 1) fail(path + ".points", "point budget must be >= 1");
  if (spec.width < 1 || spec.height < 1 || spec.width > 8192 || spec.height > 8192)
    fail(path, "image size must be within [1, 8192] per side");
  return spec;
}

TaskSpec parse_task(const json& v) {
  const std::string path = "task";
  if (!v.is_object()) fail(path, "expected an object");
  check_keys(v, path,
             {"depth", "tol", "seed", "samples", "horizon", "threads",
              "d_constant", "t", "budget", "chi_depth", "s_grid", "render"});
  TaskSpec task;
  if (v.contains("depth"))
    task.depth = static_cast<int>(as_integer(v["depth"], path + ".depth"));
  if (v.contains("tol")) task.tol = as_number(v["tol"], path + ".tol");
  if (v.contains("seed"))
    task.seed = static_cast<std::uint64_t>(as_integer(v["seed"], path + ".seed"));
  if (v.contains("samples")) task.samples = as_integer(v["samples"], path + ".samples");
  if (v.contains("horizon")) task.horizon = as_integer(v["horizon"], path + ".horizon");
  if (v.contains("threads"))
    task.threads = static_cast<int>(as_integer(v["threads"], path + ".threads"));
  if (v.contains("d_constant"))
    task.d_constant = as_number(v["d_constant"], path + ".d_constant");
  if (v.contains("t")) task.t = as_number(v["t"], path + ".t");
  if (v.contains("budget")) task.budget = as_integer(v["budget"], path + ".budget");
  if (v.contains("chi_depth"))
    task.chi_depth = as_integer(v["chi_depth"], path + ".chi_depth");
  if (v.contains("s_grid")) task.s_grid = as_number_array(v["s_grid"], path + ".s_grid");
  if (v.contains("render")) task.render = parse_render(v["render"]);

  if (task.depth < 1) fail(path + ".depth", "depth must be >= 1");
  if (!(task.tol > 0)) fail(path + ".tol", "tol must be > 0");
  if (task.samples < 1) fail(path + ".samples", "samples must be >= 1");
  if (task.horizon < 1) fail(path + ".horizon", "horizon must be >= 1");
  if (task.threads < 1 || task.threads > 256)
    fail(path + ".threads", "threads must be in [1, 256]");
  return task;
}

}  // namespace

JobConfig parse_job_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line for a friendlier pointer
    size_t line = 1;
    for (size_t i = 0; i < text.size() && i + 1 < e.byte; ++i)
      if (text[i] == '\n') ++line;
    throw config_error("config error: invalid JSON near line " +
                       std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw config_error("config error: root must be an object");
  check_keys(doc, "$", {"system", "target", "schedule", "measure", "task"});

  AffineSystem system = parse_system(need(doc, "$", "system"));
  JobConfig config{std::move(system), std::nullopt, std::nullopt, std::nullopt, {}};
  const int m = config.system.map_count();
  if (doc.contains("target")) config.target = parse_target(doc["target"], m);
  if (doc.contains("schedule")) config.schedule = parse_schedule(doc["schedule"]);
  if (doc.contains("measure")) config.measure = parse_measure(doc["measure"]);
  if (doc.contains("task")) config.task = parse_task(doc["task"]);

  if (config.measure && config.measure->kind == "bernoulli" &&
      !config.measure->weights.empty() &&
      config.measure->weights.size() != static_cast<size_t>(m))
    throw config_error("config error at measure.weights: expected " +
                       std::to_string(m) + " weights");
  return config;
}

JobConfig load_job_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config error: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_job_config_text(buffer.str());
}

CylinderMeasure build_measure(const JobConfig& config) {
  const int m = config.system.map_count();
  MeasureSpec spec;
  if (config.measure) spec = *config.measure;
  if (spec.kind == "bernoulli") {
    std::vector<double> weights = spec.weights;
    if (weights.empty())
      weights.assign(static_cast<size_t>(m), 1.0 / static_cast<double>(m));
    return CylinderMeasure::bernoulli(config.system, std::move(weights));
  }
  if (spec.kind == "normalized_phi") {
    return CylinderMeasure::normalized_phi(config.system, spec.t, spec.level);
  }
  if (!config.target || !config.schedule)
    throw config_error(
        "config error: recurrence_constrained measure needs target and schedule");
  std::vector<std::int64_t> times = spec.times;
  if (times.empty())
    times = greedy_constraint_times(*config.schedule, 1, spec.level);
  return CylinderMeasure::recurrence_constrained(
      config.system, spec.t, std::move(times), *config.target, *config.schedule,
      spec.level);
}

}  // namespace affine_recur::cli
